#include "mwca/contingency.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mwca {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error(msg);
}

std::string join_labels(const std::vector<std::string>& cell) {
    std::string out;
    for (std::size_t i = 0; i < cell.size(); ++i) {
        if (i) out += ", ";
        out += cell[i];
    }
    return out;
}

// One CSV record; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(const std::string& line,
                                        std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted)
        fail("line " + std::to_string(line_no) + ": unterminated quote");
    fields.push_back(cur);
    return fields;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

double parse_count(const std::string& text, std::size_t line_no) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &pos);
    } catch (const std::exception&) {
        fail("line " + std::to_string(line_no) + ": invalid count '" + text +
             "'");
    }
    if (pos != text.size())
        fail("line " + std::to_string(line_no) + ": invalid count '" + text +
             "'");
    if (v < 0)
        fail("line " + std::to_string(line_no) + ": negative count " + text);
    return static_cast<double>(v);
}

std::map<std::string, std::vector<std::string>> load_label_order(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open label-order file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail("label-order file " + path + ": " + e.what());
    }
    if (!j.is_object()) fail("label-order file must be a JSON object");
    std::map<std::string, std::vector<std::string>> order;
    for (const auto& [name, arr] : j.items()) {
        if (!arr.is_array()) fail("label order for " + name + " must be an array");
        order[name] = arr.get<std::vector<std::string>>();
    }
    return order;
}

ContingencyTable load_long_csv(
    const std::string& path,
    const std::optional<std::string>& label_order_path) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path);

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) fail(path + ": empty file, no data rows");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> header = split_csv_line(line, line_no);
    if (header.size() < 2 || header.back() != "count")
        fail(path + ": header must name the mode columns plus a final "
                    "'count' column");
    const std::size_t d = header.size() - 1;
    std::vector<std::string> mode_names(header.begin(), header.end() - 1);

    std::vector<std::vector<std::string>> labels(d);
    std::vector<std::map<std::string, Index>> label_index(d);
    std::vector<bool> pinned(d, false);
    if (label_order_path) {
        const auto order = load_label_order(*label_order_path);
        for (std::size_t a = 0; a < d; ++a) {
            const auto it = order.find(mode_names[a]);
            if (it == order.end()) continue;
            pinned[a] = true;
            for (const auto& lbl : it->second) {
                if (label_index[a].count(lbl))
                    fail("duplicate label '" + lbl + "' in the order of mode " +
                         mode_names[a]);
                label_index[a][lbl] =
                    static_cast<Index>(labels[a].size());
                labels[a].push_back(lbl);
            }
        }
    }

    struct Row {
        std::vector<Index> idx;  // 0-based per mode
        double count;
        std::size_t line_no;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line, line_no);
        if (fields.size() != header.size())
            fail(path + ": line " + std::to_string(line_no) + " has " +
                 std::to_string(fields.size()) + " fields, expected " +
                 std::to_string(header.size()));
        Row row;
        row.line_no = line_no;
        for (std::size_t a = 0; a < d; ++a) {
            const std::string& lbl = fields[a];
            auto it = label_index[a].find(lbl);
            if (it == label_index[a].end()) {
                if (pinned[a])
                    fail(path + ": line " + std::to_string(line_no) +
                         ": label '" + lbl + "' of mode " + mode_names[a] +
                         " is not in the label-order file");
                it = label_index[a]
                         .emplace(lbl, static_cast<Index>(labels[a].size()))
                         .first;
                labels[a].push_back(lbl);
            }
            row.idx.push_back(it->second);
        }
        row.count = parse_count(fields[d], line_no);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(path + ": no data rows");

    Shape shape(d);
    for (std::size_t a = 0; a < d; ++a) {
        if (labels[a].empty()) fail(path + ": mode " + mode_names[a] +
                                    " has no categories");
        shape[a] = static_cast<Index>(labels[a].size());
    }

    ContingencyTable table{Tensor<double>(shape), std::move(mode_names),
                           labels};
    std::set<Index> filled;
    for (const Row& row : rows) {
        std::vector<Index> idx(d);
        for (std::size_t a = 0; a < d; ++a) idx[a] = row.idx[a] + 1;
        const Index off = table.counts.offset(
            std::span<const Index>(idx.data(), idx.size()));
        if (!filled.insert(off).second) {
            std::vector<std::string> cell(d);
            for (std::size_t a = 0; a < d; ++a)
                cell[a] = labels[a][static_cast<std::size_t>(row.idx[a])];
            fail(path + ": line " + std::to_string(row.line_no) +
                 " duplicates cell (" + join_labels(cell) + ")");
        }
        table.counts.flat()[off] = row.count;
    }
    table.validate();
    return table;
}

ContingencyTable load_dense_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(path + ": " + e.what());
    }
    for (const char* key : {"shape", "mode_names", "labels", "values"})
        if (!j.contains(key)) fail(path + ": missing key '" + key + "'");

    Shape shape;
    for (const auto& n : j["shape"]) shape.push_back(n.get<Index>());
    std::vector<std::string> mode_names =
        j["mode_names"].get<std::vector<std::string>>();
    std::vector<std::vector<std::string>> labels =
        j["labels"].get<std::vector<std::vector<std::string>>>();

    const auto& values = j["values"];
    if (!values.is_array() ||
        static_cast<Index>(values.size()) != shape_size(shape))
        fail(path + ": values length does not match the shape");
    Vector<double> flat(shape_size(shape));
    Index i = 0;
    for (const auto& v : values) flat[i++] = v.get<double>();

    ContingencyTable table{Tensor<double>(std::move(shape), std::move(flat)),
                           std::move(mode_names), std::move(labels)};
    table.validate();
    return table;
}

}  // namespace

void ContingencyTable::validate() const {
    const Index d = counts.order();
    if (static_cast<Index>(mode_names.size()) != d)
        fail("table has " + std::to_string(mode_names.size()) +
             " mode names for order " + std::to_string(d));
    if (static_cast<Index>(labels.size()) != d)
        fail("table has " + std::to_string(labels.size()) +
             " label lists for order " + std::to_string(d));
    std::set<std::string> names(mode_names.begin(), mode_names.end());
    if (static_cast<Index>(names.size()) != d)
        fail("mode names must be distinct");
    for (Index mu = 1; mu <= d; ++mu) {
        const auto& lbl = labels[static_cast<std::size_t>(mu - 1)];
        if (static_cast<Index>(lbl.size()) != counts.dim(mu))
            fail("mode " + mode_names[static_cast<std::size_t>(mu - 1)] +
                 " has " + std::to_string(lbl.size()) + " labels for " +
                 std::to_string(counts.dim(mu)) + " categories");
        std::set<std::string> uniq(lbl.begin(), lbl.end());
        if (uniq.size() != lbl.size())
            fail("labels of mode " +
                 mode_names[static_cast<std::size_t>(mu - 1)] +
                 " must be distinct");
    }
    double total = 0;
    for (Index i = 0; i < counts.size(); ++i) {
        const double v = counts.flat()[i];
        if (v < 0 || v != std::floor(v))
            fail("counts must be nonnegative integers");
        total += v;
    }
    if (!(total > 0)) fail("table has no positive entry");
}

std::optional<TableFormat> parse_table_format(const std::string& name) {
    if (name == "long-csv") return TableFormat::long_csv;
    if (name == "dense-json") return TableFormat::dense_json;
    return std::nullopt;
}

TableFormat infer_table_format(const std::string& path) {
    const auto dot = path.find_last_of('.');
    const std::string ext =
        dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "csv") return TableFormat::long_csv;
    if (ext == "json") return TableFormat::dense_json;
    fail("cannot infer the table format of " + path +
         "; pass long-csv or dense-json explicitly");
}

ContingencyTable load_table(
    const std::string& path, TableFormat format,
    const std::optional<std::string>& label_order_path) {
    switch (format) {
        case TableFormat::long_csv:
            return load_long_csv(path, label_order_path);
        case TableFormat::dense_json:
            return load_dense_json(path);
    }
    fail("unknown table format");
}

void save_table(const ContingencyTable& table, const std::string& path,
                TableFormat format) {
    table.validate();
    std::ofstream out(path);
    if (!out) fail("cannot write " + path);

    if (format == TableFormat::long_csv) {
        for (std::size_t a = 0; a < table.mode_names.size(); ++a)
            out << csv_escape(table.mode_names[a]) << ',';
        out << "count\n";
        detail::for_each_index(
            table.counts.shape(), [&](std::span<const Index> idx) {
                for (std::size_t a = 0; a < idx.size(); ++a)
                    out << csv_escape(
                               table.labels[a]
                                   [static_cast<std::size_t>(idx[a] - 1)])
                        << ',';
                out << static_cast<long long>(table.counts.at(idx)) << '\n';
            });
    } else {
        json j;
        j["shape"] = table.counts.shape();
        j["mode_names"] = table.mode_names;
        j["labels"] = table.labels;
        std::vector<long long> values(
            static_cast<std::size_t>(table.counts.size()));
        for (Index i = 0; i < table.counts.size(); ++i)
            values[static_cast<std::size_t>(i)] =
                static_cast<long long>(table.counts.flat()[i]);
        j["values"] = values;
        out << j.dump(2) << '\n';
    }
    if (!out) fail("failed writing " + path);
}

std::pair<ContingencyTable, ZeroSliceReport> drop_zero_slices(
    const ContingencyTable& table) {
    table.validate();
    const Index d = table.order();
    ZeroSliceReport report;
    report.dropped.resize(static_cast<std::size_t>(d));

    ContingencyTable cur = table;
    for (;;) {
        bool any = false;
        for (Index mu = 1; mu <= d && !any; ++mu) {
            const Vector<double> sums =
                unfold(cur.counts, mu).rowwise().sum();
            std::vector<Index> keep;
            for (Index i = 0; i < sums.size(); ++i)
                if (sums[i] > 0) keep.push_back(i + 1);
            if (static_cast<Index>(keep.size()) == cur.counts.dim(mu))
                continue;
            if (keep.empty()) fail("dropping empty slices left no data");
            any = true;

            auto& labels = cur.labels[static_cast<std::size_t>(mu - 1)];
            std::vector<std::string> kept_labels;
            std::set<Index> keep_set(keep.begin(), keep.end());
            for (Index i = 1; i <= cur.counts.dim(mu); ++i) {
                const auto& lbl = labels[static_cast<std::size_t>(i - 1)];
                if (keep_set.count(i)) kept_labels.push_back(lbl);
                else
                    report.dropped[static_cast<std::size_t>(mu - 1)]
                        .push_back(lbl);
            }

            Shape shape = cur.counts.shape();
            shape[static_cast<std::size_t>(mu - 1)] =
                static_cast<Index>(keep.size());
            Tensor<double> next(shape);
            detail::for_each_index(shape, [&](std::span<const Index> idx) {
                std::vector<Index> src(idx.begin(), idx.end());
                src[static_cast<std::size_t>(mu - 1)] =
                    keep[static_cast<std::size_t>(
                        idx[static_cast<std::size_t>(mu - 1)] - 1)];
                next.at(idx) = cur.counts.at(
                    std::span<const Index>(src.data(), src.size()));
            });
            cur.counts = std::move(next);
            labels = std::move(kept_labels);
        }
        if (!any) break;
    }
    return {std::move(cur), std::move(report)};
}

}  // namespace mwca
