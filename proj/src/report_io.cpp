#include "mwca/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mwca::io {

std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string sanitize_filename(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '+' ||
                        c == '-';
        out += ok ? c : '_';
    }
    return out.empty() ? "_" : out;
}

namespace {

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

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

}  // namespace

void write_coordinate_csv(const std::string& path,
                          const std::vector<std::string>& labels,
                          const Matrixd& coords) {
    if (static_cast<Index>(labels.size()) != coords.rows())
        throw std::invalid_argument("label count does not match coordinates");
    std::ofstream out = open_or_throw(path);
    out << "label";
    for (Index c = 0; c < coords.cols(); ++c) out << ",c" << (c + 1);
    out << '\n';
    for (Index r = 0; r < coords.rows(); ++r) {
        out << csv_escape(labels[static_cast<std::size_t>(r)]);
        for (Index c = 0; c < coords.cols(); ++c)
            out << ',' << format_full(coords(r, c));
        out << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + path);
}

void write_sigma_csv(const std::string& path, const Vectord& sigma) {
    std::ofstream out = open_or_throw(path);
    out << "component,sigma\n";
    for (Index i = 0; i < sigma.size(); ++i)
        out << (i + 1) << ',' << format_full(sigma[i]) << '\n';
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace mwca::io
