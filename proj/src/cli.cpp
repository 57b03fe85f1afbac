#include "mwca/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mwca/analysis.hpp"
#include "mwca/contingency.hpp"
#include "mwca/plot.hpp"
#include "mwca/report_io.hpp"
#include "mwca/synthetic.hpp"

namespace mwca::cli {

namespace {

using nlohmann::json;

struct TableOptions {
    std::string input;
    std::string format;       // empty: infer from extension
    std::string label_order;  // optional sidecar path
    std::string zero_slices = "error";
};

struct AnalysisOptions {
    std::string ranks = "full";
    std::string algorithm = "hosvd";
    double tolerance = default_verify_tolerance;
    std::vector<Index> axes = {2, 3};
};

void add_table_options(CLI::App* cmd, TableOptions& opt) {
    cmd->add_option("--input", opt.input, "contingency table file")
        ->required();
    cmd->add_option("--format", opt.format,
                    "table format: long-csv or dense-json "
                    "(default: by extension)");
    cmd->add_option("--labels", opt.label_order,
                    "JSON sidecar pinning per-mode label order");
    cmd->add_option("--zero-slices", opt.zero_slices,
                    "policy for all-zero slices: error or drop")
        ->check(CLI::IsMember({"error", "drop"}));
}

void add_analysis_options(CLI::App* cmd, AnalysisOptions& opt) {
    cmd->add_option("--ranks", opt.ranks,
                    "per-mode ranks r1,r2,... or 'full'");
    cmd->add_option("--algorithm", opt.algorithm,
                    "decomposition backend: hosvd, st_hosvd or hooi")
        ->check(CLI::IsMember({"hosvd", "st_hosvd", "hooi"}));
    cmd->add_option("--tolerance", opt.tolerance,
                    "verification tolerance on relative residuals");
    cmd->add_option("--axes", opt.axes,
                    "two component indices to plot (default 2 3)")
        ->expected(2);
}

std::optional<Shape> parse_ranks(const std::string& text) {
    if (text == "full") return std::nullopt;
    Shape ranks;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t pos = 0;
            const long v = std::stol(part, &pos);
            if (pos != part.size() || v < 1) throw std::invalid_argument("");
            ranks.push_back(static_cast<Index>(v));
        } catch (const std::exception&) {
            throw std::runtime_error("invalid rank entry '" + part +
                                     "' (expected positive integers or "
                                     "'full')");
        }
    }
    if (ranks.empty())
        throw std::runtime_error("empty rank list (expected r1,r2,... or "
                                 "'full')");
    return ranks;
}

DecompositionMethod parse_algorithm(const std::string& name) {
    const auto method = parse_method(name);
    if (!method) throw std::runtime_error("unknown algorithm " + name);
    return *method;
}

ContingencyTable load_with_policy(const TableOptions& opt, json& report) {
    const TableFormat format =
        opt.format.empty()
            ? infer_table_format(opt.input)
            : [&] {
                  const auto f = parse_table_format(opt.format);
                  if (!f)
                      throw std::runtime_error("unknown format " + opt.format +
                                               " (long-csv or dense-json)");
                  return *f;
              }();
    ContingencyTable table = load_table(
        opt.input, format,
        opt.label_order.empty() ? std::nullopt
                                : std::optional<std::string>(opt.label_order));

    report["table"]["mode_names"] = table.mode_names;
    report["table"]["grand_total"] =
        static_cast<long long>(table.counts.flat().sum());

    if (opt.zero_slices == "drop") {
        auto [kept, dropped] = drop_zero_slices(table);
        if (!dropped.empty()) {
            json dj = json::object();
            for (Index mu = 1; mu <= table.order(); ++mu) {
                const auto& list =
                    dropped.dropped[static_cast<std::size_t>(mu - 1)];
                if (!list.empty())
                    dj[table.mode_names[static_cast<std::size_t>(mu - 1)]] =
                        list;
            }
            report["table"]["dropped_slices"] = dj;
            std::cerr << "note: dropped all-zero slices: " << dj.dump()
                      << "\n";
        }
        table = std::move(kept);
    }
    report["table"]["shape"] = table.counts.shape();
    return table;
}

// Component `axis` of the coordinate matrix, or zeros when the mode has
// fewer components.
Vectord plot_column(const Matrixd& coords, Index axis) {
    if (axis <= coords.cols()) return coords.col(axis - 1);
    return Vectord::Zero(coords.rows());
}

std::vector<plot::Cloud> make_clouds(
    const std::vector<Matrixd>& coords,
    const std::vector<std::string>& names,
    const std::vector<std::vector<std::string>>& labels,
    const std::vector<Index>& axes) {
    std::vector<plot::Cloud> clouds;
    for (std::size_t m = 0; m < coords.size(); ++m) {
        plot::Cloud cloud;
        cloud.name = names[m];
        cloud.labels = labels[m];
        const Vectord x = plot_column(coords[m], axes[0]);
        const Vectord y = plot_column(coords[m], axes[1]);
        for (Index i = 0; i < x.size(); ++i)
            cloud.points.push_back({x[i], y[i]});
        clouds.push_back(std::move(cloud));
    }
    return clouds;
}

void check_axes(const std::vector<Index>& axes) {
    if (axes.size() != 2 || axes[0] == axes[1] || axes[0] < 1 || axes[1] < 1)
        throw std::runtime_error("--axes needs two distinct component "
                                 "indices >= 1");
}

std::filesystem::path prepare_out_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p;
}

void write_report(const std::filesystem::path& dir, const json& report) {
    std::ofstream out(dir / "report.json");
    if (!out) throw std::runtime_error("cannot write report.json");
    out << report.dump(2) << '\n';
}

// Combined category labels of the modes other than `mode`, in unfolding
// column order (lowest mode fastest).
std::vector<std::string> combined_labels(const ContingencyTable& table,
                                         Index mode) {
    Shape other_dims;
    std::vector<std::size_t> other_modes;
    for (Index mu = 1; mu <= table.order(); ++mu)
        if (mu != mode) {
            other_dims.push_back(table.counts.dim(mu));
            other_modes.push_back(static_cast<std::size_t>(mu - 1));
        }
    std::vector<std::string> out;
    detail::for_each_index(other_dims, [&](std::span<const Index> idx) {
        std::string lbl;
        for (std::size_t a = 0; a < other_modes.size(); ++a) {
            if (a) lbl += '|';
            lbl += table.labels[other_modes[a]]
                              [static_cast<std::size_t>(idx[a] - 1)];
        }
        out.push_back(std::move(lbl));
    });
    return out;
}

std::string combined_mode_name(const ContingencyTable& table, Index mode) {
    std::string name;
    for (Index mu = 1; mu <= table.order(); ++mu) {
        if (mu == mode) continue;
        if (!name.empty()) name += '|';
        name += table.mode_names[static_cast<std::size_t>(mu - 1)];
    }
    return name;
}

void write_mode_coordinates(const std::filesystem::path& dir,
                            const std::string& prefix,
                            const std::string& mode_name,
                            const std::vector<std::string>& labels,
                            const Matrixd& y, const Matrixd& w,
                            const Matrixd& z, const Vectord& sigma) {
    const std::string base = prefix + "mode-" +
                             io::sanitize_filename(mode_name);
    io::write_coordinate_csv((dir / (base + "-Y.csv")).string(), labels, y);
    io::write_coordinate_csv((dir / (base + "-W.csv")).string(), labels, w);
    io::write_coordinate_csv((dir / (base + "-Z.csv")).string(), labels, z);
    io::write_sigma_csv(
        (dir / (prefix + "sigma-" + io::sanitize_filename(mode_name) +
                ".csv")).string(),
        sigma);
}

json sigma_json(const std::vector<std::string>& names,
                const std::vector<Vectord>& sigmas) {
    json out = json::object();
    for (std::size_t m = 0; m < names.size(); ++m) {
        std::vector<double> s(sigmas[m].begin(), sigmas[m].end());
        out[names[m]] = s;
    }
    return out;
}

void write_mwca_outputs(const std::filesystem::path& dir,
                        const ContingencyTable& table,
                        const MwcaResult<double>& res,
                        const std::vector<Index>& axes, bool plot_requested,
                        json& report) {
    const Index d = table.order();
    for (Index mu = 1; mu <= d; ++mu) {
        const auto m = static_cast<std::size_t>(mu - 1);
        write_mode_coordinates(dir, "", table.mode_names[m], table.labels[m],
                               res.y[m], res.w[m], res.z[m],
                               res.decomposition.mode_sigma[m]);
    }
    report["ranks"] = res.decomposition.ranks;
    report["sigma"] = sigma_json(table.mode_names,
                                 res.decomposition.mode_sigma);
    std::vector<Vectord> inertia(res.inertia.begin(), res.inertia.end());
    report["inertia"] = sigma_json(table.mode_names, inertia);

    if (plot_requested) {
        plot::write_biplot_svg(
            (dir / "biplot.svg").string(),
            make_clouds(res.y, table.mode_names, table.labels, axes),
            "component " + std::to_string(axes[0]),
            "component " + std::to_string(axes[1]));
    }
}

void write_ca_outputs(const std::filesystem::path& dir,
                      const std::string& prefix,
                      const ContingencyTable& table, Index mode,
                      const CaResult<double>& ca,
                      const std::vector<Index>& axes, bool plot_requested,
                      json& report) {
    const auto k = static_cast<std::size_t>(mode - 1);
    const std::string row_name = table.mode_names[k];
    const std::string col_name = combined_mode_name(table, mode);
    const std::vector<std::string> col_labels = combined_labels(table, mode);

    write_mode_coordinates(dir, prefix, row_name, table.labels[k], ca.row_y,
                           ca.row_w, ca.row_z, ca.sigma);
    write_mode_coordinates(dir, prefix, col_name, col_labels, ca.col_y,
                           ca.col_w, ca.col_z, ca.sigma);

    report["ca"]["mode"] = mode;
    report["ca"]["rank"] = ca.sigma.size();
    std::vector<double> s(ca.sigma.begin(), ca.sigma.end());
    report["ca"]["sigma"] = s;

    if (plot_requested) {
        plot::write_biplot_svg(
            (dir / (prefix + "biplot.svg")).string(),
            make_clouds({ca.row_y, ca.col_y}, {row_name, col_name},
                        {table.labels[k], col_labels}, axes),
            "component " + std::to_string(axes[0]),
            "component " + std::to_string(axes[1]));
    }
}

json report_for(const VerificationReport<double>& rep,
                const std::string& basis) {
    json j{{"check", rep.check},
           {"mode", rep.mode},
           {"max_abs_residual", rep.max_abs_residual},
           {"relative_residual", rep.relative_residual},
           {"tolerance", rep.tolerance},
           {"pass", rep.pass},
           {"ranks", rep.ranks},
           {"basis", basis}};
    if (rep.check == "barycentric")
        j["weight_sum_error"] = rep.weight_sum_error;
    return j;
}

void print_check(const VerificationReport<double>& rep,
                 const std::string& basis) {
    std::printf("%s  %-26s mode %lld  residual %.3e  relative %.3e  "
                "tolerance %.1e  [%s]\n",
                rep.pass ? "PASS" : "FAIL", rep.check.c_str(),
                static_cast<long long>(rep.mode), rep.max_abs_residual,
                rep.relative_residual, rep.tolerance, basis.c_str());
}

Shape full_mode_ranks(const Tensor<double>& x) {
    Shape full;
    for (Index mu = 1; mu <= x.order(); ++mu) {
        Eigen::BDCSVD<Matrixd> s(unfold(x, mu));
        full.push_back(numerical_rank<double>(s.singularValues()));
    }
    return full;
}

// Runs the three identity families on a weighted tensor and metric. When
// the requested ranks truncate, the component links are evaluated on the
// rank-r reconstruction with a fresh decomposition (the identities are
// exact only there) and the barycentric check is skipped, since its
// hypothesis requires full rank.
bool run_verification(const Tensor<double>& f, ModeMetric<double> metric,
                      const std::optional<Shape>& ranks,
                      DecompositionMethod method, double tolerance,
                      bool run_barycentric, json& checks,
                      bool verbose = true) {
    MwcaResult<double> res =
        weighted_decomposition(f, std::move(metric), ranks, method);
    const Tensor<double> x = isometry_apply(f, res.metric);
    const bool truncated = res.decomposition.ranks != full_mode_ranks(x);

    const Tensor<double>* euclid_tensor = &x;
    const Tensor<double>* metric_tensor = &f;
    const TuckerDecomposition<double>* euclid_dec = &res.decomposition;
    const MwcaResult<double>* metric_res = &res;
    std::string basis = "input";

    // storage for the substituted objects when truncating
    Tensor<double> x_rec(Shape{1});
    Tensor<double> f_rec(Shape{1});
    std::optional<TuckerDecomposition<double>> dec_fresh;
    std::optional<MwcaResult<double>> res_fresh;
    if (truncated) {
        basis = "rank-r reconstruction";
        x_rec = reconstruct(res.decomposition);
        dec_fresh = decompose(x_rec, res.decomposition.ranks, method);
        f_rec = isometry_inverse(x_rec, res.metric);
        res_fresh = weighted_decomposition(f_rec, res.metric,
                                           res.decomposition.ranks, method);
        euclid_tensor = &x_rec;
        euclid_dec = &*dec_fresh;
        metric_tensor = &f_rec;
        metric_res = &*res_fresh;
    }

    bool all_pass = true;
    for (Index mu = 1; mu <= f.order(); ++mu) {
        const auto rep = verify_component_link_euclidean(
            *euclid_tensor, *euclid_dec, mu, tolerance);
        if (verbose) print_check(rep, basis);
        checks.push_back(report_for(rep, basis));
        all_pass = all_pass && rep.pass;
    }
    for (Index mu = 1; mu <= f.order(); ++mu) {
        const auto rep = verify_component_link_metric(*metric_tensor,
                                                      *metric_res, mu,
                                                      tolerance);
        if (verbose) print_check(rep, basis);
        checks.push_back(report_for(rep, basis));
        all_pass = all_pass && rep.pass;
    }
    if (run_barycentric) {
        if (truncated) {
            if (verbose)
                std::printf("SKIP  barycentric                (requires full "
                            "multilinear rank)\n");
            checks.push_back(json{{"check", "barycentric"},
                                  {"skipped",
                                   "requires full multilinear rank"}});
        } else {
            for (Index mu = 1; mu <= f.order(); ++mu) {
                const auto rep = verify_barycentric(res, mu, tolerance);
                if (verbose) print_check(rep, "input");
                checks.push_back(report_for(rep, "input"));
                all_pass = all_pass && rep.pass;
            }
        }
    }
    return all_pass;
}

int run_mwca_command(const TableOptions& topt, const AnalysisOptions& aopt,
                     Index ca_mode, const std::string& out_dir, bool do_plot) {
    check_axes(aopt.axes);
    json report;
    report["command"] = "mwca";
    const ContingencyTable table = load_with_policy(topt, report);
    const auto ranks = parse_ranks(aopt.ranks);
    const auto method = parse_algorithm(aopt.algorithm);
    report["config"] = {{"input", topt.input},
                        {"ranks", aopt.ranks},
                        {"algorithm", aopt.algorithm},
                        {"axes", aopt.axes},
                        {"tolerance", aopt.tolerance},
                        {"zero_slices", topt.zero_slices},
                        {"ca_mode", ca_mode == 0 ? table.order() : ca_mode}};

    const auto res = run_mwca(table.counts, ranks, method);

    const Index k = ca_mode == 0 ? table.order() : ca_mode;
    if (k < 1 || k > table.order())
        throw std::runtime_error("--ca-mode " + std::to_string(k) +
                                 " out of range [1," +
                                 std::to_string(table.order()) + "]");
    if (table.order() >= 2) {
        report["relative_error"] = {
            {"mode", k},
            {"value", ca_mwca_relative_error(res.frequencies, k)}};
    }

    // machine-checkable identities on the analyzed data, embedded quietly
    bool checks_pass = true;
    if (table.order() >= 2) {
        json checks = json::array();
        checks_pass = run_verification(res.frequencies, res.metric, ranks,
                                       method, aopt.tolerance, true, checks,
                                       /*verbose=*/false);
        report["checks"] = checks;
        report["all_pass"] = checks_pass;
    }

    const auto dir = prepare_out_dir(out_dir);
    write_mwca_outputs(dir, table, res, aopt.axes, do_plot, report);
    write_report(dir, report);
    if (!checks_pass) {
        std::cerr << "verification FAILED; see report.json\n";
        return 2;
    }
    return 0;
}

int run_ca_command(const TableOptions& topt, Index mode,
                   std::optional<Index> rank, const std::vector<Index>& axes,
                   const std::string& out_dir, bool do_plot) {
    check_axes(axes);
    json report;
    report["command"] = "ca";
    const ContingencyTable table = load_with_policy(topt, report);
    if (mode < 1 || mode > table.order())
        throw std::runtime_error("--mode " + std::to_string(mode) +
                                 " out of range [1," +
                                 std::to_string(table.order()) + "]");
    report["config"] = {{"input", topt.input},
                        {"mode", mode},
                        {"zero_slices", topt.zero_slices}};

    const auto ca = run_ca(Matrixd(unfold(table.counts, mode)), rank);
    const auto dir = prepare_out_dir(out_dir);
    write_ca_outputs(dir, "", table, mode, ca, axes, do_plot, report);
    write_report(dir, report);
    return 0;
}

int run_compare_command(const TableOptions& topt, const AnalysisOptions& aopt,
                        Index mode, const std::string& out_dir,
                        bool do_plot) {
    check_axes(aopt.axes);
    json report;
    report["command"] = "compare";
    const ContingencyTable table = load_with_policy(topt, report);
    if (mode < 1 || mode > table.order())
        throw std::runtime_error("--mode " + std::to_string(mode) +
                                 " out of range [1," +
                                 std::to_string(table.order()) + "]");
    if (table.order() < 2)
        throw std::runtime_error("compare needs a table of order >= 2");
    report["config"] = {{"input", topt.input},
                        {"ranks", aopt.ranks},
                        {"algorithm", aopt.algorithm},
                        {"axes", aopt.axes},
                        {"zero_slices", topt.zero_slices},
                        {"mode", mode}};

    const auto res = run_mwca(table.counts, parse_ranks(aopt.ranks),
                              parse_algorithm(aopt.algorithm));
    const auto ca = run_ca(Matrixd(unfold(table.counts, mode)));
    const double e = ca_mwca_relative_error(res.frequencies, mode);
    report["relative_error"] = {{"mode", mode}, {"value", e}};

    const auto dir = prepare_out_dir(out_dir);
    write_mwca_outputs(dir, table, res, aopt.axes, do_plot, report);
    write_ca_outputs(dir, "ca-", table, mode, ca, aopt.axes, do_plot, report);
    write_report(dir, report);
    std::printf("relative error e (mode %lld): %.6f\n",
                static_cast<long long>(mode), e);
    return 0;
}

int run_verify_command(const TableOptions& topt, const AnalysisOptions& aopt,
                       const std::vector<std::string>& random_args,
                       std::uint64_t seed, const std::string& out_dir) {
    json report;
    report["command"] = "verify";
    json checks = json::array();
    bool all_pass = true;

    const auto ranks = parse_ranks(aopt.ranks);
    const auto method = parse_algorithm(aopt.algorithm);

    if (!random_args.empty()) {
        if (random_args.size() != 2)
            throw std::runtime_error("--random needs ORDER and SHAPE, e.g. "
                                     "--random 3 4x5x6");
        const long order = std::stol(random_args[0]);
        Shape shape;
        std::stringstream ss(random_args[1]);
        std::string part;
        while (std::getline(ss, part, 'x'))
            shape.push_back(static_cast<Index>(std::stol(part)));
        if (static_cast<long>(shape.size()) != order || order < 2)
            throw std::runtime_error("--random: shape " + random_args[1] +
                                     " does not match order " +
                                     random_args[0] + " (order must be >= 2)");
        report["config"] = {{"random", random_args[1]},
                            {"seed", seed},
                            {"ranks", aopt.ranks},
                            {"algorithm", aopt.algorithm},
                            {"tolerance", aopt.tolerance}};

        std::mt19937_64 rng(seed);
        const Tensor<double> f = synthetic::gaussian_tensor(rng, shape);
        const auto metric = synthetic::positive_metric(rng, shape);
        all_pass = run_verification(f, metric, ranks, method, aopt.tolerance,
                                    false, checks);

        // barycentric needs a frequency tensor with positive marginals
        const Tensor<double> fb = synthetic::positive_frequencies(rng, shape);
        const auto res_b =
            weighted_decomposition(fb, ca_metric(marginals(fb)));
        for (Index mu = 1; mu <= res_b.order(); ++mu) {
            const auto rep = verify_barycentric(res_b, mu, aopt.tolerance);
            print_check(rep, "input");
            checks.push_back(report_for(rep, "input"));
            all_pass = all_pass && rep.pass;
        }
    } else {
        if (topt.input.empty())
            throw std::runtime_error("verify needs --input or --random");
        const ContingencyTable table = load_with_policy(topt, report);
        if (table.order() < 2)
            throw std::runtime_error("verify needs a table of order >= 2");
        report["config"] = {{"input", topt.input},
                            {"ranks", aopt.ranks},
                            {"algorithm", aopt.algorithm},
                            {"tolerance", aopt.tolerance},
                            {"zero_slices", topt.zero_slices}};

        const Tensor<double> f = relative_frequencies(table.counts);
        all_pass = run_verification(f, ca_metric(marginals(f)), ranks, method,
                                    aopt.tolerance, true, checks);
    }

    report["checks"] = checks;
    report["all_pass"] = all_pass;
    if (!out_dir.empty()) {
        const auto dir = prepare_out_dir(out_dir);
        write_report(dir, report);
    }
    std::printf("%s\n", all_pass ? "all checks passed"
                                 : "verification FAILED");
    return all_pass ? 0 : 2;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"multiway correspondence analysis of contingency tensors"};
    app.require_subcommand(1);

    TableOptions mwca_t, ca_t, cmp_t, ver_t;
    AnalysisOptions mwca_a, cmp_a, ver_a;
    std::string mwca_out, ca_out, cmp_out, ver_out;
    bool mwca_plot = false, ca_plot = false, cmp_plot = false;
    Index mwca_ca_mode = 0;  // 0: last mode
    Index ca_mode_flag = 0, cmp_mode = 0;
    std::optional<Index> ca_rank;
    std::vector<Index> ca_axes = {2, 3};
    std::vector<std::string> ver_random;
    std::uint64_t ver_seed = 0;

    CLI::App* c_mwca = app.add_subcommand(
        "mwca", "full multiway correspondence analysis");
    add_table_options(c_mwca, mwca_t);
    add_analysis_options(c_mwca, mwca_a);
    c_mwca->add_option("--ca-mode", mwca_ca_mode,
                       "mode for the CA comparison error (default: last)");
    c_mwca->add_option("--out", mwca_out, "output directory")->required();
    c_mwca->add_flag("--plot", mwca_plot, "emit biplot.svg");

    CLI::App* c_ca = app.add_subcommand(
        "ca", "classical correspondence analysis of one matricization");
    add_table_options(c_ca, ca_t);
    c_ca->add_option("--mode", ca_mode_flag, "mode kept on the rows")
        ->required();
    c_ca->add_option("--rank", [&ca_rank](const auto& vals) {
        ca_rank = static_cast<Index>(std::stol(vals[0]));
        return true;
    }, "truncation rank");
    c_ca->add_option("--axes", ca_axes, "plotted components")->expected(2);
    c_ca->add_option("--out", ca_out, "output directory")->required();
    c_ca->add_flag("--plot", ca_plot, "emit biplot.svg");

    CLI::App* c_cmp = app.add_subcommand(
        "compare", "run mwca and ca side by side with the relative error");
    add_table_options(c_cmp, cmp_t);
    add_analysis_options(c_cmp, cmp_a);
    c_cmp->add_option("--mode", cmp_mode, "matricization mode for ca")
        ->required();
    c_cmp->add_option("--out", cmp_out, "output directory")->required();
    c_cmp->add_flag("--plot", cmp_plot, "emit biplots");

    CLI::App* c_ver = app.add_subcommand(
        "verify", "check the component-link and barycentric identities");
    c_ver->add_option("--input", ver_t.input, "contingency table file");
    c_ver->add_option("--format", ver_t.format, "table format");
    c_ver->add_option("--labels", ver_t.label_order, "label-order sidecar");
    c_ver->add_option("--zero-slices", ver_t.zero_slices,
                      "all-zero slice policy")
        ->check(CLI::IsMember({"error", "drop"}));
    add_analysis_options(c_ver, ver_a);
    c_ver->add_option("--random", ver_random,
                      "self-test on seeded data: ORDER SHAPE (e.g. 3 4x5x6)")
        ->expected(2);
    c_ver->add_option("--seed", ver_seed, "PRNG seed for --random");
    c_ver->add_option("--out", ver_out, "optional report directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (c_mwca->parsed())
            return run_mwca_command(mwca_t, mwca_a, mwca_ca_mode, mwca_out,
                                    mwca_plot);
        if (c_ca->parsed())
            return run_ca_command(ca_t, ca_mode_flag, ca_rank, ca_axes,
                                  ca_out, ca_plot);
        if (c_cmp->parsed())
            return run_compare_command(cmp_t, cmp_a, cmp_mode, cmp_out,
                                       cmp_plot);
        if (c_ver->parsed())
            return run_verify_command(ver_t, ver_a, ver_random, ver_seed,
                                      ver_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace mwca::cli
