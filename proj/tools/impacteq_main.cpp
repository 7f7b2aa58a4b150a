// Command-line front end: solve equilibria, sweep precisions, map the
// PI-vs-PT welfare region, run the Monte Carlo verification suite, and emit
// the figure-reproduction datasets.
//
// Exit codes: 0 success, 2 parameter/validation error, 3 solver failure,
// 4 Monte Carlo verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "impacteq/equilibrium.hpp"
#include "impacteq/errors.hpp"
#include "impacteq/mc.hpp"
#include "impacteq/multiasset.hpp"
#include "impacteq/serde.hpp"
#include "impacteq/welfare.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitMcFailure = 4;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_output(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f)
        throw impacteq::validation_error("out", "cannot open output file " +
                                                    out_path);
    f << payload;
}

std::vector<double> make_grid(double lo, double hi, int count, bool log_scale) {
    if (count < 2)
        throw impacteq::validation_error("grid-count", "grid needs >= 2 points");
    if (!(lo > 0.0) || !(hi > lo))
        throw impacteq::validation_error(
            "grid", "grid bounds must satisfy 0 < min < max");
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) {
        const double u = static_cast<double>(i) / (count - 1);
        g[i] = log_scale ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u;
    }
    return g;
}

// Either inline scalar params, or a JSON config holding scalar params or a
// d-asset model.  Exactly one source.
struct ParamSource {
    std::optional<impacteq::MarketParams> inline_params;
    std::string config_path;

    bool has_inline() const { return inline_params.has_value(); }

    std::variant<impacteq::MarketParams, impacteq::AssetModel> load() const {
        if (has_inline() && !config_path.empty())
            throw impacteq::validation_error(
                "config", "give either inline parameters or --config, not both");
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f)
                throw impacteq::validation_error(
                    "config", "cannot read config file " + config_path);
            std::stringstream ss;
            ss << f.rdbuf();
            const nlohmann::json j = nlohmann::json::parse(ss.str());
            if (j.contains("d"))
                return impacteq::AssetModel::from_json_text(ss.str());
            return impacteq::market_params_from_json(j);
        }
        if (!has_inline())
            throw impacteq::validation_error(
                "params", "no input source: give inline parameters or --config");
        impacteq::MarketParams p = *inline_params;
        p.validate();
        return p;
    }
};

int cmd_solve(const ParamSource& source, const std::string& kind,
              const std::string& out_path) {
    using impacteq::EquilibriumKind;
    const auto market = source.load();

    const bool scalar = std::holds_alternative<impacteq::MarketParams>(market);
    const double p_I = scalar ? std::get<impacteq::MarketParams>(market).p_I
                              : std::get<impacteq::AssetModel>(market).p_I;
    if ((kind == "pi" || kind == "pt") && !(p_I > 0.0))
        throw impacteq::validation_error(
            "p_I", "p_I = 0 has no private signal; use --kind ns-pi (or ns-pt)");

    nlohmann::json doc;
    const bool want_ce = (kind == "all" || kind == "pi" || kind == "pt") &&
                         p_I > 0.0;
    if (scalar) {
        const auto& p = std::get<impacteq::MarketParams>(market);
        if (kind == "pi" || kind == "all") doc["pi"] = to_json(impacteq::solve_pi(p));
        if (kind == "pt" || kind == "all") doc["pt"] = to_json(impacteq::solve_pt(p));
        if (kind == "ns-pi" || kind == "all")
            doc["ns_pi"] = to_json(impacteq::solve_no_signal(p, true));
        if (kind == "ns-pt" || kind == "all")
            doc["ns_pt"] = to_json(impacteq::solve_no_signal(p, false));
        if (want_ce) doc["ce"] = to_json(impacteq::ce_ex_ante(p));
    } else {
        const auto& m = std::get<impacteq::AssetModel>(market);
        if (kind == "pi" || kind == "all")
            doc["pi"] = to_json(impacteq::solve_pi_multi(m));
        if (kind == "pt" || kind == "all")
            doc["pt"] = to_json(impacteq::solve_pt_multi(m));
        if (kind == "ns-pi" || kind == "all")
            doc["ns_pi"] = to_json(impacteq::solve_no_signal_multi(m, true));
        if (kind == "ns-pt" || kind == "all")
            doc["ns_pt"] = to_json(impacteq::solve_no_signal_multi(m, false));
        if (want_ce) doc["ce"] = to_json(impacteq::ce_ex_ante_multi(m));
    }
    write_output(out_path, doc.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const ParamSource& source, double lo, double hi, int count,
              const std::string& scale, const std::string& format,
              const std::string& out_path) {
    const auto market = source.load();
    const auto* p = std::get_if<impacteq::MarketParams>(&market);
    if (!p)
        throw impacteq::validation_error("config",
                                         "sweep expects scalar parameters");
    const auto grid = make_grid(lo, hi, count, scale == "log");
    const auto rows = impacteq::precision_sweep(*p, grid);
    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows)
            arr.push_back({{"p_I", r.p_I},
                           {"ce_I_pi", r.ce_I_pi},
                           {"ce_I_pt", r.ce_I_pt}});
        write_output(out_path, arr.dump(2) + "\n");
        return 0;
    }
    std::string csv = "p_I,ce_I_pi,ce_I_pt\n";
    for (const auto& r : rows)
        csv += fmt17(r.p_I) + "," + fmt17(r.ce_I_pi) + "," + fmt17(r.ce_I_pt) +
               "\n";
    write_output(out_path, csv);
    return 0;
}

int cmd_region(double alpha_I, double p_N, double au_lo, double au_hi,
               int au_count, double pi_lo, double pi_hi, int pi_count,
               const std::string& format, const std::string& out_path) {
    const auto au_grid = make_grid(au_lo, au_hi, au_count, false);
    const auto pi_grid = make_grid(pi_lo, pi_hi, pi_count, false);
    const auto pts = impacteq::classify_region(alpha_I, p_N, au_grid, pi_grid);
    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& pt : pts)
            arr.push_back({{"alpha_U", pt.alpha_U},
                           {"p_I", pt.p_I},
                           {"sign", impacteq::region_sign_name(pt.sign)}});
        write_output(out_path, arr.dump(2) + "\n");
        return 0;
    }
    std::string csv = "alpha_U,p_I,sign\n";
    for (const auto& pt : pts)
        csv += fmt17(pt.alpha_U) + "," + fmt17(pt.p_I) + "," +
               impacteq::region_sign_name(pt.sign) + "\n";
    write_output(out_path, csv);
    return 0;
}

int cmd_mc(const ParamSource& source, std::uint64_t n_paths, std::uint64_t seed,
           bool corrupt, const std::string& out_path) {
    const auto market = source.load();
    const auto* p = std::get_if<impacteq::MarketParams>(&market);
    if (!p)
        throw impacteq::validation_error("config",
                                         "mc expects scalar parameters");
    impacteq::SimConfig config;
    config.n_paths = n_paths;
    config.seed = seed;
    config.market = *p;
    const auto entries = impacteq::run_suite(*p, config, corrupt);

    std::string lines;
    std::vector<std::string> failing;
    for (const auto& e : entries) {
        lines += to_json(e.name, e.report, e.pass).dump() + "\n";
        if (!e.pass) failing.push_back(e.name);
    }
    write_output(out_path, lines);
    if (!failing.empty()) {
        std::cerr << "verification failed:";
        for (const auto& name : failing) std::cerr << " " << name;
        std::cerr << "\n";
        return kExitMcFailure;
    }
    return 0;
}

int cmd_figure(int which, const std::string& out_path) {
    std::string csv;
    if (which == 1) {
        // Two presets found by scanning the PT map's shapes: one with an
        // interior maximum, one monotone decreasing from p_I = 0.
        struct Preset {
            const char* name;
            impacteq::MarketParams params;
        };
        const Preset presets[2] = {
            {"interior_max", {1.0, 1.0, 1.0, 1.0, 0.0}},
            {"decreasing", {4.0, 1.0, 1.0, 0.001, 0.0}},
        };
        for (const auto& pr : presets)
            csv += std::string("# preset=") + pr.name +
                   " alpha_I=" + fmt17(pr.params.alpha_I) +
                   " alpha_U=" + fmt17(pr.params.alpha_U) +
                   " p_N=" + fmt17(pr.params.p_N) + " Pi=0\n";
        csv += "preset,p_I,ce_I_pt\n";
        const auto grid = make_grid(1e-2, 1e2, 60, true);
        for (const auto& pr : presets) {
            const auto rows = impacteq::precision_sweep(pr.params, grid);
            for (const auto& r : rows)
                csv += std::string(pr.name) + "," + fmt17(r.p_I) + "," +
                       fmt17(r.ce_I_pt) + "\n";
        }
    } else if (which == 2) {
        // d = 1 model with mu_X = 0.5; the CE curves of both equilibria.
        impacteq::AssetModel m;
        m.d = 1;
        m.mu_X = Eigen::VectorXd::Constant(1, 0.5);
        m.prec_X = Eigen::MatrixXd::Identity(1, 1);
        m.p_N = 1.0;
        m.alpha_I = 0.3;
        m.alpha_U = 0.3;
        m.Pi = Eigen::VectorXd::Zero(1);
        csv += "# alpha_I=0.3 alpha_U=0.3 mu_X=0.5 P_X=1 p_N=1 Pi=0\n";
        csv += "p_I,ce_I_pi,ce_I_pt\n";
        const auto grid = make_grid(0.1, 10.0, 100, false);
        for (double p_I : grid) {
            m.p_I = p_I;
            const impacteq::CEReport r = impacteq::ce_ex_ante_multi(m);
            csv += fmt17(p_I) + "," + fmt17(r.ce_I_pi) + "," + fmt17(r.ce_I_pt) +
                   "\n";
        }
    } else if (which == 3) {
        csv += "# p_N=1 grid=(alpha_U in (0,2]) x (p_I in (0,4]), 40x40\n";
        csv += "alpha_I,alpha_U,p_I,sign\n";
        const auto au_grid = make_grid(0.05, 2.0, 40, false);
        const auto pi_grid = make_grid(0.1, 4.0, 40, false);
        for (double alpha_I : {0.2, 0.1, 0.05}) {
            const auto pts =
                impacteq::classify_region(alpha_I, 1.0, au_grid, pi_grid);
            for (const auto& pt : pts)
                csv += fmt17(alpha_I) + "," + fmt17(pt.alpha_U) + "," +
                       fmt17(pt.p_I) + "," + impacteq::region_sign_name(pt.sign) +
                       "\n";
        }
    } else {
        throw impacteq::validation_error("which", "figure must be 1, 2 or 3");
    }
    write_output(out_path, csv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CARA-normal insider market: price-impact vs price-taking "
                 "equilibria, welfare, and Monte Carlo verification"};
    app.require_subcommand(1);

    std::string out_path;
    std::string format; // defaults per subcommand: datasets csv, solve/mc json
    std::uint64_t seed = 42;
    const auto add_common_opts = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "output file (default stdout)")
            ->envname("IMPACTEQ_OUT");
        cmd->add_option("--format", format, "output format (json|csv)")
            ->check(CLI::IsMember({"json", "csv"}))
            ->envname("IMPACTEQ_FORMAT");
        cmd->add_option("--seed", seed, "random seed")->envname("IMPACTEQ_SEED");
    };

    ParamSource source;
    impacteq::MarketParams inline_params;
    int inline_count = 0;
    std::string config_path;

    const auto add_param_opts = [&](CLI::App* cmd) {
        cmd->add_option_function<double>(
               "--alpha-i",
               [&](double v) { inline_params.alpha_I = v; ++inline_count; },
               "insider risk tolerance");
        cmd->add_option_function<double>(
               "--alpha-u",
               [&](double v) { inline_params.alpha_U = v; ++inline_count; },
               "uninformed risk tolerance");
        cmd->add_option_function<double>(
               "--p-i", [&](double v) { inline_params.p_I = v; ++inline_count; },
               "insider signal precision");
        cmd->add_option_function<double>(
               "--p-n", [&](double v) { inline_params.p_N = v; ++inline_count; },
               "noise-demand precision");
        cmd->add_option_function<double>(
               "--pi", [&](double v) { inline_params.Pi = v; ++inline_count; },
               "outstanding supply");
        cmd->add_option("--config", config_path,
                        "JSON file with params or a d-asset model");
    };

    // solve
    std::string kind = "all";
    CLI::App* solve = app.add_subcommand("solve", "solve equilibria");
    add_common_opts(solve);
    add_param_opts(solve);
    solve->add_option("--kind", kind, "pi|pt|ns-pi|ns-pt|all")
        ->check(CLI::IsMember({"pi", "pt", "ns-pi", "ns-pt", "all"}));

    // sweep
    double grid_min = 1e-2, grid_max = 1e2;
    int grid_count = 50;
    std::string grid_scale = "log";
    CLI::App* sweep = app.add_subcommand("sweep", "CE precision sweep (CSV)");
    add_common_opts(sweep);
    add_param_opts(sweep);
    sweep->add_option("--grid-min", grid_min, "lowest p_I");
    sweep->add_option("--grid-max", grid_max, "highest p_I");
    sweep->add_option("--grid-count", grid_count, "grid points");
    sweep->add_option("--grid-scale", grid_scale, "linear|log")
        ->check(CLI::IsMember({"linear", "log"}));

    // region
    double r_alpha_I = 0.1, r_p_N = 1.0;
    double au_min = 0.05, au_max = 2.0, pi_min = 0.1, pi_max = 4.0;
    int au_count = 40, pi_count = 40;
    CLI::App* region =
        app.add_subcommand("region", "PI-vs-PT welfare region map (CSV)");
    add_common_opts(region);
    region->add_option("--alpha-i", r_alpha_I, "insider risk tolerance");
    region->add_option("--p-n", r_p_N, "noise-demand precision");
    region->add_option("--alpha-u-min", au_min, "");
    region->add_option("--alpha-u-max", au_max, "");
    region->add_option("--alpha-u-count", au_count, "");
    region->add_option("--p-i-min", pi_min, "");
    region->add_option("--p-i-max", pi_max, "");
    region->add_option("--p-i-count", pi_count, "");

    // mc
    std::uint64_t n_paths = 1000000;
    bool corrupt = false;
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo verification suite");
    add_common_opts(mc);
    add_param_opts(mc);
    mc->add_option("--n-paths", n_paths, "Monte Carlo paths");
    mc->add_flag("--corrupt", corrupt,
                 "negative control: corrupt a policy coefficient");

    // figure
    int which = 2;
    CLI::App* figure =
        app.add_subcommand("figure", "figure-reproduction dataset (CSV)");
    add_common_opts(figure);
    figure->add_option("--which", which, "1|2|3");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitValidation;
    }

    try {
        if (inline_count > 0) source.inline_params = inline_params;
        source.config_path = config_path;
        if (solve->parsed()) return cmd_solve(source, kind, out_path);
        if (sweep->parsed())
            return cmd_sweep(source, grid_min, grid_max, grid_count, grid_scale,
                             format.empty() ? "csv" : format, out_path);
        if (region->parsed())
            return cmd_region(r_alpha_I, r_p_N, au_min, au_max, au_count, pi_min,
                              pi_max, pi_count, format.empty() ? "csv" : format,
                              out_path);
        if (mc->parsed())
            return cmd_mc(source, n_paths, seed, corrupt, out_path);
        if (figure->parsed()) return cmd_figure(which, out_path);
    } catch (const impacteq::validation_error& e) {
        std::cerr << "parameter error (" << e.field() << "): " << e.what()
                  << "\n";
        return kExitValidation;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const impacteq::solver_error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
    return 0;
}
