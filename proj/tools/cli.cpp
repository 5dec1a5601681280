#include "cli.hpp"

#include "esgmv/model_io.hpp"
#include "esgmv/parallel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace esgmv::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw Error(ErrorCode::Config, where + " must be an object");
}

// Typo safety: every key of a section must be known.
void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    require_object(j, where);
    for (const auto& [key, _] : j.items()) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!ok) throw Error(ErrorCode::Config, "unknown key '" + key + "' in " + where);
    }
}

template <class T>
T read(const json& j, const char* key, T fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::Config, where + "." + key + " has the wrong type");
    }
}

fs::path resolve(const fs::path& base, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

RegularizerSpec parse_regularizer(const json& j, const std::string& where) {
    if (j.is_string()) {
        const RegularizerKind kind = parse_regularizer_kind(j.get<std::string>());
        if (kind == RegularizerKind::Custom) throw Error(ErrorCode::Config, where + ": Custom needs a plugin");
        return RegularizerSpec::with_default_grid(kind);
    }
    check_keys(j, where, {"kind", "grid", "params", "label"});
    if (!j.contains("kind")) throw Error(ErrorCode::Config, where + ".kind is required");
    RegularizerSpec spec = parse_regularizer(j.at("kind"), where + ".kind");
    spec.eta_grid = read(j, "grid", spec.eta_grid, where);
    spec.label = read(j, "label", spec.label, where);
    if (j.contains("params")) {
        spec.params = read(j, "params", std::map<std::string, double>{}, where);
    }
    try {
        spec.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::Config, where + ": " + e.what());
    }
    return spec;
}

std::vector<RegularizerSpec> parse_regularizer_list(const json& j, const std::string& where) {
    if (!j.is_array()) throw Error(ErrorCode::Config, where + " must be an array");
    std::vector<RegularizerSpec> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_regularizer(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

D2Denominator parse_d2(const std::string& s) {
    if (s == "regularized_trace") return D2Denominator::RegularizedTrace;
    if (s == "unscaled_q") return D2Denominator::UnscaledQ;
    throw Error(ErrorCode::Config, "d2_denominator must be regularized_trace or unscaled_q");
}

std::uint64_t read_seed(const json& j, const char* key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_number_unsigned()) {
        throw Error(ErrorCode::Config, where + "." + key + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

SyntheticSpec parse_synthetic(const json& j) {
    const std::string w = "synthetic";
    check_keys(j, w, {"assets", "s_bar", "seed", "market_var", "style_var", "market_beta_mean", "market_beta_sd",
                      "style_beta_sd", "idio_var_lo", "idio_var_hi", "market_premium", "style_premium", "alpha_mean",
                      "alpha_sd", "esg_scale", "esg_alpha_corr", "esg_sd_lo", "esg_sd_hi", "esg_common_corr",
                      "return_unit"});
    SyntheticSpec s;
    s.assets = read(j, "assets", s.assets, w);
    s.s_bar = read(j, "s_bar", s.s_bar, w);
    if (j.contains("seed")) s.seed = read_seed(j, "seed", w);
    s.market_var = read(j, "market_var", s.market_var, w);
    s.style_var = read(j, "style_var", s.style_var, w);
    s.market_beta_mean = read(j, "market_beta_mean", s.market_beta_mean, w);
    s.market_beta_sd = read(j, "market_beta_sd", s.market_beta_sd, w);
    s.style_beta_sd = read(j, "style_beta_sd", s.style_beta_sd, w);
    s.idio_var_lo = read(j, "idio_var_lo", s.idio_var_lo, w);
    s.idio_var_hi = read(j, "idio_var_hi", s.idio_var_hi, w);
    s.market_premium = read(j, "market_premium", s.market_premium, w);
    s.style_premium = read(j, "style_premium", s.style_premium, w);
    s.alpha_mean = read(j, "alpha_mean", s.alpha_mean, w);
    s.alpha_sd = read(j, "alpha_sd", s.alpha_sd, w);
    s.esg_scale = read(j, "esg_scale", s.esg_scale, w);
    s.esg_alpha_corr = read(j, "esg_alpha_corr", s.esg_alpha_corr, w);
    s.esg_sd_lo = read(j, "esg_sd_lo", s.esg_sd_lo, w);
    s.esg_sd_hi = read(j, "esg_sd_hi", s.esg_sd_hi, w);
    s.esg_common_corr = read(j, "esg_common_corr", s.esg_common_corr, w);
    s.return_unit = read(j, "return_unit", s.return_unit, w);
    if (s.assets < 2) throw Error(ErrorCode::Config, "synthetic.assets must be >= 2");
    return s;
}

void parse_simulate(const json& j, SimulateSection& out) {
    const std::string w = "simulate";
    check_keys(j, w, {"p", "T", "reps", "gamma", "s_bar", "seed", "q", "eta_mode", "fixed_eta", "strategies", "filter",
                      "max_draw_factor", "threads", "d2_denominator", "table", "curve_q", "gaps", "gap_q", "gap_sizes",
                      "svg"});
    SimConfig& c = out.sim;
    c.p = read(j, "p", c.p, w);
    c.T = read(j, "T", c.T, w);
    c.reps = read(j, "reps", c.reps, w);
    c.gamma = read(j, "gamma", c.gamma, w);
    c.s_bar = read(j, "s_bar", c.s_bar, w);
    if (j.contains("seed")) {
        c.seed = read_seed(j, "seed", w);
        out.seed_given = true;
    }
    if (j.contains("q")) c.q_spec = parse_regularizer(j.at("q"), w + ".q");
    const std::string mode = read(j, "eta_mode", std::string("grid"), w);
    if (mode == "grid") {
        c.eta_mode = EtaMode::GridSelect;
    } else if (mode == "fixed") {
        c.eta_mode = EtaMode::Fixed;
    } else {
        throw Error(ErrorCode::Config, "simulate.eta_mode must be grid or fixed");
    }
    c.fixed_eta = read(j, "fixed_eta", c.fixed_eta, w);
    if (j.contains("strategies")) {
        c.strategies.clear();
        for (const auto& s : read(j, "strategies", std::vector<std::string>{}, w)) {
            try {
                c.strategies.push_back(parse_strategy(s));
            } catch (const Error& e) {
                throw Error(ErrorCode::Config, e.what());
            }
        }
    }
    c.filter = read(j, "filter", c.filter, w);
    c.max_draw_factor = read(j, "max_draw_factor", c.max_draw_factor, w);
    c.threads = read(j, "threads", c.threads, w);
    if (j.contains("d2_denominator")) c.estimator.d2_denominator = parse_d2(read(j, "d2_denominator", std::string{}, w));
    out.table = read(j, "table", out.table, w);
    if (j.contains("curve_q")) out.curve_q = parse_regularizer_list(j.at("curve_q"), w + ".curve_q");
    out.gaps = read(j, "gaps", out.gaps, w);
    if (j.contains("gap_q")) out.gap_q = parse_regularizer(j.at("gap_q"), w + ".gap_q");
    if (j.contains("gap_sizes")) {
        const json& sizes = j.at("gap_sizes");
        if (!sizes.is_array()) throw Error(ErrorCode::Config, "simulate.gap_sizes must be an array");
        out.gap_sizes.clear();
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            const std::string where = w + ".gap_sizes[" + std::to_string(i) + "]";
            check_keys(sizes[i], where, {"p", "T"});
            if (!sizes[i].contains("p") || !sizes[i].contains("T")) throw Error(ErrorCode::Config, where + " needs p and T");
            out.gap_sizes.emplace_back(read(sizes[i], "p", Index{0}, where), read(sizes[i], "T", Index{0}, where));
        }
    }
    out.svg = read(j, "svg", out.svg, w);
}

void parse_backtest(const json& j, BacktestConfig& c) {
    const std::string w = "backtest";
    check_keys(j, w, {"window", "hold", "cost_rate", "s_bar", "gamma", "strategies", "free_first_trade",
                      "standardize_esg", "poet_threshold", "adaptive_candidates", "esg_mode", "wipeout",
                      "d2_denominator", "threads"});
    c.window = read(j, "window", c.window, w);
    c.hold = read(j, "hold", c.hold, w);
    c.cost_rate = read(j, "cost_rate", c.cost_rate, w);
    c.s_bar = read(j, "s_bar", c.s_bar, w);
    c.gamma = read(j, "gamma", c.gamma, w);
    if (j.contains("strategies")) {
        c.strategies.clear();
        for (const auto& s : read(j, "strategies", std::vector<std::string>{}, w)) {
            c.strategies.push_back(parse_backtest_strategy(s));
        }
    }
    c.free_first_trade = read(j, "free_first_trade", c.free_first_trade, w);
    c.standardize_esg = read(j, "standardize_esg", c.standardize_esg, w);
    c.poet_threshold = read(j, "poet_threshold", c.poet_threshold, w);
    if (j.contains("adaptive_candidates")) {
        c.adaptive_candidates = parse_regularizer_list(j.at("adaptive_candidates"), w + ".adaptive_candidates");
    }
    const std::string mode = read(j, "esg_mode", std::string("equality"), w);
    if (mode == "equality") {
        c.esg_mode = EsgConstraintMode::Equality;
    } else if (mode == "inequality") {
        c.esg_mode = EsgConstraintMode::Inequality;
    } else {
        throw Error(ErrorCode::Config, "backtest.esg_mode must be equality or inequality");
    }
    const std::string wipe = read(j, "wipeout", std::string("fail"), w);
    if (wipe == "fail") {
        c.wipeout = WipeoutPolicy::Fail;
    } else if (wipe == "restart") {
        c.wipeout = WipeoutPolicy::Restart;
    } else {
        throw Error(ErrorCode::Config, "backtest.wipeout must be fail or restart");
    }
    if (j.contains("d2_denominator")) c.estimator.d2_denominator = parse_d2(read(j, "d2_denominator", std::string{}, w));
    c.threads = read(j, "threads", c.threads, w);
    c.validate();
}

// ---------------------------------------------------------------------------

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    return out;
}

double condition_number(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

PanelBundle load_data(const RunConfig& cfg) {
    if (!cfg.data) throw Error(ErrorCode::Config, "config has no data section");
    for (const fs::path& p : {cfg.data->returns, cfg.data->esg, cfg.data->riskfree}) {
        if (!fs::exists(p)) throw Error(ErrorCode::Io, "file not found: " + p.string());
    }
    return load_panels(cfg.data->returns, cfg.data->esg, cfg.data->riskfree);
}

PopulationModel population_for_simulation(const RunConfig& cfg, std::ostream& out) {
    if (cfg.model) {
        out << "population: model file " << cfg.model->string() << '\n';
        return read_model(*cfg.model);
    }
    if (cfg.synthetic) {
        out << "population: synthetic, " << cfg.synthetic->assets << " assets\n";
        return synthetic_population(*cfg.synthetic);
    }
    if (cfg.data) {
        out << "population: calibrated from data\n";
        return calibrate(load_data(cfg), cfg.calibration_s_bar);
    }
    throw Error(ErrorCode::Config, "simulate needs a model, synthetic or data section");
}

// Minimal line chart; x on a log axis since eta grids are geometric.
void write_curve_svg(const fs::path& path, const SrCurve& curve, const std::string& title) {
    std::ofstream out = open_output(path);
    const double width = 640, height = 400, margin = 50;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < curve.eta.size(); ++i) {
        for (double v : {curve.mean_theta_hat[i], curve.mean_theta_star[i]}) {
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (!std::isfinite(lo) || curve.eta.size() < 2) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi == lo) hi = lo + 1.0;
    const double x0 = std::log(curve.eta.front()), x1 = std::log(curve.eta.back());
    auto px = [&](double eta) { return margin + (std::log(eta) - x0) / (x1 - x0 == 0.0 ? 1.0 : x1 - x0) * (width - 2 * margin); };
    auto py = [&](double v) { return height - margin - (v - lo) / (hi - lo) * (height - 2 * margin); };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<text x=\"" << margin << "\" y=\"25\" font-size=\"14\">" << title << "</text>\n";
    out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin << "\" height=\""
        << height - 2 * margin << "\" fill=\"none\" stroke=\"#888\"/>\n";
    const auto line = [&](const std::vector<double>& ys, const char* colour) {
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" points=\"";
        for (std::size_t i = 0; i < ys.size(); ++i) {
            if (std::isfinite(ys[i])) out << px(curve.eta[i]) << ',' << py(ys[i]) << ' ';
        }
        out << "\"/>\n";
    };
    line(curve.mean_theta_star, "#1f77b4");
    line(curve.mean_theta_hat, "#d62728");
    out << "<text x=\"" << width - 200 << "\" y=\"25\" font-size=\"12\" fill=\"#1f77b4\">realized</text>\n";
    out << "<text x=\"" << width - 120 << "\" y=\"25\" font-size=\"12\" fill=\"#d62728\">estimated</text>\n";
    out << "</svg>\n";
}

void write_gaps_svg(const fs::path& path, const std::vector<SimConfig>& cfgs,
                    const std::vector<std::vector<double>>& gaps) {
    std::ofstream out = open_output(path);
    const double width = 640, row = 40, margin = 60;
    const double height = 2 * margin + row * static_cast<double>(cfgs.size());
    double lo = 0.0, hi = 0.0;
    for (const auto& g : gaps) {
        if (g.empty()) continue;
        lo = std::min(lo, *std::min_element(g.begin(), g.end()));
        hi = std::max(hi, *std::max_element(g.begin(), g.end()));
    }
    if (hi == lo) hi = lo + 1.0;
    auto px = [&](double v) { return margin + (v - lo) / (hi - lo) * (width - 2 * margin); };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<text x=\"" << margin << "\" y=\"25\" font-size=\"14\">eta_star - eta_hat</text>\n";
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        const double y = margin + row * (static_cast<double>(i) + 0.5);
        out << "<text x=\"5\" y=\"" << y + 4 << "\" font-size=\"11\">p=" << cfgs[i].p << " T=" << cfgs[i].T << "</text>\n";
        if (gaps[i].empty()) continue;
        const double q1 = quantile(gaps[i], 0.25), q2 = quantile(gaps[i], 0.5), q3 = quantile(gaps[i], 0.75);
        out << "<rect x=\"" << px(q1) << "\" y=\"" << y - 10 << "\" width=\"" << std::max(1.0, px(q3) - px(q1))
            << "\" height=\"20\" fill=\"#9ecae1\" stroke=\"#333\"/>\n";
        out << "<line x1=\"" << px(q2) << "\" x2=\"" << px(q2) << "\" y1=\"" << y - 10 << "\" y2=\"" << y + 10
            << "\" stroke=\"#000\"/>\n";
    }
    out << "</svg>\n";
}

void cmd_calibrate(const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
    const PanelBundle bundle = load_data(cfg);
    const int k = calibration_factor_count(bundle);
    const PopulationModel pop = calibrate(bundle, cfg.calibration_s_bar);
    const fs::path model_path = out_dir / "model.txt";
    write_model(model_path, pop);
    out << "assets " << pop.assets() << ", periods " << bundle.periods() << '\n';
    out << "k = " << k << '\n';
    out << "cond(sigma) = " << condition_number(pop.returns.sigma) << '\n';
    out << "cond(omega) = " << condition_number(pop.esg.omega) << '\n';
    out << "wrote " << model_path.string() << '\n';
}

void cmd_simulate(const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
    const SimulateSection& sec = cfg.simulate;
    if (!sec.seed_given) throw Error(ErrorCode::Config, "simulate requires a seed (simulate.seed or --seed)");
    const PopulationModel pop = population_for_simulation(cfg, out);
    if (sec.sim.p > pop.assets()) throw Error(ErrorCode::Config, "simulate.p exceeds the population size");

    if (sec.table) {
        const ReplicationTable table = run_replications(sec.sim, pop);
        std::ofstream f = open_output(out_dir / "replications.csv");
        table.write_csv(f);
        out << "replications: " << table.accepted << " accepted, " << table.filtered << " filtered, " << table.failed
            << " failed\n";
    }
    for (const RegularizerSpec& q : sec.curve_q) {
        const SrCurve curve = sr_curve(pop, q, sec.sim);
        const std::string stem = "sr_curve_" + q.name();
        std::ofstream f = open_output(out_dir / (stem + ".csv"));
        curve.write_csv(f);
        if (sec.svg) write_curve_svg(out_dir / (stem + ".svg"), curve, "Sharpe ratio vs eta, Q = " + q.name());
        out << "curve: " << stem << ".csv\n";
    }
    if (sec.gaps && !sec.gap_sizes.empty()) {
        std::vector<SimConfig> cfgs;
        for (const auto& [p, T] : sec.gap_sizes) {
            if (p > pop.assets()) throw Error(ErrorCode::Config, "gap_sizes p exceeds the population size");
            SimConfig c = sec.sim;
            c.p = p;
            c.T = T;
            cfgs.push_back(c);
        }
        const auto gaps = eta_gap_distribution(pop, sec.gap_q, cfgs);
        std::ofstream f = open_output(out_dir / "eta_gaps.csv");
        write_eta_gaps_csv(f, cfgs, gaps);
        if (sec.svg) write_gaps_svg(out_dir / "eta_gaps.svg", cfgs, gaps);
        out << "eta gaps: eta_gaps.csv\n";
    }
}

void cmd_backtest(const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
    const PanelBundle bundle = load_data(cfg);
    const BacktestReport report = rolling_backtest(bundle, cfg.backtest);
    {
        std::ofstream f = open_output(out_dir / "backtest.csv");
        report.write_csv(f);
    }
    {
        std::ofstream f = open_output(out_dir / "backtest_audit.csv");
        report.write_audit_csv(f);
    }
    {
        std::ofstream f = open_output(out_dir / "backtest_streams.csv");
        report.write_streams_csv(f);
    }
    report.write_csv(out);
    for (const auto& r : report.rows) {
        if (r.failed) out << "note: " << to_string(r.strategy) << " failed: " << r.reason << '\n';
    }
}

int exit_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::Io:
        case ErrorCode::Format:
        case ErrorCode::Config: return 2;
        default: return 1;
    }
}

}  // namespace

RunConfig parse_config(const std::string& text, const fs::path& base_dir) {
    json root;
    try {
        root = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Format, std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(root, "config", {"data", "model", "synthetic", "calibrate", "simulate", "backtest"});
    RunConfig cfg;
    if (root.contains("data")) {
        const json& d = root.at("data");
        check_keys(d, "data", {"returns", "esg", "riskfree"});
        for (const char* k : {"returns", "esg", "riskfree"}) {
            if (!d.contains(k)) throw Error(ErrorCode::Config, std::string("data.") + k + " is required");
        }
        cfg.data = DataPaths{resolve(base_dir, read(d, "returns", std::string{}, "data")),
                             resolve(base_dir, read(d, "esg", std::string{}, "data")),
                             resolve(base_dir, read(d, "riskfree", std::string{}, "data"))};
    }
    if (root.contains("model")) {
        const json& m = root.at("model");
        if (!m.is_string()) throw Error(ErrorCode::Config, "model must be a path string");
        cfg.model = resolve(base_dir, m.get<std::string>());
    }
    if (root.contains("synthetic")) cfg.synthetic = parse_synthetic(root.at("synthetic"));
    if (root.contains("calibrate")) {
        const json& c = root.at("calibrate");
        check_keys(c, "calibrate", {"s_bar"});
        cfg.calibration_s_bar = read(c, "s_bar", cfg.calibration_s_bar, "calibrate");
    }
    if (root.contains("simulate")) parse_simulate(root.at("simulate"), cfg.simulate);
    if (root.contains("backtest")) parse_backtest(root.at("backtest"), cfg.backtest);
    return cfg;
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.has_parent_path() ? path.parent_path() : fs::path("."));
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Regularized ESG-constrained mean-variance portfolios"};
    app.require_subcommand(1, 1);
    fs::path config_path;
    fs::path out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> reps;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "Output directory")->required();
        sub->add_option("--seed", seed, "Seed override");
        sub->add_option("--reps", reps, "Replication count override")->check(CLI::PositiveNumber);
    };
    CLI::App* calibrate_cmd = app.add_subcommand("calibrate", "Calibrate a population model from panels");
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo tables, Sharpe curves and eta gaps");
    CLI::App* backtest_cmd = app.add_subcommand("backtest", "Rolling-window backtest on panels");
    for (CLI::App* sub : {calibrate_cmd, simulate_cmd, backtest_cmd}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (seed) {
            cfg.simulate.sim.seed = *seed;
            cfg.simulate.seed_given = true;
        }
        if (reps) cfg.simulate.sim.reps = *reps;
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec || !fs::is_directory(out_dir)) throw Error(ErrorCode::Io, "cannot create output directory " + out_dir.string());

        if (*calibrate_cmd) cmd_calibrate(cfg, out_dir, out);
        if (*simulate_cmd) cmd_simulate(cfg, out_dir, out);
        if (*backtest_cmd) cmd_backtest(cfg, out_dir, out);
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_status(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace esgmv::cli
