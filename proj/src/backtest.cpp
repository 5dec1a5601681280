#include "esgmv/backtest.hpp"

#include "esgmv/estimators.hpp"
#include "esgmv/parallel.hpp"
#include "esgmv/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace esgmv {

namespace {

struct Label {
    BacktestStrategy strategy;
    const char* name;
};

constexpr Label kLabels[] = {
    {BacktestStrategy::EqualWeight, "1/N"},        {BacktestStrategy::Sample, "Sample"},
    {BacktestStrategy::MmvSample, "M-MV-S"},       {BacktestStrategy::RemvAdaptive, "Re-MV"},
    {BacktestStrategy::QmvAdaptive, "Q-MV"},       {BacktestStrategy::MvPoet, "MV-POET"},
    {BacktestStrategy::MmvPoet, "M-MV-POET"},      {BacktestStrategy::MvLinear, "MV-Linear"},
    {BacktestStrategy::MmvLinear, "M-MV-Linear"},  {BacktestStrategy::MvNonlinear, "MV-Nonlinear"},
    {BacktestStrategy::MmvNonlinear, "M-MV-Nonlinear"},
};

void write_number(std::ostream& out, double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    out << s.str();
}

bool is_constrained(BacktestStrategy s) {
    switch (s) {
        case BacktestStrategy::MmvSample:
        case BacktestStrategy::RemvAdaptive:
        case BacktestStrategy::MmvPoet:
        case BacktestStrategy::MmvLinear:
        case BacktestStrategy::MmvNonlinear: return true;
        default: return false;
    }
}

// Per-asset affine map applied to ESG scores, identity unless standardizing.
struct EsgMap {
    Vector shift;
    Vector scale;

    Vector apply(const Vector& row) const { return (row - shift).cwiseQuotient(scale); }
};

struct PreparedWindow {
    PanelBundle data;
    EsgMap esg_map;
};

PreparedWindow prepare_window(const PanelBundle& bundle, const BacktestConfig& cfg, Index period) {
    PreparedWindow out{bundle.window(period - cfg.window, cfg.window), {}};
    const Index p = bundle.assets();
    if (!cfg.standardize_esg) {
        out.esg_map = EsgMap{Vector::Zero(p), Vector::Ones(p)};
        return out;
    }
    const Matrix& raw = out.data.esg.values();
    const Vector mean = column_means(raw);
    const Matrix centered = raw.rowwise() - mean.transpose();
    const Vector sd = (centered.colwise().squaredNorm() / static_cast<double>(raw.rows() - 1)).cwiseSqrt().transpose();
    for (Index j = 0; j < p; ++j) {
        if (!(sd(j) > 0.0)) {
            throw Error(ErrorCode::ZeroVariance, "ESG score of " + bundle.esg.asset_ids()[static_cast<std::size_t>(j)] +
                                                     " is constant in the window");
        }
    }
    out.esg_map = EsgMap{mean, sd};
    Matrix standardized(raw.rows(), raw.cols());
    for (Index t = 0; t < raw.rows(); ++t) standardized.row(t) = out.esg_map.apply(raw.row(t).transpose()).transpose();
    out.data.esg = EsgPanel(standardized, out.data.esg.asset_ids(), out.data.esg.dates());
    return out;
}

struct Plain {
    Vector mu;
    Matrix sigma;
};

Plain benchmark_moments(BacktestStrategy s, const PanelBundle& w, const BacktestConfig& cfg,
                        const EstimationInputs& in) {
    switch (s) {
        case BacktestStrategy::Sample:
        case BacktestStrategy::MmvSample:
            if (w.assets() >= w.periods()) {
                throw Error(ErrorCode::Conditioning, "sample covariance is singular when p >= T");
            }
            return {in.mu_hat, in.sigma_hat};
        case BacktestStrategy::MvPoet:
        case BacktestStrategy::MmvPoet: {
            MomentModel m = poet_covariance(w.returns.values(), std::nullopt, cfg.poet_threshold);
            return {std::move(m.mu), std::move(m.sigma)};
        }
        case BacktestStrategy::MvLinear:
        case BacktestStrategy::MmvLinear: {
            MomentModel m = linear_shrinkage(w.returns);
            return {std::move(m.mu), std::move(m.sigma)};
        }
        case BacktestStrategy::MvNonlinear:
        case BacktestStrategy::MmvNonlinear: {
            if (!cfg.nonlinear_covariance) {
                throw Error(ErrorCode::Config, "nonlinear shrinkage plugin not supplied");
            }
            Matrix sigma = cfg.nonlinear_covariance(w);
            if (sigma.rows() != w.assets() || sigma.cols() != w.assets()) {
                throw Error(ErrorCode::Parameter, "nonlinear covariance has the wrong shape");
            }
            return {in.mu_hat, std::move(sigma)};
        }
        default: break;
    }
    throw Error(ErrorCode::Parameter, "strategy has no benchmark moments");
}

double in_sample_esg(const Vector& w, const Vector& esg_mean) { return w.dot(esg_mean) / w.sum(); }

}  // namespace

std::string to_string(BacktestStrategy s) {
    for (const auto& l : kLabels) {
        if (l.strategy == s) return l.name;
    }
    return "unknown";
}

BacktestStrategy parse_backtest_strategy(const std::string& label) {
    for (const auto& l : kLabels) {
        if (label == l.name) return l.strategy;
    }
    throw Error(ErrorCode::Config, "unknown backtest strategy '" + label + "'");
}

std::vector<BacktestStrategy> all_backtest_strategies() {
    std::vector<BacktestStrategy> out;
    for (const auto& l : kLabels) out.push_back(l.strategy);
    return out;
}

void BacktestConfig::validate() const {
    if (window < 2) throw Error(ErrorCode::Config, "window must be >= 2");
    if (hold < 1) throw Error(ErrorCode::Config, "hold must be >= 1");
    if (!(cost_rate >= 0.0) || !std::isfinite(cost_rate)) throw Error(ErrorCode::Config, "cost_rate must be >= 0");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(ErrorCode::Config, "gamma must be > 0");
    if (!std::isfinite(s_bar)) throw Error(ErrorCode::Config, "s_bar must be finite");
    if (!(poet_threshold >= 0.0)) throw Error(ErrorCode::Config, "poet threshold must be >= 0");
    if (strategies.empty()) throw Error(ErrorCode::Config, "no backtest strategies selected");
    for (const auto& c : adaptive_candidates) c.validate();
}

NodeRecord node_weights(const PanelBundle& bundle, const BacktestConfig& cfg, BacktestStrategy s, Index period) {
    if (period < cfg.window || period >= bundle.periods()) {
        throw Error(ErrorCode::Parameter, "decision node outside the panel");
    }
    const PreparedWindow prep = prepare_window(bundle, cfg, period);
    const PanelBundle& w = prep.data;
    const Index p = w.assets();
    NodeRecord rec;
    rec.period = period;
    rec.date = bundle.returns.dates()[static_cast<std::size_t>(period)];

    const EstimationInputs in = estimation_inputs(w, cfg.s_bar);
    const Vector& s_tilde = *in.s_tilde_hat;
    const Vector esg_mean = s_tilde.array() + cfg.s_bar;
    const bool inequality = cfg.esg_mode == EsgConstraintMode::Inequality;

    Vector target;
    switch (s) {
        case BacktestStrategy::EqualWeight: target = Vector::Constant(p, 1.0 / static_cast<double>(p)); break;
        case BacktestStrategy::RemvAdaptive:
        case BacktestStrategy::QmvAdaptive: {
            const bool constrained = s == BacktestStrategy::RemvAdaptive;
            EstimationInputs sel_in = in;
            if (!constrained) sel_in.s_tilde_hat.reset();
            if (cfg.adaptive_candidates.empty()) throw Error(ErrorCode::Config, "no adaptive candidates");
            const SelectionResult pick = select_regularizer(cfg.adaptive_candidates, w, sel_in, nullptr, cfg.estimator);
            rec.q_kind = pick.best.q_kind;
            rec.eta = pick.best.eta;
            const auto solve = [&](bool with_esg) {
                return solve_regularized(in.mu_hat, in.sigma_hat, pick.best.eta, pick.best_q.q,
                                         with_esg ? std::optional<Vector>(s_tilde) : std::nullopt, cfg.gamma)
                    .weights;
            };
            target = normalize_to_budget(solve(constrained)).w;
            if (constrained && inequality) {
                const Vector free = normalize_to_budget(solve(false)).w;
                if (in_sample_esg(free, esg_mean) >= cfg.s_bar) target = free;
            }
            break;
        }
        default: {
            const Plain m = benchmark_moments(s, w, cfg, in);
            const Vector free = normalize_to_budget(solve_mv(m.mu, m.sigma, cfg.gamma)).w;
            if (!is_constrained(s)) {
                target = free;
            } else if (inequality && in_sample_esg(free, esg_mean) >= cfg.s_bar) {
                target = free;
            } else {
                target = normalize_to_budget(solve_constrained(m.mu, m.sigma, s_tilde, cfg.gamma).weights).w;
            }
            break;
        }
    }
    if (!target.allFinite()) throw Error(ErrorCode::Numerical, "non-finite portfolio weights");
    rec.target = std::move(target);
    return rec;
}

Vector drift_weights(const Vector& w_prev, const Vector& gross_returns) {
    if (w_prev.size() != gross_returns.size()) throw Error(ErrorCode::Parameter, "weight and return sizes differ");
    const double denom = 1.0 + w_prev.dot(gross_returns);
    if (!(denom > 0.0)) throw Error(ErrorCode::Solvency, "portfolio value wiped out during the holding period");
    return w_prev.cwiseProduct((1.0 + gross_returns.array()).matrix()) / denom;
}

double net_return(double r_gross, const Vector& w_new, const Vector& w_drifted, double cost_rate) {
    if (w_new.size() != w_drifted.size()) throw Error(ErrorCode::Parameter, "weight vectors differ in size");
    // Same as (1 - k)(1 + r) - 1, arranged so a zero cost returns r exactly.
    const double k = cost_rate * (w_new - w_drifted).lpNorm<1>();
    return r_gross - k * (1.0 + r_gross);
}

double turnover(const std::vector<Rebalance>& rebalances) {
    if (rebalances.empty()) return 0.0;
    double total = 0.0;
    for (const auto& r : rebalances) {
        if (r.target.size() != r.drifted.size()) throw Error(ErrorCode::Parameter, "weight vectors differ in size");
        total += (r.target - r.drifted).lpNorm<1>();
    }
    return total / static_cast<double>(rebalances.size());
}

double stream_sharpe(const std::vector<double>& returns) {
    const std::size_t n = returns.size();
    if (n < 2) throw Error(ErrorCode::Parameter, "Sharpe ratio needs at least two observations");
    double mean = 0.0;
    for (double r : returns) mean += r;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double r : returns) ss += (r - mean) * (r - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw Error(ErrorCode::ZeroVariance, "return stream has zero standard deviation");
    return mean / sd;
}

double lower_quartile(std::vector<double> values) {
    if (values.empty()) throw Error(ErrorCode::Parameter, "empty ESG stream");
    std::sort(values.begin(), values.end());
    // Smallest x whose empirical CDF strictly exceeds 1/4.
    const auto k = static_cast<std::size_t>(std::floor(0.25 * static_cast<double>(values.size())));
    return values[std::min(k, values.size() - 1)];
}

OosMetrics oos_metrics(const std::vector<double>& returns, const std::vector<double>& esg) {
    if (esg.size() < 2) throw Error(ErrorCode::Parameter, "ESG stream needs at least two observations");
    OosMetrics m;
    m.sr = stream_sharpe(returns);
    const double n = static_cast<double>(esg.size());
    double mean = 0.0;
    for (double e : esg) mean += e;
    mean /= n;
    double ss = 0.0;
    for (double e : esg) ss += (e - mean) * (e - mean);
    m.esg_m = mean;
    m.sd_esg = std::sqrt(ss / (n - 1.0));
    m.esg_lq = lower_quartile(esg);
    return m;
}

namespace {

StrategyReport run_strategy(const PanelBundle& bundle, const BacktestConfig& cfg, BacktestStrategy s) {
    StrategyReport rep;
    rep.strategy = s;
    const Index periods = bundle.periods();
    const Index p = bundle.assets();
    Vector held = Vector::Zero(p);  // current drifted weights
    std::vector<Rebalance> rebalances;
    std::vector<double> gross_stream, net_stream, esg_stream;
    try {
        bool first = true;
        for (Index node = cfg.window; node < periods; node += cfg.hold) {
            NodeRecord rec = node_weights(bundle, cfg, s, node);
            const EsgMap esg_map = prepare_window(bundle, cfg, node).esg_map;
            rec.drifted = (first && cfg.free_first_trade) ? rec.target : held;
            rec.trade = (rec.target - rec.drifted).lpNorm<1>();
            if (!first) rebalances.push_back({rec.target, rec.drifted});

            Vector w = rec.target;
            bool restart = false;
            const Index end = std::min(periods, node + cfg.hold);
            for (Index t = node; t < end; ++t) {
                const Vector excess = bundle.returns.values().row(t).transpose();
                const double rf = bundle.risk_free(t);
                const Vector gross = excess.array() + rf;
                if (restart) w = rec.target;
                const double port_excess = w.dot(excess);
                const double port_gross = w.dot(gross);
                double net = port_gross;
                if (t == node) {
                    net = net_return(port_gross, rec.target, rec.drifted, cfg.cost_rate);
                } else if (restart) {
                    net = net_return(port_gross, rec.target, Vector::Zero(p), cfg.cost_rate);
                }
                restart = false;
                const Vector esg_row = esg_map.apply(bundle.esg.values().row(t).transpose());
                PeriodRecord pr;
                pr.date = bundle.returns.dates()[static_cast<std::size_t>(t)];
                pr.excess = port_excess;
                pr.net_excess = net - rf;
                pr.esg = w.dot(esg_row) / w.sum();
                gross_stream.push_back(pr.excess);
                net_stream.push_back(pr.net_excess);
                esg_stream.push_back(pr.esg);
                rep.periods.push_back(std::move(pr));
                if (cfg.wipeout == WipeoutPolicy::Restart && !(1.0 + port_gross > 0.0)) {
                    restart = true;
                    ++rep.restarts;
                    continue;
                }
                w = drift_weights(w, gross);
            }
            if (restart) w = Vector::Zero(p);
            held = w;
            rep.nodes.push_back(std::move(rec));
            first = false;
        }
        const OosMetrics m = oos_metrics(gross_stream, esg_stream);
        rep.sr = m.sr;
        rep.esg_m = m.esg_m;
        rep.esg_lq = m.esg_lq;
        rep.sd_esg = m.sd_esg;
        rep.sr_tc = stream_sharpe(net_stream);
        rep.to = turnover(rebalances);
    } catch (const Error& e) {
        rep.failed = true;
        rep.reason = e.what();
    }
    return rep;
}

}  // namespace

BacktestReport rolling_backtest(const PanelBundle& bundle, const BacktestConfig& cfg) {
    cfg.validate();
    bundle.validate();
    if (bundle.periods() < cfg.window + 1) {
        throw Error(ErrorCode::Parameter, "panel must cover the window plus at least one held-out period");
    }
    BacktestReport report;
    report.asset_ids = bundle.returns.asset_ids();
    report.rows.resize(cfg.strategies.size());
    const unsigned threads = cfg.threads ? cfg.threads : default_thread_count();
    parallel_for(cfg.strategies.size(), threads,
                 [&](std::size_t i) { report.rows[i] = run_strategy(bundle, cfg, cfg.strategies[i]); });
    return report;
}

const StrategyReport* BacktestReport::row(BacktestStrategy s) const {
    for (const auto& r : rows) {
        if (r.strategy == s) return &r;
    }
    return nullptr;
}

void BacktestReport::write_csv(std::ostream& out) const {
    out << "strategy,SR,SR_tc,ESG_M,ESG_LQ,SD_esg,TO\n";
    for (const auto& r : rows) {
        out << to_string(r.strategy);
        if (r.failed) {
            out << ",-,-,-,-,-,-\n";
            continue;
        }
        for (double v : {r.sr, r.sr_tc, r.esg_m, r.esg_lq, r.sd_esg, r.to}) {
            out << ',';
            write_number(out, v);
        }
        out << '\n';
    }
}

void BacktestReport::write_audit_csv(std::ostream& out) const {
    out << "strategy,date,q_kind,eta,trade";
    for (const auto& id : asset_ids) out << ',' << id;
    out << '\n';
    for (const auto& r : rows) {
        for (const auto& n : r.nodes) {
            out << to_string(r.strategy) << ',' << n.date << ',' << (n.q_kind.empty() ? "-" : n.q_kind) << ',';
            write_number(out, n.eta);
            out << ',';
            write_number(out, n.trade);
            for (Index i = 0; i < n.target.size(); ++i) {
                out << ',';
                write_number(out, n.target(i));
            }
            out << '\n';
        }
    }
}

void BacktestReport::write_streams_csv(std::ostream& out) const {
    out << "strategy,date,excess,net_excess,esg\n";
    for (const auto& r : rows) {
        for (const auto& pr : r.periods) {
            out << to_string(r.strategy) << ',' << pr.date << ',';
            write_number(out, pr.excess);
            out << ',';
            write_number(out, pr.net_excess);
            out << ',';
            write_number(out, pr.esg);
            out << '\n';
        }
    }
}

}  // namespace esgmv
