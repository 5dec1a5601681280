#include "esgmv/simulation.hpp"

#include "esgmv/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace esgmv {

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

PopulationModel synthetic_population(const SyntheticSpec& spec) {
    const Index p = spec.assets;
    if (p < 2) throw Error(ErrorCode::Parameter, "synthetic population needs at least 2 assets");
    if (!(spec.idio_var_lo > 0.0) || spec.idio_var_hi < spec.idio_var_lo || spec.esg_sd_hi < spec.esg_sd_lo ||
        !(spec.esg_sd_lo >= 0.0) || std::abs(spec.esg_alpha_corr) > 1.0 || spec.esg_common_corr < 0.0 ||
        spec.esg_common_corr >= 1.0 || !(spec.return_unit > 0.0)) {
        throw Error(ErrorCode::Parameter, "synthetic population parameters out of range");
    }
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Vector market(p), style(p), idio(p), alpha(p), noise(p), esg_sd(p);
    for (Index i = 0; i < p; ++i) {
        market(i) = spec.market_beta_mean + spec.market_beta_sd * normal(rng);
        style(i) = spec.style_beta_sd * normal(rng);
        idio(i) = spec.idio_var_lo + (spec.idio_var_hi - spec.idio_var_lo) * unit(rng);
        alpha(i) = spec.alpha_mean + spec.alpha_sd * normal(rng);
        noise(i) = normal(rng);
        esg_sd(i) = spec.esg_sd_lo + (spec.esg_sd_hi - spec.esg_sd_lo) * unit(rng);
    }

    PopulationModel pop;
    pop.returns.sigma = spec.market_var * market * market.transpose() + spec.style_var * style * style.transpose();
    pop.returns.sigma.diagonal() += idio;
    pop.returns.mu = spec.market_premium * market + spec.style_premium * style + alpha;
    pop.returns.mu *= spec.return_unit;
    pop.returns.sigma *= spec.return_unit * spec.return_unit;

    const double rho = spec.esg_alpha_corr;
    const Vector alpha_z =
        spec.alpha_sd > 0.0 ? Vector((alpha.array() - spec.alpha_mean) / spec.alpha_sd) : Vector::Zero(p);
    pop.esg.s = spec.esg_scale * (rho * alpha_z + std::sqrt(1.0 - rho * rho) * noise);
    Matrix corr = Matrix::Constant(p, p, spec.esg_common_corr);
    corr.diagonal().setOnes();
    pop.esg.omega = esg_sd.asDiagonal() * corr * esg_sd.asDiagonal();
    pop.esg.s_bar = spec.s_bar;
    return pop;
}

PopulationModel population_subset(const PopulationModel& pop, Index p) {
    pop.validate();
    if (p < 1 || p > pop.assets()) throw Error(ErrorCode::Parameter, "subset size outside [1, assets]");
    PopulationModel out;
    out.returns.mu = pop.returns.mu.head(p);
    out.returns.sigma = pop.returns.sigma.topLeftCorner(p, p);
    out.esg.s = pop.esg.s.head(p);
    out.esg.omega = pop.esg.omega.topLeftCorner(p, p);
    out.esg.s_bar = pop.esg.s_bar;
    return out;
}

int calibration_factor_count(const PanelBundle& bundle) {
    return bai_ng_factors(bundle.returns, default_factor_bound(bundle.periods(), bundle.assets()));
}

PopulationModel calibrate(const PanelBundle& bundle, double s_bar) {
    bundle.validate();
    PopulationModel pop;
    pop.returns = poet_covariance(bundle.returns, calibration_factor_count(bundle), 1.0);
    pop.esg = esg_moments(bundle.esg, s_bar);
    return pop;
}

Matrix psd_sqrt(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(m));
    if (es.info() != Eigen::Success) throw Error(ErrorCode::Numerical, "eigendecomposition failed");
    const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

MarketSampler::MarketSampler(const PopulationModel& pop)
    : pop_(pop), sigma_root_(psd_sqrt(pop.returns.sigma)), omega_root_(psd_sqrt(pop.esg.omega)) {
    pop_.validate();
}

MarketSampler::Draw MarketSampler::draw(Index periods, std::mt19937_64& rng) const {
    if (periods < 2) throw Error(ErrorCode::Parameter, "need at least 2 periods");
    const Index p = pop_.assets();
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix z(periods, p), y(periods, p);
    for (Index t = 0; t < periods; ++t)
        for (Index i = 0; i < p; ++i) z(t, i) = normal(rng);
    for (Index t = 0; t < periods; ++t)
        for (Index i = 0; i < p; ++i) y(t, i) = normal(rng);
    Draw d;
    d.returns = z * sigma_root_;
    d.returns.rowwise() += pop_.returns.mu.transpose();
    d.esg = y * omega_root_;
    d.esg.rowwise() += pop_.esg.s.transpose();
    return d;
}

PanelBundle MarketSampler::bundle(const Draw& d) const {
    const Index p = d.returns.cols();
    const Index T = d.returns.rows();
    std::vector<std::string> ids(static_cast<std::size_t>(p)), dates(static_cast<std::size_t>(T));
    for (Index i = 0; i < p; ++i) ids[static_cast<std::size_t>(i)] = "A" + std::to_string(i + 1);
    for (Index t = 0; t < T; ++t) {
        std::ostringstream s;
        s << 't' << std::setw(6) << std::setfill('0') << (t + 1);
        dates[static_cast<std::size_t>(t)] = s.str();
    }
    PanelBundle b{ReturnPanel(d.returns, ids, dates), EsgPanel(d.esg, ids, dates), Vector::Zero(T)};
    return b;
}

PanelBundle sample_market(const PopulationModel& pop, Index periods, std::uint64_t seed) {
    const MarketSampler sampler(pop);
    std::mt19937_64 rng(seed);
    return sampler.bundle(sampler.draw(periods, rng));
}

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Oracle: return "Oracle";
        case Strategy::MmvOracle: return "M-MV-O";
        case Strategy::Sample: return "Sample";
        case Strategy::MmvSample: return "M-MV-S";
        case Strategy::QmvHat: return "Q-MV(eta_hat)";
        case Strategy::QmvStar: return "Q-MV(eta_star)";
        case Strategy::RemvHat: return "Re-MV(eta_hat)";
        case Strategy::RemvStar: return "Re-MV(eta_star)";
    }
    return "Unknown";
}

std::vector<Strategy> all_strategies() {
    return {Strategy::Oracle,  Strategy::MmvOracle, Strategy::Sample,  Strategy::MmvSample,
            Strategy::QmvHat,  Strategy::QmvStar,   Strategy::RemvHat, Strategy::RemvStar};
}

Strategy parse_strategy(const std::string& label) {
    for (Strategy s : all_strategies())
        if (to_string(s) == label) return s;
    throw Error(ErrorCode::Config, "unknown strategy '" + label + "'");
}

void SimConfig::validate() const {
    if (p < 2 || T < 2) throw Error(ErrorCode::Config, "p and T must be >= 2");
    if (reps < 1) throw Error(ErrorCode::Config, "reps must be >= 1");
    if (!(gamma > 0.0)) throw Error(ErrorCode::Config, "gamma must be > 0");
    if (max_draw_factor < 1) throw Error(ErrorCode::Config, "max_draw_factor must be >= 1");
    if (strategies.empty()) throw Error(ErrorCode::Config, "no strategies selected");
    if (eta_mode == EtaMode::Fixed && !(fixed_eta > 0.0)) throw Error(ErrorCode::Config, "fixed eta must be > 0");
    if (eta_mode == EtaMode::GridSelect) q_spec.validate();
}

std::vector<double> SimConfig::grid() const {
    if (eta_mode == EtaMode::Fixed) return {fixed_eta};
    return q_spec.eta_grid;
}

const StrategyRow* ReplicationTable::row(Strategy s) const {
    for (const auto& r : rows)
        if (r.strategy == s) return &r;
    return nullptr;
}

namespace {

void write_number(std::ostream& out, double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    out << s.str();
}

std::size_t grid_argmax(const std::vector<double>& grid, const std::function<double(double)>& value) {
    std::vector<double> values(grid.size(), -std::numeric_limits<double>::infinity());
    bool any = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            const double v = value(grid[i]);
            if (std::isfinite(v)) {
                values[i] = v;
                any = true;
            }
        } catch (const Error&) {
        }
    }
    if (!any) throw Error(ErrorCode::Selection, "oracle curve has no valid grid point");
    return argmax_larger_on_ties(values);
}

EstimationInputs inputs_from(const MarketSampler::Draw& d, std::optional<double> s_bar) {
    EstimationInputs in;
    in.mu_hat = column_means(d.returns);
    in.sigma_hat = sample_covariance(d.returns);
    in.periods = d.returns.rows();
    if (s_bar) in.s_tilde_hat = Vector(column_means(d.esg).array() - *s_bar);
    return in;
}

double portfolio_esg(const Vector& w, const Vector& s) { return w.dot(s) / w.sum(); }

struct DrawOutcome {
    bool ok = false;
    bool filtered = false;
    double sample_esg = std::numeric_limits<double>::quiet_NaN();
    std::string failure;
    std::vector<MetricRow> rows;  // aligned with cfg.strategies
    double eta_hat = std::numeric_limits<double>::quiet_NaN();
    double eta_star = std::numeric_limits<double>::quiet_NaN();
};

bool wants(const SimConfig& cfg, std::initializer_list<Strategy> any) {
    for (Strategy s : any)
        if (std::find(cfg.strategies.begin(), cfg.strategies.end(), s) != cfg.strategies.end()) return true;
    return false;
}

struct RegularizedChoice {
    double eta_hat = 0.0;
    double eta_star = 0.0;
    PortfolioWeights hat;
    PortfolioWeights star;
};

RegularizedChoice regularized_choice(const SimConfig& cfg, const EstimationInputs& in, const Matrix& q,
                                     const PopulationModel& pop, bool need_star) {
    SpectralSweep sweep(in, q, cfg.estimator);
    RegularizedChoice rc;
    const std::vector<double> grid = cfg.grid();
    if (cfg.eta_mode == EtaMode::Fixed) {
        rc.eta_hat = rc.eta_star = cfg.fixed_eta;
    } else {
        rc.eta_hat = select_eta(grid, sweep, cfg.q_spec.name()).eta_star;
        if (need_star) {
            sweep.attach_population(pop.returns.mu, pop.returns.sigma);
            rc.eta_star = grid[grid_argmax(grid, [&](double eta) { return sweep.oracle_sharpe(eta); })];
        }
    }
    rc.hat = sweep.weights(rc.eta_hat, cfg.gamma).weights;
    if (need_star) rc.star = sweep.weights(rc.eta_star, cfg.gamma).weights;
    return rc;
}

DrawOutcome run_draw(const SimConfig& cfg, const MarketSampler& sampler, std::size_t index, bool filter_active,
                     const std::vector<PortfolioWeights>& oracle_weights) {
    const PopulationModel& pop = sampler.population();
    DrawOutcome out;
    try {
        std::mt19937_64 rng(substream_seed(cfg.seed, index));
        const MarketSampler::Draw d = sampler.draw(cfg.T, rng);
        const bool sample_ok = cfg.p < cfg.T;
        const EstimationInputs in = inputs_from(d, cfg.s_bar);
        EstimationInputs in_free = in;
        in_free.s_tilde_hat.reset();

        std::optional<PortfolioWeights> sample_w;
        if (sample_ok && (filter_active || wants(cfg, {Strategy::Sample}))) {
            sample_w = solve_mv(in.mu_hat, in.sigma_hat, cfg.gamma);
            out.sample_esg = portfolio_esg(sample_w->w, pop.esg.s);
        }
        if (cfg.filter && filter_active && sample_w && !(out.sample_esg < cfg.s_bar)) {
            out.filtered = true;
            return out;
        }

        std::optional<Matrix> q;
        if (wants(cfg, {Strategy::QmvHat, Strategy::QmvStar, Strategy::RemvHat, Strategy::RemvStar})) {
            const PanelBundle window = sampler.bundle(d);
            q = build_q(cfg.q_spec, window, &pop).q;
        }
        std::optional<RegularizedChoice> qmv, remv;
        if (wants(cfg, {Strategy::QmvHat, Strategy::QmvStar}))
            qmv = regularized_choice(cfg, in_free, *q, pop, wants(cfg, {Strategy::QmvStar}));
        if (wants(cfg, {Strategy::RemvHat, Strategy::RemvStar})) {
            remv = regularized_choice(cfg, in, *q, pop, wants(cfg, {Strategy::RemvStar}));
            out.eta_hat = remv->eta_hat;
            out.eta_star = remv->eta_star;
        }

        out.rows.resize(cfg.strategies.size());
        for (std::size_t k = 0; k < cfg.strategies.size(); ++k) {
            PortfolioWeights w;
            switch (cfg.strategies[k]) {
                case Strategy::Oracle: w = oracle_weights[0]; break;
                case Strategy::MmvOracle: w = oracle_weights[1]; break;
                case Strategy::Sample:
                    if (!sample_ok) continue;
                    w = *sample_w;
                    break;
                case Strategy::MmvSample:
                    if (!sample_ok) continue;
                    w = solve_constrained(in.mu_hat, in.sigma_hat, *in.s_tilde_hat, cfg.gamma).weights;
                    break;
                case Strategy::QmvHat: w = qmv->hat; break;
                case Strategy::QmvStar: w = qmv->star; break;
                case Strategy::RemvHat: w = remv->hat; break;
                case Strategy::RemvStar: w = remv->star; break;
            }
            out.rows[k] = population_metrics(w, pop);
        }
        out.ok = true;
    } catch (const Error& e) {
        out.failure = e.what();
    }
    return out;
}

}  // namespace

ReplicationTable run_replications(const SimConfig& cfg, const PopulationModel& full_pop) {
    cfg.validate();
    if (cfg.p > full_pop.assets()) throw Error(ErrorCode::Config, "p exceeds the population size");
    PopulationModel pop = cfg.p == full_pop.assets() ? full_pop : population_subset(full_pop, cfg.p);
    pop.esg.s_bar = cfg.s_bar;
    const MarketSampler sampler(pop);
    const unsigned threads = cfg.threads ? cfg.threads : default_thread_count();

    const std::vector<PortfolioWeights> oracle_weights{
        solve_mv(pop.returns.mu, pop.returns.sigma, cfg.gamma),
        solve_constrained(pop.returns.mu, pop.returns.sigma, pop.esg.s_tilde(), cfg.gamma).weights};

    ReplicationTable table;
    table.filter_active = cfg.filter && portfolio_esg(oracle_weights[0].w, pop.esg.s) < cfg.s_bar;

    std::vector<std::array<double, 5>> sums(cfg.strategies.size(), {0, 0, 0, 0, 0});
    const std::size_t cap = static_cast<std::size_t>(cfg.reps) * static_cast<std::size_t>(cfg.max_draw_factor);
    std::size_t next = 0;
    while (table.accepted < cfg.reps && next < cap) {
        const std::size_t needed = static_cast<std::size_t>(cfg.reps - table.accepted);
        const std::size_t batch = std::min(cap - next, std::max<std::size_t>(needed, threads));
        std::vector<DrawOutcome> outcomes(batch);
        parallel_for(batch, threads, [&](std::size_t i) {
            outcomes[i] = run_draw(cfg, sampler, next + i, table.filter_active, oracle_weights);
        });
        for (std::size_t i = 0; i < batch && table.accepted < cfg.reps; ++i) {
            const DrawOutcome& o = outcomes[i];
            DrawLog log{next + i, o.ok, o.filtered, o.sample_esg, o.failure};
            table.log.push_back(log);
            if (o.filtered) {
                ++table.filtered;
                continue;
            }
            if (!o.ok) {
                ++table.failed;
                continue;
            }
            ++table.accepted;
            for (std::size_t k = 0; k < o.rows.size(); ++k) {
                const MetricRow& m = o.rows[k];
                sums[k][0] += m.am;
                sums[k][1] += m.sd;
                sums[k][2] += m.sr;
                sums[k][3] += m.am_esg;
                sums[k][4] += m.sd_esg;
            }
            table.eta_hat.push_back(o.eta_hat);
            table.eta_star.push_back(o.eta_star);
        }
        next += batch;
    }
    if (table.accepted < cfg.reps) {
        throw Error(ErrorCode::Iteration, "only " + std::to_string(table.accepted) + " of " + std::to_string(cfg.reps) +
                                              " replications accepted after " + std::to_string(next) +
                                              " draws (filtered " + std::to_string(table.filtered) + ", failed " +
                                              std::to_string(table.failed) + ")");
    }
    const double n = static_cast<double>(table.accepted);
    for (std::size_t k = 0; k < cfg.strategies.size(); ++k) {
        StrategyRow row;
        row.strategy = cfg.strategies[k];
        row.available = !((row.strategy == Strategy::Sample || row.strategy == Strategy::MmvSample) && cfg.p >= cfg.T);
        row.mean = MetricRow{sums[k][0] / n, sums[k][1] / n, sums[k][2] / n, sums[k][3] / n, sums[k][4] / n};
        table.rows.push_back(row);
    }
    return table;
}

void ReplicationTable::write_csv(std::ostream& out) const {
    out << "strategy,AM,SD,SR,AM_esg,SD_esg\n";
    for (const auto& r : rows) {
        out << to_string(r.strategy);
        if (!r.available) {
            out << ",-,-,-,-,-\n";
            continue;
        }
        for (double v : {r.mean.am, r.mean.sd, r.mean.sr, r.mean.am_esg, r.mean.sd_esg}) {
            out << ',';
            write_number(out, v);
        }
        out << '\n';
    }
}

SrCurve sr_curve(const PopulationModel& full_pop, const RegularizerSpec& q_spec, const SimConfig& cfg) {
    cfg.validate();
    q_spec.validate();
    PopulationModel pop = cfg.p == full_pop.assets() ? full_pop : population_subset(full_pop, cfg.p);
    pop.esg.s_bar = cfg.s_bar;
    const MarketSampler sampler(pop);
    const std::vector<double>& grid = q_spec.eta_grid;
    const std::size_t g = grid.size();
    const unsigned threads = cfg.threads ? cfg.threads : default_thread_count();

    struct RepCurve {
        std::vector<char> valid;
        std::vector<double> hat, star;
    };
    std::vector<RepCurve> reps(static_cast<std::size_t>(cfg.reps));
    parallel_for(reps.size(), threads, [&](std::size_t r) {
        RepCurve rc{std::vector<char>(g, 0), std::vector<double>(g, 0.0), std::vector<double>(g, 0.0)};
        try {
            std::mt19937_64 rng(substream_seed(cfg.seed, r));
            const MarketSampler::Draw d = sampler.draw(cfg.T, rng);
            const EstimationInputs in = inputs_from(d, cfg.s_bar);
            const Matrix q = build_q(q_spec, sampler.bundle(d), &pop).q;
            SpectralSweep sweep(in, q, cfg.estimator);
            sweep.attach_population(pop.returns.mu, pop.returns.sigma);
            for (std::size_t i = 0; i < g; ++i) {
                const GridPoint gp = sweep.evaluate(grid[i]);
                if (!gp.valid) continue;
                try {
                    rc.star[i] = sweep.oracle_sharpe(grid[i]);
                    rc.hat[i] = gp.theta_hat;
                    rc.valid[i] = 1;
                } catch (const Error&) {
                }
            }
        } catch (const Error&) {
        }
        reps[r] = std::move(rc);
    });

    SrCurve curve;
    curve.eta = grid;
    curve.mean_theta_hat.assign(g, 0.0);
    curve.mean_theta_star.assign(g, 0.0);
    curve.mean_abs_rel_error.assign(g, 0.0);
    curve.count.assign(g, 0);
    for (const auto& rc : reps) {
        for (std::size_t i = 0; i < g; ++i) {
            if (!rc.valid[i]) continue;
            curve.mean_theta_hat[i] += rc.hat[i];
            curve.mean_theta_star[i] += rc.star[i];
            curve.mean_abs_rel_error[i] += std::abs(rc.hat[i] / rc.star[i] - 1.0);
            ++curve.count[i];
        }
    }
    for (std::size_t i = 0; i < g; ++i) {
        const double n = curve.count[i] > 0 ? curve.count[i] : std::numeric_limits<double>::quiet_NaN();
        curve.mean_theta_hat[i] /= n;
        curve.mean_theta_star[i] /= n;
        curve.mean_abs_rel_error[i] /= n;
    }
    return curve;
}

void SrCurve::write_csv(std::ostream& out) const {
    out << "eta,theta_hat,theta_star,count,mean_abs_rel_error\n";
    for (std::size_t i = 0; i < eta.size(); ++i) {
        write_number(out, eta[i]);
        out << ',';
        write_number(out, mean_theta_hat[i]);
        out << ',';
        write_number(out, mean_theta_star[i]);
        out << ',' << count[i] << ',';
        write_number(out, mean_abs_rel_error[i]);
        out << '\n';
    }
}

std::vector<std::vector<double>> eta_gap_distribution(const PopulationModel& full_pop, const RegularizerSpec& q_spec,
                                                      const std::vector<SimConfig>& cfgs) {
    q_spec.validate();
    const std::vector<double>& grid = q_spec.eta_grid;
    std::vector<std::vector<double>> result;
    for (const SimConfig& cfg : cfgs) {
        cfg.validate();
        if (cfg.p > full_pop.assets()) throw Error(ErrorCode::Config, "p exceeds the population size");
        PopulationModel pop = population_subset(full_pop, cfg.p);
        pop.esg.s_bar = cfg.s_bar;
        const MarketSampler sampler(pop);
        const unsigned threads = cfg.threads ? cfg.threads : default_thread_count();
        std::vector<double> gaps(static_cast<std::size_t>(cfg.reps), std::numeric_limits<double>::quiet_NaN());
        parallel_for(gaps.size(), threads, [&](std::size_t r) {
            try {
                std::mt19937_64 rng(substream_seed(cfg.seed, r));
                const MarketSampler::Draw d = sampler.draw(cfg.T, rng);
                const EstimationInputs in = inputs_from(d, cfg.s_bar);
                const Matrix q = build_q(q_spec, sampler.bundle(d), &pop).q;
                SpectralSweep sweep(in, q, cfg.estimator);
                const double eta_hat = select_eta(grid, sweep).eta_star;
                sweep.attach_population(pop.returns.mu, pop.returns.sigma);
                const double eta_star = grid[grid_argmax(grid, [&](double eta) { return sweep.oracle_sharpe(eta); })];
                gaps[r] = eta_star - eta_hat;
            } catch (const Error&) {
            }
        });
        std::vector<double> kept;
        for (double v : gaps)
            if (std::isfinite(v)) kept.push_back(v);
        result.push_back(std::move(kept));
    }
    return result;
}

void write_eta_gaps_csv(std::ostream& out, const std::vector<SimConfig>& cfgs,
                        const std::vector<std::vector<double>>& gaps) {
    out << "p,T,replication,gap\n";
    for (std::size_t c = 0; c < cfgs.size() && c < gaps.size(); ++c) {
        for (std::size_t r = 0; r < gaps[c].size(); ++r) {
            out << cfgs[c].p << ',' << cfgs[c].T << ',' << r << ',';
            write_number(out, gaps[c][r]);
            out << '\n';
        }
    }
}

double quantile(std::vector<double> values, double prob) {
    if (values.empty()) throw Error(ErrorCode::Parameter, "quantile of an empty sample");
    if (!(prob >= 0.0 && prob <= 1.0)) throw Error(ErrorCode::Parameter, "quantile level outside [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = prob * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace esgmv
