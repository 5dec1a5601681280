#include "esgmv/sr_estimator.hpp"

#include <cmath>

namespace esgmv {

EstimationInputs estimation_inputs(const PanelBundle& window, std::optional<double> s_bar) {
    EstimationInputs in;
    const MomentModel m = sample_moments(window.returns.values());
    in.mu_hat = m.mu;
    in.sigma_hat = m.sigma;
    in.periods = window.periods();
    if (s_bar) in.s_tilde_hat = Vector(column_means(window.esg.values()).array() - *s_bar);
    return in;
}

namespace {

void check_inputs(const EstimationInputs& in, const Matrix& q) {
    const Index p = in.assets();
    if (in.sigma_hat.rows() != p || in.sigma_hat.cols() != p || q.rows() != p || q.cols() != p ||
        (in.s_tilde_hat && in.s_tilde_hat->size() != p)) {
        throw Error(ErrorCode::Parameter, "estimator input dimensions disagree");
    }
    if (in.periods < 1) throw Error(ErrorCode::Parameter, "estimator needs the sample size T");
}

double zeta_of(const Vector& s_tilde, const Vector& x, const Vector& y) {
    const double sy = s_tilde.dot(y);
    if (!(sy > 0.0)) throw Error(ErrorCode::DegenerateConstraint, "s_tilde' A^-1 s_tilde is not positive");
    return -s_tilde.dot(x) / sy;
}

double d2_correction(double trace, double T) {
    const double base = 1.0 - trace / T;
    const double den = base * base;
    if (!(den >= kMinD2Denominator)) {
        throw Error(ErrorCode::CorrectionBlowup, "variance correction denominator collapsed; eta too small for this T");
    }
    return den;
}

}  // namespace

double estimate_d1(const EstimationInputs& in, double eta, const Matrix& q) {
    check_inputs(in, q);
    const RegularizedSystem sys(in.sigma_hat, q, eta);
    const Vector x = sys.solve(in.mu_hat);
    const double trace = sys.trace_solve(in.sigma_hat);
    const double T = static_cast<double>(in.periods);
    if (!(T > trace)) {
        throw Error(ErrorCode::CorrectionBlowup, "T <= tr((S + eta Q)^-1 S); eta too small for this T");
    }
    double value = in.mu_hat.dot(x);
    if (in.s_tilde_hat) {
        const Vector y = sys.solve(*in.s_tilde_hat);
        value += zeta_of(*in.s_tilde_hat, x, y) * in.s_tilde_hat->dot(x);
    }
    return value - trace / (T - trace);
}

double estimate_d2(const EstimationInputs& in, double eta, const Matrix& q, const EstimatorOptions& opts) {
    check_inputs(in, q);
    const RegularizedSystem sys(in.sigma_hat, q, eta);
    const Vector x = sys.solve(in.mu_hat);
    Vector v = in.mu_hat;
    if (in.s_tilde_hat) {
        const Vector y = sys.solve(*in.s_tilde_hat);
        v += zeta_of(*in.s_tilde_hat, x, y) * *in.s_tilde_hat;
    }
    const Vector u = sys.solve(v);
    const double numerator = u.dot(in.sigma_hat * u);
    const double trace = opts.d2_denominator == D2Denominator::RegularizedTrace
                             ? sys.trace_solve(in.sigma_hat)
                             : RegularizedSystem(in.sigma_hat, q, 1.0).trace_solve(in.sigma_hat);
    return numerator / d2_correction(trace, static_cast<double>(in.periods));
}

SharpeEstimate estimate_sharpe(const EstimationInputs& in, double eta, const Matrix& q, const std::string& q_kind,
                               const EstimatorOptions& opts) {
    SharpeEstimate est;
    est.eta = eta;
    est.q_kind = q_kind;
    est.d1_hat = estimate_d1(in, eta, q);
    est.d2_hat = estimate_d2(in, eta, q, opts);
    if (!(est.d2_hat > 0.0) || !std::isfinite(est.d2_hat)) {
        throw Error(ErrorCode::InvalidEstimate, "estimated portfolio variance term is not positive");
    }
    est.theta_hat = est.d1_hat / std::sqrt(est.d2_hat);
    return est;
}

SpectralSweep::SpectralSweep(const EstimationInputs& in, const Matrix& q, EstimatorOptions opts)
    : opts_(opts), periods_(in.periods), constrained_(in.s_tilde_hat.has_value()) {
    check_inputs(in, q);
    if (!is_positive_definite(q)) throw Error(ErrorCode::Definiteness, "Q is not positive definite");
    // S v = lambda Q v with V' Q V = I, so (S + eta Q)^-1 = V diag(lambda + eta)^-1 V'.
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(symmetrized(in.sigma_hat), symmetrized(q),
                                                         Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (ges.info() != Eigen::Success) throw Error(ErrorCode::Numerical, "generalized eigendecomposition failed");
    lambda_ = ges.eigenvalues().cwiseMax(0.0);
    transform_ = ges.eigenvectors().transpose();
    a_ = transform_ * in.mu_hat;
    if (constrained_) b_ = transform_ * *in.s_tilde_hat;
}

double SpectralSweep::zeta_at(double eta) const {
    if (!constrained_) return 0.0;
    const Vector inv = (lambda_.array() + eta).inverse();
    const double sb = (b_.array().square() * inv.array()).sum();
    if (!(sb > 0.0)) throw Error(ErrorCode::DegenerateConstraint, "s_tilde' A^-1 s_tilde is not positive");
    return -(a_.array() * b_.array() * inv.array()).sum() / sb;
}

Vector SpectralSweep::combined(double eta) const {
    const double zeta = zeta_at(eta);
    Vector v = a_;
    if (constrained_) v += zeta * b_;
    return v.array() / (lambda_.array() + eta);
}

GridPoint SpectralSweep::evaluate(double eta) const {
    GridPoint gp;
    gp.eta = eta;
    if (!(eta > 0.0)) {
        gp.failure = "eta must be > 0";
        return gp;
    }
    const double T = static_cast<double>(periods_);
    const Eigen::ArrayXd inv = (lambda_.array() + eta).inverse();
    const double trace = (lambda_.array() * inv).sum();
    if (!(T > trace)) {
        gp.failure = "correction blowup: T <= trace term";
        return gp;
    }
    double zeta = 0.0;
    if (constrained_) {
        const double sb = (b_.array().square() * inv).sum();
        if (!(sb > 0.0)) {
            gp.failure = "degenerate constraint";
            return gp;
        }
        zeta = -(a_.array() * b_.array() * inv).sum() / sb;
    }
    const Eigen::ArrayXd v = constrained_ ? Eigen::ArrayXd(a_.array() + zeta * b_.array()) : Eigen::ArrayXd(a_.array());
    gp.zeta = zeta;
    gp.d1_hat = (a_.array().square() * inv).sum() - trace / (T - trace);
    if (constrained_) gp.d1_hat += zeta * (a_.array() * b_.array() * inv).sum();

    const double den_trace = opts_.d2_denominator == D2Denominator::RegularizedTrace
                                 ? trace
                                 : (lambda_.array() / (lambda_.array() + 1.0)).sum();
    const double base = 1.0 - den_trace / T;
    const double den = base * base;
    if (!(den >= kMinD2Denominator)) {
        gp.failure = "correction blowup: variance denominator collapsed";
        return gp;
    }
    gp.d2_hat = (v.square() * lambda_.array() * inv.square()).sum() / den;
    if (!(gp.d2_hat > 0.0) || !std::isfinite(gp.d2_hat)) {
        gp.failure = "invalid estimate: d2_hat <= 0";
        return gp;
    }
    gp.theta_hat = gp.d1_hat / std::sqrt(gp.d2_hat);
    gp.valid = std::isfinite(gp.theta_hat);
    if (!gp.valid) gp.failure = "non-finite estimate";
    return gp;
}

Solution SpectralSweep::weights(double eta, double gamma) const {
    if (!(gamma > 0.0)) throw Error(ErrorCode::Parameter, "risk aversion must be > 0");
    const double zeta = zeta_at(eta);
    const Vector c = combined(eta);
    return Solution{PortfolioWeights{transform_.transpose() * c / gamma, gamma}, LagrangeInfo{zeta, constrained_}};
}

void SpectralSweep::attach_population(const Vector& mu, const Matrix& sigma) {
    pop_mu_ = transform_ * mu;
    pop_sigma_ = transform_ * sigma * transform_.transpose();
    has_population_ = true;
}

double SpectralSweep::population_d1(double eta) const {
    if (!has_population_) throw Error(ErrorCode::Parameter, "population moments not attached");
    return combined(eta).dot(pop_mu_);
}

double SpectralSweep::population_d2(double eta) const {
    if (!has_population_) throw Error(ErrorCode::Parameter, "population moments not attached");
    const Vector c = combined(eta);
    return c.dot(pop_sigma_ * c);
}

double SpectralSweep::oracle_sharpe(double eta) const {
    const Vector c = combined(eta);
    if (!has_population_) throw Error(ErrorCode::Parameter, "population moments not attached");
    const double d2 = std::abs(c.dot(pop_sigma_ * c));
    if (!(d2 > 0.0)) throw Error(ErrorCode::DegenerateRisk, "portfolio variance is not positive");
    return c.dot(pop_mu_) / std::sqrt(d2);
}

std::size_t argmax_larger_on_ties(const std::vector<double>& values) {
    if (values.empty()) throw Error(ErrorCode::Selection, "argmax over an empty set");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] >= values[best]) best = i;
    return best;
}

EtaSelection select_eta(const std::vector<double>& grid, const SpectralSweep& sweep, const std::string& q_kind) {
    if (grid.empty()) throw Error(ErrorCode::Selection, "eta grid is empty");
    EtaSelection sel;
    sel.curve.reserve(grid.size());
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        sel.curve.push_back(sweep.evaluate(grid[i]));
        const GridPoint& gp = sel.curve.back();
        if (!gp.valid) continue;
        if (!best || gp.theta_hat >= sel.curve[*best].theta_hat) best = i;
    }
    if (!best) throw Error(ErrorCode::Selection, (q_kind.empty() ? std::string("Q") : q_kind) + ": every grid point is invalid");
    const GridPoint& gp = sel.curve[*best];
    sel.eta_star = gp.eta;
    sel.estimate = SharpeEstimate{gp.d1_hat, gp.d2_hat, gp.theta_hat, gp.eta, q_kind};
    return sel;
}

EtaSelection select_eta(const std::vector<double>& grid, const Matrix& q, const EstimationInputs& in,
                        const std::string& q_kind, const EstimatorOptions& opts) {
    return select_eta(grid, SpectralSweep(in, q, opts), q_kind);
}

SelectionResult select_regularizer(const std::vector<RegularizerSpec>& candidates, const PanelBundle& window,
                                   const EstimationInputs& in, const PopulationModel* population,
                                   const EstimatorOptions& opts) {
    if (candidates.empty()) throw Error(ErrorCode::Selection, "no regularizer candidates");
    SelectionResult result;
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const RegularizerSpec& spec = candidates[i];
        CandidateResult cr;
        cr.q_kind = spec.name();
        try {
            spec.validate();
            RegularizerMatrix q = build_q(spec, window, population);
            const EtaSelection sel = select_eta(spec.eta_grid, q.q, in, cr.q_kind, opts);
            cr.valid = true;
            cr.eta_star = sel.eta_star;
            cr.theta_hat = sel.estimate.theta_hat;
            if (!best || cr.theta_hat > result.best.theta_hat) {
                best = i;
                result.best = sel.estimate;
                result.best_q = std::move(q);
            }
        } catch (const Error& e) {
            cr.failure = e.what();
        }
        result.per_candidate.push_back(std::move(cr));
    }
    if (!best) throw Error(ErrorCode::Selection, "every regularizer candidate produced invalid estimates");
    result.best_index = *best;
    return result;
}

}  // namespace esgmv
