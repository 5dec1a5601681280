#include "esgmv/sharpe_oracle.hpp"

#include <cmath>

namespace esgmv {

double oos_sharpe(const Vector& w, const MomentModel& model) {
    if (w.size() != model.mu.size()) throw Error(ErrorCode::Parameter, "weight and model dimensions differ");
    // Extended-precision sums keep the ratio scale invariant to the last bit
    // even when w'mu nearly cancels.
    const Index p = w.size();
    long double mean = 0.0L;
    long double risk = 0.0L;
    for (Index j = 0; j < p; ++j) {
        mean += static_cast<long double>(w(j)) * model.mu(j);
        long double col = 0.0L;
        for (Index i = 0; i < p; ++i) col += static_cast<long double>(model.sigma(i, j)) * w(i);
        risk += col * w(j);
    }
    const double scale = w.squaredNorm() * model.sigma.diagonal().cwiseAbs().maxCoeff();
    if (!(risk > 1e-15L * scale) || !(risk > 0.0L)) {
        throw Error(ErrorCode::DegenerateRisk, "portfolio variance is not positive");
    }
    return static_cast<double>(mean / std::sqrt(risk));
}

double unconstrained_theta_max(const MomentModel& model) {
    Eigen::LLT<Matrix> llt(model.sigma);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::Factorization, "population covariance is not SPD");
    return std::sqrt(std::max(0.0, model.mu.dot(llt.solve(model.mu))));
}

double theta_max(const PopulationModel& model) {
    model.validate();
    const Vector st = model.esg.s_tilde();
    if (st.squaredNorm() == 0.0) throw Error(ErrorCode::DegenerateConstraint, "s_tilde is zero");
    Eigen::LLT<Matrix> llt(model.returns.sigma);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::Factorization, "population covariance is not SPD");
    const Vector& mu = model.returns.mu;
    const Vector inv_mu = llt.solve(mu);
    const Vector inv_s = llt.solve(st);
    const double a = mu.dot(inv_mu);
    const double b = mu.dot(inv_s);
    const double x = st.dot(inv_s);
    const double radicand = a - b * b / x;
    if (radicand < -1e-12 * std::max(1.0, a)) {
        throw Error(ErrorCode::Numerical, "negative radicand in theta_max; inputs are inconsistent");
    }
    return std::sqrt(std::max(radicand, 0.0));
}

MetricRow population_metrics(const PortfolioWeights& w, const PopulationModel& pop) {
    pop.validate();
    const Vector wn = normalize_to_budget(w).w;
    MetricRow row;
    row.am = wn.dot(pop.returns.mu);
    row.sd = std::sqrt(std::max(0.0, wn.dot(pop.returns.sigma * wn)));
    row.sr = row.sd > 0.0 ? row.am / row.sd : 0.0;
    row.am_esg = wn.dot(pop.esg.s);
    row.sd_esg = std::sqrt(std::max(0.0, wn.dot(pop.esg.omega * wn)));
    return row;
}

}  // namespace esgmv
