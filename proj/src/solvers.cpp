#include "esgmv/solvers.hpp"

#include <cmath>

namespace esgmv {

namespace {

constexpr double kMinRcond = 1e-13;

void check_gamma(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(ErrorCode::Parameter, "risk aversion must be > 0");
}

Eigen::LLT<Matrix> factorize(const Matrix& m, const char* what) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success || !(llt.rcond() > kMinRcond)) {
        throw Error(ErrorCode::Factorization, std::string(what) + " is singular or not positive definite");
    }
    return llt;
}

/// Combines x = A^-1 mu and y = A^-1 s into the constrained solution. One
/// refinement pass on the multiplier drives w's to rounding level.
Solution combine_constrained(const Vector& x, const Vector& y, const Vector& s_tilde, double gamma) {
    if (s_tilde.squaredNorm() == 0.0) {
        throw Error(ErrorCode::DegenerateConstraint, "centered ESG exposure is zero; the level constraint is vacuous");
    }
    const double sy = s_tilde.dot(y);
    if (!(sy > 0.0) || !std::isfinite(sy)) {
        throw Error(ErrorCode::DegenerateConstraint, "s_tilde' A^-1 s_tilde is not positive");
    }
    double zeta = -s_tilde.dot(x) / sy;
    Vector v = x + zeta * y;
    zeta -= s_tilde.dot(v) / sy;
    v = x + zeta * y;
    return Solution{PortfolioWeights{v / gamma, gamma}, LagrangeInfo{zeta, true}};
}

}  // namespace

RegularizedSystem::RegularizedSystem(const Matrix& sigma_hat, const Matrix& q, double eta)
    : eta_(eta), dim_(sigma_hat.rows()) {
    if (!(eta > 0.0)) throw Error(ErrorCode::Parameter, "eta must be > 0");
    if (q.rows() != dim_ || q.cols() != dim_ || sigma_hat.cols() != dim_) {
        throw Error(ErrorCode::Parameter, "sigma_hat and Q dimensions differ");
    }
    llt_ = factorize(sigma_hat + eta * q, "sigma_hat + eta Q");
}

double RegularizedSystem::trace_solve(const Matrix& m) const { return llt_.solve(m).trace(); }

PortfolioWeights solve_mv(const Vector& mu, const Matrix& sigma, double gamma) {
    check_gamma(gamma);
    const auto llt = factorize(sigma, "covariance");
    return PortfolioWeights{llt.solve(mu) / gamma, gamma};
}

Solution solve_constrained(const Vector& mu, const Matrix& sigma, const Vector& s_tilde, double gamma) {
    check_gamma(gamma);
    if (s_tilde.squaredNorm() == 0.0) {
        throw Error(ErrorCode::DegenerateConstraint, "centered ESG exposure is zero; the level constraint is vacuous");
    }
    const auto llt = factorize(sigma, "covariance");
    return combine_constrained(llt.solve(mu), llt.solve(s_tilde), s_tilde, gamma);
}

Solution solve_regularized(const RegularizedSystem& system, const Vector& mu_hat,
                           const std::optional<Vector>& s_tilde, double gamma) {
    check_gamma(gamma);
    const Vector x = system.solve(mu_hat);
    if (!s_tilde) return Solution{PortfolioWeights{x / gamma, gamma}, LagrangeInfo{0.0, false}};
    return combine_constrained(x, system.solve(*s_tilde), *s_tilde, gamma);
}

Solution solve_regularized(const Vector& mu_hat, const Matrix& sigma_hat, double eta, const Matrix& q,
                           const std::optional<Vector>& s_tilde, double gamma) {
    return solve_regularized(RegularizedSystem(sigma_hat, q, eta), mu_hat, s_tilde, gamma);
}

double anorm_budget(const PortfolioWeights& w, const Matrix& q) {
    if (q.rows() != w.w.size()) throw Error(ErrorCode::Parameter, "weight and Q dimensions differ");
    return w.w.dot(q * w.w);
}

PortfolioWeights normalize_to_budget(const PortfolioWeights& w) {
    const double total = w.w.sum();
    const double l1 = w.w.lpNorm<1>();
    if (!(std::abs(total) > 1e-12 * l1) || !std::isfinite(total)) {
        throw Error(ErrorCode::Normalization, "portfolio has zero net exposure and cannot be budget-normalized");
    }
    return PortfolioWeights{w.w / total, w.gamma};
}

}  // namespace esgmv
