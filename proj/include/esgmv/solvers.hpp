#pragma once

#include "esgmv/regularizers.hpp"
#include "esgmv/types.hpp"

#include <optional>

namespace esgmv {

/// Allocation as solved (not budget-normalized) and the risk aversion used.
struct PortfolioWeights {
    Vector w;
    double gamma = 1.0;
};

/// Multiplier of the ESG level constraint; `binding` is false for
/// unconstrained solves, where `multiplier` is 0.
struct LagrangeInfo {
    double multiplier = 0.0;
    bool binding = false;
};

struct Solution {
    PortfolioWeights weights;
    LagrangeInfo lagrange;
};

/// Cholesky factorization of sigma_hat + eta * Q, computed once and reused
/// for every right-hand side and trace needed at this (eta, Q).
class RegularizedSystem {
public:
    RegularizedSystem(const Matrix& sigma_hat, const Matrix& q, double eta);

    Vector solve(const Vector& rhs) const { return llt_.solve(rhs); }
    Matrix solve(const Matrix& rhs) const { return llt_.solve(rhs); }

    /// tr((sigma_hat + eta Q)^-1 m).
    double trace_solve(const Matrix& m) const;

    double eta() const noexcept { return eta_; }
    Index dim() const noexcept { return dim_; }

private:
    Eigen::LLT<Matrix> llt_;
    double eta_;
    Index dim_;
};

/// w = sigma^-1 mu / gamma.
PortfolioWeights solve_mv(const Vector& mu, const Matrix& sigma, double gamma);

/// Equality ESG constraint w's_tilde = 0 with population-style inputs.
Solution solve_constrained(const Vector& mu, const Matrix& sigma, const Vector& s_tilde, double gamma);

/// Regularized problem on a prepared system. Without `s_tilde` this is the
/// unconstrained variant and the multiplier is flagged non-binding.
Solution solve_regularized(const RegularizedSystem& system, const Vector& mu_hat,
                           const std::optional<Vector>& s_tilde, double gamma);

Solution solve_regularized(const Vector& mu_hat, const Matrix& sigma_hat, double eta, const Matrix& q,
                           const std::optional<Vector>& s_tilde, double gamma);

inline Solution solve_regularized(const Vector& mu_hat, const Matrix& sigma_hat, double eta,
                                  const RegularizerMatrix& q, const std::optional<Vector>& s_tilde, double gamma) {
    return solve_regularized(mu_hat, sigma_hat, eta, q.q, s_tilde, gamma);
}

/// w' Q w.
double anorm_budget(const PortfolioWeights& w, const Matrix& q);
inline double anorm_budget(const PortfolioWeights& w, const RegularizerMatrix& q) { return anorm_budget(w, q.q); }

/// w / (w'1). Throws Normalization when |w'1| <= 1e-12 ||w||_1.
PortfolioWeights normalize_to_budget(const PortfolioWeights& w);

}  // namespace esgmv
