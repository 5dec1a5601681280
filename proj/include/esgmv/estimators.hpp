#pragma once

#include "esgmv/market_data.hpp"
#include "esgmv/types.hpp"

#include <optional>

namespace esgmv {

/// Mean vector and covariance of per-period excess returns.
struct MomentModel {
    Vector mu;
    Matrix sigma;
};

/// ESG mean `s`, ESG covariance `omega` and the target level. The centered
/// exposure is always derived from `s` and `s_bar`, never stored.
struct EsgMoments {
    Vector s;
    Matrix omega;
    double s_bar = 0.0;

    Vector s_tilde() const { return s.array() - s_bar; }
};

struct FactorDecomposition {
    int k = 0;
    Matrix loadings;    // p x k, eigenvectors scaled by sqrt(eigenvalue)
    Matrix factor_cov;  // k x k, identity under the PCA normalization
    Matrix idio;        // p x p thresholded residual covariance

    Matrix reconstruct() const { return loadings * factor_cov * loadings.transpose() + idio; }
};

struct ShrinkageResult {
    MomentModel model;
    double intensity = 0.0;  // rho in [0, 1]
    double target_scale = 0.0;  // nu = tr(S)/p
};

/// Column means and the demeaned covariance with divisor T.
Vector column_means(const Matrix& x);
Matrix sample_covariance(const Matrix& x);

MomentModel sample_moments(const ReturnPanel& panel);
MomentModel sample_moments(const Matrix& returns);

/// Identity-target linear shrinkage (1 - rho) S + rho nu I with the analytic
/// intensity rho = min(b^2, d^2) / d^2.
ShrinkageResult linear_shrinkage_detail(const Matrix& returns);
MomentModel linear_shrinkage(const ReturnPanel& panel);

/// Information criterion IC_p2 minimised over k in [1, k_max].
int bai_ng_factors(const Matrix& returns, int k_max);
int bai_ng_factors(const ReturnPanel& panel, int k_max);

/// Default search bound used when POET runs with automatic k.
int default_factor_bound(Index periods, Index assets);

FactorDecomposition poet_decomposition(const Matrix& returns, int k, double threshold);

/// POET covariance. `k` unset selects it with bai_ng_factors. Throws
/// Conditioning if the estimate is not positive definite.
MomentModel poet_covariance(const Matrix& returns, std::optional<int> k, double threshold);
MomentModel poet_covariance(const ReturnPanel& panel, std::optional<int> k, double threshold);

/// Ridge used for the ESG covariance when none is given and p > T.
inline constexpr double kDefaultEsgRidge = 1e-6;

/// `ridge` unset means kDefaultEsgRidge when p > T and 0 otherwise.
EsgMoments esg_moments(const Matrix& scores, double s_bar, std::optional<double> ridge = std::nullopt);
EsgMoments esg_moments(const EsgPanel& panel, double s_bar, std::optional<double> ridge = std::nullopt);

/// Cholesky succeeds with zero tolerance.
bool is_positive_definite(const Matrix& m);

}  // namespace esgmv
