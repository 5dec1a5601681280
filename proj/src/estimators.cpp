#include "esgmv/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace esgmv {

Vector column_means(const Matrix& x) { return x.colwise().mean().transpose(); }

Matrix sample_covariance(const Matrix& x) {
    const Matrix centered = x.rowwise() - x.colwise().mean();
    Matrix s(x.cols(), x.cols());
    s.setZero();
    s.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(), 1.0 / static_cast<double>(x.rows()));
    return s.selfadjointView<Eigen::Lower>();
}

MomentModel sample_moments(const Matrix& returns) {
    if (returns.rows() < 2) throw Error(ErrorCode::Parameter, "sample_moments needs T >= 2");
    return MomentModel{column_means(returns), sample_covariance(returns)};
}

MomentModel sample_moments(const ReturnPanel& panel) { return sample_moments(panel.values()); }

ShrinkageResult linear_shrinkage_detail(const Matrix& returns) {
    const Index T = returns.rows();
    const Index p = returns.cols();
    if (T < 2) throw Error(ErrorCode::Parameter, "linear_shrinkage needs T >= 2");

    const Matrix centered = returns.rowwise() - returns.colwise().mean();
    MomentModel sample{column_means(returns), sample_covariance(returns)};
    const Matrix& s = sample.sigma;
    const double nu = s.trace() / static_cast<double>(p);

    // d^2 = ||S - nu I||_F^2 and b_bar^2 = T^-2 sum_t ||x_t x_t' - S||_F^2.
    // The latter expands to (sum_t ||x_t||^4 - T ||S||_F^2) / T^2.
    const double d2 = (s - nu * Matrix::Identity(p, p)).squaredNorm();
    const double fourth = centered.rowwise().squaredNorm().array().square().sum();
    const double Td = static_cast<double>(T);
    const double b2_bar = std::max(0.0, (fourth - Td * s.squaredNorm()) / (Td * Td));

    ShrinkageResult out;
    out.target_scale = nu;
    out.intensity = d2 > 0.0 ? std::clamp(std::min(b2_bar, d2) / d2, 0.0, 1.0) : 0.0;
    Matrix shrunk = (1.0 - out.intensity) * s;
    shrunk.diagonal().array() += out.intensity * nu;
    out.model = MomentModel{std::move(sample.mu), std::move(shrunk)};
    return out;
}

MomentModel linear_shrinkage(const ReturnPanel& panel) { return linear_shrinkage_detail(panel.values()).model; }

namespace {

/// Eigenvalues of the divisor-T covariance of `centered`, descending.
Vector descending_spectrum(const Matrix& centered) {
    const Index T = centered.rows();
    const Index p = centered.cols();
    const Matrix gram = p <= T ? Matrix(centered.transpose() * centered) : Matrix(centered * centered.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram / static_cast<double>(T), Eigen::EigenvaluesOnly);
    Vector ev = es.eigenvalues().reverse();
    return ev.cwiseMax(0.0);
}

}  // namespace

int default_factor_bound(Index periods, Index assets) {
    return static_cast<int>(std::min<Index>(8, std::min(periods, assets) - 1));
}

int bai_ng_factors(const Matrix& returns, int k_max) {
    const Index T = returns.rows();
    const Index p = returns.cols();
    if (k_max < 1 || k_max >= std::min(T, p)) {
        throw Error(ErrorCode::Parameter, "k_max must lie in [1, min(T, p)), got " + std::to_string(k_max));
    }
    const Matrix centered = returns.rowwise() - returns.colwise().mean();
    const Vector ev = descending_spectrum(centered);
    const double pd = static_cast<double>(p);
    const double Td = static_cast<double>(T);
    const double penalty = (pd + Td) / (pd * Td) * std::log(static_cast<double>(std::min(p, T)));

    // V(k) = (1/p) sum_{j>k} lambda_j, the mean squared PCA residual.
    double tail = ev.sum();
    int best = 1;
    double best_ic = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_max; ++k) {
        tail -= ev(k - 1);
        const double v = std::max(tail, 0.0) / pd;
        const double ic = (v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity()) + k * penalty;
        if (ic < best_ic) {
            best_ic = ic;
            best = k;
        }
    }
    return best;
}

int bai_ng_factors(const ReturnPanel& panel, int k_max) { return bai_ng_factors(panel.values(), k_max); }

FactorDecomposition poet_decomposition(const Matrix& returns, int k, double threshold) {
    const Index T = returns.rows();
    const Index p = returns.cols();
    if (k < 1 || k >= std::min(T, p)) {
        throw Error(ErrorCode::Parameter, "POET factor count must lie in [1, min(T, p)), got " + std::to_string(k));
    }
    if (!(threshold >= 0.0)) throw Error(ErrorCode::Parameter, "POET threshold must be >= 0");

    const Matrix s = sample_covariance(returns);
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    const Vector& ev = es.eigenvalues();  // ascending
    const Matrix& vecs = es.eigenvectors();

    FactorDecomposition out;
    out.k = k;
    out.loadings.resize(p, k);
    for (int j = 0; j < k; ++j) {
        const Index src = p - 1 - j;
        out.loadings.col(j) = vecs.col(src) * std::sqrt(std::max(ev(src), 0.0));
    }
    out.factor_cov = Matrix::Identity(k, k);
    const Matrix factor_part = out.loadings * out.loadings.transpose();

    Matrix resid = s - factor_part;
    const double scale = threshold * std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(T));
    const Vector d = resid.diagonal().cwiseMax(0.0).cwiseSqrt();
    for (Index j = 0; j < p; ++j) {
        for (Index i = j + 1; i < p; ++i) {
            const double tau = scale * d(i) * d(j);
            const double x = resid(i, j);
            const double soft = std::copysign(std::max(std::abs(x) - tau, 0.0), x);
            resid(i, j) = soft;
            resid(j, i) = soft;
        }
    }
    out.idio = std::move(resid);
    return out;
}

MomentModel poet_covariance(const Matrix& returns, std::optional<int> k, double threshold) {
    const int factors = k ? *k : bai_ng_factors(returns, default_factor_bound(returns.rows(), returns.cols()));
    const FactorDecomposition fd = poet_decomposition(returns, factors, threshold);
    Matrix sigma = symmetrized(fd.reconstruct());
    if (!is_positive_definite(sigma)) {
        throw Error(ErrorCode::Conditioning, "POET estimate (k=" + std::to_string(factors) +
                                                 ") is not positive definite; use a larger threshold or add a ridge");
    }
    return MomentModel{column_means(returns), std::move(sigma)};
}

MomentModel poet_covariance(const ReturnPanel& panel, std::optional<int> k, double threshold) {
    return poet_covariance(panel.values(), k, threshold);
}

EsgMoments esg_moments(const Matrix& scores, double s_bar, std::optional<double> ridge) {
    if (scores.rows() < 2) throw Error(ErrorCode::Parameter, "esg_moments needs T >= 2");
    const double r = ridge ? *ridge : (scores.cols() > scores.rows() ? kDefaultEsgRidge : 0.0);
    if (!(r >= 0.0)) throw Error(ErrorCode::Parameter, "ESG ridge must be >= 0");
    EsgMoments out;
    out.s = column_means(scores);
    out.omega = sample_covariance(scores);
    out.omega.diagonal().array() += r;
    out.s_bar = s_bar;
    return out;
}

EsgMoments esg_moments(const EsgPanel& panel, double s_bar, std::optional<double> ridge) {
    return esg_moments(panel.values(), s_bar, ridge);
}

bool is_positive_definite(const Matrix& m) {
    if (m.rows() != m.cols() || !m.allFinite()) return false;
    Eigen::LLT<Matrix> llt(m);
    return llt.info() == Eigen::Success;
}

}  // namespace esgmv
