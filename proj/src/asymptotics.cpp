#include "esgmv/asymptotics.hpp"

#include <cmath>
#include <sstream>

namespace esgmv {

namespace {

void check_args(const Matrix& sigma, const Matrix& q, double eta, double c) {
    const Index p = sigma.rows();
    if (p < 1 || sigma.cols() != p || q.rows() != p || q.cols() != p) {
        throw Error(ErrorCode::Parameter, "sigma and Q must be square of equal size");
    }
    if (!(eta > 0.0) || !std::isfinite(eta)) throw Error(ErrorCode::Parameter, "eta must be > 0");
    if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorCode::Parameter, "aspect ratio must be > 0");
}

// Eigenvalues of Sigma relative to Q; every trace in this module is a sum over them.
Vector relative_spectrum(const Matrix& sigma, const Matrix& q) {
    Eigen::LLT<Matrix> llt(q);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::Definiteness, "Q is not positive definite");
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(symmetrized(sigma), symmetrized(q),
                                                         Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (ges.info() != Eigen::Success) throw Error(ErrorCode::Numerical, "generalized eigendecomposition failed");
    return ges.eigenvalues().cwiseMax(0.0);
}

struct ScalarMap {
    const Vector& lambda;
    double eta;
    double scale;  // c / p

    double value(double s) const {
        return scale * (lambda.array() * (1.0 + s) / (lambda.array() + eta * (1.0 + s))).sum();
    }
    double slope(double s) const {
        const Eigen::ArrayXd den = lambda.array() + eta * (1.0 + s);
        return scale * (lambda.array().square() / den.square()).sum();
    }
    double residual(double s) const { return std::abs(s - value(s)) / std::max(1.0, s); }
};

double fixed_point(const Vector& lambda, double eta, double c) {
    const ScalarMap f{lambda, eta, c / static_cast<double>(lambda.size())};
    if (lambda.maxCoeff() == 0.0) return 0.0;

    double s = 0.0;
    constexpr double damping = 0.5;
    constexpr int damped_budget = 200;
    for (int it = 0; it < damped_budget; ++it) {
        if (f.residual(s) <= kS0Tolerance) return s;
        s = (1.0 - damping) * s + damping * f.value(s);
    }
    // s - f(s) is convex and increasing right of the root, so Newton from an
    // upper bound descends monotonically onto it.
    double hi = std::max(s, f.scale * (lambda.array() / eta).sum());
    double last = f.residual(hi);
    for (int it = damped_budget; it < kS0MaxIterations; ++it) {
        last = f.residual(hi);
        if (last <= kS0Tolerance) return hi;
        const double g = hi - f.value(hi);
        const double dg = 1.0 - f.slope(hi);
        if (!(dg > 0.0)) break;
        const double next = hi - g / dg;
        if (!(next < hi) || next < 0.0) {
            hi = std::max(0.0, next);
            if (f.residual(hi) <= kS0Tolerance) return hi;
            break;
        }
        hi = next;
    }
    std::ostringstream msg;
    msg << "s0 fixed point did not converge; last residual " << last;
    throw Error(ErrorCode::Iteration, msg.str());
}

double s1_from(const Vector& lambda, double eta, double c, double s0) {
    const double scale = c / static_cast<double>(lambda.size());
    const double a = scale * (lambda.array() / (lambda.array() / (1.0 + s0) + eta)).square().sum();
    const double denom = 1.0 - a / ((1.0 + s0) * (1.0 + s0));
    if (!(denom > 0.0)) throw Error(ErrorCode::Singularity, "s1 linear coefficient is not positive");
    return -a / denom;
}

}  // namespace

double solve_s0(const Matrix& sigma, const Matrix& q, double eta, double c) {
    check_args(sigma, q, eta, c);
    return fixed_point(relative_spectrum(sigma, q), eta, c);
}

double solve_s1(const Matrix& sigma, const Matrix& q, double eta, double c, double s0) {
    check_args(sigma, q, eta, c);
    if (!(s0 >= 0.0)) throw Error(ErrorCode::Parameter, "s0 must be >= 0");
    return s1_from(relative_spectrum(sigma, q), eta, c, s0);
}

AsymptoticState deterministic_equivalents(const Matrix& sigma, const Matrix& q, double eta, double c) {
    check_args(sigma, q, eta, c);
    const Vector lambda = relative_spectrum(sigma, q);
    AsymptoticState st;
    st.eta = eta;
    st.c = c;
    st.s0 = fixed_point(lambda, eta, c);
    st.residual = ScalarMap{lambda, eta, c / static_cast<double>(lambda.size())}.residual(st.s0);
    st.s1 = s1_from(lambda, eta, c, st.s0);
    st.correction = 1.0 - st.s1 / ((1.0 + st.s0) * (1.0 + st.s0));

    const Matrix resolvent = symmetrized(sigma / (1.0 + st.s0) + eta * q);
    Eigen::LLT<Matrix> llt(resolvent);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::Factorization, "deterministic resolvent is not SPD");
    st.g = symmetrized(llt.solve(Matrix::Identity(sigma.rows(), sigma.cols())));
    st.h = symmetrized(st.g * sigma * st.g);
    return st;
}

std::string to_string(LimitKind kind) {
    switch (kind) {
        case LimitKind::Full: return "full";
        case LimitKind::Mixed: return "mixed";
        case LimitKind::PopMean: return "pop-mean";
        case LimitKind::Unconstrained: return "unconstrained";
    }
    return "unknown";
}

double limit_sr(LimitKind kind, const PopulationModel& pop, const AsymptoticState& st, double periods) {
    pop.validate();
    if (!(periods > 0.0)) throw Error(ErrorCode::Parameter, "T must be > 0");
    const Vector& mu = pop.returns.mu;
    const Matrix& sigma = pop.returns.sigma;
    const Vector gmu = st.g * mu;
    const Vector hmu = st.h * mu;
    const double mgm = mu.dot(gmu);
    const double mhm = mu.dot(hmu);
    const double mean_noise = kind == LimitKind::PopMean ? 0.0 : (st.h.cwiseProduct(sigma)).sum() / periods;

    double numerator = mgm;
    double radicand = mhm + mean_noise;
    if (kind != LimitKind::Unconstrained) {
        const Vector st_tilde = pop.esg.s_tilde();
        if (st_tilde.squaredNorm() == 0.0) throw Error(ErrorCode::DegenerateConstraint, "s_tilde is zero");
        double sgs = st_tilde.dot(st.g * st_tilde);
        double shs = st_tilde.dot(st.h * st_tilde);
        if (kind == LimitKind::Full) {
            sgs += st.g.cwiseProduct(pop.esg.omega).sum() / periods;
            shs += st.h.cwiseProduct(pop.esg.omega).sum() / periods;
        }
        if (!(sgs > 0.0)) throw Error(ErrorCode::DegenerateConstraint, "s_tilde' G s_tilde is not positive");
        const double mgs = gmu.dot(st_tilde);
        const double mhs = hmu.dot(st_tilde);
        numerator -= mgs * mgs / sgs;
        radicand += mgs * mgs * shs / (sgs * sgs) - 2.0 * mgs * mhs / sgs;
    }
    const double scale = std::max(1.0, std::abs(mhm) + std::abs(mean_noise));
    if (radicand < -1e-12 * scale) throw Error(ErrorCode::Numerical, "negative radicand in limiting Sharpe ratio");
    radicand = std::max(radicand, 0.0);
    if (radicand == 0.0) throw Error(ErrorCode::DegenerateRisk, "limiting portfolio variance is zero");
    return numerator / (std::sqrt(st.correction) * std::sqrt(radicand));
}

double limit_sr(LimitKind kind, const PopulationModel& pop, const Matrix& q, double eta, double periods, double c) {
    return limit_sr(kind, pop, deterministic_equivalents(pop.returns.sigma, q, eta, c), periods);
}

Prop2Limits prop2_limits(const PopulationModel& pop, double periods, double c) {
    pop.validate();
    if (!(periods > 0.0) || !(c > 0.0)) throw Error(ErrorCode::Parameter, "T and c must be > 0");
    Eigen::LLT<Matrix> llt(pop.returns.sigma);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::Factorization, "population covariance is not SPD");
    const Vector& mu = pop.returns.mu;
    const Vector st = pop.esg.s_tilde();
    const Vector inv_mu = llt.solve(mu);
    const double a = mu.dot(inv_mu);
    const double b = st.dot(inv_mu);
    const double x = st.dot(llt.solve(st));
    if (!(x > 0.0)) throw Error(ErrorCode::DegenerateConstraint, "s_tilde' Sigma^-1 s_tilde is not positive");
    const double x_noisy = x + llt.solve(pop.esg.omega).trace() / periods;
    auto f = [&](double xx) {
        const double core = a - b * b / xx;
        return core / std::sqrt(core + c);
    };
    return Prop2Limits{f(x), f(x_noisy)};
}

}  // namespace esgmv
