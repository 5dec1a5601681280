#pragma once

#include "esgmv/population.hpp"

namespace esgmv {

/// Deterministic equivalents of the regularized resolvent at one (eta, Q).
struct AsymptoticState {
    double s0 = 0.0;
    double s1 = 0.0;
    Matrix g;  // (Sigma / (1 + s0) + eta Q)^-1
    Matrix h;  // g Sigma g
    double eta = 0.0;
    double c = 0.0;
    double correction = 1.0;  // 1 - s1 / (1 + s0)^2
    double residual = 0.0;    // relative fixed-point residual of s0
};

inline constexpr double kS0Tolerance = 1e-12;
inline constexpr int kS0MaxIterations = 10000;

/// Fixed point of s = (c/p) tr[Sigma (Sigma / (1 + s) + eta Q)^-1]. Damped
/// iteration from 0 with a Newton polish when the contraction is slow.
/// Throws Iteration when neither reaches the tolerance.
double solve_s0(const Matrix& sigma, const Matrix& q, double eta, double c);

double solve_s1(const Matrix& sigma, const Matrix& q, double eta, double c, double s0);

AsymptoticState deterministic_equivalents(const Matrix& sigma, const Matrix& q, double eta, double c);

/// Which portfolio's limiting out-of-sample Sharpe ratio to evaluate.
///   Full: sample mean, sample covariance, estimated ESG mean.
///   Mixed: sample mean and covariance, known ESG mean.
///   PopMean: known mean and ESG mean, sample covariance.
///   Unconstrained: sample moments, no ESG constraint.
enum class LimitKind { Full, Mixed, PopMean, Unconstrained };

std::string to_string(LimitKind kind);

double limit_sr(LimitKind kind, const PopulationModel& pop, const AsymptoticState& state, double periods);
double limit_sr(LimitKind kind, const PopulationModel& pop, const Matrix& q, double eta, double periods, double c);

struct Prop2Limits {
    double known_esg = 0.0;      // ESG mean known
    double estimated_esg = 0.0;  // ESG mean estimated, inflated by tr(Sigma^-1 Omega) / T
};

/// Large-C limits for Q proportional to Sigma.
Prop2Limits prop2_limits(const PopulationModel& pop, double periods, double c);

}  // namespace esgmv
