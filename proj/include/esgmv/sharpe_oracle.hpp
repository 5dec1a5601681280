#pragma once

#include "esgmv/population.hpp"
#include "esgmv/solvers.hpp"

namespace esgmv {

/// Population-side metrics of a budget-normalized portfolio.
struct MetricRow {
    double am = 0.0;
    double sd = 0.0;
    double sr = 0.0;
    double am_esg = 0.0;
    double sd_esg = 0.0;
};

/// w'mu / sqrt(w' Sigma w). Invariant under positive rescaling of w.
double oos_sharpe(const Vector& w, const MomentModel& model);
inline double oos_sharpe(const PortfolioWeights& w, const MomentModel& model) { return oos_sharpe(w.w, model); }

/// Maximum Sharpe ratio attainable under w's_tilde = 0 with known parameters.
double theta_max(const PopulationModel& model);

/// sqrt(mu' Sigma^-1 mu), the unconstrained maximum.
double unconstrained_theta_max(const MomentModel& model);

/// Normalizes w to w'1 = 1, then evaluates AM, SD, SR, AM_esg, SD_esg.
MetricRow population_metrics(const PortfolioWeights& w, const PopulationModel& pop);

}  // namespace esgmv
