#pragma once

#include "esgmv/regularizers.hpp"
#include "esgmv/solvers.hpp"

#include <optional>
#include <string>
#include <vector>

namespace esgmv {

/// In-sample moments the estimator works from. Without `s_tilde_hat` the
/// estimate is for the unconstrained regularized portfolio.
struct EstimationInputs {
    Vector mu_hat;
    Matrix sigma_hat;
    std::optional<Vector> s_tilde_hat;
    Index periods = 0;

    Index assets() const noexcept { return mu_hat.size(); }
};

/// Window moments: sample mean, divisor-T covariance and, when `s_bar` is
/// set, the centered sample ESG mean.
EstimationInputs estimation_inputs(const PanelBundle& window, std::optional<double> s_bar);

/// How the variance-term correction is scaled. `RegularizedTrace` uses
/// (1 - tr(S (S + eta Q)^-1) / T)^2; `UnscaledQ` drops eta inside the trace.
enum class D2Denominator { RegularizedTrace, UnscaledQ };

struct EstimatorOptions {
    D2Denominator d2_denominator = D2Denominator::RegularizedTrace;
};

inline constexpr double kMinD2Denominator = 1e-6;

struct SharpeEstimate {
    double d1_hat = 0.0;
    double d2_hat = 0.0;
    double theta_hat = 0.0;
    double eta = 0.0;
    std::string q_kind;
};

double estimate_d1(const EstimationInputs& in, double eta, const Matrix& q);
double estimate_d2(const EstimationInputs& in, double eta, const Matrix& q, const EstimatorOptions& opts = {});

/// Throws InvalidEstimate when d2_hat <= 0 and CorrectionBlowup when a
/// bias correction denominator collapses.
SharpeEstimate estimate_sharpe(const EstimationInputs& in, double eta, const Matrix& q, const std::string& q_kind = {},
                               const EstimatorOptions& opts = {});

/// Quantities of one grid point, shared by the sample-side estimator and
/// the population-side evaluation.
struct GridPoint {
    double eta = 0.0;
    bool valid = false;
    std::string failure;  // reason when !valid
    double zeta = 0.0;
    double d1_hat = 0.0;
    double d2_hat = 0.0;
    double theta_hat = 0.0;
};

/// All grid evaluations for one (inputs, Q) pair through a single generalized
/// eigendecomposition S = L U diag(lambda) U' L' with Q = L L'. Each eta then
/// costs O(p) for the estimate and O(p^2) for weights or population terms.
class SpectralSweep {
public:
    SpectralSweep(const EstimationInputs& in, const Matrix& q, EstimatorOptions opts = {});

    GridPoint evaluate(double eta) const;

    /// Regularized weights at eta, gamma-scaled.
    Solution weights(double eta, double gamma) const;

    /// Attaches population moments so `population_d1`/`population_d2` and
    /// `oracle_sharpe` become available. Costs O(p^3) once.
    void attach_population(const Vector& mu, const Matrix& sigma);

    /// D_{T,1} = v' A^-1 mu and D_{T,2} = v' A^-1 Sigma A^-1 v with
    /// v = mu_hat + zeta s_tilde_hat.
    double population_d1(double eta) const;
    double population_d2(double eta) const;
    /// D_{T,1} / sqrt(|D_{T,2}|).
    double oracle_sharpe(double eta) const;

    const Vector& spectrum() const noexcept { return lambda_; }

private:
    double zeta_at(double eta) const;
    Vector combined(double eta) const;  // diag(lambda + eta)^-1 (a + zeta b)

    EstimatorOptions opts_;
    Index periods_;
    bool constrained_;
    Vector lambda_;
    Matrix transform_;  // U' L^-1
    Vector a_;          // transform * mu_hat
    Vector b_;          // transform * s_tilde_hat
    bool has_population_ = false;
    Vector pop_mu_;      // transform * mu
    Matrix pop_sigma_;   // transform * Sigma * transform'
};

struct EtaSelection {
    double eta_star = 0.0;
    SharpeEstimate estimate;
    std::vector<GridPoint> curve;
};

/// Argmax of theta_hat over the grid. Ties go to the larger eta; invalid
/// points are skipped. Throws Selection when every point is invalid.
EtaSelection select_eta(const std::vector<double>& grid, const Matrix& q, const EstimationInputs& in,
                        const std::string& q_kind = {}, const EstimatorOptions& opts = {});
EtaSelection select_eta(const std::vector<double>& grid, const SpectralSweep& sweep, const std::string& q_kind = {});

/// Argmax index under the same tie rule, for any curve.
std::size_t argmax_larger_on_ties(const std::vector<double>& values);

struct CandidateResult {
    std::string q_kind;
    bool valid = false;
    std::string failure;
    double eta_star = 0.0;
    double theta_hat = 0.0;
};

struct SelectionResult {
    SharpeEstimate best;
    std::size_t best_index = 0;
    RegularizerMatrix best_q;
    std::vector<CandidateResult> per_candidate;
};

/// Runs select_eta for each candidate on the window and returns the global
/// argmax. A candidate whose Q cannot be built or whose grid is entirely
/// invalid is recorded and skipped. Ties keep the earlier candidate.
SelectionResult select_regularizer(const std::vector<RegularizerSpec>& candidates, const PanelBundle& window,
                                   const EstimationInputs& in, const PopulationModel* population = nullptr,
                                   const EstimatorOptions& opts = {});

}  // namespace esgmv
