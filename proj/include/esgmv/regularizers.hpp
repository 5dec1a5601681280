#pragma once

#include "esgmv/market_data.hpp"
#include "esgmv/population.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace esgmv {

enum class RegularizerKind {
    Identity,
    DiagSampleCov,
    LinearShrinkCov,
    PoetCov,
    EsgSampleCov,
    EsgMeanDiag,
    EsgMeanInvDiag,
    PopulationSigma,
    PopulationOmega,
    Custom,
};

std::string to_string(RegularizerKind kind);
/// Accepts the enumerator names, case-sensitive. Throws Config otherwise.
RegularizerKind parse_regularizer_kind(const std::string& name);

/// Builds a p x p matrix from the estimation window. Used for Custom kinds,
/// e.g. a nonlinear-shrinkage covariance supplied from outside the library.
using CustomBuilder = std::function<Matrix(const PanelBundle&)>;

struct RegularizerSpec {
    RegularizerKind kind = RegularizerKind::Identity;
    /// Kind-specific scalars. PoetCov reads "threshold" (default 0.5) and
    /// optionally "k"; EsgSampleCov reads "ridge".
    std::map<std::string, double> params;
    std::vector<double> eta_grid;
    /// Label for reports, e.g. the name of a custom estimator.
    std::string label;
    CustomBuilder custom;

    /// Spec with the default grid for `kind`.
    static RegularizerSpec with_default_grid(RegularizerKind kind);

    std::string name() const { return label.empty() ? to_string(kind) : label; }

    /// Grid must be nonempty, strictly increasing and positive.
    void validate() const;

    double param(const std::string& key, double fallback) const;
};

struct RegularizerMatrix {
    Matrix q;
    RegularizerSpec provenance;
};

/// 50-point grids: Identity 0.0002..0.01, ESG-mean diagonals 0.02..1,
/// everything else 0.2..10.
std::vector<double> default_grid(RegularizerKind kind);

/// Candidate set used by the adaptive strategy: diagonal sample covariance,
/// linear shrinkage and identity, each on its default grid.
std::vector<RegularizerSpec> default_adaptive_candidates();

/// Constructs Q from the window data. Every returned matrix has passed a
/// zero-tolerance Cholesky factorization.
RegularizerMatrix build_q(const RegularizerSpec& spec, const PanelBundle& window,
                          const PopulationModel* population = nullptr);

}  // namespace esgmv
