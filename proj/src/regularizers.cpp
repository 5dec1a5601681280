#include "esgmv/regularizers.hpp"

#include <cmath>

namespace esgmv {

void PopulationModel::validate() const {
    const Index p = returns.mu.size();
    if (returns.sigma.rows() != p || returns.sigma.cols() != p || esg.s.size() != p || esg.omega.rows() != p ||
        esg.omega.cols() != p) {
        throw Error(ErrorCode::Parameter, "population model dimensions disagree");
    }
}

std::string to_string(RegularizerKind kind) {
    switch (kind) {
        case RegularizerKind::Identity: return "Identity";
        case RegularizerKind::DiagSampleCov: return "DiagSampleCov";
        case RegularizerKind::LinearShrinkCov: return "LinearShrinkCov";
        case RegularizerKind::PoetCov: return "PoetCov";
        case RegularizerKind::EsgSampleCov: return "EsgSampleCov";
        case RegularizerKind::EsgMeanDiag: return "EsgMeanDiag";
        case RegularizerKind::EsgMeanInvDiag: return "EsgMeanInvDiag";
        case RegularizerKind::PopulationSigma: return "PopulationSigma";
        case RegularizerKind::PopulationOmega: return "PopulationOmega";
        case RegularizerKind::Custom: return "Custom";
    }
    return "Unknown";
}

RegularizerKind parse_regularizer_kind(const std::string& name) {
    for (auto k : {RegularizerKind::Identity, RegularizerKind::DiagSampleCov, RegularizerKind::LinearShrinkCov,
                   RegularizerKind::PoetCov, RegularizerKind::EsgSampleCov, RegularizerKind::EsgMeanDiag,
                   RegularizerKind::EsgMeanInvDiag, RegularizerKind::PopulationSigma,
                   RegularizerKind::PopulationOmega, RegularizerKind::Custom}) {
        if (to_string(k) == name) return k;
    }
    throw Error(ErrorCode::Config, "unknown regularizer kind '" + name + "'");
}

std::vector<double> default_grid(RegularizerKind kind) {
    double step = 0.2;
    if (kind == RegularizerKind::Identity) step = 0.0002;
    if (kind == RegularizerKind::EsgMeanDiag || kind == RegularizerKind::EsgMeanInvDiag) step = 0.02;
    std::vector<double> grid;
    grid.reserve(50);
    for (int i = 1; i <= 50; ++i) grid.push_back(step * i);
    return grid;
}

RegularizerSpec RegularizerSpec::with_default_grid(RegularizerKind kind) {
    RegularizerSpec spec;
    spec.kind = kind;
    spec.eta_grid = default_grid(kind);
    return spec;
}

void RegularizerSpec::validate() const {
    if (eta_grid.empty()) throw Error(ErrorCode::Parameter, name() + ": eta grid is empty");
    for (std::size_t i = 0; i < eta_grid.size(); ++i) {
        if (!(eta_grid[i] > 0.0) || !std::isfinite(eta_grid[i])) {
            throw Error(ErrorCode::Parameter, name() + ": eta grid values must be finite and > 0");
        }
        if (i > 0 && !(eta_grid[i] > eta_grid[i - 1])) {
            throw Error(ErrorCode::Parameter, name() + ": eta grid must be strictly increasing");
        }
    }
    if (kind == RegularizerKind::Custom && !custom) {
        throw Error(ErrorCode::Parameter, name() + ": custom regularizer without a builder");
    }
}

double RegularizerSpec::param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

std::vector<RegularizerSpec> default_adaptive_candidates() {
    return {RegularizerSpec::with_default_grid(RegularizerKind::DiagSampleCov),
            RegularizerSpec::with_default_grid(RegularizerKind::LinearShrinkCov),
            RegularizerSpec::with_default_grid(RegularizerKind::Identity)};
}

namespace {

Matrix positive_diagonal(const Vector& d, const PanelBundle& window, const std::string& what) {
    for (Index i = 0; i < d.size(); ++i) {
        if (!(d(i) > 0.0) || !std::isfinite(d(i))) {
            throw Error(ErrorCode::Definiteness,
                        what + " has a nonpositive entry for asset '" +
                            window.returns.asset_ids()[static_cast<std::size_t>(i)] + "'");
        }
    }
    return d.asDiagonal();
}

const PopulationModel& require_population(const PopulationModel* pop, RegularizerKind kind) {
    if (pop == nullptr) {
        throw Error(ErrorCode::Parameter, to_string(kind) + " needs a population model");
    }
    return *pop;
}

}  // namespace

RegularizerMatrix build_q(const RegularizerSpec& spec, const PanelBundle& window, const PopulationModel* population) {
    const Index p = window.assets();
    const Matrix& r = window.returns.values();
    Matrix q;
    switch (spec.kind) {
        case RegularizerKind::Identity:
            q = Matrix::Identity(p, p);
            break;
        case RegularizerKind::DiagSampleCov:
            q = positive_diagonal(sample_covariance(r).diagonal(), window, "diagonal sample covariance");
            break;
        case RegularizerKind::LinearShrinkCov:
            q = linear_shrinkage_detail(r).model.sigma;
            break;
        case RegularizerKind::PoetCov: {
            std::optional<int> k;
            if (spec.params.count("k")) k = static_cast<int>(spec.params.at("k"));
            q = poet_covariance(r, k, spec.param("threshold", 0.5)).sigma;
            break;
        }
        case RegularizerKind::EsgSampleCov: {
            std::optional<double> ridge;
            if (spec.params.count("ridge")) ridge = spec.params.at("ridge");
            q = esg_moments(window.esg.values(), 0.0, ridge).omega;
            break;
        }
        case RegularizerKind::EsgMeanDiag:
            q = positive_diagonal(column_means(window.esg.values()), window, "mean ESG score");
            break;
        case RegularizerKind::EsgMeanInvDiag:
            q = positive_diagonal(column_means(window.esg.values()), window, "mean ESG score");
            q.diagonal() = q.diagonal().cwiseInverse();
            break;
        case RegularizerKind::PopulationSigma:
            q = require_population(population, spec.kind).returns.sigma;
            break;
        case RegularizerKind::PopulationOmega:
            q = require_population(population, spec.kind).esg.omega;
            break;
        case RegularizerKind::Custom:
            if (!spec.custom) throw Error(ErrorCode::Parameter, spec.name() + ": custom regularizer without a builder");
            q = spec.custom(window);
            break;
    }
    if (q.rows() != p || q.cols() != p) {
        throw Error(ErrorCode::Parameter, spec.name() + ": regularizer has the wrong dimension");
    }
    if (symmetry_defect(q) > 1e-12) throw Error(ErrorCode::Definiteness, spec.name() + ": regularizer is not symmetric");
    if (!is_positive_definite(q)) {
        throw Error(ErrorCode::Definiteness, spec.name() + ": regularizer failed Cholesky factorization");
    }
    return RegularizerMatrix{std::move(q), spec};
}

}  // namespace esgmv
