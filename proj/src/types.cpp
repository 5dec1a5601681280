#include "esgmv/types.hpp"

namespace esgmv {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Io: return "io error";
        case ErrorCode::Format: return "format error";
        case ErrorCode::Config: return "config error";
        case ErrorCode::Alignment: return "alignment error";
        case ErrorCode::DegenerateUniverse: return "degenerate-universe error";
        case ErrorCode::ZeroVariance: return "zero-variance error";
        case ErrorCode::Parameter: return "parameter error";
        case ErrorCode::Conditioning: return "conditioning error";
        case ErrorCode::Definiteness: return "definiteness error";
        case ErrorCode::Factorization: return "factorization error";
        case ErrorCode::DegenerateConstraint: return "degenerate-constraint error";
        case ErrorCode::Normalization: return "normalization error";
        case ErrorCode::DegenerateRisk: return "degenerate-risk error";
        case ErrorCode::Numerical: return "numerical error";
        case ErrorCode::CorrectionBlowup: return "correction-blowup error";
        case ErrorCode::InvalidEstimate: return "invalid-estimate error";
        case ErrorCode::Selection: return "selection error";
        case ErrorCode::Iteration: return "iteration error";
        case ErrorCode::Singularity: return "singularity error";
        case ErrorCode::Solvency: return "solvency error";
    }
    return "error";
}

}  // namespace esgmv
