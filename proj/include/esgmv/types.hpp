#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace esgmv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Failure categories surfaced by the library. The CLI maps `Io`, `Format`
/// and `Config` to exit status 2 and everything else to 1.
enum class ErrorCode {
    Io,
    Format,
    Config,
    Alignment,
    DegenerateUniverse,
    ZeroVariance,
    Parameter,
    Conditioning,
    Definiteness,
    Factorization,
    DegenerateConstraint,
    Normalization,
    DegenerateRisk,
    Numerical,
    CorrectionBlowup,
    InvalidEstimate,
    Selection,
    Iteration,
    Singularity,
    Solvency,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline double symmetry_defect(const Matrix& m) {
    const double scale = m.norm();
    if (scale == 0.0) return 0.0;
    return (m - m.transpose()).norm() / scale;
}

inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace esgmv
