#pragma once

#include "esgmv/backtest.hpp"
#include "esgmv/simulation.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace esgmv::cli {

struct DataPaths {
    std::filesystem::path returns;
    std::filesystem::path esg;
    std::filesystem::path riskfree;
};

struct SimulateSection {
    SimConfig sim;
    bool seed_given = false;
    bool table = true;
    std::vector<RegularizerSpec> curve_q{RegularizerSpec::with_default_grid(RegularizerKind::Identity),
                                         RegularizerSpec::with_default_grid(RegularizerKind::DiagSampleCov)};
    bool gaps = true;
    RegularizerSpec gap_q = RegularizerSpec::with_default_grid(RegularizerKind::Identity);
    std::vector<std::pair<Index, Index>> gap_sizes{{60, 120}, {180, 360}};  // (p, T)
    bool svg = false;
};

/// Parsed config file. Relative paths resolve against the config's folder.
struct RunConfig {
    std::optional<DataPaths> data;
    std::optional<std::filesystem::path> model;
    std::optional<SyntheticSpec> synthetic;
    double calibration_s_bar = 0.8;
    SimulateSection simulate;
    BacktestConfig backtest;
};

/// Throws Config on unknown keys or bad values and Io/Format when the file
/// cannot be read or parsed.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);

/// Full command-line entry. Returns the process exit status: 0 success,
/// 1 computation failure, 2 config or IO failure.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace esgmv::cli
