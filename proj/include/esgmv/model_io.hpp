#pragma once

#include "esgmv/population.hpp"

#include <filesystem>
#include <iosfwd>

namespace esgmv {

inline constexpr int kModelFormatVersion = 1;

/// Text model file. Every number is written as a C99 hex float so a reload
/// reproduces the model bit for bit.
void write_model(std::ostream& out, const PopulationModel& pop);
void write_model(const std::filesystem::path& path, const PopulationModel& pop);

/// Throws Io when the file cannot be opened and Format on malformed content
/// or an unsupported version.
PopulationModel read_model(std::istream& in);
PopulationModel read_model(const std::filesystem::path& path);

}  // namespace esgmv
