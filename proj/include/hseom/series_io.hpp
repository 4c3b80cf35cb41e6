#pragma once

#include "hseom/observables.hpp"

#include <filesystem>
#include <string>

namespace hseom {

// Shortest round-trip decimal rendering (std::to_chars).
std::string format_double(double v);

// CSV with header "t,re,im" (or "omega,re,im" for spectral kinds) plus a
// .meta.json sidecar carrying kind, metadata, and the config hash.
void write_series_csv(const ObservableSeries& series,
                      const std::filesystem::path& csv_path,
                      const std::string& config_hash);

std::string series_to_csv(const ObservableSeries& series);

} // namespace hseom
