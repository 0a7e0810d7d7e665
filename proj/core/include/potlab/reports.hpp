#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <ostream>
#include <string>

#include "potlab/builders.hpp"
#include "potlab/capacity.hpp"
#include "potlab/criteria.hpp"
#include "potlab/green.hpp"
#include "potlab/series.hpp"
#include "potlab/smoothing.hpp"

namespace potlab {

using Json = nlohmann::json;

std::string version();

/// FNV-1a (64 bit) over the compact dump of `config`. Object keys are
/// sorted, so the hash depends only on the content.
std::uint64_t config_hash(const Json& config);
std::string hex(std::uint64_t value);

/// {"tool", "version", "config", "config_hash", "result"}.
Json envelope(const Json& config, Json result);

Json to_json(const BallProfile& profile);
Json to_json(const SeriesVerdict& verdict);
Json to_json(const VolumeTest& test);
Json to_json(const SystemReport& report);
Json to_json(const LiouvilleProbe& probe);
Json to_json(const PoincareEstimate& estimate);
Json to_json(const GaussianBand& band);
Json to_json(const BatteryReport& report);
Json to_json(const CapacitySolution& solution, bool with_optimizer = false);
Json to_json(const HarmonicCapacity& harmonic);
Json to_json(const EquivalenceReport& report);
Json to_json(const ExhaustionGreen& green);
Json to_json(const GreenBandReport& report);
Json to_json(const SmoothingCoefficients& coeffs);
Json to_json(const SandwichReport& report);
Json to_json(const StructureReport& report);
Json to_json(const GreenComparisonReport& report);

/// radius,ball_measure,sphere_count,sphere_measure
void write_profile_csv(std::ostream& out, const BallProfile& profile);
/// n,partial_sum
void write_checkpoints_csv(std::ostream& out, const SeriesVerdict& verdict);
/// d,p,expected,parabolic,parabolic_slope,sufficient,sufficient_slope,agrees
void write_battery_csv(std::ostream& out, const BatteryReport& report);

}  // namespace potlab
