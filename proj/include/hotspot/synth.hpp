#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "hotspot/ingest.hpp"

namespace hotspot::synth {

// xoshiro256** seeded through SplitMix64. Fixed algorithm, no
// platform-dependent distributions, so a seed yields the same stream on
// every platform and in every language that implements the same steps.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  // Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
};

struct SynthConfig {
  std::uint32_t grid_side = 20;
  std::uint32_t n_centers = 3;
  double concentration = 50.0;
  double decay_radius = 3.0;  // cells
  double noise = 0.1;
  std::uint64_t seed = 1;
  TimeWindow window{1384732800000, 1385337600000};  // 2013-11-18 .. 2013-11-25 UTC
  std::uint32_t records_per_cell = 24;

  // Strongest ordered pairs emitted to the interaction file.
  std::uint32_t top_pairs = 4096;
  double background = 1.0;
  // South-west corner and side length of a grid square, degrees.
  double origin_lon = 9.0;
  double origin_lat = 45.35;
  double cell_size_deg = 0.0025;
};

// Throws DomainError for an invalid config.
void validate(const SynthConfig& cfg);

// Key = value text with the field names above plus window_start /
// window_end (epoch ms or ISO dates). Unknown keys are errors.
SynthConfig parse_synth_config(std::string_view text);
SynthConfig load_synth_config(const std::filesystem::path& path);

struct SyntheticCity {
  SynthConfig config;
  std::vector<ingest::GridCell> grid;
  std::vector<double> base_intensity;  // per cell, id order (id = index + 1)
  std::vector<ingest::ActivityRecord> activity;
  std::vector<ingest::InteractionRecord> interactions;
};

// Per-cell intensity = (background + sum_c concentration *
// exp(-d_c^2 / decay_radius^2)) * (1 + noise * u), u ~ U(-1, 1), spread
// evenly over records_per_cell time slots. Pair strength u->v is
// I_u * I_v / (1 + grid distance), jittered per direction.
SyntheticCity generate_city(const SynthConfig& cfg);

struct CityFiles {
  std::filesystem::path activity;
  std::filesystem::path interactions;
  std::filesystem::path grid;
};

inline constexpr std::string_view kActivityFile = "activity.tsv";
inline constexpr std::string_view kInteractionsFile = "interactions.tsv";
inline constexpr std::string_view kGridFile = "grid.geojson";

// Writes the three ingest-format files into `dir` (created if needed).
CityFiles write_city(const SyntheticCity& city, const std::filesystem::path& dir,
                     const ingest::ColumnLayout& layout = {});

}  // namespace hotspot::synth
