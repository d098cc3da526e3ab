#include "hotspot/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <tuple>

#include "hotspot/error.hpp"
#include "hotspot/io.hpp"

namespace hotspot::synth {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

// Share of a record's traffic per field: sms_in, sms_out, call_in, call_out, internet.
constexpr std::array<double, 5> kFieldShare = {0.05, 0.05, 0.1, 0.1, 0.7};
constexpr int kCountryCode = 39;

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) noexcept {
  for (auto& word : s_) word = splitmix64(seed);
}

std::uint64_t Xoshiro256::next() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

void validate(const SynthConfig& cfg) {
  const auto fail = [](const std::string& what) { throw DomainError("synth config: " + what); };
  if (cfg.grid_side == 0) fail("grid_side must be positive");
  if (cfg.grid_side > 128) fail("grid_side must be at most 128");
  if (!(cfg.concentration >= 0.0) || !std::isfinite(cfg.concentration)) fail("concentration must be >= 0");
  if (!(cfg.decay_radius > 0.0) || !std::isfinite(cfg.decay_radius)) fail("decay_radius must be > 0");
  if (!(cfg.noise >= 0.0) || !std::isfinite(cfg.noise)) fail("noise must be >= 0");
  if (cfg.records_per_cell == 0) fail("records_per_cell must be positive");
  if (!(cfg.background > 0.0) || !std::isfinite(cfg.background)) fail("background must be > 0");
  if (!(cfg.cell_size_deg > 0.0)) fail("cell_size_deg must be > 0");
  if (cfg.window.is_unbounded()) fail("window must be bounded");
}

SynthConfig parse_synth_config(std::string_view text) {
  SynthConfig cfg;
  std::optional<EpochMillis> start, end;

  const auto as_u64 = [](std::string_view v, std::size_t line, std::string_view key) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
      throw ParseError(line, std::string(key) + " must be a nonnegative integer");
    }
    return out;
  };
  const auto as_u32 = [&](std::string_view v, std::size_t line, std::string_view key) {
    const auto out = as_u64(v, line, key);
    if (out > 0xFFFFFFFFULL) throw ParseError(line, std::string(key) + " is out of range");
    return static_cast<std::uint32_t>(out);
  };
  const auto as_double = [](std::string_view v, std::size_t line, std::string_view key) {
    const auto out = io::parse_double(v);
    if (!out) throw ParseError(line, std::string(key) + " must be a number");
    return *out;
  };

  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
      return s;
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));

    if (key == "grid_side") cfg.grid_side = as_u32(value, line_no, key);
    else if (key == "n_centers") cfg.n_centers = as_u32(value, line_no, key);
    else if (key == "concentration") cfg.concentration = as_double(value, line_no, key);
    else if (key == "decay_radius") cfg.decay_radius = as_double(value, line_no, key);
    else if (key == "noise") cfg.noise = as_double(value, line_no, key);
    else if (key == "seed") cfg.seed = as_u64(value, line_no, key);
    else if (key == "records_per_cell") cfg.records_per_cell = as_u32(value, line_no, key);
    else if (key == "top_pairs") cfg.top_pairs = as_u32(value, line_no, key);
    else if (key == "background") cfg.background = as_double(value, line_no, key);
    else if (key == "origin_lon") cfg.origin_lon = as_double(value, line_no, key);
    else if (key == "origin_lat") cfg.origin_lat = as_double(value, line_no, key);
    else if (key == "cell_size_deg") cfg.cell_size_deg = as_double(value, line_no, key);
    else if (key == "window_start") start = parse_timestamp(std::string(value));
    else if (key == "window_end") end = parse_timestamp(std::string(value));
    else throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
  }
  if (start || end) {
    cfg.window = TimeWindow(start.value_or(cfg.window.start()), end.value_or(cfg.window.end()));
  }
  validate(cfg);
  return cfg;
}

SynthConfig load_synth_config(const std::filesystem::path& path) {
  return parse_synth_config(io::read_file(path));
}

SyntheticCity generate_city(const SynthConfig& cfg) {
  validate(cfg);
  Xoshiro256 rng(cfg.seed);
  const std::uint32_t side = cfg.grid_side;
  const std::size_t n_cells = static_cast<std::size_t>(side) * side;

  SyntheticCity city;
  city.config = cfg;

  std::vector<std::pair<double, double>> centers(cfg.n_centers);
  for (auto& [cx, cy] : centers) {
    cx = rng.uniform() * side;
    cy = rng.uniform() * side;
  }

  const double r2 = cfg.decay_radius * cfg.decay_radius;
  city.base_intensity.resize(n_cells);
  city.grid.reserve(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) {
    const double col = static_cast<double>(i % side);
    const double row = static_cast<double>(i / side);
    double peak = 0.0;
    for (const auto& [cx, cy] : centers) {
      const double dx = col + 0.5 - cx;
      const double dy = row + 0.5 - cy;
      peak += cfg.concentration * std::exp(-(dx * dx + dy * dy) / r2);
    }
    const double jitter = std::max(0.0, 1.0 + cfg.noise * (2.0 * rng.uniform() - 1.0));
    city.base_intensity[i] = (cfg.background + peak) * jitter;

    const double lon0 = cfg.origin_lon + col * cfg.cell_size_deg;
    const double lat0 = cfg.origin_lat + row * cfg.cell_size_deg;
    const double lon1 = lon0 + cfg.cell_size_deg;
    const double lat1 = lat0 + cfg.cell_size_deg;
    city.grid.push_back({static_cast<CellId>(i + 1),
                         {{lon0, lat0}, {lon1, lat0}, {lon1, lat1}, {lon0, lat1}, {lon0, lat0}}});
  }

  // Evenly spaced slot timestamps inside the window.
  const std::uint32_t slots = cfg.records_per_cell;
  std::vector<EpochMillis> stamps(slots);
  const __int128 span = static_cast<__int128>(cfg.window.end()) - cfg.window.start();
  for (std::uint32_t j = 0; j < slots; ++j) {
    stamps[j] = static_cast<EpochMillis>(cfg.window.start() + (span * (2 * j + 1)) / (2 * slots));
  }

  city.activity.reserve(n_cells * slots);
  for (std::size_t i = 0; i < n_cells; ++i) {
    const double per_record = city.base_intensity[i] / slots;
    for (std::uint32_t j = 0; j < slots; ++j) {
      ingest::ActivityRecord r;
      r.cell_id = static_cast<CellId>(i + 1);
      r.timestamp = stamps[j];
      r.country_code = kCountryCode;
      r.sms_in = per_record * kFieldShare[0];
      r.sms_out = per_record * kFieldShare[1];
      r.call_in = per_record * kFieldShare[2];
      r.call_out = per_record * kFieldShare[3];
      r.internet = per_record * kFieldShare[4];
      city.activity.push_back(r);
    }
  }

  struct Pair {
    double strength;
    std::uint32_t src;
    std::uint32_t dst;
  };
  const auto stronger = [](const Pair& a, const Pair& b) {
    if (a.strength != b.strength) return a.strength > b.strength;
    return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
  };
  // Bounded selection: the queue top is the weakest pair kept so far.
  std::priority_queue<Pair, std::vector<Pair>, decltype(stronger)> kept(stronger);
  for (std::size_t u = 0; u < n_cells; ++u) {
    for (std::size_t v = 0; v < n_cells; ++v) {
      if (u == v) continue;
      const double dx = static_cast<double>(u % side) - static_cast<double>(v % side);
      const double dy = static_cast<double>(u / side) - static_cast<double>(v / side);
      const double gravity =
          city.base_intensity[u] * city.base_intensity[v] / (1.0 + std::sqrt(dx * dx + dy * dy));
      const double jitter = std::max(0.0, 1.0 + cfg.noise * (2.0 * rng.uniform() - 1.0));
      const Pair pair{gravity * jitter, static_cast<std::uint32_t>(u + 1),
                      static_cast<std::uint32_t>(v + 1)};
      if (!(pair.strength > 0.0) || cfg.top_pairs == 0) continue;
      if (kept.size() < cfg.top_pairs) {
        kept.push(pair);
      } else if (stronger(pair, kept.top())) {
        kept.pop();
        kept.push(pair);
      }
    }
  }
  std::vector<Pair> pairs;
  pairs.reserve(kept.size());
  for (; !kept.empty(); kept.pop()) pairs.push_back(kept.top());
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& a, const Pair& b) { return std::tie(a.src, a.dst) < std::tie(b.src, b.dst); });

  city.interactions.reserve(pairs.size() * slots);
  for (const auto& p : pairs) {
    const double per_record = p.strength / slots;
    for (std::uint32_t j = 0; j < slots; ++j) {
      city.interactions.push_back({p.src, p.dst, stamps[j], per_record});
    }
  }
  return city;
}

CityFiles write_city(const SyntheticCity& city, const std::filesystem::path& dir,
                     const ingest::ColumnLayout& layout) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "'");

  CityFiles files{dir / kActivityFile, dir / kInteractionsFile, dir / kGridFile};

  std::string text;
  for (const auto& r : city.activity) {
    text += ingest::format_activity_line(r, layout);
    text += '\n';
  }
  io::write_file_atomic(files.activity, text);

  text.clear();
  for (const auto& r : city.interactions) {
    text += ingest::format_interaction_line(r, layout);
    text += '\n';
  }
  io::write_file_atomic(files.interactions, text);

  io::write_file_atomic(files.grid, ingest::format_grid(city.grid));
  return files;
}

}  // namespace hotspot::synth
