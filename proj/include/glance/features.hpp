#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glance/binarize.hpp"
#include "glance/image.hpp"

namespace glance {

// Scalar features. All reject u == 0 with EmptyForeground.
auto ipf(std::size_t u, std::size_t total) -> double;
auto compactness(std::size_t u, std::size_t y) -> double;
auto scatterness(std::size_t u, std::size_t y) -> double;
auto porousness(std::size_t u, std::size_t w) -> double;
/// w / n_p, or nullopt without pores. Throws InconsistentCounts when
/// n_p == 0 but w > 0.
auto average_pore_area(std::size_t w, std::size_t n_p) -> std::optional<double>;

/// Counts are canonical; the fractions are derived from them.
struct FeatureRecord {
  std::string source_id;
  std::size_t rows = 0;
  std::size_t cols = 0;
  int threshold = 0;
  std::size_t u = 0;
  std::size_t z = 0;
  std::size_t y = 0;
  std::size_t w = 0;
  std::size_t n_p = 0;
  double ipf = 0.0;
  double c = 0.0;
  double s = 0.0;
  double p = 0.0;
  std::optional<double> w_avg;

  friend auto operator==(const FeatureRecord &, const FeatureRecord &) -> bool = default;
};

struct FeatureCounts {
  std::size_t rows;
  std::size_t cols;
  int threshold;
  std::size_t u;
  std::size_t y;
  std::size_t w;
  std::size_t n_p;
};

/// Builds a record from raw counts (z = rows * cols - u), checking
/// w <= y <= z.
auto make_record(std::string source_id, const FeatureCounts &counts) -> FeatureRecord;

/// binarize -> label_pores -> row_tabulation -> formulas.
auto extract(const GrayImage &img, const ThresholdConfig &cfg, std::string source_id) -> FeatureRecord;
auto extract(const BinaryImage &bin, std::string source_id) -> FeatureRecord;

enum class Combo { C1, C2, C3, C4 };

enum class Field { Ipf, Compactness, Scatterness, Porousness, PoreArea, PoreCount, AveragePoreArea };

auto combo_fields(Combo which) -> std::vector<Field>;
auto parse_combo(std::string_view name) -> Combo;
/// Accepts a preset name (C1..C4) or a comma list of field names
/// (ipf, c, s, p, w, n_p, w_avg).
auto parse_fields(std::string_view spec) -> std::vector<Field>;
auto field_name(Field f) -> std::string_view;
auto field_value(const FeatureRecord &rec, Field f) -> double;
auto select_fields(const FeatureRecord &rec, std::span<const Field> fields) -> std::vector<double>;

/// C1 (IPF, C, w); C2 adds n_p; C3 adds P; C4 adds n_p then P.
auto combo(const FeatureRecord &rec, Combo which) -> std::vector<double>;

inline constexpr double kDefaultAnomalyFactor = 5.0;

struct SeriesReport {
  std::vector<FeatureRecord> records; ///< sorted by source_id
  std::vector<bool> flags;
  double anomaly_factor = kDefaultAnomalyFactor;
};

/// Flags slices whose average pore area exceeds k times the median of the
/// present averages. Slices without pores never flag. Needs >= 3 slices.
auto flag_anomalies(std::vector<FeatureRecord> series, double k = kDefaultAnomalyFactor) -> SeriesReport;

// Output formats.
auto features_csv_header() -> std::string;
auto features_csv_row(const FeatureRecord &rec) -> std::string;
auto features_csv(std::span<const FeatureRecord> records) -> std::string;
auto features_json(std::span<const FeatureRecord> records) -> std::string;
auto series_csv(const SeriesReport &report) -> std::string;

} // namespace glance
