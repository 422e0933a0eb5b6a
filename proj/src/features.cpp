#include "glance/features.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "glance/error.hpp"
#include "glance/pores.hpp"
#include "glance/tabulate.hpp"

namespace glance {

namespace {

void require_foreground(std::size_t u)
{
  if (u == 0) {
    throw Error(ErrorCode::EmptyForeground, "u = 0: image carries no foreground information");
  }
}

auto ratio(std::size_t num, std::size_t den) -> double
{
  return static_cast<double>(num) / static_cast<double>(den);
}

auto fixed6(double v) -> std::string
{
  return fmt::format("{:.6f}", v);
}

} // namespace

auto ipf(std::size_t u, std::size_t total) -> double
{
  require_foreground(u);
  if (total < u) {
    throw Error(ErrorCode::InconsistentCounts, fmt::format("image size {} smaller than u = {}", total, u));
  }
  return ratio(u, total);
}

auto compactness(std::size_t u, std::size_t y) -> double
{
  require_foreground(u);
  return ratio(u, u + y);
}

auto scatterness(std::size_t u, std::size_t y) -> double
{
  require_foreground(u);
  return ratio(y, u + y);
}

auto porousness(std::size_t u, std::size_t w) -> double
{
  require_foreground(u);
  return ratio(w, u + w);
}

auto average_pore_area(std::size_t w, std::size_t n_p) -> std::optional<double>
{
  if (n_p == 0) {
    if (w > 0) {
      throw Error(ErrorCode::InconsistentCounts, fmt::format("pore area {} with zero pores", w));
    }
    return std::nullopt;
  }
  return ratio(w, n_p);
}

auto make_record(std::string source_id, const FeatureCounts &k) -> FeatureRecord
{
  const std::size_t total = k.rows * k.cols;
  require_foreground(k.u);
  if (k.u > total) {
    throw Error(ErrorCode::InconsistentCounts, fmt::format("u = {} exceeds image size {}", k.u, total));
  }
  const std::size_t z = total - k.u;
  if (k.w > k.y || k.y > z) {
    throw Error(ErrorCode::InconsistentCounts,
                fmt::format("counts violate w <= y <= z (w = {}, y = {}, z = {})", k.w, k.y, z));
  }

  FeatureRecord rec;
  rec.source_id = std::move(source_id);
  rec.rows = k.rows;
  rec.cols = k.cols;
  rec.threshold = k.threshold;
  rec.u = k.u;
  rec.z = z;
  rec.y = k.y;
  rec.w = k.w;
  rec.n_p = k.n_p;
  rec.ipf = ipf(k.u, total);
  rec.c = compactness(k.u, k.y);
  rec.s = scatterness(k.u, k.y);
  rec.p = porousness(k.u, k.w);
  rec.w_avg = average_pore_area(k.w, k.n_p);
  return rec;
}

auto extract(const BinaryImage &bin, std::string source_id) -> FeatureRecord
{
  const PoreMap pores = label_pores(bin);
  const RowTabulation tab = row_tabulation(bin, pores);
  return make_record(std::move(source_id), {bin.rows(), bin.cols(), bin.threshold(), tab.totals.foreground,
                                            tab.totals.scatter, tab.totals.pore, pores.count()});
}

auto extract(const GrayImage &img, const ThresholdConfig &cfg, std::string source_id) -> FeatureRecord
{
  return extract(binarize(img, cfg), std::move(source_id));
}

auto combo_fields(Combo which) -> std::vector<Field>
{
  using enum Field;
  switch (which) {
  case Combo::C1: return {Ipf, Compactness, PoreArea};
  case Combo::C2: return {Ipf, Compactness, PoreArea, PoreCount};
  case Combo::C3: return {Ipf, Compactness, PoreArea, Porousness};
  case Combo::C4: return {Ipf, Compactness, PoreArea, PoreCount, Porousness};
  }
  return {};
}

auto parse_combo(std::string_view name) -> Combo
{
  if (name == "C1" || name == "c1") {
    return Combo::C1;
  }
  if (name == "C2" || name == "c2") {
    return Combo::C2;
  }
  if (name == "C3" || name == "c3") {
    return Combo::C3;
  }
  if (name == "C4" || name == "c4") {
    return Combo::C4;
  }
  throw Error(ErrorCode::InvalidArgument, fmt::format("unknown combination '{}'", name));
}

auto field_name(Field f) -> std::string_view
{
  switch (f) {
  case Field::Ipf: return "ipf";
  case Field::Compactness: return "c";
  case Field::Scatterness: return "s";
  case Field::Porousness: return "p";
  case Field::PoreArea: return "w";
  case Field::PoreCount: return "n_p";
  case Field::AveragePoreArea: return "w_avg";
  }
  return "?";
}

auto parse_fields(std::string_view spec) -> std::vector<Field>
{
  if (spec.size() == 2 && (spec[0] == 'C' || spec[0] == 'c') && spec[1] >= '1' && spec[1] <= '4') {
    return combo_fields(parse_combo(spec));
  }
  static constexpr Field all[] = {Field::Ipf,      Field::Compactness, Field::Scatterness,    Field::Porousness,
                                  Field::PoreArea, Field::PoreCount,   Field::AveragePoreArea};
  std::vector<Field> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', start), spec.size());
    const std::string_view token = spec.substr(start, comma - start);
    const auto *it = std::find_if(std::begin(all), std::end(all), [&](Field f) { return field_name(f) == token; });
    if (it == std::end(all)) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("unknown feature field '{}'", token));
    }
    out.push_back(*it);
    start = comma + 1;
  }
  return out;
}

auto field_value(const FeatureRecord &rec, Field f) -> double
{
  switch (f) {
  case Field::Ipf: return rec.ipf;
  case Field::Compactness: return rec.c;
  case Field::Scatterness: return rec.s;
  case Field::Porousness: return rec.p;
  case Field::PoreArea: return static_cast<double>(rec.w);
  case Field::PoreCount: return static_cast<double>(rec.n_p);
  case Field::AveragePoreArea: return rec.w_avg.value_or(0.0);
  }
  return 0.0;
}

auto select_fields(const FeatureRecord &rec, std::span<const Field> fields) -> std::vector<double>
{
  std::vector<double> out;
  out.reserve(fields.size());
  for (const auto f : fields) {
    out.push_back(field_value(rec, f));
  }
  return out;
}

auto combo(const FeatureRecord &rec, Combo which) -> std::vector<double>
{
  return select_fields(rec, combo_fields(which));
}

auto flag_anomalies(std::vector<FeatureRecord> series, double k) -> SeriesReport
{
  if (series.size() < 3) {
    throw Error(ErrorCode::SeriesTooShort, fmt::format("series has {} slice(s), need at least 3", series.size()));
  }
  std::stable_sort(series.begin(), series.end(),
                   [](const FeatureRecord &a, const FeatureRecord &b) { return a.source_id < b.source_id; });

  std::vector<double> present;
  for (const auto &rec : series) {
    if (rec.w_avg) {
      present.push_back(*rec.w_avg);
    }
  }

  SeriesReport report;
  report.anomaly_factor = k;
  report.flags.assign(series.size(), false);
  if (!present.empty()) {
    std::sort(present.begin(), present.end());
    const std::size_t mid = present.size() / 2;
    const double median = present.size() % 2 == 1 ? present[mid] : 0.5 * (present[mid - 1] + present[mid]);
    const double cutoff = k * median;
    for (std::size_t i = 0; i < series.size(); ++i) {
      report.flags[i] = series[i].w_avg.has_value() && *series[i].w_avg > cutoff;
    }
  }
  report.records = std::move(series);
  return report;
}

auto features_csv_header() -> std::string
{
  return "source_id,rows,cols,threshold,u,z,y,w,n_p,ipf,c,s,p,w_avg\n";
}

auto features_csv_row(const FeatureRecord &r) -> std::string
{
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.source_id, r.rows, r.cols, r.threshold, r.u,
                     r.z, r.y, r.w, r.n_p, fixed6(r.ipf), fixed6(r.c), fixed6(r.s), fixed6(r.p),
                     r.w_avg ? fixed6(*r.w_avg) : std::string());
}

auto features_csv(std::span<const FeatureRecord> records) -> std::string
{
  std::string out = features_csv_header();
  for (const auto &r : records) {
    out += features_csv_row(r);
  }
  return out;
}

auto features_json(std::span<const FeatureRecord> records) -> std::string
{
  auto doc = nlohmann::ordered_json::array();
  for (const auto &r : records) {
    nlohmann::ordered_json j;
    j["source_id"] = r.source_id;
    j["rows"] = r.rows;
    j["cols"] = r.cols;
    j["threshold"] = r.threshold;
    j["u"] = r.u;
    j["z"] = r.z;
    j["y"] = r.y;
    j["w"] = r.w;
    j["n_p"] = r.n_p;
    j["ipf"] = r.ipf;
    j["c"] = r.c;
    j["s"] = r.s;
    j["p"] = r.p;
    j["w_avg"] = r.w_avg ? nlohmann::ordered_json(*r.w_avg) : nlohmann::ordered_json(nullptr);
    doc.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

auto series_csv(const SeriesReport &report) -> std::string
{
  std::string out = "slice_id,ipf,c,p,w_avg,flagged\n";
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto &r = report.records[i];
    out += fmt::format("{},{},{},{},{},{}\n", r.source_id, fixed6(r.ipf), fixed6(r.c), fixed6(r.p),
                       r.w_avg ? fixed6(*r.w_avg) : std::string(), report.flags[i] ? 1 : 0);
  }
  return out;
}

} // namespace glance
