#include "glance/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "glance/error.hpp"
#include "glance/rng.hpp"

namespace glance {

namespace {

class Canvas {
public:
  Canvas(std::size_t rows, std::size_t cols, std::uint8_t background, std::uint8_t foreground)
      : rows_(rows), cols_(cols), fg_(foreground), bg_(background), px_(rows * cols, background)
  {
  }

  void fill(std::size_t top, std::size_t left, std::size_t height, std::size_t width, bool foreground = true)
  {
    for (std::size_t r = top; r < top + height; ++r) {
      std::fill_n(px_.begin() + static_cast<std::ptrdiff_t>(r * cols_ + left), width, foreground ? fg_ : bg_);
    }
  }

  void outline(std::size_t top, std::size_t left, std::size_t height, std::size_t width, std::size_t thickness)
  {
    fill(top, left, height, width);
    fill(top + thickness, left + thickness, height - 2 * thickness, width - 2 * thickness, false);
  }

  void dot(std::size_t r, std::size_t c) { px_[r * cols_ + c] = fg_; }

  auto image() && -> GrayImage { return GrayImage(rows_, cols_, std::move(px_)); }

private:
  std::size_t rows_;
  std::size_t cols_;
  std::uint8_t fg_;
  std::uint8_t bg_;
  std::vector<std::uint8_t> px_;
};

[[noreturn]] void out_of_bounds(const std::string &what)
{
  throw Error(ErrorCode::SpecOutOfBounds, what);
}

void check_box(const PhantomSpec &s)
{
  if (s.canvas_rows == 0 || s.canvas_cols == 0) {
    out_of_bounds("canvas must be non-empty");
  }
  if (s.height == 0 || s.width == 0) {
    out_of_bounds("shape must be non-empty");
  }
  if (s.top + s.height > s.canvas_rows || s.left + s.width > s.canvas_cols) {
    out_of_bounds(fmt::format("{}x{} shape at ({}, {}) exceeds {}x{} canvas", s.height, s.width, s.top, s.left,
                              s.canvas_rows, s.canvas_cols));
  }
}

void check_levels(const PhantomSpec &s)
{
  if (s.background_level >= s.foreground_level) {
    out_of_bounds("background level must be darker than foreground level");
  }
}

auto record_for(const PhantomSpec &s, std::string id, std::size_t u, std::size_t y, std::size_t w,
                std::size_t n_p) -> FeatureRecord
{
  return make_record(std::move(id), {s.canvas_rows, s.canvas_cols, s.background_level, u, y, w, n_p});
}

auto make_rect(const PhantomSpec &s) -> Phantom
{
  check_box(s);
  const std::size_t area = s.height * s.width;
  if (area == s.canvas_rows * s.canvas_cols) {
    out_of_bounds("solid rectangle covers the whole canvas; no background to threshold against");
  }
  Canvas canvas(s.canvas_rows, s.canvas_cols, s.background_level, s.foreground_level);
  canvas.fill(s.top, s.left, s.height, s.width);
  return {std::move(canvas).image(), record_for(s, "rect", area, 0, 0, 0)};
}

auto make_rect_with_hole(const PhantomSpec &s, std::string id = "rect_with_hole") -> Phantom
{
  check_box(s);
  if (s.hole_height == 0 || s.hole_width == 0 || s.hole_top < 1 || s.hole_left < 1 ||
      s.hole_top + s.hole_height + 1 > s.height || s.hole_left + s.hole_width + 1 > s.width) {
    out_of_bounds("hole must lie strictly inside its rectangle");
  }
  Canvas canvas(s.canvas_rows, s.canvas_cols, s.background_level, s.foreground_level);
  canvas.fill(s.top, s.left, s.height, s.width);
  canvas.fill(s.top + s.hole_top, s.left + s.hole_left, s.hole_height, s.hole_width, false);
  const std::size_t hole = s.hole_height * s.hole_width;
  // each hole row is flanked by rectangle pixels, so every hole pixel is
  // scatter, and the solid frame seals it from the border
  return {std::move(canvas).image(), record_for(s, std::move(id), s.height * s.width - hole, hole, hole, 1)};
}

auto make_ring(const PhantomSpec &s, std::string id = "ring") -> Phantom
{
  check_box(s);
  if (s.height < 3 || s.width < 3) {
    out_of_bounds("ring needs at least a 3x3 outline to enclose anything");
  }
  Canvas canvas(s.canvas_rows, s.canvas_cols, s.background_level, s.foreground_level);
  canvas.outline(s.top, s.left, s.height, s.width, 1);
  const std::size_t interior = (s.height - 2) * (s.width - 2);
  const std::size_t outline = 2 * s.width + 2 * (s.height - 2);
  return {std::move(canvas).image(), record_for(s, std::move(id), outline, interior, interior, 1)};
}

auto make_dots(const PhantomSpec &s) -> Phantom
{
  if (s.canvas_rows == 0 || s.canvas_cols == 0 || s.dot_rows == 0 || s.dot_cols == 0) {
    out_of_bounds("dot grid must be non-empty");
  }
  if (s.spacing < 2) {
    out_of_bounds("dot spacing must be at least 2");
  }
  if (s.top + (s.dot_rows - 1) * s.spacing >= s.canvas_rows ||
      s.left + (s.dot_cols - 1) * s.spacing >= s.canvas_cols) {
    out_of_bounds("dot grid exceeds canvas");
  }
  const std::size_t dots = s.dot_rows * s.dot_cols;
  if (dots == s.canvas_rows * s.canvas_cols) {
    out_of_bounds("dots cover the whole canvas");
  }
  Canvas canvas(s.canvas_rows, s.canvas_cols, s.background_level, s.foreground_level);
  for (std::size_t i = 0; i < s.dot_rows; ++i) {
    for (std::size_t j = 0; j < s.dot_cols; ++j) {
      canvas.dot(s.top + i * s.spacing, s.left + j * s.spacing);
    }
  }
  // every gap lies on a dot row and touches an all-background row or the
  // border, so nothing is enclosed
  const std::size_t scatter = s.dot_rows * (s.dot_cols - 1) * (s.spacing - 1);
  return {std::move(canvas).image(), record_for(s, "scatter_dots", dots, scatter, 0, 0)};
}

auto slice_spec(const PhantomSpec &series, std::size_t index) -> PhantomSpec
{
  PhantomSpec s;
  s.canvas_rows = 64;
  s.canvas_cols = 64;
  s.background_level = series.background_level;
  s.foreground_level = series.foreground_level;

  if (series.faulty_slice && *series.faulty_slice == index) {
    s.kind = PhantomKind::Ring;
    s.height = 44;
    s.width = 44;
    s.top = 10;
    s.left = 10;
    return s;
  }

  Rng rng(series.seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
  const double phase = (static_cast<double>(index) + 0.5) / static_cast<double>(series.series_length);
  const auto swell = static_cast<int>(std::lround(16.0 * std::sin(std::numbers::pi * phase)));
  const int height = 20 + swell + rng.between(-1, 1);
  const int width = 24 + swell + rng.between(-1, 1);
  s.kind = PhantomKind::RectWithHole;
  s.height = static_cast<std::size_t>(height);
  s.width = static_cast<std::size_t>(width);
  s.top = (64 - s.height) / 2;
  s.left = (64 - s.width) / 2;
  s.hole_height = static_cast<std::size_t>(rng.between(2, 4));
  s.hole_width = static_cast<std::size_t>(rng.between(2, 4));
  s.hole_top = (s.height - s.hole_height) / 2;
  s.hole_left = (s.width - s.hole_width) / 2;
  return s;
}

auto make_slice(const PhantomSpec &series, std::size_t index) -> Phantom
{
  if (series.series_length < 1 || index >= series.series_length) {
    out_of_bounds(fmt::format("slice {} outside series of length {}", index, series.series_length));
  }
  if (series.faulty_slice && *series.faulty_slice >= series.series_length) {
    out_of_bounds("faulty slice index outside series");
  }
  const PhantomSpec s = slice_spec(series, index);
  std::string id = fmt::format("slice_{:03}", index);
  return s.kind == PhantomKind::Ring ? make_ring(s, std::move(id)) : make_rect_with_hole(s, std::move(id));
}

} // namespace

auto PhantomSpec::rect(std::size_t canvas_rows, std::size_t canvas_cols, std::size_t top, std::size_t left,
                       std::size_t height, std::size_t width) -> PhantomSpec
{
  PhantomSpec s;
  s.kind = PhantomKind::Rect;
  s.canvas_rows = canvas_rows;
  s.canvas_cols = canvas_cols;
  s.top = top;
  s.left = left;
  s.height = height;
  s.width = width;
  return s;
}

auto PhantomSpec::rect_with_hole(std::size_t canvas_rows, std::size_t canvas_cols, std::size_t height,
                                 std::size_t width, std::size_t hole_height, std::size_t hole_width) -> PhantomSpec
{
  PhantomSpec s = rect(canvas_rows, canvas_cols, 0, 0, height, width);
  s.kind = PhantomKind::RectWithHole;
  if (height <= canvas_rows && width <= canvas_cols) {
    s.top = (canvas_rows - height) / 2;
    s.left = (canvas_cols - width) / 2;
  }
  s.hole_height = hole_height;
  s.hole_width = hole_width;
  if (hole_height <= height && hole_width <= width) {
    s.hole_top = (height - hole_height) / 2;
    s.hole_left = (width - hole_width) / 2;
  }
  return s;
}

auto PhantomSpec::ring(std::size_t canvas_rows, std::size_t canvas_cols, std::size_t top, std::size_t left,
                       std::size_t height, std::size_t width) -> PhantomSpec
{
  PhantomSpec s = rect(canvas_rows, canvas_cols, top, left, height, width);
  s.kind = PhantomKind::Ring;
  return s;
}

auto PhantomSpec::scatter_dots(std::size_t canvas_rows, std::size_t canvas_cols, std::size_t top, std::size_t left,
                               std::size_t dot_rows, std::size_t dot_cols, std::size_t spacing) -> PhantomSpec
{
  PhantomSpec s;
  s.kind = PhantomKind::ScatterDots;
  s.canvas_rows = canvas_rows;
  s.canvas_cols = canvas_cols;
  s.top = top;
  s.left = left;
  s.dot_rows = dot_rows;
  s.dot_cols = dot_cols;
  s.spacing = spacing;
  return s;
}

auto PhantomSpec::slice_series(std::size_t length, std::optional<std::size_t> faulty_slice, std::uint64_t seed)
    -> PhantomSpec
{
  PhantomSpec s;
  s.kind = PhantomKind::SliceSeries;
  s.series_length = length;
  s.faulty_slice = faulty_slice;
  s.seed = seed;
  return s;
}

auto generate(const PhantomSpec &spec) -> Phantom
{
  check_levels(spec);
  switch (spec.kind) {
  case PhantomKind::Rect: return make_rect(spec);
  case PhantomKind::RectWithHole: return make_rect_with_hole(spec);
  case PhantomKind::Ring: return make_ring(spec);
  case PhantomKind::ScatterDots: return make_dots(spec);
  case PhantomKind::SliceSeries: return make_slice(spec, spec.slice);
  }
  out_of_bounds("unknown phantom kind");
}

auto generate_series(const PhantomSpec &spec) -> std::vector<Phantom>
{
  check_levels(spec);
  if (spec.kind != PhantomKind::SliceSeries) {
    out_of_bounds("generate_series needs a SliceSeries spec");
  }
  std::vector<Phantom> out;
  out.reserve(spec.series_length);
  for (std::size_t i = 0; i < spec.series_length; ++i) {
    out.push_back(make_slice(spec, i));
  }
  return out;
}

auto class_names(ClassScheme scheme) -> std::vector<std::string>
{
  if (scheme == ClassScheme::Two) {
    return {"WITH_EYES", "WITHOUT_EYES"};
  }
  return {"EYES", "BRAIN_NO_EYES", "NO_BRAIN"};
}

namespace {

constexpr std::size_t kSide = 64;
constexpr std::uint8_t kBackground = 40;
constexpr std::uint8_t kForeground = 200;

auto as_size(int v) -> std::size_t
{
  return static_cast<std::size_t>(v);
}

auto paint_eyes(Rng &rng) -> GrayImage
{
  Canvas canvas(kSide, kSide, kBackground, kForeground);
  const int bh = rng.between(20, 26);
  const int bw = rng.between(30, 42);
  const int top = rng.between(3, 6);
  const int left = (64 - bw) / 2 + rng.between(-2, 2);
  canvas.fill(as_size(top), as_size(left), as_size(bh), as_size(bw));
  canvas.fill(as_size(top + bh / 2 - 1), as_size(left + bw / 2 - 1), 2, 2, false);

  const int eye = rng.between(8, 11);
  const int eye_top = top + bh + rng.between(2, 4);
  const int left_eye = 32 - rng.between(3, 6) - eye;
  const int right_eye = 32 + rng.between(3, 6);
  canvas.outline(as_size(eye_top), as_size(left_eye), as_size(eye), as_size(eye), 1);
  canvas.outline(as_size(eye_top + rng.between(-1, 1)), as_size(right_eye), as_size(eye), as_size(eye), 1);
  return std::move(canvas).image();
}

auto paint_brain(Rng &rng) -> GrayImage
{
  Canvas canvas(kSide, kSide, kBackground, kForeground);
  const int bh = rng.between(36, 46);
  const int bw = rng.between(36, 48);
  const int top = (64 - bh) / 2 + rng.between(-3, 3);
  const int left = (64 - bw) / 2 + rng.between(-3, 3);
  canvas.fill(as_size(top), as_size(left), as_size(bh), as_size(bw));

  // one small hole per vertical band, away from the band edges
  const int holes = rng.between(1, 3);
  const int band = bw / 3;
  for (int i = 0; i < holes; ++i) {
    const int hh = rng.between(1, 2);
    const int hr = top + rng.between(3, bh - 3 - hh);
    const int hc = left + i * band + rng.between(3, band - 5);
    canvas.fill(as_size(hr), as_size(hc), as_size(hh), 2, false);
  }
  return std::move(canvas).image();
}

auto paint_no_brain(Rng &rng) -> GrayImage
{
  Canvas canvas(kSide, kSide, kBackground, kForeground);
  const int side = rng.between(34, 46);
  const int thickness = rng.between(1, 2);
  const int top = (64 - side) / 2 + rng.between(-3, 3);
  const int left = (64 - side) / 2 + rng.between(-3, 3);
  canvas.outline(as_size(top), as_size(left), as_size(side), as_size(side), as_size(thickness));
  return std::move(canvas).image();
}

} // namespace

auto generate_dataset_images(std::size_t n_per_class, std::uint64_t seed) -> std::vector<LabeledImage>
{
  if (n_per_class < 10) {
    throw Error(ErrorCode::DatasetTooSmall, fmt::format("need at least 10 items per class, got {}", n_per_class));
  }
  static constexpr std::string_view prefixes[] = {"eyes", "brain", "nobrain"};
  Rng rng(seed);
  std::vector<LabeledImage> out;
  out.reserve(3 * n_per_class);
  for (std::size_t label = 0; label < 3; ++label) {
    for (std::size_t i = 0; i < n_per_class; ++i) {
      GrayImage img = label == 0 ? paint_eyes(rng) : label == 1 ? paint_brain(rng) : paint_no_brain(rng);
      out.push_back({fmt::format("{}_{:03}", prefixes[label], i), std::move(img), label});
    }
  }
  return out;
}

auto generate_dataset(std::size_t n_per_class, std::uint64_t seed, ClassScheme scheme) -> LabeledDataset
{
  LabeledDataset ds;
  ds.class_names = class_names(ClassScheme::Three);
  for (auto &item : generate_dataset_images(n_per_class, seed)) {
    ds.items.push_back({extract(item.image, ThresholdConfig::otsu(), item.id), item.label});
  }
  return scheme == ClassScheme::Two ? to_two_class(ds) : ds;
}

auto to_two_class(const LabeledDataset &three) -> LabeledDataset
{
  LabeledDataset two;
  two.class_names = class_names(ClassScheme::Two);
  two.items.reserve(three.items.size());
  for (const auto &item : three.items) {
    two.items.push_back({item.record, item.label == 0 ? std::size_t{0} : std::size_t{1}});
  }
  return two;
}

} // namespace glance
