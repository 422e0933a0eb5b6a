#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glance/features.hpp"
#include "glance/image.hpp"

namespace glance {

enum class PhantomKind { Rect, RectWithHole, ScatterDots, Ring, SliceSeries };

/// Geometry of a synthetic test image. Rectangle fields describe the outer
/// box for Rect/RectWithHole/Ring; hole offsets are relative to that box.
/// ScatterDots places dot_rows x dot_cols single pixels starting at
/// (top, left), `spacing` pixels apart.
struct PhantomSpec {
  PhantomKind kind = PhantomKind::Rect;
  std::size_t canvas_rows = 64;
  std::size_t canvas_cols = 64;
  std::size_t top = 0;
  std::size_t left = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t hole_top = 0;
  std::size_t hole_left = 0;
  std::size_t hole_height = 0;
  std::size_t hole_width = 0;
  std::size_t dot_rows = 0;
  std::size_t dot_cols = 0;
  std::size_t spacing = 2;
  std::size_t series_length = 0;
  std::optional<std::size_t> faulty_slice;
  std::size_t slice = 0;
  std::uint64_t seed = 0;
  std::uint8_t background_level = 40;
  std::uint8_t foreground_level = 200;

  static auto rect(std::size_t canvas_rows, std::size_t canvas_cols, std::size_t top, std::size_t left,
                   std::size_t height, std::size_t width) -> PhantomSpec;
  /// Hole centred in the rectangle, which is itself centred on the canvas.
  static auto rect_with_hole(std::size_t canvas_rows, std::size_t canvas_cols, std::size_t height,
                             std::size_t width, std::size_t hole_height, std::size_t hole_width) -> PhantomSpec;
  static auto ring(std::size_t canvas_rows, std::size_t canvas_cols, std::size_t top, std::size_t left,
                   std::size_t height, std::size_t width) -> PhantomSpec;
  static auto scatter_dots(std::size_t canvas_rows, std::size_t canvas_cols, std::size_t top, std::size_t left,
                           std::size_t dot_rows, std::size_t dot_cols, std::size_t spacing) -> PhantomSpec;
  static auto slice_series(std::size_t length, std::optional<std::size_t> faulty_slice, std::uint64_t seed)
      -> PhantomSpec;
};

struct Phantom {
  GrayImage image;
  FeatureRecord expected; ///< closed-form; threshold is the background level Otsu picks
};

/// Throws SpecOutOfBounds when the geometry does not fit. For SliceSeries
/// returns slice `spec.slice` of the series.
auto generate(const PhantomSpec &spec) -> Phantom;

/// All slices of a SliceSeries spec, ids "slice_000", "slice_001", ...
/// Regular slices are rectangles with a small central hole whose size
/// follows the slice position; the faulty slice is a thin ring enclosing a
/// large pore.
auto generate_series(const PhantomSpec &spec) -> std::vector<Phantom>;

enum class ClassScheme { Three, Two };

struct LabeledItem {
  FeatureRecord record;
  std::size_t label;
};

struct LabeledDataset {
  std::vector<std::string> class_names;
  std::vector<LabeledItem> items;
};

struct LabeledImage {
  std::string id;
  GrayImage image;
  std::size_t label;
};

auto class_names(ClassScheme scheme) -> std::vector<std::string>;

/// Jittered phantoms for the three scan classes: EYES (upper blob plus two
/// ring-shaped eyes), BRAIN_NO_EYES (large compact blob, a few small holes),
/// NO_BRAIN (thin ring around one large pore). Deterministic in `seed`.
auto generate_dataset_images(std::size_t n_per_class, std::uint64_t seed) -> std::vector<LabeledImage>;
auto generate_dataset(std::size_t n_per_class, std::uint64_t seed, ClassScheme scheme = ClassScheme::Three)
    -> LabeledDataset;

/// EYES -> WITH_EYES; BRAIN_NO_EYES and NO_BRAIN -> WITHOUT_EYES.
auto to_two_class(const LabeledDataset &three) -> LabeledDataset;

} // namespace glance
