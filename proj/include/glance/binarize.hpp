#pragma once

#include <array>
#include <cstdint>

#include "glance/image.hpp"

namespace glance {

enum class ThresholdMode { Otsu, Manual };

struct ThresholdConfig {
  ThresholdMode mode = ThresholdMode::Otsu;
  int manual_value = 0; ///< read only in Manual mode
  Polarity polarity = Polarity::DarkBackground;

  static auto otsu(Polarity polarity = Polarity::DarkBackground) -> ThresholdConfig
  {
    return {ThresholdMode::Otsu, 0, polarity};
  }
  static auto manual(int value, Polarity polarity = Polarity::DarkBackground) -> ThresholdConfig
  {
    return {ThresholdMode::Manual, value, polarity};
  }
};

using Histogram = std::array<std::uint64_t, 256>;

auto histogram(const GrayImage &img) -> Histogram;

/// Otsu's bi-level threshold over a 256-bin histogram. Returns the t that
/// maximises between-class variance with the low class being values <= t;
/// ties go to the smallest t. Throws DegenerateHistogram when fewer than two
/// bins are populated.
auto otsu_threshold(const Histogram &hist) -> int;
auto otsu_threshold(const GrayImage &img) -> int;

/// DarkBackground: intensity > t is foreground. LightBackground: intensity
/// <= t is foreground.
auto binarize(const GrayImage &img, const ThresholdConfig &cfg) -> BinaryImage;

} // namespace glance
