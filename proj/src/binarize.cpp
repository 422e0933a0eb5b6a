#include "glance/binarize.hpp"

#include <string>
#include <vector>

#include "glance/error.hpp"

namespace glance {

auto histogram(const GrayImage &img) -> Histogram
{
  Histogram hist{};
  for (const auto v : img.pixels()) {
    ++hist[v];
  }
  return hist;
}

auto otsu_threshold(const Histogram &hist) -> int
{
  std::uint64_t total = 0;
  std::uint64_t total_sum = 0;
  int populated = 0;
  for (int i = 0; i < 256; ++i) {
    total += hist[i];
    total_sum += hist[i] * static_cast<std::uint64_t>(i);
    populated += hist[i] > 0 ? 1 : 0;
  }
  if (populated < 2) {
    throw Error(ErrorCode::DegenerateHistogram, "histogram has " + std::to_string(populated) +
                                                    " populated bin(s); no bi-level split exists");
  }

  // sigma_b^2 = (N*S0 - n0*S)^2 / (N^2 * n0 * n1); the N^2 factor is constant
  // and dropped. Cumulative sums stay integral so equal splits compare equal.
  __extension__ using Wide = __int128;
  const auto n = static_cast<Wide>(total);
  const auto s = static_cast<Wide>(total_sum);
  std::uint64_t low_count = 0;
  std::uint64_t low_sum = 0;
  double best = -1.0;
  int best_t = 0;
  for (int t = 0; t < 255; ++t) {
    low_count += hist[t];
    low_sum += hist[t] * static_cast<std::uint64_t>(t);
    if (low_count == 0 || low_count == total) {
      continue;
    }
    const Wide diff = n * static_cast<Wide>(low_sum) - static_cast<Wide>(low_count) * s;
    const double d = static_cast<double>(diff);
    const double variance = d * d / (static_cast<double>(low_count) * static_cast<double>(total - low_count));
    if (variance > best) {
      best = variance;
      best_t = t;
    }
  }
  return best_t;
}

auto otsu_threshold(const GrayImage &img) -> int
{
  return otsu_threshold(histogram(img));
}

auto binarize(const GrayImage &img, const ThresholdConfig &cfg) -> BinaryImage
{
  int t = 0;
  if (cfg.mode == ThresholdMode::Manual) {
    if (cfg.manual_value < 0 || cfg.manual_value > 255) {
      throw Error(ErrorCode::ValueOutOfRange, "manual threshold " + std::to_string(cfg.manual_value) +
                                                  " outside [0, 255]");
    }
    t = cfg.manual_value;
  } else {
    t = otsu_threshold(img);
  }

  const bool dark = cfg.polarity == Polarity::DarkBackground;
  std::vector<Label> labels;
  labels.reserve(img.size());
  for (const auto v : img.pixels()) {
    const bool above = static_cast<int>(v) > t;
    labels.push_back(above == dark ? Label::Foreground : Label::Background);
  }
  return BinaryImage(img.rows(), img.cols(), std::move(labels), t, cfg.polarity);
}

} // namespace glance
