#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "glance/image.hpp"

namespace glance {

struct Pore {
  std::uint32_t id;  ///< 1 = largest
  std::size_t area;  ///< pixel count
};

/// Enclosed-background components of a BinaryImage. A pore is an 8-connected
/// set of background pixels with no 8-connected background path to the image
/// border.
class PoreMap {
public:
  PoreMap(std::size_t rows, std::size_t cols, std::vector<std::uint32_t> labels, std::vector<Pore> pores);

  [[nodiscard]] auto rows() const noexcept -> std::size_t { return rows_; }
  [[nodiscard]] auto cols() const noexcept -> std::size_t { return cols_; }
  /// 0 outside pores, k >= 1 inside pore k.
  [[nodiscard]] auto labels() const noexcept -> std::span<const std::uint32_t> { return labels_; }
  [[nodiscard]] auto at(std::size_t r, std::size_t c) const -> std::uint32_t { return labels_[r * cols_ + c]; }
  /// Sorted by area descending.
  [[nodiscard]] auto pores() const noexcept -> std::span<const Pore> { return pores_; }
  [[nodiscard]] auto total_area() const noexcept -> std::size_t { return total_area_; }
  [[nodiscard]] auto count() const noexcept -> std::size_t { return pores_.size(); }

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint32_t> labels_;
  std::vector<Pore> pores_;
  std::size_t total_area_ = 0;
};

/// 1 for every background pixel reachable from a border background pixel
/// through 8-connected background steps, 0 elsewhere (row-major).
auto exterior_mask(const BinaryImage &bin) -> std::vector<std::uint8_t>;

/// Pores ordered by area descending, ties by the raster position of their
/// first pixel; ids are assigned in that order.
auto label_pores(const BinaryImage &bin) -> PoreMap;

struct PoreRow {
  std::uint32_t id;
  std::size_t area;
  double percent; ///< 100 * area / (u + w)
};

/// Per-pore porosity in percent: 100 * area / (u + total_pore_area).
auto pore_percent(std::size_t area, std::size_t foreground, std::size_t total_pore_area) -> double;

auto per_pore_table(const PoreMap &pm, std::size_t foreground) -> std::vector<PoreRow>;

} // namespace glance
