#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace glance {

enum class Rotation { R90, R180, R270 };
enum class FlipAxis { Horizontal, Vertical };
enum class Polarity { DarkBackground, LightBackground };
enum class Label : std::uint8_t { Background = 0, Foreground = 1 };

/// Immutable row-major grid of 8-bit intensities.
class GrayImage {
public:
  GrayImage(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> pixels);

  [[nodiscard]] auto rows() const noexcept -> std::size_t { return rows_; }
  [[nodiscard]] auto cols() const noexcept -> std::size_t { return cols_; }
  [[nodiscard]] auto size() const noexcept -> std::size_t { return pixels_.size(); }
  [[nodiscard]] auto pixels() const noexcept -> std::span<const std::uint8_t> { return pixels_; }
  [[nodiscard]] auto at(std::size_t r, std::size_t c) const -> std::uint8_t { return pixels_[r * cols_ + c]; }

  friend auto operator==(const GrayImage &, const GrayImage &) -> bool = default;

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint8_t> pixels_;
};

/// Two-level segmentation of a GrayImage. Construction rejects an image
/// without any foreground pixel.
class BinaryImage {
public:
  BinaryImage(std::size_t rows, std::size_t cols, std::vector<Label> labels, int threshold = 0,
              Polarity polarity = Polarity::DarkBackground);

  [[nodiscard]] auto rows() const noexcept -> std::size_t { return rows_; }
  [[nodiscard]] auto cols() const noexcept -> std::size_t { return cols_; }
  [[nodiscard]] auto size() const noexcept -> std::size_t { return labels_.size(); }
  [[nodiscard]] auto labels() const noexcept -> std::span<const Label> { return labels_; }
  [[nodiscard]] auto at(std::size_t r, std::size_t c) const -> Label { return labels_[r * cols_ + c]; }
  [[nodiscard]] auto is_foreground(std::size_t r, std::size_t c) const -> bool
  {
    return at(r, c) == Label::Foreground;
  }
  [[nodiscard]] auto foreground_count() const noexcept -> std::size_t { return foreground_; }
  [[nodiscard]] auto background_count() const noexcept -> std::size_t { return labels_.size() - foreground_; }
  [[nodiscard]] auto threshold() const noexcept -> int { return threshold_; }
  [[nodiscard]] auto polarity() const noexcept -> Polarity { return polarity_; }

  friend auto operator==(const BinaryImage &, const BinaryImage &) -> bool = default;

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Label> labels_;
  std::size_t foreground_ = 0;
  int threshold_;
  Polarity polarity_;
};

/// Clockwise rotation by a quarter-turn multiple.
auto rotate(const GrayImage &img, Rotation angle) -> GrayImage;
auto rotate(const BinaryImage &img, Rotation angle) -> BinaryImage;

/// Horizontal mirrors columns (left-right), Vertical mirrors rows (top-bottom).
auto flip(const GrayImage &img, FlipAxis axis) -> GrayImage;
auto flip(const BinaryImage &img, FlipAxis axis) -> BinaryImage;

} // namespace glance
