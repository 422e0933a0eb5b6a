#include "glance/image.hpp"

#include <algorithm>
#include <string>

#include "glance/error.hpp"

namespace glance {

namespace {

void check_shape(std::size_t rows, std::size_t cols, std::size_t count)
{
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::InvalidDimensions, "image dimensions must be positive");
  }
  if (rows * cols != count) {
    throw Error(ErrorCode::InvalidDimensions, "expected " + std::to_string(rows * cols) + " pixels, got " +
                                                  std::to_string(count));
  }
}

struct Shape {
  std::size_t rows;
  std::size_t cols;
};

template <typename T>
auto rotate_cells(std::span<const T> src, Shape shape, Rotation angle) -> std::pair<Shape, std::vector<T>>
{
  const auto [n, m] = shape;
  std::vector<T> out(src.size());
  switch (angle) {
  case Rotation::R90:
    // out is m x n; out(r, c) = src(n - 1 - c, r)
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        out[r * n + c] = src[(n - 1 - c) * m + r];
      }
    }
    return {{m, n}, std::move(out)};
  case Rotation::R180:
    std::reverse_copy(src.begin(), src.end(), out.begin());
    return {{n, m}, std::move(out)};
  case Rotation::R270:
    // out(r, c) = src(c, m - 1 - r)
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        out[r * n + c] = src[c * m + (m - 1 - r)];
      }
    }
    return {{m, n}, std::move(out)};
  }
  return {shape, std::vector<T>(src.begin(), src.end())};
}

template <typename T>
auto flip_cells(std::span<const T> src, Shape shape, FlipAxis axis) -> std::vector<T>
{
  const auto [n, m] = shape;
  std::vector<T> out(src.begin(), src.end());
  if (axis == FlipAxis::Horizontal) {
    for (std::size_t r = 0; r < n; ++r) {
      std::reverse(out.begin() + static_cast<std::ptrdiff_t>(r * m),
                   out.begin() + static_cast<std::ptrdiff_t>((r + 1) * m));
    }
  } else {
    for (std::size_t r = 0; r < n; ++r) {
      std::copy_n(src.begin() + static_cast<std::ptrdiff_t>((n - 1 - r) * m), m,
                  out.begin() + static_cast<std::ptrdiff_t>(r * m));
    }
  }
  return out;
}

} // namespace

GrayImage::GrayImage(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> pixels)
    : rows_(rows), cols_(cols), pixels_(std::move(pixels))
{
  check_shape(rows_, cols_, pixels_.size());
}

BinaryImage::BinaryImage(std::size_t rows, std::size_t cols, std::vector<Label> labels, int threshold,
                         Polarity polarity)
    : rows_(rows), cols_(cols), labels_(std::move(labels)), threshold_(threshold), polarity_(polarity)
{
  check_shape(rows_, cols_, labels_.size());
  if (threshold_ < 0 || threshold_ > 255) {
    throw Error(ErrorCode::ValueOutOfRange, "threshold must lie in [0, 255]");
  }
  foreground_ = static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), Label::Foreground));
  if (foreground_ == 0) {
    throw Error(ErrorCode::EmptyForeground, "binary image has no foreground pixel");
  }
}

auto rotate(const GrayImage &img, Rotation angle) -> GrayImage
{
  auto [shape, cells] = rotate_cells(img.pixels(), {img.rows(), img.cols()}, angle);
  return GrayImage(shape.rows, shape.cols, std::move(cells));
}

auto rotate(const BinaryImage &img, Rotation angle) -> BinaryImage
{
  auto [shape, cells] = rotate_cells(img.labels(), {img.rows(), img.cols()}, angle);
  return BinaryImage(shape.rows, shape.cols, std::move(cells), img.threshold(), img.polarity());
}

auto flip(const GrayImage &img, FlipAxis axis) -> GrayImage
{
  return GrayImage(img.rows(), img.cols(), flip_cells(img.pixels(), {img.rows(), img.cols()}, axis));
}

auto flip(const BinaryImage &img, FlipAxis axis) -> BinaryImage
{
  return BinaryImage(img.rows(), img.cols(), flip_cells(img.labels(), {img.rows(), img.cols()}, axis),
                     img.threshold(), img.polarity());
}

} // namespace glance
