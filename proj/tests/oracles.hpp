#pragma once

// Test-only reference implementations. They share no code with the
// library paths they check.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "glance/binarize.hpp"
#include "glance/image.hpp"
#include "glance/image_io.hpp"
#include "glance/rng.hpp"

namespace oracle {

inline auto fixture(const std::string &name) -> std::string
{
  return std::string(GLANCE_FIXTURES) + "/" + name;
}

inline auto fix_a_gray() -> glance::GrayImage
{
  return glance::load_grid_csv(glance::read_file(fixture("fix_a.csv")));
}

inline auto fix_a() -> glance::BinaryImage
{
  return glance::binarize(fix_a_gray(), glance::ThresholdConfig::manual(128));
}

/// Builds a binary image from rows of '0'/'1' characters.
inline auto from_bits(const std::vector<std::string> &rows) -> glance::BinaryImage
{
  std::vector<glance::Label> labels;
  for (const auto &row : rows) {
    for (const char ch : row) {
      labels.push_back(ch == '1' ? glance::Label::Foreground : glance::Label::Background);
    }
  }
  return glance::BinaryImage(rows.size(), rows.front().size(), std::move(labels), 128);
}

/// Random binary image with at least one foreground pixel.
inline auto random_binary(glance::Rng &rng, std::size_t rows, std::size_t cols, double density)
    -> glance::BinaryImage
{
  std::vector<glance::Label> labels(rows * cols);
  bool any = false;
  for (auto &l : labels) {
    l = rng.uniform() < density ? glance::Label::Foreground : glance::Label::Background;
    any = any || l == glance::Label::Foreground;
  }
  if (!any) {
    labels[rng.below(labels.size())] = glance::Label::Foreground;
  }
  return glance::BinaryImage(rows, cols, std::move(labels), 128);
}

/// Random binary image of random size in [1, max_side]^2 and random density.
inline auto random_binary(glance::Rng &rng, std::size_t max_side) -> glance::BinaryImage
{
  const auto rows = 1 + rng.below(max_side);
  const auto cols = 1 + rng.below(max_side);
  return random_binary(rng, rows, cols, rng.uniform(0.2, 0.9));
}

inline auto random_gray(glance::Rng &rng, std::size_t rows, std::size_t cols) -> glance::GrayImage
{
  std::vector<std::uint8_t> px(rows * cols);
  for (auto &p : px) {
    p = static_cast<std::uint8_t>(rng.below(256));
  }
  return glance::GrayImage(rows, cols, std::move(px));
}

/// Background pixels that reach the border, found by sweeping until nothing
/// changes (no queue, no flood fill).
inline auto reachable_by_relaxation(const glance::BinaryImage &bin) -> std::vector<bool>
{
  const long n = static_cast<long>(bin.rows());
  const long m = static_cast<long>(bin.cols());
  auto bg = [&](long r, long c) { return !bin.is_foreground(static_cast<std::size_t>(r), static_cast<std::size_t>(c)); };
  std::vector<bool> reach(static_cast<std::size_t>(n * m), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (long r = 0; r < n; ++r) {
      for (long c = 0; c < m; ++c) {
        const auto i = static_cast<std::size_t>(r * m + c);
        if (reach[i] || !bg(r, c)) {
          continue;
        }
        bool ok = r == 0 || c == 0 || r == n - 1 || c == m - 1;
        for (long dr = -1; dr <= 1 && !ok; ++dr) {
          for (long dc = -1; dc <= 1 && !ok; ++dc) {
            const long rr = r + dr;
            const long cc = c + dc;
            if (rr >= 0 && cc >= 0 && rr < n && cc < m && reach[static_cast<std::size_t>(rr * m + cc)]) {
              ok = true;
            }
          }
        }
        if (ok) {
          reach[i] = true;
          changed = true;
        }
      }
    }
  }
  return reach;
}

struct PoreOracle {
  std::vector<long> component; ///< -1 outside pores, else smallest raster index in the pore
  std::map<long, std::size_t> areas;
};

/// Pore components by min-label propagation to a fixed point.
inline auto pores_by_propagation(const glance::BinaryImage &bin) -> PoreOracle
{
  const long n = static_cast<long>(bin.rows());
  const long m = static_cast<long>(bin.cols());
  const auto reach = reachable_by_relaxation(bin);
  PoreOracle out;
  out.component.assign(static_cast<std::size_t>(n * m), -1);
  for (long i = 0; i < n * m; ++i) {
    const auto r = static_cast<std::size_t>(i / m);
    const auto c = static_cast<std::size_t>(i % m);
    if (!bin.is_foreground(r, c) && !reach[static_cast<std::size_t>(i)]) {
      out.component[static_cast<std::size_t>(i)] = i;
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (long r = 0; r < n; ++r) {
      for (long c = 0; c < m; ++c) {
        auto &mine = out.component[static_cast<std::size_t>(r * m + c)];
        if (mine < 0) {
          continue;
        }
        for (long dr = -1; dr <= 1; ++dr) {
          for (long dc = -1; dc <= 1; ++dc) {
            const long rr = r + dr;
            const long cc = c + dc;
            if (rr < 0 || cc < 0 || rr >= n || cc >= m) {
              continue;
            }
            const long other = out.component[static_cast<std::size_t>(rr * m + cc)];
            if (other >= 0 && other < mine) {
              mine = other;
              changed = true;
            }
          }
        }
      }
    }
  }
  for (const long k : out.component) {
    if (k >= 0) {
      ++out.areas[k];
    }
  }
  return out;
}

struct NaiveRow {
  std::size_t span, u, z, y;
};

/// Per-row counts by scanning from both ends.
inline auto naive_rows(const glance::BinaryImage &bin) -> std::vector<NaiveRow>
{
  std::vector<NaiveRow> out;
  for (std::size_t r = 0; r < bin.rows(); ++r) {
    std::size_t u = 0;
    for (std::size_t c = 0; c < bin.cols(); ++c) {
      u += bin.is_foreground(r, c) ? 1 : 0;
    }
    std::size_t span = 0;
    std::size_t inside_bg = 0;
    if (u > 0) {
      std::size_t lo = 0;
      while (!bin.is_foreground(r, lo)) {
        ++lo;
      }
      std::size_t hi = bin.cols() - 1;
      while (!bin.is_foreground(r, hi)) {
        --hi;
      }
      span = hi - lo + 1;
      for (std::size_t c = lo; c <= hi; ++c) {
        inside_bg += bin.is_foreground(r, c) ? 0 : 1;
      }
    }
    out.push_back({span, u, bin.cols() - u, inside_bg});
  }
  return out;
}

/// Otsu by exhaustive search over all 256 cuts in exact rational
/// arithmetic: maximise w0 * w1 * (mu0 - mu1)^2, smallest t on ties.
inline auto otsu_exhaustive(const glance::Histogram &hist) -> int
{
  using boost::multiprecision::cpp_int;
  int best_t = -1;
  cpp_int best_num = -1;
  cpp_int best_den = 1;
  for (int t = 0; t < 256; ++t) {
    cpp_int n0 = 0, s0 = 0, n1 = 0, s1 = 0;
    for (int v = 0; v < 256; ++v) {
      if (v <= t) {
        n0 += hist[v];
        s0 += cpp_int(hist[v]) * v;
      } else {
        n1 += hist[v];
        s1 += cpp_int(hist[v]) * v;
      }
    }
    if (n0 == 0 || n1 == 0) {
      continue;
    }
    // w0 w1 (s0/n0 - s1/n1)^2 with N^2 dropped = (s0 n1 - s1 n0)^2 / (n0 n1)
    const cpp_int diff = s0 * n1 - s1 * n0;
    const cpp_int num = diff * diff;
    const cpp_int den = n0 * n1;
    if (best_t < 0 || num * best_den > best_num * den) {
      best_t = t;
      best_num = num;
      best_den = den;
    }
  }
  return best_t;
}

} // namespace oracle
