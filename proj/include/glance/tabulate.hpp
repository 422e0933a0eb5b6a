#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "glance/image.hpp"
#include "glance/pores.hpp"

namespace glance {

/// One line of the tabulation chart.
struct RowCounts {
  std::size_t span = 0;       ///< L_i: first-to-last foreground distance, inclusive
  std::size_t foreground = 0; ///< u_i
  std::size_t background = 0; ///< z_i
  std::size_t scatter = 0;    ///< y_i: background strictly inside the span
  std::size_t pore = 0;       ///< w_i

  friend auto operator==(const RowCounts &, const RowCounts &) -> bool = default;
};

struct RowTabulation {
  std::vector<RowCounts> per_row;
  RowCounts totals;
  std::size_t image_size = 0; ///< n * m
};

/// Rows without foreground tabulate as (0, 0, m, 0, 0).
auto row_tabulation(const BinaryImage &bin, const PoreMap &pores) -> RowTabulation;

/// CSV with header "row,L,u,z,y,w"; rows are numbered from 1.
auto tabulation_csv(const RowTabulation &tab) -> std::string;

} // namespace glance
