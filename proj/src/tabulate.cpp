#include "glance/tabulate.hpp"

#include <fmt/format.h>

#include "glance/error.hpp"

namespace glance {

auto row_tabulation(const BinaryImage &bin, const PoreMap &pores) -> RowTabulation
{
  if (pores.rows() != bin.rows() || pores.cols() != bin.cols()) {
    throw Error(ErrorCode::DimensionMismatch, fmt::format("pore map is {}x{}, binary image is {}x{}", pores.rows(),
                                                          pores.cols(), bin.rows(), bin.cols()));
  }

  const std::size_t m = bin.cols();
  RowTabulation tab;
  tab.per_row.reserve(bin.rows());
  tab.image_size = bin.size();
  for (std::size_t r = 0; r < bin.rows(); ++r) {
    RowCounts row;
    std::size_t first = m;
    std::size_t last = 0;
    for (std::size_t c = 0; c < m; ++c) {
      if (bin.is_foreground(r, c)) {
        ++row.foreground;
        first = std::min(first, c);
        last = c;
      }
      if (pores.at(r, c) != 0) {
        ++row.pore;
      }
    }
    row.background = m - row.foreground;
    if (row.foreground > 0) {
      row.span = last - first + 1;
      row.scatter = row.span - row.foreground;
    }
    tab.totals.span += row.span;
    tab.totals.foreground += row.foreground;
    tab.totals.background += row.background;
    tab.totals.scatter += row.scatter;
    tab.totals.pore += row.pore;
    tab.per_row.push_back(row);
  }
  return tab;
}

auto tabulation_csv(const RowTabulation &tab) -> std::string
{
  std::string out = "row,L,u,z,y,w\n";
  for (std::size_t i = 0; i < tab.per_row.size(); ++i) {
    const auto &r = tab.per_row[i];
    out += fmt::format("{},{},{},{},{},{}\n", i + 1, r.span, r.foreground, r.background, r.scatter, r.pore);
  }
  const auto &t = tab.totals;
  out += fmt::format("total,{},{},{},{},{}\n", t.span, t.foreground, t.background, t.scatter, t.pore);
  return out;
}

} // namespace glance
