#include "glance/pores.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "glance/error.hpp"

namespace glance {

namespace {

class DisjointSet {
public:
  auto make() -> std::uint32_t
  {
    const auto id = static_cast<std::uint32_t>(parent_.size());
    parent_.push_back(id);
    return id;
  }

  auto find(std::uint32_t x) -> std::uint32_t
  {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::uint32_t a, std::uint32_t b)
  {
    a = find(a);
    b = find(b);
    if (a == b) {
      return;
    }
    // smaller root wins so roots stay in scan order
    if (a < b) {
      parent_[b] = a;
    } else {
      parent_[a] = b;
    }
  }

private:
  std::vector<std::uint32_t> parent_;
};

constexpr std::uint32_t kNone = 0xffffffffU;

} // namespace

PoreMap::PoreMap(std::size_t rows, std::size_t cols, std::vector<std::uint32_t> labels, std::vector<Pore> pores)
    : rows_(rows), cols_(cols), labels_(std::move(labels)), pores_(std::move(pores))
{
  if (labels_.size() != rows_ * cols_) {
    throw Error(ErrorCode::DimensionMismatch, "pore label grid does not match dimensions");
  }
  for (const auto &p : pores_) {
    total_area_ += p.area;
  }
}

auto exterior_mask(const BinaryImage &bin) -> std::vector<std::uint8_t>
{
  const std::size_t n = bin.rows();
  const std::size_t m = bin.cols();
  std::vector<std::uint8_t> mask(n * m, 0);
  std::vector<std::size_t> stack;

  auto seed = [&](std::size_t r, std::size_t c) {
    const std::size_t i = r * m + c;
    if (mask[i] == 0 && !bin.is_foreground(r, c)) {
      mask[i] = 1;
      stack.push_back(i);
    }
  };
  for (std::size_t c = 0; c < m; ++c) {
    seed(0, c);
    seed(n - 1, c);
  }
  for (std::size_t r = 0; r < n; ++r) {
    seed(r, 0);
    seed(r, m - 1);
  }

  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const std::size_t r = i / m;
    const std::size_t c = i % m;
    const std::size_t r0 = r == 0 ? 0 : r - 1;
    const std::size_t c0 = c == 0 ? 0 : c - 1;
    const std::size_t r1 = std::min(r + 1, n - 1);
    const std::size_t c1 = std::min(c + 1, m - 1);
    for (std::size_t rr = r0; rr <= r1; ++rr) {
      for (std::size_t cc = c0; cc <= c1; ++cc) {
        seed(rr, cc);
      }
    }
  }
  return mask;
}

auto label_pores(const BinaryImage &bin) -> PoreMap
{
  const std::size_t n = bin.rows();
  const std::size_t m = bin.cols();
  const auto outside = exterior_mask(bin);

  // First pass: provisional labels, merging with the four already-visited
  // 8-neighbours (W, NW, N, NE).
  std::vector<std::uint32_t> provisional(n * m, kNone);
  DisjointSet sets;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const std::size_t i = r * m + c;
      if (bin.is_foreground(r, c) || outside[i] != 0) {
        continue;
      }
      std::uint32_t label = kNone;
      auto visit = [&](std::size_t j) {
        const std::uint32_t other = provisional[j];
        if (other == kNone) {
          return;
        }
        if (label == kNone) {
          label = other;
        } else {
          sets.unite(label, other);
        }
      };
      if (c > 0) {
        visit(i - 1);
      }
      if (r > 0) {
        if (c > 0) {
          visit(i - m - 1);
        }
        visit(i - m);
        if (c + 1 < m) {
          visit(i - m + 1);
        }
      }
      provisional[i] = label == kNone ? sets.make() : label;
    }
  }

  // Second pass: resolve roots, accumulate area and first raster position.
  struct Component {
    std::size_t area = 0;
    std::size_t first = 0;
    std::uint32_t root = 0;
  };
  std::vector<Component> components;
  std::vector<std::uint32_t> slot_of_root;
  for (std::size_t i = 0; i < n * m; ++i) {
    if (provisional[i] == kNone) {
      continue;
    }
    const std::uint32_t root = sets.find(provisional[i]);
    provisional[i] = root;
    if (root >= slot_of_root.size()) {
      slot_of_root.resize(root + 1, kNone);
    }
    if (slot_of_root[root] == kNone) {
      slot_of_root[root] = static_cast<std::uint32_t>(components.size());
      components.push_back({0, i, root});
    }
    ++components[slot_of_root[root]].area;
  }

  std::vector<std::size_t> order(components.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (components[a].area != components[b].area) {
      return components[a].area > components[b].area;
    }
    return components[a].first < components[b].first;
  });

  std::vector<std::uint32_t> id_of_root(slot_of_root.size(), 0);
  std::vector<Pore> pores;
  pores.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto &comp = components[order[k]];
    const auto id = static_cast<std::uint32_t>(k + 1);
    id_of_root[comp.root] = id;
    pores.push_back({id, comp.area});
  }

  std::vector<std::uint32_t> labels(n * m, 0);
  for (std::size_t i = 0; i < n * m; ++i) {
    if (provisional[i] != kNone) {
      labels[i] = id_of_root[provisional[i]];
    }
  }
  return PoreMap(n, m, std::move(labels), std::move(pores));
}

auto pore_percent(std::size_t area, std::size_t foreground, std::size_t total_pore_area) -> double
{
  if (foreground == 0) {
    throw Error(ErrorCode::EmptyForeground, "per-pore porosity needs u >= 1");
  }
  return 100.0 * static_cast<double>(area) / static_cast<double>(foreground + total_pore_area);
}

auto per_pore_table(const PoreMap &pm, std::size_t foreground) -> std::vector<PoreRow>
{
  std::vector<PoreRow> rows;
  rows.reserve(pm.count());
  for (const auto &p : pm.pores()) {
    rows.push_back({p.id, p.area, pore_percent(p.area, foreground, pm.total_area())});
  }
  return rows;
}

} // namespace glance
