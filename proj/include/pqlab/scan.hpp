#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pqlab/block.hpp"
#include "pqlab/error.hpp"

namespace pqlab {

enum class ScanKind : uint8_t { kDiagonal = 0, kHorizontal = 1, kVertical = 2 };

inline const char* scan_kind_name(ScanKind k) {
  switch (k) {
    case ScanKind::kDiagonal: return "diagonal";
    case ScanKind::kHorizontal: return "horizontal";
    case ScanKind::kVertical: return "vertical";
  }
  return "?";
}

struct ScanPos {
  int x;
  int y;
  bool operator==(const ScanPos&) const = default;
};

// Coefficient scan covering every cell of an N x N TB exactly once. TBs of
// 8x8 and larger are traversed as 4x4 sub-blocks, the sub-block grid itself
// following the same pattern. Positions are stored in reverse scan order
// (high frequency first); the final entry is always the DC position.
struct ScanOrder {
  ScanKind kind;
  int n;
  std::vector<ScanPos> positions;  // reverse scan order

  size_t cells() const { return positions.size(); }
  // i-th position of the forward scan, 0 = DC.
  const ScanPos& forward(size_t i) const { return positions[positions.size() - 1 - i]; }
};

namespace detail {

// Forward pattern over a dim x dim tile: up-right diagonal, row major or
// column major.
inline std::vector<ScanPos> tile_forward(ScanKind kind, int dim) {
  std::vector<ScanPos> out;
  out.reserve(static_cast<size_t>(dim) * dim);
  switch (kind) {
    case ScanKind::kDiagonal:
      for (int k = 0; k <= 2 * (dim - 1); ++k) {
        for (int x = std::max(0, k - (dim - 1)); x <= std::min(k, dim - 1); ++x) {
          out.push_back({x, k - x});
        }
      }
      break;
    case ScanKind::kHorizontal:
      for (int y = 0; y < dim; ++y)
        for (int x = 0; x < dim; ++x) out.push_back({x, y});
      break;
    case ScanKind::kVertical:
      for (int x = 0; x < dim; ++x)
        for (int y = 0; y < dim; ++y) out.push_back({x, y});
      break;
  }
  return out;
}

inline ScanOrder build_scan_order(ScanKind kind, int n) {
  ScanOrder scan{kind, n, {}};
  std::vector<ScanPos> forward;
  forward.reserve(static_cast<size_t>(n) * n);
  if (n == 4) {
    forward = tile_forward(kind, 4);
  } else {
    const auto grid = tile_forward(kind, n / 4);
    const auto cell = tile_forward(kind, 4);
    for (const ScanPos& sb : grid)
      for (const ScanPos& c : cell) forward.push_back({sb.x * 4 + c.x, sb.y * 4 + c.y});
  }
  scan.positions.assign(forward.rbegin(), forward.rend());
  return scan;
}

}  // namespace detail

inline const ScanOrder& scan_order(ScanKind kind, int n) {
  if (!is_supported_tb_size(n)) throw_config("unsupported scan size " + std::to_string(n));
  static const auto orders = [] {
    std::array<std::array<ScanOrder, 4>, 3> all;
    for (int k = 0; k < 3; ++k)
      for (int s = 0; s < 4; ++s) all[k][s] = detail::build_scan_order(static_cast<ScanKind>(k), 4 << s);
    return all;
  }();
  return orders[static_cast<size_t>(kind)][static_cast<size_t>(ilog2(n) - 2)];
}

}  // namespace pqlab
