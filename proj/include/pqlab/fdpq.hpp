#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pqlab/block.hpp"
#include "pqlab/error.hpp"
#include "pqlab/quant.hpp"
#include "pqlab/transform.hpp"

namespace pqlab {

// Normalised Euclidean distance of coefficient (x, y) from the DC position,
// with (N-1, N-1) the farthest AC coefficient.
inline double fdpq_distance(int x, int y, int n) {
  if (n < 2) throw_config("weight map needs N >= 2");
  if (x < 0 || y < 0 || x >= n || y >= n) throw_config("coefficient position outside the block");
  const double span = 2.0 * (n - 1) * (n - 1);
  return std::sqrt((double(x) * x + double(y) * y) / span);
}

// Exponentially decaying perceptual weight, 1 at DC, e^-1 at the far corner.
inline double fdpq_weight(double d) {
  if (d < 0.0 || d > 1.0) throw_config("distance outside [0, 1]");
  return std::exp(-d * d);
}

struct WeightMap {
  int n = 0;
  std::vector<double> d;  // row major
  std::vector<double> w;

  double dist(int x, int y) const { return d[static_cast<size_t>(y) * n + x]; }
  double weight(int x, int y) const { return w[static_cast<size_t>(y) * n + x]; }
};

namespace detail {

inline WeightMap build_weight_map(int n) {
  WeightMap map;
  map.n = n;
  map.d.resize(static_cast<size_t>(n) * n);
  map.w.resize(static_cast<size_t>(n) * n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double d = fdpq_distance(x, y, n);
      map.d[static_cast<size_t>(y) * n + x] = d;
      map.w[static_cast<size_t>(y) * n + x] = fdpq_weight(d);
    }
  }
  return map;
}

}  // namespace detail

inline const WeightMap& weight_map(int n) {
  static const std::array<WeightMap, 4> maps = {
      detail::build_weight_map(4),
      detail::build_weight_map(8),
      detail::build_weight_map(16),
      detail::build_weight_map(32),
  };
  if (!is_supported_tb_size(n)) throw_config("unsupported weight map size " + std::to_string(n));
  return maps[static_cast<size_t>(ilog2(n) - 2)];
}

// Position-dependent integer factors: the MF shrinks with distance from DC
// and the SF mirrors the same weight on the reconstruction side, so encoder
// and decoder derive identical values with no extra signalling.
inline int32_t modified_mf(const Qp& qp, int x, int y, int n) {
  const int32_t m = mf_sf(qp).m;
  return static_cast<int32_t>(std::llround(m * weight_map(n).weight(x, y)));
}

inline int32_t modified_sf(const Qp& qp, int x, int y, int n) {
  const int32_t m = mf_sf(qp).m;
  return static_cast<int32_t>(std::llround(std::exp2(20) / m * weight_map(n).weight(x, y)));
}

namespace detail {

struct FdpqTables {
  std::vector<int32_t> mf;  // n*n, row major
  std::vector<int32_t> sf;
};

inline FdpqTables build_fdpq_tables(int qp_rem, int n) {
  const Qp qp(qp_rem);
  FdpqTables t;
  t.mf.resize(static_cast<size_t>(n) * n);
  t.sf.resize(static_cast<size_t>(n) * n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      t.mf[static_cast<size_t>(y) * n + x] = modified_mf(qp, x, y, n);
      t.sf[static_cast<size_t>(y) * n + x] = modified_sf(qp, x, y, n);
    }
  }
  return t;
}

// Cached per (QP mod 6, TB size); both factors depend on the QP only through
// its remainder.
inline const FdpqTables& fdpq_tables(int qp_rem, int n) {
  static const auto tables = [] {
    std::array<std::array<FdpqTables, 4>, 6> all;
    for (int rem = 0; rem < 6; ++rem)
      for (int s = 0; s < 4; ++s) all[rem][s] = build_fdpq_tables(rem, 4 << s);
    return all;
  }();
  return tables[static_cast<size_t>(qp_rem)][static_cast<size_t>(ilog2(n) - 2)];
}

}  // namespace detail

inline LevelBlock fdpq_quantise(const CoeffBlock& coeffs, const QuantConfig& cfg) {
  if (coeffs.data.n() != cfg.n) throw_config("quant config does not match block size");
  const auto& tables = detail::fdpq_tables(cfg.qp.rem(), cfg.n);
  LevelBlock levels(cfg.n);
  for (int y = 0; y < cfg.n; ++y) {
    for (int x = 0; x < cfg.n; ++x) {
      const int32_t c = coeffs.data.at(x, y);
      const int64_t mprime = tables.mf[static_cast<size_t>(y) * cfg.n + x];
      const int64_t mag = (std::abs(int64_t{c}) * mprime + cfg.offset) >> cfg.qbits;
      levels.at(x, y) = static_cast<int32_t>(c < 0 ? -mag : mag);
    }
  }
  return levels;
}

inline CoeffBlock fdpq_dequantise(const LevelBlock& levels, const QuantConfig& cfg, const BlockClass& cls) {
  if (levels.n() != cfg.n) throw_config("quant config does not match block size");
  const auto& tables = detail::fdpq_tables(cfg.qp.rem(), cfg.n);
  const int64_t add = int64_t{1} << (cfg.inv_shift - 1);
  CoeffBlock out{Block<int32_t>(cfg.n), cls};
  for (int y = 0; y < cfg.n; ++y) {
    for (int x = 0; x < cfg.n; ++x) {
      const int64_t sprime = tables.sf[static_cast<size_t>(y) * cfg.n + x];
      const int64_t c =
          (int64_t{levels.at(x, y)} * sprime * (int64_t{1} << cfg.qp.per()) + add) >> cfg.inv_shift;
      out.data.at(x, y) = static_cast<int32_t>(clamp_value<int64_t>(c, tx::kCoeffMin, tx::kCoeffMax));
    }
  }
  return out;
}

}  // namespace pqlab
