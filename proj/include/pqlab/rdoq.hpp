#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "pqlab/block.hpp"
#include "pqlab/quant.hpp"

namespace pqlab {

struct RdoqParams {
  double lambda = 0.0;
};

// Conventional intra Lagrange multiplier schedule, in sample-domain units.
inline double rdoq_lambda(const Qp& qp) { return 0.57 * std::exp2((qp.value() - 12) / 3.0); }

// One sample unit maps to 2^(15 - B - log2 N) coefficient units after the
// forward transform.
inline double coeff_domain_gain(int n, int bit_depth) {
  return std::exp2(15 - bit_depth - ilog2(n));
}

// level_cost measures distortion in the coefficient domain, so the sample
// domain multiplier has to carry the squared transform gain.
inline RdoqParams make_rdoq_params(const Qp& qp, int n, int bit_depth) {
  const double gain = coeff_domain_gain(n, bit_depth);
  return {rdoq_lambda(qp) * gain * gain};
}

// Deadzone-free floor bracket of the URQ scaler, and its successor.
inline std::pair<int32_t, int32_t> candidate_levels(int32_t coeff, const QuantConfig& cfg) {
  const int32_t l1 = static_cast<int32_t>((std::abs(int64_t{coeff}) * cfg.m) >> cfg.qbits);
  return {l1, l1 + 1};
}

// Order-0 exp-Golomb code length of v >= 0.
inline int eg0_length(int64_t v) {
  int bits = 0;
  int64_t u = v + 1;
  while (u > 1) {
    u >>= 1;
    bits += 2;
  }
  return bits + 1;
}

// Bit estimate: one significance bin for zero, otherwise significance + sign
// + exp-Golomb magnitude. Matches the TB entropy syntax.
inline int rdoq_bits(int32_t level) {
  if (level == 0) return 1;
  return 2 + eg0_length(std::abs(int64_t{level}) - 1);
}

// Lagrangian cost of coding |C| as level l: squared coefficient-domain
// reconstruction error plus lambda times the bit estimate.
inline double level_cost(int32_t coeff, int32_t level, const QuantConfig& cfg, const RdoqParams& params) {
  const int32_t recon = urq_dequantise_one(level, cfg);
  const double err = double(std::abs(int64_t{coeff})) - double(recon);
  return err * err + params.lambda * rdoq_bits(level);
}

inline int32_t rdoq_quantise_one(int32_t coeff, const QuantConfig& cfg, const RdoqParams& params) {
  const auto [l1, l2] = candidate_levels(coeff, cfg);
  int32_t best = 0;
  double best_cost = level_cost(coeff, 0, cfg, params);
  for (int32_t cand : {l1, l2}) {
    if (cand == 0) continue;
    const double cost = level_cost(coeff, cand, cfg, params);
    if (cost < best_cost) {  // ties break toward the smaller level
      best_cost = cost;
      best = cand;
    }
  }
  return coeff < 0 ? -best : best;
}

inline LevelBlock rdoq_quantise(const CoeffBlock& coeffs, const QuantConfig& cfg, const RdoqParams& params) {
  if (coeffs.data.n() != cfg.n) throw_config("quant config does not match block size");
  LevelBlock levels(cfg.n);
  for (int y = 0; y < cfg.n; ++y)
    for (int x = 0; x < cfg.n; ++x)
      levels.at(x, y) = rdoq_quantise_one(coeffs.data.at(x, y), cfg, params);
  return levels;
}

}  // namespace pqlab
