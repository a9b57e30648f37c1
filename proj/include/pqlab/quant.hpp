#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "pqlab/block.hpp"
#include "pqlab/error.hpp"
#include "pqlab/transform.hpp"

namespace pqlab {

constexpr int kQpMin = 0;
constexpr int kQpMax = 51;

// Quantisation parameter. Chroma QP offsets are zero, so one value covers
// all three channels.
class Qp {
 public:
  explicit Qp(int value) : value_(value) {
    if (value < kQpMin || value > kQpMax)
      throw_config("QP " + std::to_string(value) + " outside [0, 51]");
  }

  int value() const { return value_; }
  int rem() const { return value_ % 6; }
  int per() const { return value_ / 6; }

  bool operator==(const Qp&) const = default;

 private:
  int value_;
};

// Multiplication factors (quantise) and scaling factors (dequantise),
// indexed by QP mod 6. mf[i]*sf[i] stays within 0.01% of 2^20.
struct QuantTables {
  std::array<int32_t, 6> mf;
  std::array<int32_t, 6> sf;
};

inline constexpr QuantTables kQuantTables = {
    {26214, 23302, 20560, 18396, 16384, 14564},
    {40, 45, 51, 57, 64, 72},
};

inline double qstep_from_qp(const Qp& qp) { return std::exp2((qp.value() - 4) / 6.0); }

// Inverse map: ceil(6*log2(qstep)) + 4, clamped to the QP range. Tolerates
// 4-decimal roundings of tabulated QStep values.
inline Qp qp_from_qstep(double qstep) {
  if (!(qstep > 0.0)) throw_config("qstep must be positive");
  constexpr double kPrintSlop = 1e-3;
  const int raw = static_cast<int>(std::ceil(6.0 * std::log2(qstep) - kPrintSlop)) + 4;
  return Qp(clamp_value(raw, kQpMin, kQpMax));
}

struct MfSf {
  int32_t m;
  int32_t s;
};

inline MfSf mf_sf(const Qp& qp) {
  return {kQuantTables.mf[static_cast<size_t>(qp.rem())], kQuantTables.sf[static_cast<size_t>(qp.rem())]};
}

// Closed forms behind the tables; they agree with the table entries within
// 1% and exist as a sanity check, not as the lookup path. The SF closed form
// rounds to nearest: a plain ceiling contradicts the table at QP mod 6 = 0, 1.
inline int32_t closed_form_mf(const Qp& qp) {
  return static_cast<int32_t>(std::ceil(std::exp2(14) / qstep_from_qp(Qp(qp.rem()))));
}
inline int32_t closed_form_sf(const Qp& qp) {
  return static_cast<int32_t>(std::llround(64.0 * qstep_from_qp(Qp(qp.rem()))));
}

enum class DeadzoneMode : uint8_t { kIntraThird = 0, kHalf = 1 };

inline const char* deadzone_name(DeadzoneMode m) {
  return m == DeadzoneMode::kIntraThird ? "third" : "half";
}

// Derived per-TB quantiser state. Every coefficient position in the TB uses
// the same (m, offset, qbits) triple.
struct QuantConfig {
  Qp qp;
  int n;
  int bit_depth;
  DeadzoneMode deadzone;

  int qbits;          // 14 + floor(QP/6) + (15 - B - log2 N)
  int64_t offset;     // deadzone rounding offset, a fraction of 2^qbits
  int inv_shift;      // log2 N - 1 + (B - 8)
  int32_t m;
  int32_t s;
};

inline QuantConfig make_quant_config(const Qp& qp, int n, int bit_depth,
                                     DeadzoneMode deadzone = DeadzoneMode::kHalf) {
  validate_transform_args(n, bit_depth);
  QuantConfig cfg{qp, n, bit_depth, deadzone, 0, 0, 0, 0, 0};
  cfg.qbits = 14 + qp.per() + (15 - bit_depth - ilog2(n));
  if (cfg.qbits <= 0) throw_config("non-positive qbits");
  const int64_t unit = int64_t{1} << cfg.qbits;
  cfg.offset = deadzone == DeadzoneMode::kIntraThird ? unit / 3 : unit / 2;
  cfg.inv_shift = ilog2(n) - 1 + (bit_depth - 8);
  const MfSf t = mf_sf(qp);
  cfg.m = t.m;
  cfg.s = t.s;
  return cfg;
}

inline int32_t urq_quantise_one(int32_t coeff, const QuantConfig& cfg) {
  const int64_t mag = (std::abs(int64_t{coeff}) * cfg.m + cfg.offset) >> cfg.qbits;
  return static_cast<int32_t>(coeff < 0 ? -mag : mag);
}

inline int32_t urq_dequantise_one(int32_t level, const QuantConfig& cfg) {
  const int64_t add = int64_t{1} << (cfg.inv_shift - 1);
  const int64_t c = (int64_t{level} * cfg.s * (int64_t{1} << cfg.qp.per()) + add) >> cfg.inv_shift;
  return static_cast<int32_t>(clamp_value<int64_t>(c, tx::kCoeffMin, tx::kCoeffMax));
}

inline LevelBlock urq_quantise(const CoeffBlock& coeffs, const QuantConfig& cfg) {
  if (coeffs.data.n() != cfg.n) throw_config("quant config does not match block size");
  LevelBlock levels(cfg.n);
  for (int y = 0; y < cfg.n; ++y)
    for (int x = 0; x < cfg.n; ++x) levels.at(x, y) = urq_quantise_one(coeffs.data.at(x, y), cfg);
  return levels;
}

inline CoeffBlock urq_dequantise(const LevelBlock& levels, const QuantConfig& cfg, const BlockClass& cls) {
  if (levels.n() != cfg.n) throw_config("quant config does not match block size");
  CoeffBlock out{Block<int32_t>(cfg.n), cls};
  for (int y = 0; y < cfg.n; ++y)
    for (int x = 0; x < cfg.n; ++x) out.data.at(x, y) = urq_dequantise_one(levels.at(x, y), cfg);
  return out;
}

}  // namespace pqlab
