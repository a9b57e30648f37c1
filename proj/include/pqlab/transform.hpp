#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "pqlab/block.hpp"
#include "pqlab/error.hpp"

namespace pqlab {

enum class Channel : uint8_t { kY = 0, kCb = 1, kCr = 2 };
enum class Prediction : uint8_t { kIntra = 0 };

inline const char* channel_name(Channel c) {
  switch (c) {
    case Channel::kY: return "Y";
    case Channel::kCb: return "Cb";
    case Channel::kCr: return "Cr";
  }
  return "?";
}

struct BlockClass {
  Channel channel = Channel::kY;
  Prediction prediction = Prediction::kIntra;
  int n = 4;
};

enum class TransformKind { kDct, kDst };

// DST is reserved for 4x4 intra luma residue; everything else takes the DCT.
constexpr TransformKind transform_kind_for(const BlockClass& cls) {
  return (cls.channel == Channel::kY && cls.prediction == Prediction::kIntra && cls.n == 4)
             ? TransformKind::kDst
             : TransformKind::kDct;
}

struct CoeffBlock {
  Block<int32_t> data;
  BlockClass cls;
};

namespace tx {

// 32-point integer DCT core matrix. The 16/8/4-point matrices are its rows
// subsampled by 2/4/8.
inline constexpr int16_t kDct32[32][32] = {
  { 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64},
  { 90, 90, 88, 85, 82, 78, 73, 67, 61, 54, 46, 38, 31, 22, 13,  4, -4,-13,-22,-31,-38,-46,-54,-61,-67,-73,-78,-82,-85,-88,-90,-90},
  { 90, 87, 80, 70, 57, 43, 25,  9, -9,-25,-43,-57,-70,-80,-87,-90,-90,-87,-80,-70,-57,-43,-25, -9,  9, 25, 43, 57, 70, 80, 87, 90},
  { 90, 82, 67, 46, 22, -4,-31,-54,-73,-85,-90,-88,-78,-61,-38,-13, 13, 38, 61, 78, 88, 90, 85, 73, 54, 31,  4,-22,-46,-67,-82,-90},
  { 89, 75, 50, 18,-18,-50,-75,-89,-89,-75,-50,-18, 18, 50, 75, 89, 89, 75, 50, 18,-18,-50,-75,-89,-89,-75,-50,-18, 18, 50, 75, 89},
  { 88, 67, 31,-13,-54,-82,-90,-78,-46, -4, 38, 73, 90, 85, 61, 22,-22,-61,-85,-90,-73,-38,  4, 46, 78, 90, 82, 54, 13,-31,-67,-88},
  { 87, 57,  9,-43,-80,-90,-70,-25, 25, 70, 90, 80, 43, -9,-57,-87,-87,-57, -9, 43, 80, 90, 70, 25,-25,-70,-90,-80,-43,  9, 57, 87},
  { 85, 46,-13,-67,-90,-73,-22, 38, 82, 88, 54, -4,-61,-90,-78,-31, 31, 78, 90, 61,  4,-54,-88,-82,-38, 22, 73, 90, 67, 13,-46,-85},
  { 83, 36,-36,-83,-83,-36, 36, 83, 83, 36,-36,-83,-83,-36, 36, 83, 83, 36,-36,-83,-83,-36, 36, 83, 83, 36,-36,-83,-83,-36, 36, 83},
  { 82, 22,-54,-90,-61, 13, 78, 85, 31,-46,-90,-67,  4, 73, 88, 38,-38,-88,-73, -4, 67, 90, 46,-31,-85,-78,-13, 61, 90, 54,-22,-82},
  { 80,  9,-70,-87,-25, 57, 90, 43,-43,-90,-57, 25, 87, 70, -9,-80,-80, -9, 70, 87, 25,-57,-90,-43, 43, 90, 57,-25,-87,-70,  9, 80},
  { 78, -4,-82,-73, 13, 85, 67,-22,-88,-61, 31, 90, 54,-38,-90,-46, 46, 90, 38,-54,-90,-31, 61, 88, 22,-67,-85,-13, 73, 82,  4,-78},
  { 75,-18,-89,-50, 50, 89, 18,-75,-75, 18, 89, 50,-50,-89,-18, 75, 75,-18,-89,-50, 50, 89, 18,-75,-75, 18, 89, 50,-50,-89,-18, 75},
  { 73,-31,-90,-22, 78, 67,-38,-90,-13, 82, 61,-46,-88, -4, 85, 54,-54,-85,  4, 88, 46,-61,-82, 13, 90, 38,-67,-78, 22, 90, 31,-73},
  { 70,-43,-87,  9, 90, 25,-80,-57, 57, 80,-25,-90, -9, 87, 43,-70,-70, 43, 87, -9,-90,-25, 80, 57,-57,-80, 25, 90,  9,-87,-43, 70},
  { 67,-54,-78, 38, 85,-22,-90,  4, 90, 13,-88,-31, 82, 46,-73,-61, 61, 73,-46,-82, 31, 88,-13,-90, -4, 90, 22,-85,-38, 78, 54,-67},
  { 64,-64,-64, 64, 64,-64,-64, 64, 64,-64,-64, 64, 64,-64,-64, 64, 64,-64,-64, 64, 64,-64,-64, 64, 64,-64,-64, 64, 64,-64,-64, 64},
  { 61,-73,-46, 82, 31,-88,-13, 90, -4,-90, 22, 85,-38,-78, 54, 67,-67,-54, 78, 38,-85,-22, 90,  4,-90, 13, 88,-31,-82, 46, 73,-61},
  { 57,-80,-25, 90, -9,-87, 43, 70,-70,-43, 87,  9,-90, 25, 80,-57,-57, 80, 25,-90,  9, 87,-43,-70, 70, 43,-87, -9, 90,-25,-80, 57},
  { 54,-85, -4, 88,-46,-61, 82, 13,-90, 38, 67,-78,-22, 90,-31,-73, 73, 31,-90, 22, 78,-67,-38, 90,-13,-82, 61, 46,-88,  4, 85,-54},
  { 50,-89, 18, 75,-75,-18, 89,-50,-50, 89,-18,-75, 75, 18,-89, 50, 50,-89, 18, 75,-75,-18, 89,-50,-50, 89,-18,-75, 75, 18,-89, 50},
  { 46,-90, 38, 54,-90, 31, 61,-88, 22, 67,-85, 13, 73,-82,  4, 78,-78, -4, 82,-73,-13, 85,-67,-22, 88,-61,-31, 90,-54,-38, 90,-46},
  { 43,-90, 57, 25,-87, 70,  9,-80, 80, -9,-70, 87,-25,-57, 90,-43,-43, 90,-57,-25, 87,-70, -9, 80,-80,  9, 70,-87, 25, 57,-90, 43},
  { 38,-88, 73, -4,-67, 90,-46,-31, 85,-78, 13, 61,-90, 54, 22,-82, 82,-22,-54, 90,-61,-13, 78,-85, 31, 46,-90, 67,  4,-73, 88,-38},
  { 36,-83, 83,-36,-36, 83,-83, 36, 36,-83, 83,-36,-36, 83,-83, 36, 36,-83, 83,-36,-36, 83,-83, 36, 36,-83, 83,-36,-36, 83,-83, 36},
  { 31,-78, 90,-61,  4, 54,-88, 82,-38,-22, 73,-90, 67,-13,-46, 85,-85, 46, 13,-67, 90,-73, 22, 38,-82, 88,-54, -4, 61,-90, 78,-31},
  { 25,-70, 90,-80, 43,  9,-57, 87,-87, 57, -9,-43, 80,-90, 70,-25,-25, 70,-90, 80,-43, -9, 57,-87, 87,-57,  9, 43,-80, 90,-70, 25},
  { 22,-61, 85,-90, 73,-38, -4, 46,-78, 90,-82, 54,-13,-31, 67,-88, 88,-67, 31, 13,-54, 82,-90, 78,-46,  4, 38,-73, 90,-85, 61,-22},
  { 18,-50, 75,-89, 89,-75, 50,-18,-18, 50,-75, 89,-89, 75,-50, 18, 18,-50, 75,-89, 89,-75, 50,-18,-18, 50,-75, 89,-89, 75,-50, 18},
  { 13,-38, 61,-78, 88,-90, 85,-73, 54,-31,  4, 22,-46, 67,-82, 90,-90, 82,-67, 46,-22, -4, 31,-54, 73,-85, 90,-88, 78,-61, 38,-13},
  {  9,-25, 43,-57, 70,-80, 87,-90, 90,-87, 80,-70, 57,-43, 25, -9, -9, 25,-43, 57,-70, 80,-87, 90,-90, 87,-80, 70,-57, 43,-25,  9},
  {  4,-13, 22,-31, 38,-46, 54,-61, 67,-73, 78,-82, 85,-88, 90,-90, 90,-90, 88,-85, 82,-78, 73,-67, 61,-54, 46,-38, 31,-22, 13, -4},
};

// 4-point integer DST-VII matrix.
inline constexpr int16_t kDst4[4][4] = {
  {29, 55, 74, 84},
  {74, 74,  0,-74},
  {84,-29,-74, 55},
  {55,-84, 74,-29},
};

inline int matrix_coeff(TransformKind kind, int n, int row, int col) {
  if (kind == TransformKind::kDst) return kDst4[row][col];
  return kDct32[row * (32 / n)][col];
}

constexpr int32_t kCoeffMin = -32768;
constexpr int32_t kCoeffMax = 32767;

// out[k][j] = (sum_i M[k][i] * in[j][i] + round) >> shift   (forward pass)
inline void forward_pass(TransformKind kind, const Block<int32_t>& in, Block<int32_t>& out, int shift) {
  const int n = in.n();
  const int64_t add = int64_t{1} << (shift - 1);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      int64_t acc = 0;
      for (int i = 0; i < n; ++i) acc += int64_t{matrix_coeff(kind, n, k, i)} * in.at(i, j);
      out.at(j, k) = static_cast<int32_t>((acc + add) >> shift);
    }
  }
}

// out[j][k] = clip16((sum_i M[i][k] * in[i][j] + round) >> shift)   (inverse pass)
inline void inverse_pass(TransformKind kind, const Block<int32_t>& in, Block<int32_t>& out, int shift) {
  const int n = in.n();
  const int64_t add = int64_t{1} << (shift - 1);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      int64_t acc = 0;
      for (int i = 0; i < n; ++i) acc += int64_t{matrix_coeff(kind, n, i, k)} * in.at(j, i);
      out.at(k, j) = static_cast<int32_t>(
          clamp_value<int64_t>((acc + add) >> shift, kCoeffMin, kCoeffMax));
    }
  }
}

}  // namespace tx

inline void validate_transform_args(int n, int bit_depth) {
  if (!is_supported_tb_size(n)) throw_config("unsupported transform size " + std::to_string(n));
  if (bit_depth != 8 && bit_depth != 10) throw_config("unsupported bit depth " + std::to_string(bit_depth));
}

// Two separable passes; first-pass shift log2(N)+B-9, second-pass shift log2(N)+6.
inline CoeffBlock forward_transform(const Block<int32_t>& residual, const BlockClass& cls, int bit_depth) {
  const int n = residual.n();
  if (n != cls.n) throw_config("residual size does not match block class");
  validate_transform_args(n, bit_depth);

  const TransformKind kind = transform_kind_for(cls);
  const int shift1 = ilog2(n) + bit_depth - 9;
  const int shift2 = ilog2(n) + 6;

  Block<int32_t> tmp(n);
  CoeffBlock out{Block<int32_t>(n), cls};
  tx::forward_pass(kind, residual, tmp, shift1);
  tx::forward_pass(kind, tmp, out.data, shift2);
  return out;
}

// Inverse passes with shifts 7 and 20-B, intermediates clipped to signed 16 bit.
inline Block<int32_t> inverse_transform(const CoeffBlock& coeffs, int bit_depth) {
  const int n = coeffs.data.n();
  if (n != coeffs.cls.n) throw_config("coefficient size does not match block class");
  validate_transform_args(n, bit_depth);

  const TransformKind kind = transform_kind_for(coeffs.cls);
  const int shift1 = 7;
  const int shift2 = 20 - bit_depth;

  Block<int32_t> tmp(n);
  Block<int32_t> out(n);
  tx::inverse_pass(kind, coeffs.data, tmp, shift1);
  tx::inverse_pass(kind, tmp, out, shift2);
  return out;
}

}  // namespace pqlab
