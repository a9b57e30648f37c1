#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pqlab/error.hpp"

namespace pqlab {

// Carry-aware binary range coder. Probabilities are 12-bit states; the range
// split is a multiplication against the current 32-bit range, renormalised a
// byte at a time. Contexts adapt with an exponential-decay update.
namespace rc {

constexpr int kProbBits = 12;
constexpr uint16_t kProbOne = 1u << kProbBits;
constexpr uint16_t kProbHalf = kProbOne / 2;
constexpr int kAdaptShift = 5;
constexpr uint32_t kTopValue = 1u << 24;

// Probability of the next bin being zero.
struct BitContext {
  uint16_t prob_zero = kProbHalf;
};

class RangeEncoder {
 public:
  explicit RangeEncoder(std::vector<uint8_t>& out) : out_(out) {}

  void encode(BitContext& ctx, int bit) {
    encode_raw(ctx.prob_zero, bit);
    if (bit == 0) {
      ctx.prob_zero = static_cast<uint16_t>(ctx.prob_zero + ((kProbOne - ctx.prob_zero) >> kAdaptShift));
    } else {
      ctx.prob_zero = static_cast<uint16_t>(ctx.prob_zero - (ctx.prob_zero >> kAdaptShift));
    }
    ++bins_;
  }

  // Equiprobable bin, no adaptation.
  void encode_bypass(int bit) {
    encode_raw(kProbHalf, bit);
    ++bins_;
  }

  void encode_bypass_bits(uint32_t value, int count) {
    for (int i = count - 1; i >= 0; --i) encode_bypass((value >> i) & 1);
  }

  // Order-0 exp-Golomb, bypass bins.
  void encode_bypass_eg0(uint32_t value) {
    const uint64_t u = uint64_t{value} + 1;
    int top = 63;
    while (((u >> top) & 1) == 0) --top;
    for (int i = 0; i < top; ++i) encode_bypass(0);
    for (int i = top; i >= 0; --i) encode_bypass(static_cast<int>((u >> i) & 1));
  }

  // Terminates the stream; the encoder must not be used afterwards.
  void finish() {
    for (int i = 0; i < 5; ++i) shift_low();
  }

  uint64_t bins_encoded() const { return bins_; }

 private:
  void encode_raw(uint16_t prob_zero, int bit) {
    const uint32_t bound = (range_ >> kProbBits) * prob_zero;
    if (bit == 0) {
      range_ = bound;
    } else {
      low_ += bound;
      range_ -= bound;
    }
    while (range_ < kTopValue) {
      range_ <<= 8;
      shift_low();
    }
  }

  void shift_low() {
    if (static_cast<uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
      const uint8_t carry = static_cast<uint8_t>(low_ >> 32);
      out_.push_back(static_cast<uint8_t>(cache_ + carry));
      while (pending_ > 0) {
        out_.push_back(static_cast<uint8_t>(0xFF + carry));
        --pending_;
      }
      cache_ = static_cast<uint8_t>(low_ >> 24);
    } else {
      ++pending_;
    }
    low_ = (low_ << 8) & 0xFFFFFFFFull;
  }

  std::vector<uint8_t>& out_;
  uint64_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint8_t cache_ = 0;
  uint64_t pending_ = 0;
  uint64_t bins_ = 0;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const uint8_t> in) : in_(in) {
    next_byte();  // encoder cache priming byte
    for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
  }

  int decode(BitContext& ctx) {
    const int bit = decode_raw(ctx.prob_zero);
    if (bit == 0) {
      ctx.prob_zero = static_cast<uint16_t>(ctx.prob_zero + ((kProbOne - ctx.prob_zero) >> kAdaptShift));
    } else {
      ctx.prob_zero = static_cast<uint16_t>(ctx.prob_zero - (ctx.prob_zero >> kAdaptShift));
    }
    return bit;
  }

  int decode_bypass() { return decode_raw(kProbHalf); }

  uint32_t decode_bypass_bits(int count) {
    uint32_t v = 0;
    for (int i = 0; i < count; ++i) v = (v << 1) | static_cast<uint32_t>(decode_bypass());
    return v;
  }

  uint32_t decode_bypass_eg0() {
    int zeros = 0;
    while (decode_bypass() == 0) {
      if (++zeros > 32) throw_format("corrupt exp-Golomb prefix");
    }
    uint64_t u = 1;
    for (int i = 0; i < zeros; ++i) u = (u << 1) | static_cast<uint64_t>(decode_bypass());
    return static_cast<uint32_t>(u - 1);
  }

  size_t bytes_consumed() const { return pos_; }

 private:
  int decode_raw(uint16_t prob_zero) {
    const uint32_t bound = (range_ >> kProbBits) * prob_zero;
    int bit;
    if (code_ < bound) {
      range_ = bound;
      bit = 0;
    } else {
      code_ -= bound;
      range_ -= bound;
      bit = 1;
    }
    while (range_ < kTopValue) {
      range_ <<= 8;
      code_ = (code_ << 8) | next_byte();
    }
    return bit;
  }

  uint8_t next_byte() {
    if (pos_ >= in_.size()) throw_format("truncated bitstream");
    return in_[pos_++];
  }

  std::span<const uint8_t> in_;
  size_t pos_ = 0;
  uint32_t code_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
};

}  // namespace rc
}  // namespace pqlab
