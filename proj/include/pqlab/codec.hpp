#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pqlab/block.hpp"
#include "pqlab/error.hpp"
#include "pqlab/fdpq.hpp"
#include "pqlab/quant.hpp"
#include "pqlab/range_coder.hpp"
#include "pqlab/raw_io.hpp"
#include "pqlab/rdoq.hpp"
#include "pqlab/scan.hpp"
#include "pqlab/transform.hpp"
#include "pqlab/video.hpp"

namespace pqlab {

enum class Quantiser : uint8_t { kUrq = 0, kRdoq = 1, kFdpq = 2 };

inline const char* quantiser_name(Quantiser q) {
  switch (q) {
    case Quantiser::kUrq: return "urq";
    case Quantiser::kRdoq: return "rdoq";
    case Quantiser::kFdpq: return "fdpq";
  }
  return "?";
}

inline Quantiser quantiser_from_name(const std::string& s) {
  if (s == "urq") return Quantiser::kUrq;
  if (s == "rdoq") return Quantiser::kRdoq;
  if (s == "fdpq") return Quantiser::kFdpq;
  throw_config("unknown quantiser '" + s + "' (expected urq, rdoq or fdpq)");
}

enum class IntraMode : uint8_t { kDc = 0, kHorizontal = 1, kVertical = 2 };

struct CodecConfig {
  int tb_size = 8;
  int qp = 32;
  Quantiser quantiser = Quantiser::kUrq;
  DeadzoneMode deadzone = DeadzoneMode::kHalf;
  ScanKind scan = ScanKind::kDiagonal;
};

constexpr std::array<uint8_t, 4> kBitstreamMagic = {'P', 'Q', 'L', 'B'};
constexpr uint8_t kBitstreamVersion = 1;
constexpr size_t kHeaderSize = 32;

struct BitstreamHeader {
  SequenceInfo info;
  uint32_t frame_count = 0;
  CodecConfig config;
};

namespace detail {

inline void put_u32le(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xFF));
  out.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<uint8_t>((v >> 24) & 0xFF));
}

inline uint32_t get_u32le(std::span<const uint8_t> in, size_t pos) {
  return static_cast<uint32_t>(in[pos]) | (static_cast<uint32_t>(in[pos + 1]) << 8) |
         (static_cast<uint32_t>(in[pos + 2]) << 16) | (static_cast<uint32_t>(in[pos + 3]) << 24);
}

}  // namespace detail

inline void write_header(std::vector<uint8_t>& out, const BitstreamHeader& h) {
  out.insert(out.end(), kBitstreamMagic.begin(), kBitstreamMagic.end());
  out.push_back(kBitstreamVersion);
  out.push_back(static_cast<uint8_t>(h.info.bit_depth));
  out.push_back(static_cast<uint8_t>(h.info.chroma_format));
  out.push_back(static_cast<uint8_t>(h.config.quantiser));
  detail::put_u32le(out, static_cast<uint32_t>(h.info.width));
  detail::put_u32le(out, static_cast<uint32_t>(h.info.height));
  detail::put_u32le(out, h.frame_count);
  out.push_back(static_cast<uint8_t>(h.config.tb_size));
  out.push_back(static_cast<uint8_t>(h.config.qp));
  out.push_back(static_cast<uint8_t>(h.config.deadzone));
  out.push_back(static_cast<uint8_t>(h.config.scan));
  out.insert(out.end(), 8, 0);  // reserved
}

inline BitstreamHeader read_header(std::span<const uint8_t> in) {
  if (in.size() < kHeaderSize) throw_format("bitstream shorter than its header");
  if (!std::equal(kBitstreamMagic.begin(), kBitstreamMagic.end(), in.begin()))
    throw_format("bad bitstream magic");
  if (in[4] != kBitstreamVersion)
    throw_format("unsupported bitstream version " + std::to_string(in[4]));

  BitstreamHeader h;
  h.info.bit_depth = in[5];
  if (h.info.bit_depth != 8 && h.info.bit_depth != 10) throw_format("bad bit depth in header");
  if (in[6] > 2) throw_format("bad chroma format in header");
  h.info.chroma_format = static_cast<ChromaFormat>(in[6]);
  if (in[7] > 2) throw_format("bad quantiser id in header");
  h.config.quantiser = static_cast<Quantiser>(in[7]);
  h.info.width = static_cast<int>(detail::get_u32le(in, 8));
  h.info.height = static_cast<int>(detail::get_u32le(in, 12));
  if (h.info.width <= 0 || h.info.height <= 0) throw_format("bad dimensions in header");
  h.frame_count = detail::get_u32le(in, 16);
  h.config.tb_size = in[20];
  if (!is_supported_tb_size(h.config.tb_size)) throw_format("bad TB size in header");
  h.config.qp = in[21];
  if (h.config.qp > kQpMax) throw_format("bad QP in header");
  if (in[22] > 1) throw_format("bad deadzone mode in header");
  h.config.deadzone = static_cast<DeadzoneMode>(in[22]);
  if (in[23] > 2) throw_format("bad scan kind in header");
  h.config.scan = static_cast<ScanKind>(in[23]);
  return h;
}

// Adaptive contexts, reset at each frame boundary.
struct CoderContexts {
  rc::BitContext cbf;
  rc::BitContext significance;
};

// TB syntax: coded-block flag; if set, the forward-scan index of the last
// significant coefficient as a fixed-width bypass field, then from that
// position back to DC one significance bin per cell with sign and
// exp-Golomb magnitude for significant cells.
inline void encode_tb(const LevelBlock& levels, const ScanOrder& scan, rc::RangeEncoder& enc,
                      CoderContexts& ctx) {
  const int n = levels.n();
  const size_t cells = scan.cells();

  std::optional<size_t> last;
  for (size_t i = 0; i < cells; ++i) {
    const ScanPos& p = scan.forward(i);
    if (levels.at(p.x, p.y) != 0) last = i;
  }

  enc.encode(ctx.cbf, last.has_value() ? 1 : 0);
  if (!last.has_value()) return;

  const int index_bits = 2 * ilog2(n);
  enc.encode_bypass_bits(static_cast<uint32_t>(*last), index_bits);

  for (size_t i = *last + 1; i-- > 0;) {
    const ScanPos& p = scan.forward(i);
    const int32_t level = levels.at(p.x, p.y);
    enc.encode(ctx.significance, level != 0 ? 1 : 0);
    if (level != 0) {
      enc.encode_bypass(level < 0 ? 1 : 0);
      enc.encode_bypass_eg0(static_cast<uint32_t>(std::abs(int64_t{level})) - 1);
    }
  }
}

inline LevelBlock decode_tb(int n, const ScanOrder& scan, rc::RangeDecoder& dec, CoderContexts& ctx) {
  LevelBlock levels(n, 0);
  if (dec.decode(ctx.cbf) == 0) return levels;

  const int index_bits = 2 * ilog2(n);
  const size_t last = dec.decode_bypass_bits(index_bits);
  if (last >= scan.cells()) throw_format("last significant position outside the TB");

  for (size_t i = last + 1; i-- > 0;) {
    const ScanPos& p = scan.forward(i);
    if (dec.decode(ctx.significance) != 0) {
      const int sign = dec.decode_bypass();
      const int64_t mag = int64_t{dec.decode_bypass_eg0()} + 1;
      levels.at(p.x, p.y) = static_cast<int32_t>(sign ? -mag : mag);
    }
  }
  return levels;
}

namespace detail {

// Chroma TBs shrink with the horizontal subsampling factor, floored at 4x4.
inline int chroma_tb_size(int tb_size, ChromaFormat format) {
  return std::max(4, tb_size / subsampling(format).sx);
}

inline int32_t recon_sample(const Plane& recon, int x, int y) {
  return recon.at(clamp_value(x, 0, recon.width - 1), clamp_value(y, 0, recon.height - 1));
}

// Builds the prediction for one mode from previously reconstructed samples.
inline Block<int32_t> predict(const Plane& recon, int x0, int y0, int n, IntraMode mode, int bit_depth) {
  Block<int32_t> pred(n);
  const bool top = y0 > 0;
  const bool left = x0 > 0;
  switch (mode) {
    case IntraMode::kDc: {
      int64_t sum = 0;
      int count = 0;
      if (top)
        for (int x = 0; x < n; ++x, ++count) sum += recon_sample(recon, x0 + x, y0 - 1);
      if (left)
        for (int y = 0; y < n; ++y, ++count) sum += recon_sample(recon, x0 - 1, y0 + y);
      const int32_t dc =
          count > 0 ? static_cast<int32_t>((sum + count / 2) / count) : (1 << (bit_depth - 1));
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) pred.at(x, y) = dc;
      break;
    }
    case IntraMode::kHorizontal:
      for (int y = 0; y < n; ++y) {
        const int32_t v = recon_sample(recon, x0 - 1, y0 + y);
        for (int x = 0; x < n; ++x) pred.at(x, y) = v;
      }
      break;
    case IntraMode::kVertical:
      for (int x = 0; x < n; ++x) {
        const int32_t v = recon_sample(recon, x0 + x, y0 - 1);
        for (int y = 0; y < n; ++y) pred.at(x, y) = v;
      }
      break;
  }
  return pred;
}

inline IntraMode choose_mode(const Plane& recon, const Block<int32_t>& orig, int x0, int y0, int n,
                             int bit_depth) {
  const bool top = y0 > 0;
  const bool left = x0 > 0;
  IntraMode best = IntraMode::kDc;
  int64_t best_sse = -1;
  for (IntraMode mode : {IntraMode::kDc, IntraMode::kHorizontal, IntraMode::kVertical}) {
    if (mode == IntraMode::kHorizontal && !left) continue;
    if (mode == IntraMode::kVertical && !top) continue;
    const Block<int32_t> pred = predict(recon, x0, y0, n, mode, bit_depth);
    int64_t sse = 0;
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        const int64_t d = orig.at(x, y) - pred.at(x, y);
        sse += d * d;
      }
    }
    if (best_sse < 0 || sse < best_sse) {
      best_sse = sse;
      best = mode;
    }
  }
  return best;
}

inline LevelBlock quantise_block(const CoeffBlock& coeffs, const QuantConfig& cfg, Quantiser quantiser,
                                 const RdoqParams& rdoq) {
  switch (quantiser) {
    case Quantiser::kUrq: return urq_quantise(coeffs, cfg);
    case Quantiser::kRdoq: return rdoq_quantise(coeffs, cfg, rdoq);
    case Quantiser::kFdpq: return fdpq_quantise(coeffs, cfg);
  }
  throw_config("bad quantiser");
}

inline CoeffBlock dequantise_block(const LevelBlock& levels, const QuantConfig& cfg,
                                   Quantiser quantiser, const BlockClass& cls) {
  // URQ and RDOQ share the uniform reconstruction path; FDPQ applies its
  // position-dependent scaling factor, identically on both codec sides.
  if (quantiser == Quantiser::kFdpq) return fdpq_dequantise(levels, cfg, cls);
  return urq_dequantise(levels, cfg, cls);
}

struct ChannelGeometry {
  Channel channel;
  int n;
};

inline std::array<ChannelGeometry, 3> channel_layout(const CodecConfig& cfg, ChromaFormat format) {
  const int nc = chroma_tb_size(cfg.tb_size, format);
  return {{{Channel::kY, cfg.tb_size}, {Channel::kCb, nc}, {Channel::kCr, nc}}};
}

template <bool kEncode>
inline void code_channel(const Plane* orig, Plane& recon, Channel channel, int n,
                         const CodecConfig& cfg, const SequenceInfo& info, rc::RangeEncoder* enc,
                         rc::RangeDecoder* dec, CoderContexts& ctx) {
  const Qp qp(cfg.qp);
  const QuantConfig qcfg = make_quant_config(qp, n, info.bit_depth, cfg.deadzone);
  const RdoqParams rdoq = make_rdoq_params(qp, n, info.bit_depth);
  const ScanOrder& scan = scan_order(cfg.scan, n);
  const BlockClass cls{channel, Prediction::kIntra, n};
  const int grid_w = padded_grid(recon.width, n);
  const int grid_h = padded_grid(recon.height, n);

  for (int by = 0; by < grid_h; ++by) {
    for (int bx = 0; bx < grid_w; ++bx) {
      const int x0 = bx * n;
      const int y0 = by * n;

      IntraMode mode;
      LevelBlock levels(n, 0);
      if constexpr (kEncode) {
        const Block<int32_t> src = extract_block(*orig, x0, y0, n);
        mode = choose_mode(recon, src, x0, y0, n, info.bit_depth);
        enc->encode_bypass_bits(static_cast<uint32_t>(mode), 2);

        const Block<int32_t> pred = predict(recon, x0, y0, n, mode, info.bit_depth);
        Block<int32_t> residual(n);
        for (int y = 0; y < n; ++y)
          for (int x = 0; x < n; ++x) residual.at(x, y) = src.at(x, y) - pred.at(x, y);

        const CoeffBlock coeffs = forward_transform(residual, cls, info.bit_depth);
        levels = quantise_block(coeffs, qcfg, cfg.quantiser, rdoq);
        encode_tb(levels, scan, *enc, ctx);
      } else {
        const uint32_t mode_bits = dec->decode_bypass_bits(2);
        if (mode_bits > 2) throw_format("bad intra mode id");
        mode = static_cast<IntraMode>(mode_bits);
        levels = decode_tb(n, scan, *dec, ctx);
      }

      const CoeffBlock rec_coeffs = dequantise_block(levels, qcfg, cfg.quantiser, cls);
      const Block<int32_t> rec_residual = inverse_transform(rec_coeffs, info.bit_depth);
      const Block<int32_t> pred = predict(recon, x0, y0, n, mode, info.bit_depth);

      Block<int32_t> rec(n);
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
          rec.at(x, y) = clamp_value<int32_t>(pred.at(x, y) + rec_residual.at(x, y), 0,
                                              (1 << info.bit_depth) - 1);
      insert_block(recon, x0, y0, rec);
    }
  }
}

}  // namespace detail

// Encodes one frame; returns the entropy payload and the in-loop
// reconstruction that subsequent predictions (and the decoder) reproduce.
inline std::vector<uint8_t> encode_frame(const Frame& frame, const SequenceInfo& info,
                                         const CodecConfig& cfg, Frame* recon_out) {
  if (frame.y.width != info.width || frame.y.height != info.height ||
      frame.y.bit_depth != info.bit_depth) {
    throw_config("frame does not match the sequence geometry");
  }

  std::vector<uint8_t> payload;
  rc::RangeEncoder enc(payload);
  CoderContexts ctx;
  Frame recon = make_frame(info);

  const auto layout = detail::channel_layout(cfg, info.chroma_format);
  const Plane* orig[3] = {&frame.y, &frame.cb, &frame.cr};
  Plane* rec[3] = {&recon.y, &recon.cb, &recon.cr};
  for (int c = 0; c < 3; ++c) {
    detail::code_channel<true>(orig[c], *rec[c], layout[c].channel, layout[c].n, cfg, info, &enc,
                               nullptr, ctx);
  }
  enc.finish();
  if (recon_out) *recon_out = std::move(recon);
  return payload;
}

inline Frame decode_frame(std::span<const uint8_t> payload, const SequenceInfo& info,
                          const CodecConfig& cfg) {
  rc::RangeDecoder dec(payload);
  CoderContexts ctx;
  Frame recon = make_frame(info);

  const auto layout = detail::channel_layout(cfg, info.chroma_format);
  Plane* rec[3] = {&recon.y, &recon.cb, &recon.cr};
  for (int c = 0; c < 3; ++c) {
    detail::code_channel<false>(nullptr, *rec[c], layout[c].channel, layout[c].n, cfg, info, nullptr,
                                &dec, ctx);
  }
  return recon;
}

// Header plus length-prefixed frame payloads. The optional recon output is
// the encoder's in-loop reconstruction, bit-exactly what decode returns.
inline std::vector<uint8_t> encode_sequence(const FrameSequence& seq, const CodecConfig& cfg,
                                            FrameSequence* recon_out = nullptr) {
  std::vector<uint8_t> out;
  BitstreamHeader header{seq.info, static_cast<uint32_t>(seq.frame_count()), cfg};
  write_header(out, header);

  if (recon_out) {
    recon_out->info = seq.info;
    recon_out->frames.clear();
  }
  for (const Frame& frame : seq.frames) {
    Frame recon;
    const std::vector<uint8_t> payload = encode_frame(frame, seq.info, cfg, &recon);
    detail::put_u32le(out, static_cast<uint32_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
    if (recon_out) recon_out->frames.push_back(std::move(recon));
  }
  return out;
}

inline FrameSequence decode_sequence(std::span<const uint8_t> bits, BitstreamHeader* header_out = nullptr) {
  const BitstreamHeader header = read_header(bits);
  if (header_out) *header_out = header;

  FrameSequence seq;
  seq.info = header.info;
  size_t pos = kHeaderSize;
  for (uint32_t f = 0; f < header.frame_count; ++f) {
    if (pos + 4 > bits.size()) throw_format("truncated frame length field");
    const uint32_t len = detail::get_u32le(bits, pos);
    pos += 4;
    if (pos + len > bits.size()) throw_format("truncated frame payload");
    seq.frames.push_back(decode_frame(bits.subspan(pos, len), header.info, header.config));
    pos += len;
  }
  return seq;
}

}  // namespace pqlab
