#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pqlab/block.hpp"
#include "pqlab/error.hpp"

namespace pqlab {

enum class ChromaFormat : uint8_t { k420 = 0, k422 = 1, k444 = 2 };

// Horizontal / vertical chroma subsampling factors.
struct Subsampling {
  int sx;
  int sy;
};

constexpr Subsampling subsampling(ChromaFormat f) {
  switch (f) {
    case ChromaFormat::k420: return {2, 2};
    case ChromaFormat::k422: return {2, 1};
    case ChromaFormat::k444: return {1, 1};
  }
  return {1, 1};
}

inline const char* chroma_format_name(ChromaFormat f) {
  switch (f) {
    case ChromaFormat::k420: return "420";
    case ChromaFormat::k422: return "422";
    case ChromaFormat::k444: return "444";
  }
  return "?";
}

inline ChromaFormat chroma_format_from_name(const std::string& s) {
  if (s == "420") return ChromaFormat::k420;
  if (s == "422") return ChromaFormat::k422;
  if (s == "444") return ChromaFormat::k444;
  throw_config("unknown chroma format '" + s + "' (expected 420, 422 or 444)");
}

// One raster of samples for a single channel.
struct Plane {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  std::vector<uint16_t> samples;  // row major, width*height

  Plane() = default;
  Plane(int w, int h, int depth, uint16_t fill = 0)
      : width(w), height(h), bit_depth(depth), samples(static_cast<size_t>(w) * h, fill) {}

  uint16_t at(int x, int y) const { return samples[static_cast<size_t>(y) * width + x]; }
  uint16_t& at(int x, int y) { return samples[static_cast<size_t>(y) * width + x]; }
  uint16_t max_value() const { return static_cast<uint16_t>((1 << bit_depth) - 1); }

  bool operator==(const Plane&) const = default;
};

struct Frame {
  Plane y;
  Plane cb;
  Plane cr;

  bool operator==(const Frame&) const = default;
};

struct SequenceInfo {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  ChromaFormat chroma_format = ChromaFormat::k420;

  int chroma_width() const {
    const auto s = subsampling(chroma_format);
    return (width + s.sx - 1) / s.sx;
  }
  int chroma_height() const {
    const auto s = subsampling(chroma_format);
    return (height + s.sy - 1) / s.sy;
  }

  bool operator==(const SequenceInfo&) const = default;
};

struct FrameSequence {
  SequenceInfo info;
  std::vector<Frame> frames;

  size_t frame_count() const { return frames.size(); }
  bool operator==(const FrameSequence&) const = default;
};

inline Frame make_frame(const SequenceInfo& info, uint16_t fill = 0) {
  Frame f;
  f.y = Plane(info.width, info.height, info.bit_depth, fill);
  f.cb = Plane(info.chroma_width(), info.chroma_height(), info.bit_depth, fill);
  f.cr = Plane(info.chroma_width(), info.chroma_height(), info.bit_depth, fill);
  return f;
}

// Number of N-aligned block columns/rows covering a dimension (edge blocks padded).
constexpr int padded_grid(int dim, int n) { return (dim + n - 1) / n; }

// Reads an N x N block at (x0, y0); positions past the right/bottom edge
// replicate the last valid column/row.
inline Block<int32_t> extract_block(const Plane& plane, int x0, int y0, int n) {
  if (!is_supported_tb_size(n)) throw_config("unsupported block size " + std::to_string(n));
  if (x0 < 0 || y0 < 0 || x0 % n != 0 || y0 % n != 0 ||
      x0 >= padded_grid(plane.width, n) * n || y0 >= padded_grid(plane.height, n) * n) {
    throw_config("block origin outside the padded grid");
  }
  Block<int32_t> out(n);
  for (int y = 0; y < n; ++y) {
    const int sy = clamp_value(y0 + y, 0, plane.height - 1);
    for (int x = 0; x < n; ++x) {
      const int sx = clamp_value(x0 + x, 0, plane.width - 1);
      out.at(x, y) = plane.at(sx, sy);
    }
  }
  return out;
}

// Writes a block back, dropping cells past the plane edge.
inline void insert_block(Plane& plane, int x0, int y0, const Block<int32_t>& block) {
  const int n = block.n();
  for (int y = 0; y < n && y0 + y < plane.height; ++y) {
    for (int x = 0; x < n && x0 + x < plane.width; ++x) {
      plane.at(x0 + x, y0 + y) =
          static_cast<uint16_t>(clamp_value<int32_t>(block.at(x, y), 0, plane.max_value()));
    }
  }
}

}  // namespace pqlab
