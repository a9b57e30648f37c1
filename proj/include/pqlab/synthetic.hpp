#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pqlab/error.hpp"
#include "pqlab/video.hpp"

namespace pqlab {

// Deterministic built-in test clips so experiments run without external
// downloads: a smooth gradient, band-limited noise, a high-variance texture
// and a moving edge.
enum class SyntheticClip { kGradient, kNoise, kTexture, kEdge };

inline const char* synthetic_clip_name(SyntheticClip c) {
  switch (c) {
    case SyntheticClip::kGradient: return "gradient";
    case SyntheticClip::kNoise: return "noise";
    case SyntheticClip::kTexture: return "texture";
    case SyntheticClip::kEdge: return "edge";
  }
  return "?";
}

inline SyntheticClip synthetic_clip_from_name(const std::string& s) {
  if (s == "gradient") return SyntheticClip::kGradient;
  if (s == "noise") return SyntheticClip::kNoise;
  if (s == "texture") return SyntheticClip::kTexture;
  if (s == "edge") return SyntheticClip::kEdge;
  throw_config("unknown synthetic clip '" + s + "'");
}

inline const std::vector<SyntheticClip>& synthetic_suite() {
  static const std::vector<SyntheticClip> suite = {SyntheticClip::kGradient, SyntheticClip::kNoise,
                                                   SyntheticClip::kTexture, SyntheticClip::kEdge};
  return suite;
}

namespace detail {

inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Uniform integer in [0, range), portable across platforms.
inline int rng_below(uint64_t& state, int range) {
  return static_cast<int>(splitmix64(state) % static_cast<uint64_t>(range));
}

// Smooths a field with a few 3x3 box passes, clamping at the borders.
inline void box_smooth(std::vector<double>& v, int w, int h, int passes) {
  std::vector<double> tmp(v.size());
  for (int p = 0; p < passes; ++p) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int sx = clamp_value(x + dx, 0, w - 1);
            const int sy = clamp_value(y + dy, 0, h - 1);
            acc += v[static_cast<size_t>(sy) * w + sx];
          }
        }
        tmp[static_cast<size_t>(y) * w + x] = acc / 9.0;
      }
    }
    v.swap(tmp);
  }
}

inline Plane synth_plane(SyntheticClip clip, int w, int h, int bit_depth, int frame, int channel) {
  Plane plane(w, h, bit_depth);
  const int max = plane.max_value();
  const double mid = 0.5 * max;
  uint64_t rng = 0xC0FFEEull * (frame + 1) + 0xABCDull * (channel + 1) +
                 static_cast<uint64_t>(clip) * 0x1234567ull;

  switch (clip) {
    case SyntheticClip::kGradient: {
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          const double t = double(x + y + 3 * frame + 11 * channel) / double(w + h);
          plane.at(x, y) = static_cast<uint16_t>(std::lround(clamp_value(t, 0.0, 1.0) * max));
        }
      break;
    }
    case SyntheticClip::kNoise: {
      // Band-limited: white noise pushed through four box passes.
      std::vector<double> field(static_cast<size_t>(w) * h);
      for (double& v : field) v = rng_below(rng, 2048) / 2047.0 - 0.5;
      box_smooth(field, w, h, 4);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          const double v = mid + field[static_cast<size_t>(y) * w + x] * 1.3 * max;
          plane.at(x, y) = static_cast<uint16_t>(std::lround(clamp_value(v, 0.0, double(max))));
        }
      break;
    }
    case SyntheticClip::kTexture: {
      // High-variance: low frequency sinusoids plus two noise fields, one
      // lightly smoothed for mid frequency grain and one heavily smoothed
      // for large scale structure.
      std::vector<double> grain(static_cast<size_t>(w) * h);
      std::vector<double> structure(static_cast<size_t>(w) * h);
      for (double& v : grain) v = rng_below(rng, 2048) / 2047.0 - 0.5;
      for (double& v : structure) v = rng_below(rng, 2048) / 2047.0 - 0.5;
      box_smooth(grain, w, h, 1);
      box_smooth(structure, w, h, 4);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          const size_t i = static_cast<size_t>(y) * w + x;
          const double s = std::sin(0.30 * x + 0.9 * frame + 2.1 * channel) *
                           std::cos(0.22 * y - 0.4 * frame);
          const double v = mid + (0.16 * s + 0.20 * grain[i] + 0.35 * structure[i]) * max;
          plane.at(x, y) = static_cast<uint16_t>(std::lround(clamp_value(v, 0.0, double(max))));
        }
      break;
    }
    case SyntheticClip::kEdge: {
      // Moving soft edge: a ramp a few samples wide sweeping across the frame.
      const double edge = w / 3.0 + 2.0 * frame + channel;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          const double t = clamp_value((x - edge) / 5.0 + 0.5, 0.0, 1.0);
          const double ramp = t * t * (3.0 - 2.0 * t);
          const double v = (0.22 + 0.56 * ramp + 0.08 * double(y) / double(h)) * max;
          plane.at(x, y) = static_cast<uint16_t>(std::lround(clamp_value(v, 0.0, double(max))));
        }
      break;
    }
  }
  return plane;
}

}  // namespace detail

inline FrameSequence make_synthetic_sequence(SyntheticClip clip, const SequenceInfo& info,
                                             int frame_count) {
  if (frame_count <= 0) throw_config("frame count must be positive");
  FrameSequence seq;
  seq.info = info;
  for (int f = 0; f < frame_count; ++f) {
    Frame frame;
    frame.y = detail::synth_plane(clip, info.width, info.height, info.bit_depth, f, 0);
    frame.cb = detail::synth_plane(clip, info.chroma_width(), info.chroma_height(), info.bit_depth, f, 1);
    frame.cr = detail::synth_plane(clip, info.chroma_width(), info.chroma_height(), info.bit_depth, f, 2);
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

}  // namespace pqlab
