#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "pqlab/error.hpp"
#include "pqlab/video.hpp"

namespace pqlab {

inline void require_same_geometry(const Plane& a, const Plane& b) {
  if (a.width != b.width || a.height != b.height || a.bit_depth != b.bit_depth)
    throw_config("planes differ in geometry or bit depth");
}

inline double psnr(const Plane& ref, const Plane& test) {
  require_same_geometry(ref, test);
  double sse = 0.0;
  for (size_t i = 0; i < ref.samples.size(); ++i) {
    const double d = double(ref.samples[i]) - double(test.samples[i]);
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / double(ref.samples.size());
  const double max = double(ref.max_value());
  return 10.0 * std::log10(max * max / mse);
}

namespace detail {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimK1 = 0.01;
constexpr double kSsimK2 = 0.03;

inline const std::vector<double>& ssim_kernel() {
  static const std::vector<double> kernel = [] {
    std::vector<double> k(kSsimWindow);
    const int half = kSsimWindow / 2;
    double sum = 0.0;
    for (int i = 0; i < kSsimWindow; ++i) {
      const double d = i - half;
      k[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
      sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
  }();
  return kernel;
}

// Separable Gaussian filter over the valid region (no padding); output is
// (w - 10) x (h - 10).
inline std::vector<double> gaussian_valid(const std::vector<double>& in, int w, int h) {
  const auto& k = ssim_kernel();
  const int ow = w - kSsimWindow + 1;
  const int oh = h - kSsimWindow + 1;
  std::vector<double> horiz(static_cast<size_t>(ow) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < kSsimWindow; ++i) acc += k[i] * in[static_cast<size_t>(y) * w + x + i];
      horiz[static_cast<size_t>(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < kSsimWindow; ++i) acc += k[i] * horiz[static_cast<size_t>(y + i) * ow + x];
      out[static_cast<size_t>(y) * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace detail

struct SsimResult {
  double value = 1.0;
  int map_width = 0;
  int map_height = 0;
  std::vector<double> map;  // per-window SSIM index, valid region only
};

// Standard single-scale SSIM: 11x11 Gaussian window, sigma 1.5, K1 = 0.01,
// K2 = 0.03, L = 2^bit_depth - 1, averaged over valid window positions.
inline SsimResult ssim_with_map(const Plane& ref, const Plane& test) {
  require_same_geometry(ref, test);
  if (ref.width < detail::kSsimWindow || ref.height < detail::kSsimWindow)
    throw_config("plane smaller than the SSIM window");

  const int w = ref.width;
  const int h = ref.height;
  const size_t count = ref.samples.size();
  std::vector<double> x(count), y(count), xx(count), yy(count), xy(count);
  for (size_t i = 0; i < count; ++i) {
    const double a = ref.samples[i];
    const double b = test.samples[i];
    x[i] = a;
    y[i] = b;
    xx[i] = a * a;
    yy[i] = b * b;
    xy[i] = a * b;
  }

  const auto mu_x = detail::gaussian_valid(x, w, h);
  const auto mu_y = detail::gaussian_valid(y, w, h);
  const auto m_xx = detail::gaussian_valid(xx, w, h);
  const auto m_yy = detail::gaussian_valid(yy, w, h);
  const auto m_xy = detail::gaussian_valid(xy, w, h);

  const double L = double(ref.max_value());
  const double c1 = (detail::kSsimK1 * L) * (detail::kSsimK1 * L);
  const double c2 = (detail::kSsimK2 * L) * (detail::kSsimK2 * L);

  SsimResult result;
  result.map_width = w - detail::kSsimWindow + 1;
  result.map_height = h - detail::kSsimWindow + 1;
  result.map.resize(mu_x.size());
  double sum = 0.0;
  for (size_t i = 0; i < mu_x.size(); ++i) {
    const double var_x = m_xx[i] - mu_x[i] * mu_x[i];
    const double var_y = m_yy[i] - mu_y[i] * mu_y[i];
    const double cov = m_xy[i] - mu_x[i] * mu_y[i];
    const double v = ((2.0 * mu_x[i] * mu_y[i] + c1) * (2.0 * cov + c2)) /
                     ((mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + c1) * (var_x + var_y + c2));
    result.map[i] = v;
    sum += v;
  }
  result.value = sum / double(result.map.size());
  return result;
}

inline double ssim(const Plane& ref, const Plane& test) { return ssim_with_map(ref, test).value; }

// SSIM index map as 8-bit grayscale PGM; values clamped to [0, 1].
inline void write_ssim_map_pgm(const SsimResult& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot open '" + path + "' for writing");
  out << "P5\n" << r.map_width << " " << r.map_height << "\n255\n";
  for (double v : r.map) {
    const double c = clamp_value(v, 0.0, 1.0);
    out.put(static_cast<char>(static_cast<int>(std::lround(c * 255.0))));
  }
  if (!out) throw_io("write failure on '" + path + "'");
}

// Per-channel quality plus the unweighted three-channel means.
struct QualityRecord {
  double psnr_y = 0, psnr_cb = 0, psnr_cr = 0, psnr_combined = 0;
  double ssim_y = 0, ssim_cb = 0, ssim_cr = 0, ssim_combined = 0;
};

// Per-frame metrics averaged over the sequence.
inline QualityRecord sequence_quality(const FrameSequence& ref, const FrameSequence& test) {
  if (ref.frame_count() != test.frame_count() || ref.frame_count() == 0)
    throw_config("sequences differ in frame count or are empty");
  QualityRecord q;
  for (size_t f = 0; f < ref.frame_count(); ++f) {
    q.psnr_y += psnr(ref.frames[f].y, test.frames[f].y);
    q.psnr_cb += psnr(ref.frames[f].cb, test.frames[f].cb);
    q.psnr_cr += psnr(ref.frames[f].cr, test.frames[f].cr);
    q.ssim_y += ssim(ref.frames[f].y, test.frames[f].y);
    q.ssim_cb += ssim(ref.frames[f].cb, test.frames[f].cb);
    q.ssim_cr += ssim(ref.frames[f].cr, test.frames[f].cr);
  }
  const double n = double(ref.frame_count());
  q.psnr_y /= n;
  q.psnr_cb /= n;
  q.psnr_cr /= n;
  q.ssim_y /= n;
  q.ssim_cb /= n;
  q.ssim_cr /= n;
  q.psnr_combined = (q.psnr_y + q.psnr_cb + q.psnr_cr) / 3.0;
  q.ssim_combined = (q.ssim_y + q.ssim_cb + q.ssim_cr) / 3.0;
  return q;
}

}  // namespace pqlab
