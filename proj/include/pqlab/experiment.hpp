#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pqlab/codec.hpp"
#include "pqlab/error.hpp"
#include "pqlab/fdpq.hpp"
#include "pqlab/metrics.hpp"
#include "pqlab/quant.hpp"
#include "pqlab/raw_io.hpp"
#include "pqlab/rdoq.hpp"
#include "pqlab/synthetic.hpp"
#include "pqlab/video.hpp"

namespace pqlab {

struct ClipSpec {
  std::string name;
  std::optional<SyntheticClip> synthetic;
  std::string path;  // raw file when not synthetic
  SequenceInfo info;
  int frame_count = 3;  // synthetic clips; files provide their own count
};

struct ExperimentConfig {
  std::vector<ClipSpec> clips;
  int tb_size = 8;
  std::vector<int> qps = {17, 22, 27, 32, 37};
  std::vector<Quantiser> quantisers = {Quantiser::kUrq, Quantiser::kRdoq, Quantiser::kFdpq};
  DeadzoneMode deadzone = DeadzoneMode::kHalf;
  ScanKind scan = ScanKind::kDiagonal;
  std::string output_dir;
  bool write_files = true;
};

struct RateRow {
  std::string clip;
  ChromaFormat chroma_format = ChromaFormat::k420;
  int bit_depth = 8;
  Quantiser quantiser = Quantiser::kUrq;
  int qp = 0;
  uint64_t bits = 0;
  double bits_per_frame = 0.0;
  QualityRecord quality;
  double encode_ms = 0.0;
  double decode_ms = 0.0;
  DeadzoneMode deadzone = DeadzoneMode::kHalf;
  double lambda = 0.0;  // zero for quantisers without a rate model
};

struct ComparisonRow {
  std::string clip;
  double fdpq_vs_rdoq_pct = 0.0;  // mean over the QP list of per-QP bit deltas
};

struct RateReport {
  std::vector<RateRow> rows;
};

// Recomputed from the data rows on every call; nothing is cached.
inline std::vector<ComparisonRow> fdpq_vs_rdoq_deltas(const RateReport& report) {
  std::vector<ComparisonRow> out;
  std::vector<std::string> clips;
  for (const RateRow& row : report.rows)
    if (std::find(clips.begin(), clips.end(), row.clip) == clips.end()) clips.push_back(row.clip);

  for (const std::string& clip : clips) {
    std::map<int, uint64_t> fdpq_bits, rdoq_bits;
    for (const RateRow& row : report.rows) {
      if (row.clip != clip) continue;
      if (row.quantiser == Quantiser::kFdpq) fdpq_bits[row.qp] = row.bits;
      if (row.quantiser == Quantiser::kRdoq) rdoq_bits[row.qp] = row.bits;
    }
    double sum = 0.0;
    int count = 0;
    for (const auto& [qp, bits] : fdpq_bits) {
      const auto it = rdoq_bits.find(qp);
      if (it == rdoq_bits.end() || it->second == 0) continue;
      sum += 100.0 * (double(bits) - double(it->second)) / double(it->second);
      ++count;
    }
    if (count > 0) out.push_back({clip, sum / count});
  }
  return out;
}

namespace detail {

inline std::string fmt_double(double v, int precision) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

inline FrameSequence realise_clip(const ClipSpec& clip) {
  if (clip.synthetic) return make_synthetic_sequence(*clip.synthetic, clip.info, clip.frame_count);
  return load_raw(clip.path, clip.info);
}

inline void write_bytes(const std::string& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw_io("write failure on '" + path + "'");
}

}  // namespace detail

inline void validate_experiment_config(const ExperimentConfig& config) {
  if (config.clips.empty()) throw_config("experiment needs at least one clip");
  if (config.quantisers.empty()) throw_config("experiment needs at least one quantiser");
  if (config.qps.empty()) throw_config("experiment needs at least one QP");
  for (int qp : config.qps) Qp{qp};
  if (!is_supported_tb_size(config.tb_size)) throw_config("unsupported TB size");
}

// Encodes, decodes and measures every (clip, quantiser, QP) job in config
// order. Every decode is checked bit-exactly against the encoder's in-loop
// reconstruction; bitstreams and reconstructions land in output_dir.
inline RateReport run_experiment(const ExperimentConfig& config) {
  validate_experiment_config(config);
  namespace fs = std::filesystem;
  if (config.write_files) fs::create_directories(config.output_dir);

  RateReport report;
  for (const ClipSpec& clip : config.clips) {
    const FrameSequence source = detail::realise_clip(clip);
    if (config.write_files && clip.synthetic)
      write_raw(source, (fs::path(config.output_dir) / (clip.name + ".yuv")).string());

    for (Quantiser quantiser : config.quantisers) {
      for (int qp : config.qps) {
        CodecConfig codec;
        codec.tb_size = config.tb_size;
        codec.qp = qp;
        codec.quantiser = quantiser;
        codec.deadzone = config.deadzone;
        codec.scan = config.scan;

        FrameSequence recon;
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<uint8_t> bits = encode_sequence(source, codec, &recon);
        const auto t1 = std::chrono::steady_clock::now();
        const FrameSequence decoded = decode_sequence(bits);
        const auto t2 = std::chrono::steady_clock::now();

        if (!(decoded == recon))
          throw_integrity("decoder output differs from the encoder reconstruction (" + clip.name +
                          ", " + quantiser_name(quantiser) + ", QP " + std::to_string(qp) + ")");

        RateRow row;
        row.clip = clip.name;
        row.chroma_format = clip.info.chroma_format;
        row.bit_depth = clip.info.bit_depth;
        row.quantiser = quantiser;
        row.qp = qp;
        row.bits = bits.size() * 8;
        row.bits_per_frame = double(row.bits) / double(source.frame_count());
        row.quality = sequence_quality(source, decoded);
        row.encode_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        row.decode_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
        row.deadzone = config.deadzone;
        row.lambda = quantiser == Quantiser::kRdoq ? rdoq_lambda(Qp(qp)) : 0.0;
        report.rows.push_back(row);

        if (config.write_files) {
          const std::string stem =
              clip.name + "_" + quantiser_name(quantiser) + "_qp" + std::to_string(qp);
          detail::write_bytes((fs::path(config.output_dir) / (stem + ".bits")).string(), bits);
          write_raw(decoded, (fs::path(config.output_dir) / (stem + "_recon.yuv")).string());
        }
      }
    }
  }
  return report;
}

inline const char* kReportCsvHeader =
    "row,clip,chroma_format,bit_depth,quantiser,qp,bits,bits_per_frame,"
    "psnr_y,psnr_cb,psnr_cr,psnr_combined,ssim_y,ssim_cb,ssim_cr,ssim_combined,"
    "deadzone,lambda,fdpq_vs_rdoq_pct";

// Deterministic report body: identical configs produce identical bytes.
// Wall-clock timings live in a separate sidecar (timings.csv).
inline std::string format_report_csv(const RateReport& report) {
  std::string out = std::string(kReportCsvHeader) + "\n";
  for (const RateRow& r : report.rows) {
    out += "data," + r.clip + "," + chroma_format_name(r.chroma_format) + "," +
           std::to_string(r.bit_depth) + "," + quantiser_name(r.quantiser) + "," +
           std::to_string(r.qp) + "," + std::to_string(r.bits) + "," +
           detail::fmt_double(r.bits_per_frame, 2) + "," + detail::fmt_double(r.quality.psnr_y, 4) +
           "," + detail::fmt_double(r.quality.psnr_cb, 4) + "," +
           detail::fmt_double(r.quality.psnr_cr, 4) + "," +
           detail::fmt_double(r.quality.psnr_combined, 4) + "," +
           detail::fmt_double(r.quality.ssim_y, 6) + "," + detail::fmt_double(r.quality.ssim_cb, 6) +
           "," + detail::fmt_double(r.quality.ssim_cr, 6) + "," +
           detail::fmt_double(r.quality.ssim_combined, 6) + "," + deadzone_name(r.deadzone) + "," +
           detail::fmt_double(r.lambda, 4) + ",\n";
  }
  for (const ComparisonRow& c : fdpq_vs_rdoq_deltas(report)) {
    out += "comparison," + c.clip + ",,,,,,,,,,,,,,,,," + detail::fmt_double(c.fdpq_vs_rdoq_pct, 2) +
           "\n";
  }
  return out;
}

inline std::string format_timings_csv(const RateReport& report) {
  std::string out = "clip,quantiser,qp,encode_ms,decode_ms\n";
  for (const RateRow& r : report.rows) {
    out += r.clip + std::string(",") + quantiser_name(r.quantiser) + "," + std::to_string(r.qp) +
           "," + detail::fmt_double(r.encode_ms, 3) + "," + detail::fmt_double(r.decode_ms, 3) + "\n";
  }
  return out;
}

namespace detail {

struct Series {
  std::string name;
  std::string colour;
  std::vector<std::pair<double, double>> points;
};

inline std::string svg_line_chart(const std::string& title, const std::string& x_label,
                                  const std::string& y_label, const std::vector<Series>& series) {
  constexpr int kW = 640, kH = 480, kMargin = 60;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;

  const auto px = [&](double x) {
    return kMargin + (x - xmin) / (xmax - xmin) * (kW - 2 * kMargin);
  };
  const auto py = [&](double y) {
    return kH - kMargin - (y - ymin) / (ymax - ymin) * (kH - 2 * kMargin);
  };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kW) +
                    "\" height=\"" + std::to_string(kH) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(kW / 2) + "\" y=\"24\" text-anchor=\"middle\">" + title +
         "</text>\n";
  svg += "<line x1=\"" + std::to_string(kMargin) + "\" y1=\"" + std::to_string(kH - kMargin) +
         "\" x2=\"" + std::to_string(kW - kMargin) + "\" y2=\"" + std::to_string(kH - kMargin) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + std::to_string(kMargin) + "\" y1=\"" + std::to_string(kMargin) + "\" x2=\"" +
         std::to_string(kMargin) + "\" y2=\"" + std::to_string(kH - kMargin) +
         "\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + std::to_string(kW / 2) + "\" y=\"" + std::to_string(kH - 16) +
         "\" text-anchor=\"middle\">" + x_label + " [" + fmt_double(xmin, 2) + ", " +
         fmt_double(xmax, 2) + "]</text>\n";
  svg += "<text x=\"16\" y=\"" + std::to_string(kH / 2) + "\" transform=\"rotate(-90 16 " +
         std::to_string(kH / 2) + ")\" text-anchor=\"middle\">" + y_label + " [" +
         fmt_double(ymin, 2) + ", " + fmt_double(ymax, 2) + "]</text>\n";

  int legend_y = kMargin;
  for (const Series& s : series) {
    std::string pts;
    for (const auto& [x, y] : s.points)
      pts += fmt_double(px(x), 1) + "," + fmt_double(py(y), 1) + " ";
    svg += "<polyline fill=\"none\" stroke=\"" + s.colour + "\" stroke-width=\"2\" points=\"" + pts +
           "\"/>\n";
    svg += "<text x=\"" + std::to_string(kW - kMargin + 6) + "\" y=\"" + std::to_string(legend_y) +
           "\" fill=\"" + s.colour + "\" font-size=\"12\">" + s.name + "</text>\n";
    legend_y += 16;
  }
  svg += "</svg>\n";
  return svg;
}

inline std::string quantiser_colour(Quantiser q) {
  switch (q) {
    case Quantiser::kUrq: return "#1f77b4";
    case Quantiser::kRdoq: return "#ff7f0e";
    case Quantiser::kFdpq: return "#2ca02c";
  }
  return "#000000";
}

// Infinite PSNR (identical planes) plots as a 99 dB ceiling.
inline double plottable(double v) { return std::isinf(v) ? 99.0 : v; }

}  // namespace detail

enum class ReportFormat { kCsv, kSvg };

// Writes report.csv + timings.csv, or one SVG per (clip, metric) with one
// polyline per quantiser. Refuses to write anything for an empty report.
inline std::vector<std::string> emit_report(const RateReport& report, const std::string& dir,
                                            ReportFormat format) {
  if (report.rows.empty()) throw_config("cannot emit an empty report");
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> written;

  if (format == ReportFormat::kCsv) {
    const std::string report_path = (fs::path(dir) / "report.csv").string();
    std::ofstream out(report_path, std::ios::trunc);
    if (!out) throw_io("cannot open '" + report_path + "'");
    out << format_report_csv(report);
    written.push_back(report_path);

    const std::string timings_path = (fs::path(dir) / "timings.csv").string();
    std::ofstream tout(timings_path, std::ios::trunc);
    if (!tout) throw_io("cannot open '" + timings_path + "'");
    tout << format_timings_csv(report);
    written.push_back(timings_path);
    return written;
  }

  std::vector<std::string> clips;
  for (const RateRow& r : report.rows)
    if (std::find(clips.begin(), clips.end(), r.clip) == clips.end()) clips.push_back(r.clip);

  for (const std::string& clip : clips) {
    std::vector<detail::Series> bits_vs_qp, psnr_vs_bits, ssim_vs_bits;
    for (Quantiser q : {Quantiser::kUrq, Quantiser::kRdoq, Quantiser::kFdpq}) {
      detail::Series sb{quantiser_name(q), detail::quantiser_colour(q), {}};
      detail::Series sp = sb, ss = sb;
      for (const RateRow& r : report.rows) {
        if (r.clip != clip || r.quantiser != q) continue;
        sb.points.push_back({double(r.qp), double(r.bits)});
        sp.points.push_back({double(r.bits), detail::plottable(r.quality.psnr_combined)});
        ss.points.push_back({double(r.bits), r.quality.ssim_combined});
      }
      if (!sb.points.empty()) {
        bits_vs_qp.push_back(std::move(sb));
        psnr_vs_bits.push_back(std::move(sp));
        ssim_vs_bits.push_back(std::move(ss));
      }
    }
    const struct {
      const char* suffix;
      const char* x;
      const char* y;
      std::vector<detail::Series>* series;
    } charts[] = {
        {"_bits_vs_qp.svg", "QP", "bits", &bits_vs_qp},
        {"_psnr_vs_bits.svg", "bits", "PSNR (dB)", &psnr_vs_bits},
        {"_ssim_vs_bits.svg", "bits", "SSIM", &ssim_vs_bits},
    };
    for (const auto& chart : charts) {
      const std::string path = (fs::path(dir) / (clip + chart.suffix)).string();
      std::ofstream out(path, std::ios::trunc);
      if (!out) throw_io("cannot open '" + path + "'");
      out << detail::svg_line_chart(clip, chart.x, chart.y, *chart.series);
      written.push_back(path);
    }
  }
  return written;
}

// Reference-table dump for eyeball verification: the six MF/SF entries with
// their QStep values, then the 4x4 and 8x8 weight maps to 4 decimal places.
inline std::string format_reference_tables() {
  std::string out = "QP QStep m s\n";
  for (int qp = 0; qp < 6; ++qp) {
    const MfSf t = mf_sf(Qp(qp));
    out += std::to_string(qp) + " " + detail::fmt_double(qstep_from_qp(Qp(qp)), 4) + " " +
           std::to_string(t.m) + " " + std::to_string(t.s) + "\n";
  }
  for (int n : {4, 8}) {
    out += "\n" + std::to_string(n) + "x" + std::to_string(n) + " weight map\n";
    const WeightMap& map = weight_map(n);
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        out += "d=" + detail::fmt_double(map.dist(x, y), 4) + " w=" +
               detail::fmt_double(map.weight(x, y), 4);
        out += x + 1 < n ? "  " : "\n";
      }
    }
  }
  return out;
}

inline std::string format_weight_map_csv(int n) {
  const WeightMap& map = weight_map(n);
  std::string out = "x,y,d,w\n";
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      out += std::to_string(x) + "," + std::to_string(y) + "," +
             detail::fmt_double(map.dist(x, y), 6) + "," + detail::fmt_double(map.weight(x, y), 6) +
             "\n";
  return out;
}

}  // namespace pqlab
