// Command-line front end: encode/decode raw YCbCr clips with the three
// quantisers, measure quality, sweep experiments and dump reference tables.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pqlab/pqlab.hpp"

namespace {

struct GeometryArgs {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  std::string chroma = "420";

  pqlab::SequenceInfo info() const {
    pqlab::SequenceInfo i;
    i.width = width;
    i.height = height;
    i.bit_depth = bit_depth;
    i.chroma_format = pqlab::chroma_format_from_name(chroma);
    return i;
  }
};

void add_geometry_flags(CLI::App* cmd, GeometryArgs& g) {
  cmd->add_option("--width", g.width, "luma width in pixels")->required();
  cmd->add_option("--height", g.height, "luma height in pixels")->required();
  cmd->add_option("--bit-depth", g.bit_depth, "bits per sample, 8 or 10")
      ->check(CLI::IsMember({8, 10}));
  cmd->add_option("--chroma-format", g.chroma, "420, 422 or 444")
      ->check(CLI::IsMember({"420", "422", "444"}));
}

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) pqlab::throw_io("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// One "key=value" entry per line, '#' starts a comment. Keys match the
// experiment flag names without the leading dashes; list values are space
// separated.
std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) pqlab::throw_io("cannot open config file '" + path + "'");
  std::map<std::string, std::string> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      pqlab::throw_config("config line " + std::to_string(lineno) + " is not key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return entries;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  pqlab::throw_config("expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string token;
  for (char c : v + " ") {
    if (c == ' ' || c == ',' || c == '\t') {
      if (!token.empty()) out.push_back(token);
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  return out;
}

void write_file(const std::string& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) pqlab::throw_io("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) pqlab::throw_io("write failure on '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perceptual quantisation lab: a minimal intra-only block codec "
               "with URQ, RDOQ and FDPQ coefficient quantisers"};
  app.require_subcommand(1);

  // encode
  auto* encode = app.add_subcommand("encode", "encode a raw planar YCbCr file");
  GeometryArgs enc_geom;
  std::string enc_in, enc_out;
  int enc_tb = 8, enc_qp = 32;
  std::string enc_quant = "urq", enc_deadzone = "half";
  add_geometry_flags(encode, enc_geom);
  encode->add_option("--input,-i", enc_in, "raw input file")->required();
  encode->add_option("--output,-o", enc_out, "bitstream output file")->required();
  encode->add_option("--tb-size", enc_tb, "transform block size")->check(CLI::IsMember({4, 8, 16, 32}));
  encode->add_option("--qp", enc_qp, "quantisation parameter 0..51")->check(CLI::Range(0, 51));
  encode->add_option("--quantiser", enc_quant, "urq, rdoq or fdpq")
      ->check(CLI::IsMember({"urq", "rdoq", "fdpq"}));
  encode->add_option("--deadzone", enc_deadzone, "third or half")
      ->check(CLI::IsMember({"third", "half"}));

  // decode
  auto* decode = app.add_subcommand("decode", "decode a bitstream to raw planar YCbCr");
  std::string dec_in, dec_out;
  decode->add_option("--input,-i", dec_in, "bitstream input file")->required();
  decode->add_option("--output,-o", dec_out, "raw output file")->required();

  // metrics
  auto* metrics = app.add_subcommand("metrics", "PSNR/SSIM between two raw files");
  GeometryArgs met_geom;
  std::string met_ref, met_test, met_map_prefix;
  add_geometry_flags(metrics, met_geom);
  metrics->add_option("--ref", met_ref, "reference raw file")->required();
  metrics->add_option("--test", met_test, "test raw file")->required();
  metrics->add_option("--ssim-map-prefix", met_map_prefix,
                      "write per-channel SSIM index maps (first frame) as <prefix>_<ch>.pgm");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "sweep quantisers x QPs and emit a report");
  GeometryArgs exp_geom;
  exp_geom.width = 64;
  exp_geom.height = 64;
  std::string exp_config, exp_input;
  bool exp_synthetic = false;
  int exp_frames = 3, exp_tb = 8;
  std::vector<int> exp_qps = {17, 22, 27, 32, 37};
  std::vector<std::string> exp_quants = {"urq", "rdoq", "fdpq"};
  std::string exp_deadzone = "half", exp_outdir = "pqlab_out";
  experiment->add_option("--config", exp_config,
                         "key=value file providing any of the flags below; explicit flags win");
  auto* o_input = experiment->add_option("--input", exp_input, "raw clip to sweep (needs geometry flags)");
  auto* o_synth = experiment->add_flag("--synthetic", exp_synthetic, "use the built-in synthetic clip suite");
  auto* o_width = experiment->add_option("--width", exp_geom.width, "luma width");
  auto* o_height = experiment->add_option("--height", exp_geom.height, "luma height");
  auto* o_depth = experiment->add_option("--bit-depth", exp_geom.bit_depth, "bits per sample")
                      ->check(CLI::IsMember({8, 10}));
  auto* o_chroma = experiment->add_option("--chroma-format", exp_geom.chroma, "420, 422 or 444")
                       ->check(CLI::IsMember({"420", "422", "444"}));
  auto* o_frames = experiment->add_option("--frames", exp_frames, "frame count for synthetic clips");
  auto* o_tb = experiment->add_option("--tb-size", exp_tb, "transform block size")
                   ->check(CLI::IsMember({4, 8, 16, 32}));
  auto* o_qps = experiment->add_option("--qps", exp_qps, "QP list")->check(CLI::Range(0, 51));
  auto* o_quants = experiment->add_option("--quantisers", exp_quants, "subset of urq rdoq fdpq")
                       ->check(CLI::IsMember({"urq", "rdoq", "fdpq"}));
  auto* o_deadzone = experiment->add_option("--deadzone", exp_deadzone, "third or half")
                         ->check(CLI::IsMember({"third", "half"}));
  auto* o_outdir =
      experiment->add_option("--output-dir,-o", exp_outdir, "directory for reports and streams");

  // dump-tables / dump-weights
  auto* dump_tables = app.add_subcommand("dump-tables", "print the MF/SF tables and weight maps");
  auto* dump_weights = app.add_subcommand("dump-weights", "dump a weight map as CSV");
  int dw_n = 4;
  std::string dw_out;
  dump_weights->add_option("--n", dw_n, "TB size")->check(CLI::IsMember({4, 8, 16, 32}));
  dump_weights->add_option("--output,-o", dw_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*encode) {
      const pqlab::FrameSequence seq = pqlab::load_raw(enc_in, enc_geom.info());
      pqlab::CodecConfig cfg;
      cfg.tb_size = enc_tb;
      cfg.qp = enc_qp;
      cfg.quantiser = pqlab::quantiser_from_name(enc_quant);
      cfg.deadzone = enc_deadzone == "third" ? pqlab::DeadzoneMode::kIntraThird
                                             : pqlab::DeadzoneMode::kHalf;
      const std::vector<uint8_t> bits = pqlab::encode_sequence(seq, cfg);
      write_file(enc_out, bits);
      std::printf("encoded %zu frame(s), %zu bytes (%s, QP %d)\n", seq.frame_count(), bits.size(),
                  enc_quant.c_str(), enc_qp);
    } else if (*decode) {
      const std::vector<uint8_t> bits = read_file(dec_in);
      pqlab::BitstreamHeader header;
      const pqlab::FrameSequence seq = pqlab::decode_sequence(bits, &header);
      pqlab::write_raw(seq, dec_out);
      std::printf("decoded %zu frame(s) of %dx%d %s %d-bit (%s, QP %d)\n", seq.frame_count(),
                  header.info.width, header.info.height,
                  pqlab::chroma_format_name(header.info.chroma_format), header.info.bit_depth,
                  pqlab::quantiser_name(header.config.quantiser), header.config.qp);
    } else if (*metrics) {
      const pqlab::SequenceInfo info = met_geom.info();
      const pqlab::FrameSequence ref = pqlab::load_raw(met_ref, info);
      const pqlab::FrameSequence test = pqlab::load_raw(met_test, info);
      const pqlab::QualityRecord q = pqlab::sequence_quality(ref, test);
      std::printf("psnr Y %.4f Cb %.4f Cr %.4f combined %.4f\n", q.psnr_y, q.psnr_cb, q.psnr_cr,
                  q.psnr_combined);
      std::printf("ssim Y %.6f Cb %.6f Cr %.6f combined %.6f\n", q.ssim_y, q.ssim_cb, q.ssim_cr,
                  q.ssim_combined);
      if (!met_map_prefix.empty()) {
        const pqlab::Frame& rf = ref.frames.front();
        const pqlab::Frame& tf = test.frames.front();
        pqlab::write_ssim_map_pgm(pqlab::ssim_with_map(rf.y, tf.y), met_map_prefix + "_y.pgm");
        pqlab::write_ssim_map_pgm(pqlab::ssim_with_map(rf.cb, tf.cb), met_map_prefix + "_cb.pgm");
        pqlab::write_ssim_map_pgm(pqlab::ssim_with_map(rf.cr, tf.cr), met_map_prefix + "_cr.pgm");
      }
    } else if (*experiment) {
      if (!exp_config.empty()) {
        const auto entries = parse_config_file(exp_config);
        for (const auto& [key, value] : entries) {
          const auto given = [](const CLI::Option* o) { return o->count() > 0; };
          // explicit command-line flags take precedence over the file
          if (key == "input") {
            if (!given(o_input)) exp_input = value;
          } else if (key == "synthetic") {
            if (!given(o_synth)) exp_synthetic = parse_bool(value);
          } else if (key == "width") {
            if (!given(o_width)) exp_geom.width = std::stoi(value);
          } else if (key == "height") {
            if (!given(o_height)) exp_geom.height = std::stoi(value);
          } else if (key == "bit-depth") {
            if (!given(o_depth)) exp_geom.bit_depth = std::stoi(value);
          } else if (key == "chroma-format") {
            if (!given(o_chroma)) exp_geom.chroma = value;
          } else if (key == "frames") {
            if (!given(o_frames)) exp_frames = std::stoi(value);
          } else if (key == "tb-size") {
            if (!given(o_tb)) exp_tb = std::stoi(value);
          } else if (key == "qps") {
            if (!given(o_qps)) {
              exp_qps.clear();
              for (const std::string& v : split_list(value)) exp_qps.push_back(std::stoi(v));
            }
          } else if (key == "quantisers") {
            if (!given(o_quants)) exp_quants = split_list(value);
          } else if (key == "deadzone") {
            if (!given(o_deadzone)) exp_deadzone = value;
          } else if (key == "output-dir") {
            if (!given(o_outdir)) exp_outdir = value;
          } else {
            pqlab::throw_config("unknown config key '" + key + "'");
          }
        }
      }
      pqlab::ExperimentConfig cfg;
      cfg.tb_size = exp_tb;
      cfg.qps = exp_qps;
      cfg.quantisers.clear();
      for (const std::string& q : exp_quants) cfg.quantisers.push_back(pqlab::quantiser_from_name(q));
      cfg.deadzone = exp_deadzone == "third" ? pqlab::DeadzoneMode::kIntraThird
                                             : pqlab::DeadzoneMode::kHalf;
      cfg.output_dir = exp_outdir;

      if (exp_synthetic) {
        for (pqlab::SyntheticClip clip : pqlab::synthetic_suite()) {
          pqlab::ClipSpec spec;
          spec.name = pqlab::synthetic_clip_name(clip);
          spec.synthetic = clip;
          spec.info = exp_geom.info();
          spec.frame_count = exp_frames;
          cfg.clips.push_back(spec);
        }
      } else if (!exp_input.empty()) {
        pqlab::ClipSpec spec;
        spec.name = std::filesystem::path(exp_input).stem().string();
        spec.path = exp_input;
        spec.info = exp_geom.info();
        cfg.clips.push_back(spec);
      } else {
        pqlab::throw_config("experiment needs --input or --synthetic");
      }

      const pqlab::RateReport report = pqlab::run_experiment(cfg);
      pqlab::emit_report(report, cfg.output_dir, pqlab::ReportFormat::kCsv);
      pqlab::emit_report(report, cfg.output_dir, pqlab::ReportFormat::kSvg);
      std::printf("%zu data rows -> %s/report.csv\n", report.rows.size(), exp_outdir.c_str());
      for (const pqlab::ComparisonRow& c : pqlab::fdpq_vs_rdoq_deltas(report))
        std::printf("%s: fdpq vs rdoq bitrate %+0.2f%%\n", c.clip.c_str(), c.fdpq_vs_rdoq_pct);
    } else if (*dump_tables) {
      std::fputs(pqlab::format_reference_tables().c_str(), stdout);
    } else if (*dump_weights) {
      const std::string csv = pqlab::format_weight_map_csv(dw_n);
      if (dw_out.empty()) {
        std::fputs(csv.c_str(), stdout);
      } else {
        std::ofstream out(dw_out, std::ios::trunc);
        if (!out) pqlab::throw_io("cannot open '" + dw_out + "'");
        out << csv;
      }
    }
  } catch (const pqlab::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
