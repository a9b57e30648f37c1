#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>

#include "pqlab/experiment.hpp"

using namespace pqlab;
namespace fs = std::filesystem;

namespace {

ClipSpec synthetic_spec(SyntheticClip clip, int frames = 2) {
  ClipSpec spec;
  spec.name = synthetic_clip_name(clip);
  spec.synthetic = clip;
  spec.info = {64, 64, 8, ChromaFormat::k420};
  spec.frame_count = frames;
  return spec;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

size_t count_occurrences(const std::string& text, const std::string& needle) {
  size_t count = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
    ++count;
  return count;
}

}  // namespace

TEST_CASE("single job produces a single data row") {
  ExperimentConfig cfg;
  cfg.clips = {synthetic_spec(SyntheticClip::kGradient)};
  cfg.qps = {22};
  cfg.quantisers = {Quantiser::kUrq};
  cfg.write_files = false;
  const RateReport report = run_experiment(cfg);
  CHECK(report.rows.size() == 1);
  CHECK(report.rows[0].quantiser == Quantiser::kUrq);
  CHECK(report.rows[0].qp == 22);
  CHECK(report.rows[0].bits > 0);
  CHECK(fdpq_vs_rdoq_deltas(report).empty());
}

TEST_CASE("rdoq and fdpq over five qps produce ten rows and one comparison") {
  ExperimentConfig cfg;
  cfg.clips = {synthetic_spec(SyntheticClip::kTexture)};
  cfg.quantisers = {Quantiser::kRdoq, Quantiser::kFdpq};
  cfg.write_files = false;
  const RateReport report = run_experiment(cfg);
  CHECK(report.rows.size() == 10);
  const auto deltas = fdpq_vs_rdoq_deltas(report);
  REQUIRE(deltas.size() == 1);

  // the comparison recomputes from the data rows
  double sum = 0;
  for (int qp : cfg.qps) {
    uint64_t fdpq = 0, rdoq = 0;
    for (const RateRow& row : report.rows) {
      if (row.qp != qp) continue;
      (row.quantiser == Quantiser::kFdpq ? fdpq : rdoq) = row.bits;
    }
    sum += 100.0 * (double(fdpq) - double(rdoq)) / double(rdoq);
  }
  CHECK(deltas[0].fdpq_vs_rdoq_pct == Catch::Approx(sum / 5.0));
}

TEST_CASE("experiment outputs are deterministic across reruns") {
  const fs::path dir_a = fs::temp_directory_path() / "pqlab_exp_a";
  const fs::path dir_b = fs::temp_directory_path() / "pqlab_exp_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);

  ExperimentConfig cfg;
  cfg.clips = {synthetic_spec(SyntheticClip::kNoise)};
  cfg.qps = {22, 37};
  for (const fs::path& dir : {dir_a, dir_b}) {
    cfg.output_dir = dir.string();
    const RateReport report = run_experiment(cfg);
    emit_report(report, cfg.output_dir, ReportFormat::kCsv);
  }

  CHECK(read_file(dir_a / "report.csv") == read_file(dir_b / "report.csv"));
  CHECK(!read_file(dir_a / "report.csv").empty());
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    if (entry.path().extension() != ".bits") continue;
    CHECK(read_file(entry.path()) == read_file(dir_b / entry.path().filename()));
  }
  // six jobs, each leaving a bitstream and a reconstruction
  CHECK(count_occurrences(read_file(dir_a / "report.csv"), "\ndata,") +
            count_occurrences(read_file(dir_a / "report.csv"), "data,") >
        0);
  size_t bitstreams = 0;
  for (const auto& entry : fs::directory_iterator(dir_a))
    bitstreams += entry.path().extension() == ".bits";
  CHECK(bitstreams == 6);
}

TEST_CASE("csv layout") {
  ExperimentConfig cfg;
  cfg.clips = {synthetic_spec(SyntheticClip::kEdge)};
  cfg.qps = {22, 32};
  cfg.quantisers = {Quantiser::kRdoq, Quantiser::kFdpq};
  cfg.write_files = false;
  const RateReport report = run_experiment(cfg);
  const std::string csv = format_report_csv(report);

  const size_t lines = count_occurrences(csv, "\n");
  CHECK(lines == 1 + 4 + 1);  // header + data rows + comparison row
  CHECK(csv.find(kReportCsvHeader) == 0);
  CHECK(count_occurrences(csv, "data,") == 4);
  CHECK(count_occurrences(csv, "comparison,") == 1);
  CHECK(csv.find(",half,") != std::string::npos);  // deadzone recorded per row
}

TEST_CASE("empty reports are refused") {
  RateReport empty;
  CHECK_THROWS_AS(emit_report(empty, fs::temp_directory_path().string(), ReportFormat::kCsv), Error);
}

TEST_CASE("svg plots carry one polyline per series") {
  const fs::path dir = fs::temp_directory_path() / "pqlab_exp_svg";
  fs::remove_all(dir);

  ExperimentConfig cfg;
  cfg.clips = {synthetic_spec(SyntheticClip::kGradient)};
  cfg.qps = {22, 37};
  cfg.write_files = false;
  const RateReport report = run_experiment(cfg);
  const auto files = emit_report(report, dir.string(), ReportFormat::kSvg);
  REQUIRE(files.size() == 3);  // bits-vs-qp, psnr-vs-bits, ssim-vs-bits
  for (const std::string& file : files) {
    const std::string svg = read_file(file);
    CHECK(count_occurrences(svg, "<polyline") == cfg.quantisers.size());
  }
}

TEST_CASE("experiment config validation") {
  ExperimentConfig cfg;
  CHECK_THROWS_AS(run_experiment(cfg), Error);  // no clips
  cfg.clips = {synthetic_spec(SyntheticClip::kGradient)};
  cfg.quantisers = {};
  CHECK_THROWS_AS(run_experiment(cfg), Error);
}

TEST_CASE("reference table dump") {
  const std::string dump = format_reference_tables();
  CHECK(dump.find("0 0.6300 26214 40") != std::string::npos);
  CHECK(dump.find("5 1.1225 14564 72") != std::string::npos);
  CHECK(dump.find("d=1.0000 w=0.3679") != std::string::npos);
  CHECK(dump.find("d=0.3333 w=0.8948") != std::string::npos);
  CHECK(dump.find("8x8 weight map") != std::string::npos);
  CHECK(dump.find("d=0.0000 w=1.0000") != std::string::npos);
}

TEST_CASE("weight map csv") {
  const std::string csv = format_weight_map_csv(4);
  CHECK(csv.find("x,y,d,w\n") == 0);
  CHECK(count_occurrences(csv, "\n") == 17);  // header + 16 cells
  CHECK(csv.find("3,3,1.000000,0.367879") != std::string::npos);
}
