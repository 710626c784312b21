#include <doctest.h>

#include <sstream>

#include "../support/fixtures.hpp"
#include "pcf/eval/report.hpp"

using namespace pcf;
using namespace pcf::eval;

namespace {

PredictionRecord record(const std::string& method, const std::string& id, bool right, const std::string& source,
                        bool tie = false) {
  PredictionRecord p;
  p.item_id = id;
  p.method = method;
  p.gold = 0;
  p.source = source;
  p.winners = {CandidateId{right ? 0u : 1u}};
  if (tie) p.winners = {CandidateId{0}, CandidateId{1}};
  p.correct = right || tie;
  return p;
}

/// 12 items over two sources; direct gets 7 right, pcfjudge 10 (one via a
/// tied winner set), with 4 improved and 1 regressed.
std::vector<PredictionRecord> sample_predictions() {
  const bool direct[] = {1, 1, 1, 0, 0, 0, 1, 1, 0, 1, 1, 0};
  const bool pcf[] = {1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1, 0};
  std::vector<PredictionRecord> out;
  for (int i = 0; i < 12; ++i) {
    const std::string id = "item-" + std::to_string(10 + i);
    const std::string source = i < 7 ? "factuality" : "science";
    out.push_back(record("direct", id, direct[i], source));
    out.push_back(record("pcfjudge", id, pcf[i], source, i == 5));
  }
  return out;
}

}  // namespace

TEST_CASE("formatting helpers") {
  CHECK(format_percent(0.81085) == "81.09");
  CHECK(format_percent(253.0 / 300.0) == "84.33");
  CHECK(format_percent(1.0) == "100.00");
  CHECK(format_p_value(0.022628841) == "0.02263");
  CHECK(format_p_value(6.572e-5) == "6.572e-05");
  CHECK(format_p_value(1.0) == "1");
  CHECK(parse_report_format("table") == ReportFormat::Table);
  CHECK(parse_report_format("plot-data") == ReportFormat::PlotData);
  CHECK_THROWS_AS(parse_report_format("svg"), Error);
}

TEST_CASE("bundle contents") {
  const auto bundle = build_bundle(sample_predictions(), "direct");
  REQUIRE(bundle.methods.size() == 2);
  CHECK(bundle.methods[0].metrics.method == "direct");
  const auto& p = bundle.methods[1].metrics;
  CHECK(p.method == "pcfjudge");
  CHECK(p.n_items == 12);
  CHECK(p.micro_accuracy == doctest::Approx(10.0 / 12));
  CHECK(p.exact_top1_accuracy == doctest::Approx(9.0 / 12));
  REQUIRE(p.paired);
  CHECK(p.paired->improved == 4);
  CHECK(p.paired->regressed == 1);
  CHECK(*p.sign_test_p == doctest::Approx(0.375));  // 2 * (1 + 5) / 32
  CHECK_FALSE(bundle.methods[0].metrics.paired);
  CHECK_THROWS_AS(build_bundle(sample_predictions(), "missing"), Error);
}

TEST_CASE("bundle json round trip") {
  const auto bundle = build_bundle(sample_predictions(), "direct");
  const auto back = bundle_from_json(to_json(bundle));
  CHECK(render_report(back, ReportFormat::Table) == render_report(bundle, ReportFormat::Table));
  CHECK(render_report(back, ReportFormat::PlotData) == render_report(bundle, ReportFormat::PlotData));
}

TEST_CASE("table matches golden fixture") {
  const auto text = render_report(build_bundle(sample_predictions(), "direct"), ReportFormat::Table);
  CHECK(text == test::read_fixture("reports/table.txt"));
  CHECK(text == render_report(build_bundle(sample_predictions(), "direct"), ReportFormat::Table));
}

TEST_CASE("jsonl has one object per method") {
  const auto text = render_report(build_bundle(sample_predictions(), "direct"), ReportFormat::Jsonl);
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> methods;
  while (std::getline(in, line)) methods.push_back(nlohmann::json::parse(line).at("method"));
  CHECK(methods == std::vector<std::string>{"direct", "pcfjudge"});
}

TEST_CASE("plot data") {
  const auto text = render_report(build_bundle(sample_predictions(), "direct"), ReportFormat::PlotData);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "method,item_id,delta");
  int rows = 0, sum = 0;
  while (std::getline(in, line)) {
    ++rows;
    sum += std::stoi(line.substr(line.rfind(',') + 1));
    CHECK(line.rfind("pcfjudge,", 0) == 0);
  }
  CHECK(rows == 12);
  CHECK(sum == 3);  // 4 improved - 1 regressed
  CHECK(text.find("pcfjudge,item-13,1\n") != std::string::npos);
  CHECK(text.find("pcfjudge,item-17,-1\n") != std::string::npos);
}

TEST_CASE("emit to an unwritable path") {
  const auto bundle = build_bundle(sample_predictions(), "direct");
  const auto dir = test::scratch_dir("report");
  std::ofstream(dir / "blocker") << "a file, not a directory";
  CHECK_THROWS_AS(emit_report(bundle, ReportFormat::Table, dir / "blocker" / "x" / "report.txt"), Error);
  emit_report(bundle, ReportFormat::Table, dir / "nested" / "r.txt");
  CHECK(std::filesystem::exists(dir / "nested" / "r.txt"));
  emit_report(bundle, ReportFormat::Table, dir / "r.txt");
  std::ifstream in(dir / "r.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == render_report(bundle, ReportFormat::Table));
}
