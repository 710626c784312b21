#include <doctest.h>

#include <fstream>
#include <sstream>

#include "../support/apoc_support.hpp"
#include "../support/fixtures.hpp"
#include "pcf/eval/config.hpp"
#include "pcf/eval/dataset.hpp"
#include "pcf/eval/experiment.hpp"
#include "pcf/eval/metrics.hpp"
#include "pcf/judge/mock.hpp"

using namespace pcf;
using namespace pcf::eval;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Fails every run whose presentation order is not the identity.
class IdentityOnlyJudge final : public judge::ListwiseJudge {
 public:
  judge::ListwiseJudgeResponse judge(const EvalItem& item, const Permutation& order) const override {
    if (!order.is_identity()) throw BackendError("unavailable");
    return inner_.judge(item, order);
  }

 private:
  judge::MockListwiseJudge inner_{judge::MockJudgeSettings{}};
};

}  // namespace

TEST_CASE("listwise experiment") {
  const auto items = make_synthetic_listwise_items(40, 4, 9);
  const judge::MockListwiseJudge judge(judge::MockJudgeSettings{});
  ListwiseOptions opts;
  opts.direct_method = "direct";
  opts.parallelism = 4;
  const auto records = judge_listwise_dataset(items, judge, opts);
  REQUIRE(records.size() == 80);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& direct = records[2 * i];
    const auto& main = records[2 * i + 1];
    REQUIRE(direct.method == "direct");
    REQUIRE(main.method == "pcfjudge");
    REQUIRE(main.item_id == items[i].id);
    REQUIRE(main.correct.has_value());
    // The direct record is the canonical-order run alone.
    const auto runs = main.trace.at("runs");
    REQUIRE(runs.size() == 7);
    const std::vector<RunVerdict> first{run_verdict_from_json(runs[0])};
    REQUIRE(first[0].permutation.is_identity());
    REQUIRE(direct.winners == summarize(first).winners);
    REQUIRE(summary_from_trace(main.trace) == summarize(std::vector<RunVerdict>{
                                                   run_verdict_from_json(runs[0]), run_verdict_from_json(runs[1]),
                                                   run_verdict_from_json(runs[2]), run_verdict_from_json(runs[3]),
                                                   run_verdict_from_json(runs[4]), run_verdict_from_json(runs[5]),
                                                   run_verdict_from_json(runs[6])}));
  }

  SUBCASE("independent of parallelism and streamed in item order") {
    const auto dir = test::scratch_dir("experiment");
    ListwiseOptions serial = opts;
    serial.parallelism = 1;
    {
      PredictionWriter w(dir / "a.jsonl", true);
      judge_listwise_dataset(items, judge, serial, &w);
    }
    {
      PredictionWriter w(dir / "b.jsonl", true);
      judge_listwise_dataset(items, judge, opts, &w);
    }
    CHECK(slurp(dir / "a.jsonl") == slurp(dir / "b.jsonl"));
    CHECK(read_predictions(dir / "a.jsonl") == records);
  }
}

TEST_CASE("failed items are recorded, not dropped") {
  const auto items = make_synthetic_listwise_items(5, 4, 2);
  ListwiseOptions opts;
  opts.direct_method = "direct";
  const auto records = judge_listwise_dataset(items, IdentityOnlyJudge{}, opts);
  REQUIRE(records.size() == 10);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(records[2 * i + 1].winners.empty());
    REQUIRE(records[2 * i + 1].error);
    CHECK(records[2 * i + 1].error->find("insufficient runs") != std::string::npos);
    CHECK(records[2 * i + 1].correct == false);
  }
  CHECK(compute_metrics("pcfjudge", std::vector(records.begin() + 1, records.begin() + 2)).n_failed == 1);
}

TEST_CASE("K=1 experiment equals its direct record") {
  const auto items = make_synthetic_listwise_items(30, 5, 4);
  const judge::MockListwiseJudge judge(judge::MockJudgeSettings{});
  ListwiseOptions opts;
  opts.k = 1;
  opts.direct_method = "direct";
  const auto records = judge_listwise_dataset(items, judge, opts);
  for (std::size_t i = 0; i < items.size(); ++i) CHECK(records[2 * i].winners == records[2 * i + 1].winners);
}

TEST_CASE("pairwise experiment") {
  const auto ds = load_pair_dataset(test::fixture_path("datasets/pairs_4.jsonl"));
  test::ScriptedPairJudge judge;  // first slot always: inconsistent everywhere
  judge.keyed_winner = apoc::PairLabel::B;
  const auto records = judge_pairwise_dataset(ds.items, judge, apoc::EstimationDetector{}, PairwiseOptions{});
  REQUIRE(records.size() == 8);
  // jb-1 is an estimation question: baseline A kept, no override.
  CHECK(records[0].item_id == "jb-1");
  CHECK(records[1].winners == CandidateSet{CandidateId{0}});
  CHECK(records[1].trace.at("estimation_skipped") == true);
  // Others are overridden to B by the keyed judge.
  CHECK(records[3].winners == CandidateSet{CandidateId{1}});
  CHECK(records[3].trace.at("override_applied") == true);
  CHECK(records[2].method == "direct");
  CHECK(records[2].winners == CandidateSet{CandidateId{0}});
  CHECK(records[3].gold == 1u);
  CHECK(records[3].correct == true);
  CHECK(records[5].correct == false);  // jb-3 gold A, overridden to B
}

TEST_CASE("config") {
  const auto dir = test::scratch_dir("config");
  std::ofstream(dir / "c.json") << R"({
    "k": 5, "tolerance": 1.0, "parallelism": 2, "cache_dir": "cachehere", "default_backend": "live",
    "estimation_patterns": ["ballpark"],
    "backends": {
      "live": {"type": "http", "endpoint": "https://judge.example.test/v1/chat", "model": "m", "auth_env": "TOK"},
      "offline": {"type": "replay", "model": "m"},
      "mock": {"type": "mock", "position_bias": 0.9, "score_noise": 2}
    }
  })";
  const auto c = load_config(dir / "c.json");
  CHECK(c.k == 5);
  CHECK(c.tolerance == 1.0);
  CHECK(c.cache_dir == "cachehere");
  CHECK(c.backend("").kind == BackendSpec::Kind::Http);
  CHECK(c.backend("offline").kind == BackendSpec::Kind::Replay);
  CHECK(c.backend("mock").listwise_mock.position_bias == 0.9);
  CHECK(c.estimation_patterns == std::vector<std::string>{"ballpark"});
  CHECK_THROWS_AS(c.backend("nope"), ConfigError);

  std::ofstream(dir / "bad.json") << R"({"backends": {"x": {"type": "carrier-pigeon"}}})";
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
  std::ofstream(dir / "bad2.json") << R"({"k": 0})";
  CHECK_THROWS_AS(load_config(dir / "bad2.json"), ConfigError);
  std::ofstream(dir / "bad3.json") << "[1,2]";
  CHECK_THROWS_AS(load_config(dir / "bad3.json"), ConfigError);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);

  const auto d = default_config();
  CHECK(d.k == 7);
  CHECK(d.tolerance == 0.5);
  CHECK(d.backend("").kind == BackendSpec::Kind::Mock);
}
