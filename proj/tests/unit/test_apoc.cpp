#include <doctest.h>

#include <fstream>

#include "../support/apoc_support.hpp"
#include "../support/fixtures.hpp"
#include "pcf/judge/backend.hpp"
#include "pcf/judge/cache.hpp"
#include "pcf/judge/gateway.hpp"

using namespace pcf;
using namespace pcf::apoc;
using test::sample_pair;
using test::ScriptedPairJudge;

TEST_CASE("labels") {
  CHECK(flip(PairLabel::A) == PairLabel::B);
  CHECK(flip(PairLabel::B) == PairLabel::A);
  CHECK(flip(PairLabel::Tie) == PairLabel::Tie);
  CHECK(to_string(PairLabel::Tie) == "tie");
}

TEST_CASE("pair item validation") {
  auto item = sample_pair();
  CHECK_NOTHROW(item.validate());
  item.response_b.clear();
  CHECK_THROWS_AS(item.validate(), Error);
  item = sample_pair();
  item.gold = PairLabel::Tie;
  CHECK_THROWS_AS(item.validate(), Error);
  const auto s = swap_sides(sample_pair());
  CHECK(s.response_a == sample_pair().response_b);
  CHECK(s.gold == PairLabel::B);
}

TEST_CASE("judge_pair_once reports original labels") {
  const auto item = sample_pair();
  const auto content = ScriptedPairJudge::prefers(PairLabel::A);
  CHECK(judge_pair_once(item, PairOrder::AB, content) == PairLabel::A);
  CHECK(judge_pair_once(item, PairOrder::BA, content) == PairLabel::A);
  ScriptedPairJudge first_slot;  // always the first shown
  CHECK(judge_pair_once(item, PairOrder::AB, first_slot) == PairLabel::A);
  CHECK(judge_pair_once(item, PairOrder::BA, first_slot) == PairLabel::B);
}

TEST_CASE("keyed judge") {
  ScriptedPairJudge j;
  j.keyed_winner = PairLabel::A;
  CHECK(keyed_judge(sample_pair(), j).winner == PairLabel::A);
  j.keyed_winner = PairLabel::Tie;
  CHECK(keyed_judge(sample_pair(), j).winner == PairLabel::Tie);
}

TEST_CASE("decision branches") {
  const EstimationDetector detector;

  SUBCASE("agreement short-circuits") {
    auto j = ScriptedPairJudge::prefers(PairLabel::A);
    const auto d = run_apocjudge(sample_pair(), j, detector);
    CHECK(d.final_winner == PairLabel::A);
    CHECK(d.order_consistent);
    CHECK_FALSE(d.keyed_winner);
    CHECK(j.keyed_calls == 0);
    CHECK(d.judge_calls == 2);
  }

  SUBCASE("confirmed override") {
    ScriptedPairJudge j;  // first slot both times: AB -> A, BA -> B
    j.keyed_winner = PairLabel::B;
    const auto d = run_apocjudge(sample_pair(), j, detector);
    CHECK(d.baseline_winner == PairLabel::A);
    CHECK(d.swapped_winner == PairLabel::B);
    CHECK(d.final_winner == PairLabel::B);
    CHECK(d.override_applied);
    CHECK(d.keyed_winner == PairLabel::B);
    CHECK(d.resolved_answer == "resolved");
    CHECK(d.judge_calls == 3);
    CHECK(satisfies_keyed_gate(d));
  }

  SUBCASE("keyed sides with the baseline") {
    ScriptedPairJudge j;
    j.keyed_winner = PairLabel::A;
    const auto d = run_apocjudge(sample_pair(), j, detector);
    CHECK(d.final_winner == PairLabel::A);
    CHECK_FALSE(d.override_applied);
    CHECK(satisfies_keyed_gate(d));
  }

  SUBCASE("keyed tie keeps the baseline") {
    ScriptedPairJudge j;
    j.keyed_winner = PairLabel::Tie;
    const auto d = run_apocjudge(sample_pair(), j, detector);
    CHECK(d.final_winner == PairLabel::A);
    CHECK(d.keyed_winner == PairLabel::Tie);
    CHECK_FALSE(d.override_applied);
  }

  SUBCASE("estimation item skips the keyed judge") {
    ScriptedPairJudge j;
    j.keyed_winner = PairLabel::B;
    const auto d = run_apocjudge(sample_pair("Roughly how many tonnes of steel went into it?"), j, detector);
    CHECK(d.final_winner == PairLabel::A);
    CHECK(d.estimation_skipped);
    CHECK(j.keyed_calls == 0);
    CHECK(d.judge_calls == 2);
    CHECK(satisfies_keyed_gate(d));
  }

  SUBCASE("keyed failure falls back to baseline") {
    ScriptedPairJudge j;
    j.keyed_fails = true;
    const auto d = run_apocjudge(sample_pair(), j, detector);
    CHECK(d.final_winner == PairLabel::A);
    REQUIRE(d.keyed_error);
    CHECK(d.keyed_error->find("keyed backend down") != std::string::npos);
    CHECK(satisfies_keyed_gate(d));
  }

  SUBCASE("ordered failures propagate") {
    class Broken final : public PairwiseJudge {
     public:
      Slot compare(const PairItem&, PairOrder) const override { throw BackendError("down"); }
      KeyedVerdict keyed(const PairItem&) const override { return {}; }
    };
    CHECK_THROWS_AS(run_apocjudge(sample_pair(), Broken{}, detector), BackendError);
  }
}

TEST_CASE("keyed gate rejects forged decisions") {
  PairDecision d;
  d.baseline_winner = PairLabel::A;
  d.swapped_winner = PairLabel::B;
  d.order_consistent = false;
  d.final_winner = PairLabel::B;
  d.judge_calls = 3;
  CHECK_FALSE(satisfies_keyed_gate(d));  // no keyed confirmation
  d.keyed_winner = PairLabel::B;
  d.override_applied = true;
  CHECK(satisfies_keyed_gate(d));
  d.judge_calls = 4;
  CHECK_FALSE(satisfies_keyed_gate(d));
  d.judge_calls = 3;
  d.estimation_skipped = true;
  CHECK_FALSE(satisfies_keyed_gate(d));
}

TEST_CASE("property: keyed gate, call budget and mirror symmetry") {
  const auto res = test::check_apoc_gate(2000, 21);
  CHECK_MESSAGE(res.ok(), res.first_violation);
  CHECK(res.max_calls == 3);
  CHECK(res.overrides > 0);
  CHECK(res.skips > 0);
}

TEST_CASE("property: mock judge decisions mirror under swap") {
  const MockPairwiseJudge judge(MockPairSettings{0.7, 0.3, 0.8, 0.1, 5});
  const EstimationDetector detector;
  Rng rng(31);
  for (int c = 0; c < 1000; ++c) {
    PairItem item = sample_pair(c % 5 == 0 ? "Give a ballpark figure for it" : "Which is correct?");
    item.id = "m" + std::to_string(c);
    item.response_a = "answer " + std::to_string(rng.below(100000));
    item.response_b = "other " + std::to_string(rng.below(100000));
    item.gold = rng.bernoulli(0.5) ? PairLabel::A : PairLabel::B;
    const auto d = run_apocjudge(item, judge, detector);
    const auto m = run_apocjudge(swap_sides(item), judge, detector);
    REQUIRE(satisfies_keyed_gate(d));
    REQUIRE(m.baseline_winner == flip(d.swapped_winner));
    REQUIRE(m.swapped_winner == flip(d.baseline_winner));
    if (d.keyed_winner) REQUIRE(m.keyed_winner == flip(*d.keyed_winner));
    if (d.order_consistent) REQUIRE(m.final_winner == flip(d.final_winner));
  }
}

TEST_CASE("estimation detector") {
  const EstimationDetector d;
  CHECK(d(sample_pair("What is the APPROXIMATE value of pi squared?")));
  CHECK(d(sample_pair("Give an order of magnitude for the count")));
  CHECK_FALSE(d(sample_pair("What is the capital of Peru?")));
  const EstimationDetector custom({"Guess"});
  CHECK(custom(sample_pair("guess the weight")));
  CHECK_FALSE(custom(sample_pair("roughly how heavy")));

  const auto dir = test::scratch_dir("patterns");
  std::ofstream(dir / "p.txt") << "# comment\n\nfermi\n  about how many  \n";
  const auto from_file = EstimationDetector::from_file(dir / "p.txt");
  CHECK(from_file.patterns() == std::vector<std::string>{"fermi", "about how many"});
  CHECK(from_file(sample_pair("A Fermi problem")));
  CHECK_THROWS_AS(EstimationDetector::from_file(dir / "missing.txt"), Error);
}

TEST_CASE("pairwise wire format") {
  CHECK(parse_pairwise_response("```json\n{\"winner\": 1}\n```") == Slot::First);
  CHECK(parse_pairwise_response("{\"winner\": 2}") == Slot::Second);
  CHECK_THROWS_AS(parse_pairwise_response("{\"winner\": 3}"), ValidationError);
  CHECK_THROWS_AS(parse_pairwise_response("{\"winner\": \"1\"}"), ParseError);
  CHECK_THROWS_AS(parse_pairwise_response("no"), ParseError);
  CHECK(parse_keyed_answer("{\"answer\": \"1937\"}") == "1937");
  CHECK_THROWS_AS(parse_keyed_answer("{\"answer\": 5}"), ParseError);
  CHECK(parse_keyed_verdict("{\"winner\": \"A\"}") == PairLabel::A);
  CHECK(parse_keyed_verdict("{\"winner\": \"B\"}") == PairLabel::B);
  CHECK(parse_keyed_verdict("{\"winner\": \"neither\"}") == PairLabel::Tie);
  CHECK_THROWS_AS(parse_keyed_verdict("{\"winner\": \"C\"}"), ValidationError);
}

TEST_CASE("pairwise prompts") {
  const auto item = sample_pair();
  const auto ab = build_pairwise_prompt(item, PairOrder::AB);
  const auto ba = build_pairwise_prompt(item, PairOrder::BA);
  CHECK(ab == build_pairwise_prompt(item, PairOrder::AB));
  CHECK(ab.find(item.response_a) < ab.find(item.response_b));
  CHECK(ba.find(item.response_b) < ba.find(item.response_a));
  const auto answer = build_keyed_answer_prompt(item);
  CHECK(answer.find(item.question) != std::string::npos);
  CHECK(answer.find(item.response_a) == std::string::npos);
  const auto compare = build_keyed_compare_prompt(item, "1937");
  CHECK(compare.find("1937") != std::string::npos);
}

TEST_CASE("gateway pairwise judge replays from cache") {
  const auto dir = test::scratch_dir("apoc-cache");
  int calls = 0;
  auto script = [&calls](const std::string& prompt) -> std::string {
    ++calls;
    if (prompt.find("<reference>") != std::string::npos) return "{\"winner\": \"B\"}";
    if (prompt.find("{\"answer\"") != std::string::npos) return "{\"answer\": \"1937\"}";
    return "{\"winner\": 1}";
  };
  auto live = std::make_shared<judge::JudgeGateway>("m", std::make_shared<judge::ScriptedBackend>(script),
                                                     judge::ResponseCache(dir));
  const GatewayPairwiseJudge judge(live);
  const auto first = run_apocjudge(sample_pair(), judge, EstimationDetector{});
  CHECK(first.baseline_winner == PairLabel::A);
  CHECK(first.swapped_winner == PairLabel::B);
  CHECK(first.resolved_answer == "1937");
  CHECK(first.final_winner == PairLabel::B);
  CHECK(calls == 4);  // two ordered prompts, keyed answer, keyed compare

  auto offline = std::make_shared<judge::JudgeGateway>("m", std::make_shared<judge::OfflineBackend>(),
                                                        judge::ResponseCache(dir));
  const auto again = run_apocjudge(sample_pair(), GatewayPairwiseJudge(offline), EstimationDetector{});
  CHECK(again.final_winner == first.final_winner);
  CHECK(again.keyed_winner == first.keyed_winner);
  CHECK(again.resolved_answer == first.resolved_answer);
  CHECK(offline->backend_calls() == 0);
}
