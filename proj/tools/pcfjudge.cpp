// pcfjudge: permutation-consensus judging, pairwise order-swap judging,
// scoring, reporting and Monte Carlo simulation.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "pcf/apoc.hpp"
#include "pcf/errors.hpp"
#include "pcf/eval/config.hpp"
#include "pcf/eval/dataset.hpp"
#include "pcf/eval/experiment.hpp"
#include "pcf/eval/metrics.hpp"
#include "pcf/eval/report.hpp"
#include "pcf/simulator.hpp"

namespace {

using namespace pcf;

struct Common {
  std::string config_path;
  std::string backend;
  std::optional<std::size_t> parallelism;
  bool overwrite = false;
};

eval::HarnessConfig load(const Common& common) {
  return common.config_path.empty() ? eval::default_config() : eval::load_config(common.config_path);
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void report_failures(const std::vector<eval::PredictionRecord>& records) {
  std::size_t failed = 0;
  for (const auto& r : records) {
    if (r.error) {
      ++failed;
      std::cerr << "warning: " << r.method << " " << r.item_id << ": " << *r.error << "\n";
    }
  }
  if (failed) std::cerr << failed << " record(s) failed\n";
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const std::filesystem::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path(), ec);
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    if (!part.empty()) out.push_back(std::stoul(part));
  }
  if (out.empty()) throw ConfigError("empty k grid");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Order-robust LLM judging: permutation consensus, pairwise order swap, metrics"};
  app.require_subcommand(1);

  // judge-listwise -------------------------------------------------------
  Common lw_common;
  std::string lw_dataset, lw_out, lw_method = "pcfjudge", lw_direct = "direct";
  std::optional<std::size_t> lw_slice, lw_k;
  std::optional<std::uint64_t> lw_seed;
  std::optional<double> lw_tolerance;
  bool lw_no_direct = false;
  auto* lw = app.add_subcommand("judge-listwise", "Judge a listwise dataset with permutation consensus");
  lw->add_option("--dataset", lw_dataset, "Listwise JSONL dataset")->required()->check(CLI::ExistingFile);
  lw->add_option("--out", lw_out, "Prediction JSONL file (appended)")->required();
  lw->add_option("--slice", lw_slice, "Keep the first N items after sorting by id");
  lw->add_option("-k,--k", lw_k, "Permutations per item (default from config, 7)");
  lw->add_option("--seed", lw_seed, "Permutation schedule seed");
  lw->add_option("--tolerance", lw_tolerance, "Consensus tie tolerance on the 0-100 scale");
  lw->add_option("--method", lw_method, "Method name written to the records");
  lw->add_option("--direct-method", lw_direct, "Method name for the canonical-order records");
  lw->add_flag("--no-direct", lw_no_direct, "Do not emit canonical-order records");
  lw->add_flag("--overwrite", lw_common.overwrite, "Truncate --out instead of appending");
  lw->add_option("--config", lw_common.config_path, "JSON config file")->check(CLI::ExistingFile);
  lw->add_option("--backend", lw_common.backend, "Backend name from the config");
  lw->add_option("--parallelism", lw_common.parallelism, "Items judged concurrently");

  // judge-pairwise -------------------------------------------------------
  Common pw_common;
  std::string pw_dataset, pw_out, pw_patterns, pw_method = "apocjudge", pw_direct = "direct";
  std::optional<std::size_t> pw_slice;
  bool pw_no_direct = false;
  auto* pw = app.add_subcommand("judge-pairwise", "Judge a pairwise dataset with order swap and keyed confirmation");
  pw->add_option("--dataset", pw_dataset, "Pairwise JSONL dataset")->required()->check(CLI::ExistingFile);
  pw->add_option("--out", pw_out, "Prediction JSONL file (appended)")->required();
  pw->add_option("--slice", pw_slice, "Keep the first N pairs after sorting by id");
  pw->add_option("--estimation-patterns", pw_patterns, "Plain-text pattern list, one per line")
      ->check(CLI::ExistingFile);
  pw->add_option("--method", pw_method, "Method name written to the records");
  pw->add_option("--direct-method", pw_direct, "Method name for the single-order baseline records");
  pw->add_flag("--no-direct", pw_no_direct, "Do not emit baseline records");
  pw->add_flag("--overwrite", pw_common.overwrite, "Truncate --out instead of appending");
  pw->add_option("--config", pw_common.config_path, "JSON config file")->check(CLI::ExistingFile);
  pw->add_option("--backend", pw_common.backend, "Backend name from the config");
  pw->add_option("--parallelism", pw_common.parallelism, "Pairs judged concurrently");

  // score ----------------------------------------------------------------
  std::vector<std::string> sc_predictions;
  std::string sc_dataset, sc_out, sc_baseline;
  bool sc_pairwise = false;
  auto* sc = app.add_subcommand("score", "Compute metrics from prediction files");
  sc->add_option("--predictions", sc_predictions, "Prediction JSONL file(s)")->required()->check(CLI::ExistingFile);
  sc->add_option("--dataset", sc_dataset, "Dataset providing gold labels and sources")->check(CLI::ExistingFile);
  sc->add_flag("--pairwise", sc_pairwise, "The dataset is a pairwise dataset");
  sc->add_option("--baseline", sc_baseline, "Method used for paired comparisons");
  sc->add_option("--out", sc_out, "Metrics JSON file (stdout if omitted)");

  // report ---------------------------------------------------------------
  std::string rp_metrics, rp_format = "table", rp_out;
  auto* rp = app.add_subcommand("report", "Render a metrics file");
  rp->add_option("--metrics", rp_metrics, "Metrics JSON written by `score`")->required()->check(CLI::ExistingFile);
  rp->add_option("--format", rp_format, "table | jsonl | plot-data");
  rp->add_option("--out", rp_out, "Output path (stdout if omitted)");

  // simulate -------------------------------------------------------------
  sim::SyntheticJudgeModel model;
  std::string sm_grid = "1,3,5,7,9,11", sm_format = "table", sm_out;
  std::optional<std::size_t> sm_k;
  std::size_t sm_trials = 100000, sm_workers = 1;
  std::uint64_t sm_seed = sim::kDefaultSimulationSeed;
  auto* sm = app.add_subcommand("simulate", "Monte Carlo check of majority and consensus error against the bound");
  sm->add_option("--q", model.q, "P(a run tops the true best candidate)");
  sm->add_option("--n", model.n, "Candidates per item");
  sm->add_option("-k,--k", sm_k, "Single k (overrides --k-grid)");
  sm->add_option("--k-grid", sm_grid, "Comma-separated k values");
  sm->add_option("--trials", sm_trials, "Trials per k");
  sm->add_option("--sigma", model.score_noise, "Score noise sigma");
  sm->add_option("--margin", model.margin, "Latent lead of the true best candidate");
  sm->add_option("--tolerance", model.tolerance, "Consensus tie tolerance");
  sm->add_option("--seed", sm_seed, "Simulation seed");
  sm->add_option("--workers", sm_workers, "Worker threads");
  sm->add_option("--format", sm_format, "table | jsonl");
  sm->add_option("--out", sm_out, "Output path (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (lw->parsed()) {
      const auto config = load(lw_common);
      auto data = eval::load_listwise_dataset(lw_dataset, lw_slice);
      print_warnings(data.warnings);
      const auto judge = eval::make_listwise_judge(config, config.backend(lw_common.backend));
      eval::ListwiseOptions options;
      options.method = lw_method;
      options.k = lw_k.value_or(config.k);
      options.seed = lw_seed.value_or(config.seed);
      options.tolerance = lw_tolerance.value_or(config.tolerance);
      options.parallelism = lw_common.parallelism.value_or(config.parallelism);
      if (!lw_no_direct) options.direct_method = lw_direct;
      eval::PredictionWriter writer(lw_out, lw_common.overwrite);
      const auto records = eval::judge_listwise_dataset(data.items, *judge, options, &writer);
      report_failures(records);
      std::cerr << "wrote " << records.size() << " record(s) to " << lw_out << "\n";
    } else if (pw->parsed()) {
      const auto config = load(pw_common);
      auto data = eval::load_pair_dataset(pw_dataset, pw_slice);
      print_warnings(data.warnings);
      const auto judge = eval::make_pairwise_judge(config, config.backend(pw_common.backend));
      const apoc::EstimationDetector detector =
          !pw_patterns.empty() ? apoc::EstimationDetector::from_file(pw_patterns)
          : !config.estimation_patterns.empty() ? apoc::EstimationDetector(config.estimation_patterns)
                                                : apoc::EstimationDetector();
      eval::PairwiseOptions options;
      options.method = pw_method;
      options.direct_method = pw_no_direct ? std::nullopt : std::optional<std::string>(pw_direct);
      options.parallelism = pw_common.parallelism.value_or(config.parallelism);
      eval::PredictionWriter writer(pw_out, pw_common.overwrite);
      const auto records = eval::judge_pairwise_dataset(data.items, *judge, detector, options, &writer);
      report_failures(records);
      std::cerr << "wrote " << records.size() << " record(s) to " << pw_out << "\n";
    } else if (sc->parsed()) {
      std::vector<eval::PredictionRecord> records;
      for (const auto& path : sc_predictions) {
        auto part = eval::read_predictions(path);
        records.insert(records.end(), part.begin(), part.end());
      }
      if (!sc_dataset.empty()) {
        std::map<std::string, std::pair<std::optional<std::size_t>, std::optional<std::string>>> gold;
        if (sc_pairwise) {
          auto data = eval::load_pair_dataset(sc_dataset);
          for (const auto& item : data.items) {
            std::optional<std::size_t> g;
            if (item.gold) g = *item.gold == apoc::PairLabel::A ? 0 : 1;
            gold[item.id] = {g, item.source.empty() ? std::nullopt : std::optional<std::string>(item.source)};
          }
        } else {
          auto data = eval::load_listwise_dataset(sc_dataset);
          for (const auto& item : data.items) gold[item.id] = {item.gold_index, item.source};
        }
        for (auto& r : records) {
          const auto it = gold.find(r.item_id);
          if (it == gold.end()) throw Error("prediction for unknown item " + r.item_id);
          r.gold = it->second.first;
          r.source = it->second.second;
        }
      }
      const std::optional<std::string> baseline =
          sc_baseline.empty() ? std::nullopt : std::optional<std::string>(sc_baseline);
      const auto bundle = eval::build_bundle(records, baseline);
      write_text(sc_out, eval::to_json(bundle).dump(2) + "\n");
    } else if (rp->parsed()) {
      std::ifstream in(rp_metrics);
      const auto j = nlohmann::json::parse(in, nullptr, false);
      if (j.is_discarded()) throw Error("metrics file is not JSON");
      write_text(rp_out, eval::render_report(eval::bundle_from_json(j), eval::parse_report_format(rp_format)));
    } else if (sm->parsed()) {
      const auto grid = sm_k ? std::vector<std::size_t>{*sm_k} : parse_grid(sm_grid);
      std::vector<sim::SimulationResult> results;
      for (std::size_t k : grid) results.push_back(sim::simulate(model, k, sm_trials, sm_seed, sm_workers));
      write_text(sm_out, eval::render_simulation(results, eval::parse_report_format(sm_format)));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
