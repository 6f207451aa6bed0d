// Command-line front end: centralized evaluation, multi-participant
// collaboration, and timing runs over the bundled detectors.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "itables/collaborative.hpp"
#include "itables/dataset.hpp"
#include "itables/ensemble.hpp"
#include "itables/evaluation.hpp"
#include "itables/wire.hpp"

namespace {

using namespace itables;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_epsilon(const std::string& token) {
  if (token == "inf") return kNonPrivate;
  try {
    size_t used = 0;
    double value = std::stod(token, &used);
    if (used != token.size() || !(value > 0.0)) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw UsageError("epsilon must be a positive number or 'inf', got '" + token + "'");
  }
}

std::vector<double> parse_epsilon_list(const std::string& tokens, int k) {
  std::vector<double> values;
  std::stringstream ss(tokens);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(parse_epsilon(item));
  if (values.empty()) throw UsageError("empty epsilon list");
  if (values.size() == 1) values.assign(k, values.front());
  if (static_cast<int>(values.size()) != k) {
    throw UsageError("epsilon list must have one entry or one per participant");
  }
  return values;
}

std::string default_results_path() {
  const char* dir = std::getenv("ITABLES_RESULTS_DIR");
  std::string base = dir && *dir ? dir : ".";
  return base + "/results.csv";
}

std::string epsilon_str(double eps) {
  if (!std::isfinite(eps)) return "inf";
  std::ostringstream ss;
  ss << eps;
  return ss.str();
}

void write_scores_csv(const std::string& path, const std::vector<double>& scores,
                      Orientation orientation) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open score file " + path);
  const char* tag = orientation == Orientation::kLowerIsOutlier ? "lower-is-outlier"
                                                                : "higher-is-outlier";
  out << "point_id,score,orientation\n";
  out.precision(17);
  for (size_t i = 0; i < scores.size(); ++i) {
    out << i << ',' << scores[i] << ',' << tag << '\n';
  }
}

struct EvalArgs {
  std::string dataset_path;
  int label_col = -1;
  std::string detector = "lsh-itables";
  int m = 100;
  int runs = 10;
  uint64_t seed = 1;
  std::string epsilon = "inf";
  std::string results_path;
  std::string scores_path;
  std::string model_path;
};

int cmd_eval(const EvalArgs& args) {
  DetectorConfig config;
  config.kind = detector_from_name(args.detector);
  config.m = args.m;
  config.epsilon = parse_epsilon(args.epsilon);
  if (config.kind == DetectorKind::kIforest && std::isfinite(config.epsilon)) {
    std::fprintf(stderr,
                 "warning: iforest has no private release mechanism; epsilon ignored\n");
    config.epsilon = kNonPrivate;
  }

  Dataset data = load_csv(args.dataset_path, args.label_col);
  EvalResult result = repeated_eval(config, data, args.runs, args.seed);

  std::string ledger = args.results_path.empty() ? default_results_path() : args.results_path;
  append_results_csv(ledger, result);

  std::printf("detector=%s dataset=%s n=%zu d=%zu runs=%d auc_mean=%.4f auc_std=%.4f seconds=%.3f epsilon=%s\n",
              result.detector.c_str(), result.dataset.c_str(), data.n, data.d,
              result.runs, result.auc_mean, result.auc_std, result.seconds,
              epsilon_str(result.epsilon).c_str());

  if (!args.scores_path.empty()) {
    uint64_t seed0 = derive_seed(args.seed, streams::kRun, 0);
    std::vector<double> scores = train_and_score(config, data, seed0);
    write_scores_csv(args.scores_path, scores, detector_orientation(config.kind));
  }
  if (!args.model_path.empty()) {
    if (config.kind != DetectorKind::kLshItables) {
      throw UsageError("--save-model supports the lsh-itables detector");
    }
    uint64_t seed0 = derive_seed(args.seed, streams::kRun, 0);
    LshEnsembleModel model = lsh_itables_train(data, config.m, config.epsilon, seed0);
    std::ofstream out(args.model_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open model file " + args.model_path);
    out << wire::lsh_model_to_json(model).dump(2) << '\n';
  }
  return kExitOk;
}

struct CollabArgs {
  std::string dataset_path;
  int label_col = -1;
  std::string detector = "lsh-itables";
  int k = 2;
  int m = 100;
  int runs = 10;
  uint64_t seed = 1;
  std::string epsilon = "inf";
  std::string sweep;
  std::string partition_strategy = "uniform";
  double skew = 1.0;
  std::string transcript_path;
  std::string plot_path;
  std::string results_path;
};

int cmd_collab(const CollabArgs& args) {
  DetectorKind kind = detector_from_name(args.detector);
  std::vector<double> sweep_values;
  if (!args.sweep.empty()) {
    std::stringstream ss(args.sweep);
    std::string item;
    while (std::getline(ss, item, ',')) sweep_values.push_back(parse_epsilon(item));
    if (sweep_values.empty()) throw UsageError("empty epsilon sweep");
  }

  Dataset data = load_csv(args.dataset_path, args.label_col);
  if (static_cast<size_t>(args.k) > data.n) {
    throw UsageError("more participants than points");
  }

  PartitionStrategy strategy = args.partition_strategy == "skewed"
                                   ? PartitionStrategy::kOutlierSkewed
                                   : PartitionStrategy::kUniformRandom;

  std::ofstream plot;
  if (!args.plot_path.empty()) {
    plot.open(args.plot_path, std::ios::trunc);
    if (!plot) throw std::runtime_error("cannot open plot file " + args.plot_path);
    plot << "epsilon,auc\n";
  }

  std::vector<std::vector<double>> epsilon_lists;
  if (sweep_values.empty()) {
    epsilon_lists.push_back(parse_epsilon_list(args.epsilon, args.k));
  } else {
    for (double eps : sweep_values) {
      epsilon_lists.push_back(std::vector<double>(args.k, eps));
    }
  }

  std::string ledger = args.results_path.empty() ? default_results_path() : args.results_path;
  bool first_point = true;
  for (const std::vector<double>& epsilons : epsilon_lists) {
    std::vector<double> run_aucs;
    std::vector<double> participant_sums(args.k, 0.0);
    std::vector<int> participant_counts(args.k, 0);
    PrivacyAccount account;
    auto start = std::chrono::steady_clock::now();
    for (int r = 0; r < args.runs; ++r) {
      uint64_t run_seed = derive_seed(args.seed, streams::kRun, static_cast<uint64_t>(r));
      PartitionSpec pspec;
      pspec.k = args.k;
      pspec.strategy = strategy;
      pspec.skew_fraction = args.skew;
      pspec.seed = derive_seed(run_seed, streams::kPartition);

      // only the first run of the first sweep point is transcribed
      std::optional<wire::Transcript> transcript;
      if (!args.transcript_path.empty() && first_point && r == 0) {
        transcript.emplace(args.transcript_path);
      }
      CollabResult result =
          kind == DetectorKind::kRsH
              ? run_collaboration_rsh(data, pspec, args.m, epsilons, run_seed,
                                      transcript ? &*transcript : nullptr)
              : run_collaboration(data, pspec, args.m, epsilons, run_seed,
                                  transcript ? &*transcript : nullptr);
      run_aucs.push_back(result.mean_auc);
      for (int p = 0; p < args.k; ++p) {
        if (!std::isnan(result.participant_auc[p])) {
          participant_sums[p] += result.participant_auc[p];
          participant_counts[p]++;
        }
      }
      account = result.account;
    }
    auto stop = std::chrono::steady_clock::now();

    double mean = std::accumulate(run_aucs.begin(), run_aucs.end(), 0.0) / args.runs;
    double var = 0.0;
    for (double a : run_aucs) var += (a - mean) * (a - mean);
    double stddev = std::sqrt(var / args.runs);

    double eps_display = epsilons.front();
    std::printf("detector=%s dataset=%s k=%d epsilon=%s runs=%d auc_mean=%.4f auc_std=%.4f total_epsilon=%s\n",
                detector_name(kind).c_str(), data.name.c_str(), args.k,
                epsilon_str(eps_display).c_str(), args.runs, mean, stddev,
                epsilon_str(account.total).c_str());
    for (int p = 0; p < args.k; ++p) {
      if (participant_counts[p] > 0) {
        std::printf("  participant=%d auc=%.4f epsilon=%s\n", p,
                    participant_sums[p] / participant_counts[p],
                    epsilon_str(account.per_participant[p]).c_str());
      } else {
        std::printf("  participant=%d auc=excluded epsilon=%s\n", p,
                    epsilon_str(account.per_participant[p]).c_str());
      }
    }

    if (plot.is_open()) {
      plot << epsilon_str(eps_display) << ',' << mean << '\n';
    }
    EvalResult row;
    row.detector = detector_name(kind);
    row.dataset = data.name;
    row.runs = args.runs;
    row.auc_mean = mean;
    row.auc_std = stddev;
    row.seconds = std::chrono::duration<double>(stop - start).count();
    row.epsilon = eps_display;
    row.participants = args.k;
    append_results_csv(ledger, row);
    first_point = false;
  }
  return kExitOk;
}

struct BenchArgs {
  std::string dataset_path;
  int label_col = -1;
  size_t synth_n = 0;
  size_t synth_d = 8;
  size_t synth_outliers = 0;
  int m = 100;
  uint64_t seed = 1;
  std::string detectors = "lsh-itables,rs-h,iforest";
  std::string out_path;
};

int cmd_bench(const BenchArgs& args) {
  if (args.dataset_path.empty() && args.synth_n == 0) {
    throw UsageError("bench needs --dataset or --synth-n");
  }
  Dataset data = args.dataset_path.empty()
                     ? synth_planted(args.synth_n - args.synth_outliers,
                                     args.synth_outliers, args.synth_d, 6.0, args.seed)
                     : load_csv(args.dataset_path, args.label_col);

  std::vector<DetectorKind> kinds;
  {
    std::stringstream ss(args.detectors);
    std::string item;
    while (std::getline(ss, item, ',')) kinds.push_back(detector_from_name(item));
    if (kinds.empty()) throw UsageError("empty detector list");
  }

  std::ofstream out;
  if (!args.out_path.empty()) {
    out.open(args.out_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file " + args.out_path);
  }
  std::ostream& csv = out.is_open() ? static_cast<std::ostream&>(out) : std::cout;
  csv << "detector,dataset,n,d,m,train_seconds,test_seconds,total_seconds\n";

  for (DetectorKind kind : kinds) {
    using clock = std::chrono::steady_clock;
    double train_s = 0.0, test_s = 0.0;
    switch (kind) {
      case DetectorKind::kLshItables: {
        auto t0 = clock::now();
        LshEnsembleModel model = lsh_itables_train(data, args.m, kNonPrivate, args.seed);
        auto t1 = clock::now();
        volatile double sink = lsh_score_all(model, data)[0];
        (void)sink;
        auto t2 = clock::now();
        train_s = std::chrono::duration<double>(t1 - t0).count();
        test_s = std::chrono::duration<double>(t2 - t1).count();
        break;
      }
      case DetectorKind::kRsH: {
        auto t0 = clock::now();
        RshEnsembleModel model = rsh_train(data, args.m, kNonPrivate, args.seed);
        auto t1 = clock::now();
        volatile double sink = rsh_score_all(model, data)[0];
        (void)sink;
        auto t2 = clock::now();
        train_s = std::chrono::duration<double>(t1 - t0).count();
        test_s = std::chrono::duration<double>(t2 - t1).count();
        break;
      }
      case DetectorKind::kIforest: {
        auto t0 = clock::now();
        IsolationForestModel model = iforest_train(data, args.m, kIforestSubsample,
                                                   kIforestHeightLimit, args.seed);
        auto t1 = clock::now();
        volatile double sink = iforest_score_all(model, data)[0];
        (void)sink;
        auto t2 = clock::now();
        train_s = std::chrono::duration<double>(t1 - t0).count();
        test_s = std::chrono::duration<double>(t2 - t1).count();
        break;
      }
    }
    csv << detector_name(kind) << ',' << data.name << ',' << data.n << ',' << data.d
        << ',' << args.m << ',' << train_s << ',' << test_s << ','
        << (train_s + test_s) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LSH-ensemble outlier detection with mergeable, privately releasable histograms"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "centralized train + score + AUC");
  eval->add_option("--dataset", eval_args.dataset_path, "CSV file")->required();
  eval->add_option("--label-col", eval_args.label_col, "label column index (default: last)");
  eval->add_option("--detector", eval_args.detector, "lsh-itables | rs-h | iforest")
      ->check(CLI::IsMember({"lsh-itables", "rs-h", "iforest"}));
  eval->add_option("--m", eval_args.m, "base models")->check(CLI::PositiveNumber);
  eval->add_option("--runs", eval_args.runs, "repeated runs")->check(CLI::PositiveNumber);
  eval->add_option("--seed", eval_args.seed, "master seed");
  eval->add_option("--epsilon", eval_args.epsilon, "privacy budget or 'inf'");
  eval->add_option("--results", eval_args.results_path, "results ledger path");
  eval->add_option("--scores", eval_args.scores_path, "per-point score CSV");
  eval->add_option("--save-model", eval_args.model_path, "trained-model JSON bundle");

  CollabArgs collab_args;
  CLI::App* collab = app.add_subcommand("collab", "multi-participant simulation");
  collab->add_option("--dataset", collab_args.dataset_path, "CSV file")->required();
  collab->add_option("--label-col", collab_args.label_col, "label column index");
  collab->add_option("--detector", collab_args.detector, "lsh-itables | rs-h")
      ->check(CLI::IsMember({"lsh-itables", "rs-h"}));
  collab->add_option("--k", collab_args.k, "participants")->check(CLI::PositiveNumber);
  collab->add_option("--m", collab_args.m, "base models")->check(CLI::PositiveNumber);
  collab->add_option("--runs", collab_args.runs, "repeated runs")->check(CLI::PositiveNumber);
  collab->add_option("--seed", collab_args.seed, "master seed");
  collab->add_option("--epsilon", collab_args.epsilon,
                     "per-participant budget: one value, comma list, or 'inf'");
  collab->add_option("--epsilon-sweep", collab_args.sweep, "comma list of budgets to sweep");
  collab->add_option("--partition", collab_args.partition_strategy, "uniform | skewed")
      ->check(CLI::IsMember({"uniform", "skewed"}));
  collab->add_option("--skew", collab_args.skew, "outlier fraction routed to participant 0")
      ->check(CLI::Range(0.0, 1.0));
  collab->add_option("--transcript", collab_args.transcript_path, "JSON-lines message log");
  collab->add_option("--plot-csv", collab_args.plot_path, "epsilon,auc rows for plotting");
  collab->add_option("--results", collab_args.results_path, "results ledger path");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "train/test wall-clock timings");
  bench->add_option("--dataset", bench_args.dataset_path, "CSV file");
  bench->add_option("--label-col", bench_args.label_col, "label column index");
  bench->add_option("--synth-n", bench_args.synth_n, "synthetic point count");
  bench->add_option("--synth-d", bench_args.synth_d, "synthetic dimensions");
  bench->add_option("--synth-outliers", bench_args.synth_outliers, "synthetic outliers");
  bench->add_option("--m", bench_args.m, "base models")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_args.seed, "master seed");
  bench->add_option("--detectors", bench_args.detectors, "comma list to run");
  bench->add_option("--out", bench_args.out_path, "timing CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*eval) return cmd_eval(eval_args);
    if (*collab) return cmd_collab(collab_args);
    if (*bench) return cmd_bench(bench_args);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
