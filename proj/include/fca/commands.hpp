#ifndef FCA_COMMANDS_HPP
#define FCA_COMMANDS_HPP

// Subcommand bodies shared by the fca executable and the tests. Each returns
// an exit code: 0 success, 1 check failure, 2 usage error. Configs are fully
// validated before any training starts.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fca/dct.hpp"
#include "fca/experiments.hpp"
#include "fca/serialize.hpp"

namespace fca {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RoundtripOptions {
  std::size_t height = 7;
  std::size_t width = 7;
  std::size_t trials = 100;
  Real tolerance = Real{1e-9};
};

struct ComponentOptions {
  std::size_t grid_height = 4;
  std::size_t grid_width = 4;
  std::size_t budget = 5; // fine-tune epochs per component
};

struct CompareOptions {
  std::string kind = "sweep"; // sweep | learnable
  std::string criterion = "lf";
  std::vector<std::size_t> ks{1, 2, 4, 8, 16, 32};
  std::vector<std::string> modes{"FR", "LR", "LD", "FD"};
  bool baseline = true;     // add a Gap row trained on the same seeds
  std::size_t score_budget = 5;
  Real score_fraction = Real{0.8}; // ts scores come from this split of the training set
  std::string scores_file;  // optional precomputed u,v,score CSV
};

struct BenchOptions {
  std::vector<std::size_t> sizes{4, 8, 16, 32};
  std::size_t reps = 200;
};

struct RunConfig {
  std::string command;
  std::string out;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  SyntheticSpec data;
  Real train_fraction = Real{0.8};
  std::uint64_t split_seed = 1;
  ModelConfig model;
  TrainHyper train;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  RoundtripOptions roundtrip;
  ComponentOptions components;
  CompareOptions compare;
  BenchOptions bench;
};

/// Library defaults tuned for the desk-scale task; every knob can be overridden.
inline RunConfig default_run_config() {
  RunConfig c;
  c.data.seed = 1;
  return c;
}

/// The resolved config. `out` is left out so that reruns into another directory echo identical files.
inline json to_json(const RunConfig& c) {
  json train = to_json(c.train);
  train.erase("seed");
  return {{"command", c.command},
          {"seed", c.seed},
          {"workers", c.workers},
          {"data", to_json(c.data)},
          {"train_fraction", c.train_fraction},
          {"split_seed", c.split_seed},
          {"model", to_json(c.model)},
          {"train", train},
          {"seeds", c.seeds},
          {"roundtrip",
           {{"height", c.roundtrip.height},
            {"width", c.roundtrip.width},
            {"trials", c.roundtrip.trials},
            {"tolerance", c.roundtrip.tolerance}}},
          {"components",
           {{"grid_height", c.components.grid_height},
            {"grid_width", c.components.grid_width},
            {"budget", c.components.budget}}},
          {"compare",
           {{"kind", c.compare.kind},
            {"criterion", c.compare.criterion},
            {"ks", c.compare.ks},
            {"modes", c.compare.modes},
            {"baseline", c.compare.baseline},
            {"score_budget", c.compare.score_budget},
            {"score_fraction", c.compare.score_fraction},
            {"scores_file", c.compare.scores_file}}},
          {"bench", {{"sizes", c.bench.sizes}, {"reps", c.bench.reps}}}};
}

inline void update_from_json(RunConfig& c, const json& j) {
  static const std::vector<std::string> known{"command", "out", "seed", "workers", "data", "train_fraction",
                                              "split_seed", "model", "train", "seeds", "roundtrip",
                                              "components", "compare", "bench"};
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw UsageError("config: unknown key '" + key + "'");
  try {
    c.command = j.value("command", c.command);
    c.out = j.value("out", c.out);
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    if (j.contains("data")) update_from_json(c.data, j.at("data"));
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    c.split_seed = j.value("split_seed", c.split_seed);
    if (j.contains("model")) update_from_json(c.model, j.at("model"));
    if (j.contains("train")) update_from_json(c.train, j.at("train"));
    c.seeds = j.value("seeds", c.seeds);
    if (j.contains("roundtrip")) {
      const auto& r = j.at("roundtrip");
      c.roundtrip.height = r.value("height", c.roundtrip.height);
      c.roundtrip.width = r.value("width", c.roundtrip.width);
      c.roundtrip.trials = r.value("trials", c.roundtrip.trials);
      c.roundtrip.tolerance = r.value("tolerance", c.roundtrip.tolerance);
    }
    if (j.contains("components")) {
      const auto& r = j.at("components");
      c.components.grid_height = r.value("grid_height", c.components.grid_height);
      c.components.grid_width = r.value("grid_width", c.components.grid_width);
      c.components.budget = r.value("budget", c.components.budget);
    }
    if (j.contains("compare")) {
      const auto& r = j.at("compare");
      c.compare.kind = r.value("kind", c.compare.kind);
      c.compare.criterion = r.value("criterion", c.compare.criterion);
      c.compare.ks = r.value("ks", c.compare.ks);
      c.compare.modes = r.value("modes", c.compare.modes);
      c.compare.baseline = r.value("baseline", c.compare.baseline);
      c.compare.score_budget = r.value("score_budget", c.compare.score_budget);
      c.compare.score_fraction = r.value("score_fraction", c.compare.score_fraction);
      c.compare.scores_file = r.value("scores_file", c.compare.scores_file);
    }
    if (j.contains("bench")) {
      const auto& r = j.at("bench");
      c.bench.sizes = r.value("sizes", c.bench.sizes);
      c.bench.reps = r.value("reps", c.bench.reps);
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

inline TrainHyper resolved_hyper(const RunConfig& c) {
  TrainHyper h = c.train;
  h.seed = c.seed;
  return h;
}

/// Throws UsageError on anything that would fail later; nothing here trains.
inline void validate(const RunConfig& c) {
  auto wrap = [](auto&& f) {
    try {
      f();
    } catch (const UsageError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    } catch (const std::out_of_range& e) {
      throw UsageError(e.what());
    }
  };
  wrap([&] {
    const auto& cmd = c.command;
    if (cmd == "roundtrip") {
      if (c.roundtrip.height == 0 || c.roundtrip.width == 0) throw UsageError("roundtrip: H and W must be >= 1");
      if (c.roundtrip.trials == 0) throw UsageError("roundtrip: trials must be >= 1");
      if (!(c.roundtrip.tolerance >= 0)) throw UsageError("roundtrip: tolerance must be >= 0");
      return;
    }
    if (cmd == "bench") {
      for (auto s : c.bench.sizes)
        if (s == 0) throw UsageError("bench: sizes must be >= 1");
      if (c.bench.reps == 0) throw UsageError("bench: reps must be >= 1");
      return;
    }
    if (cmd != "train" && cmd != "search" && cmd != "compare" && cmd != "eval-components")
      throw UsageError("unknown command '" + cmd + "'");
    validate(c.data);
    if (c.model.height != c.data.height || c.model.width != c.data.width)
      throw UsageError("model input size differs from the data image size");
    if (c.model.num_classes != c.data.num_classes)
      throw UsageError("model num_classes differs from the data class count");
    if (!(c.train_fraction > 0 && c.train_fraction < 1)) throw UsageError("train_fraction must be in (0, 1)");
    validate(c.train);
    if (c.workers == 0) throw UsageError("workers must be >= 1");
    if (cmd == "train") {
      validate(c.model);
    } else if (cmd == "search") {
      ModelConfig m = c.model;
      m.attention = AttentionKind::Nas;
      validate(m);
    } else if (cmd == "eval-components") {
      const auto site = attention_grid(c.model);
      if (c.components.grid_height == 0 || c.components.grid_width == 0)
        throw UsageError("eval-components: grid must be at least 1x1");
      if (c.components.grid_height > site.height || c.components.grid_width > site.width)
        throw UsageError("eval-components: grid " + std::to_string(c.components.grid_height) + "x" +
                         std::to_string(c.components.grid_width) + " exceeds the " + std::to_string(site.height) +
                         "x" + std::to_string(site.width) +
                         " map at the last attention site; components must exist on every attention map");
    } else {
      if (c.seeds.empty()) throw UsageError("compare: seeds must not be empty");
      if (c.compare.kind == "sweep") {
        const auto crit = criterion_from_string(c.compare.criterion);
        if (c.compare.ks.empty()) throw UsageError("compare: ks must not be empty");
        for (auto k : c.compare.ks) capped_k(c.model, k);
        if (crit == Criterion::TS && c.compare.scores_file.empty() &&
            !(c.compare.score_fraction > 0 && c.compare.score_fraction < 1))
          throw UsageError("compare: score_fraction must be in (0, 1)");
      } else if (c.compare.kind == "learnable") {
        if (c.compare.modes.empty()) throw UsageError("compare: modes must not be empty");
        for (const auto& m : c.compare.modes) validate(learn_mode_config(c.model, mode_from_string(m)));
      } else {
        throw UsageError("compare: kind must be sweep or learnable");
      }
    }
  });
}

inline std::filesystem::path output_dir(const RunConfig& c) {
  if (!c.out.empty()) return c.out;
  const char* root = std::getenv("FCA_OUT_ROOT");
  return std::filesystem::path(root && *root ? root : "fca_out") / c.command;
}

inline DataSplit make_split(const RunConfig& c) {
  return split_stratified(gen_synthetic(c.data), c.train_fraction, c.split_seed);
}

namespace detail {

inline std::string join(const std::vector<Real>& xs) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ";" : "") << xs[i];
  return os.str();
}

inline std::string join(const std::vector<Component>& cs) {
  std::string s;
  for (std::size_t i = 0; i < cs.size(); ++i)
    s += (i ? ";" : "") + std::to_string(cs[i].u) + "-" + std::to_string(cs[i].v);
  return s;
}

inline void write_timing(const std::filesystem::path& dir, double seconds) {
  write_json(dir / "timing.json", {{"wall_seconds", seconds}});
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double time_per_call(std::size_t reps, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < reps; ++i) f();
  return seconds_since(t0) / static_cast<double>(reps);
}

} // namespace detail

// --- roundtrip ---------------------------------------------------------------------

struct CheckResult {
  std::string name;
  Real max_error = 0;
  Real tolerance = 0;
  bool pass = false;
};

/// Orthonormal roundtrip, the (0,0)-coefficient identity and separable-vs-naive agreement on random inputs.
inline std::vector<CheckResult> roundtrip_checks(const RoundtripOptions& o, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> d(-1, 1);
  Real rt = 0, dc = 0, eq = 0;
  for (std::size_t t = 0; t < o.trials; ++t) {
    Tensor x({o.height, o.width});
    for (auto& v : x.data()) v = d(rng);
    const Tensor f = dct2(x);
    rt = std::max(rt, max_abs_diff(idct2(f, Normalization::Orthonormal), x));
    const Real s = sum(x);
    const Real gap = reduce_mean_hw(x.reshaped({1, o.height, o.width}))[0] * static_cast<Real>(x.size());
    const Real denom = std::max(std::abs(s), Real{1e-6});
    dc = std::max({dc, std::abs(f(0, 0) - s) / denom, std::abs(f(0, 0) - gap) / denom});
    Real scale = 1;
    for (Real v : f.data()) scale = std::max(scale, std::abs(v));
    eq = std::max(eq, max_abs_diff(f, dct2(x, DctPath::Naive)) / scale);
  }
  return {{"orthonormal_roundtrip", rt, o.tolerance, rt <= o.tolerance},
          {"dc_equals_sum_and_scaled_gap", dc, o.tolerance, dc <= o.tolerance},
          {"separable_matches_naive", eq, o.tolerance, eq <= o.tolerance}};
}

inline int cmd_roundtrip(const RunConfig& c, std::ostream& log = std::cout) {
  validate(c);
  const auto dir = output_dir(c);
  const auto checks = roundtrip_checks(c.roundtrip, c.seed);
  json arr = json::array();
  bool ok = true;
  for (const auto& ch : checks) {
    log << (ch.pass ? "pass " : "FAIL ") << ch.name << " max_error=" << ch.max_error << " tolerance=" << ch.tolerance
        << '\n';
    arr.push_back({{"name", ch.name}, {"max_error", ch.max_error}, {"tolerance", ch.tolerance}, {"pass", ch.pass}});
    ok = ok && ch.pass;
  }
  write_json(dir / "config.json", to_json(c));
  write_json(dir / "report.json", {{"schema", "fca.roundtrip/1"}, {"pass", ok}, {"checks", arr}});
  return ok ? kExitOk : kExitCheckFailed;
}

// --- training commands ----------------------------------------------------------------

inline int finish_run(const std::filesystem::path& dir, const RunRecord& rec, std::ostream& log) {
  write_run(dir, rec);
  detail::write_timing(dir, rec.wall_seconds);
  log << rec.label << ": status=" << rec.status << " val_accuracy=" << rec.final_val_accuracy
      << " params=" << rec.trainable_params << '\n';
  if (rec.status != "ok") {
    log << "diagnostic: " << rec.diagnostic << '\n';
    return kExitCheckFailed;
  }
  return kExitOk;
}

inline int cmd_train(const RunConfig& c, std::ostream& log = std::cout) {
  validate(c);
  const auto dir = output_dir(c);
  write_json(dir / "config.json", to_json(c));
  const auto rec = train(c.model, make_split(c), resolved_hyper(c), to_string(c.model.attention));
  return finish_run(dir, rec, log);
}

inline int cmd_search(const RunConfig& c, std::ostream& log = std::cout) {
  validate(c);
  const auto dir = output_dir(c);
  write_json(dir / "config.json", to_json(c));
  const auto rec = nas_search(c.model, make_split(c), resolved_hyper(c));
  const int code = finish_run(dir, rec, log);
  if (rec.derived) log << "derived: " << detail::join(rec.derived->components) << '\n';
  return code;
}

inline int cmd_eval_components(const RunConfig& c, std::ostream& log = std::cout) {
  validate(c);
  const auto dir = output_dir(c);
  write_json(dir / "config.json", to_json(c));
  const auto t0 = std::chrono::steady_clock::now();
  const auto split = make_split(c);
  const auto hyper = resolved_hyper(c);
  const auto [base, base_rec] = pretrain_base(c.model, split, hyper);
  write_run(dir, base_rec);
  const FrequencyGrid grid{c.components.grid_height, c.components.grid_width};
  const auto scores = evaluate_grid(base, grid, split, c.components.budget, hyper, c.workers);
  const auto gap = fine_tune_with_attention(base, gap_config(base.config), split, c.components.budget, hyper, "gap");

  std::ostringstream csv;
  write_scores_csv(csv, scores);
  write_text(dir / "scores.csv", csv.str());
  json arr = json::array();
  bool finite = true;
  for (const auto& s : scores) {
    arr.push_back({{"u", s.component.u}, {"v", s.component.v}, {"score", s.score}});
    finite = finite && std::isfinite(s.score);
  }
  write_json(dir / "components.json", {{"schema", "fca.components/1"},
                                       {"budget", c.components.budget},
                                       {"base_accuracy", base_rec.final_val_accuracy},
                                       {"gap_score", gap.final_val_accuracy},
                                       {"scores", arr}});
  detail::write_timing(dir, detail::seconds_since(t0));
  log << "base accuracy " << base_rec.final_val_accuracy << ", gap fine-tune " << gap.final_val_accuracy << ", "
      << scores.size() << " component scores\n";
  return finite && base_rec.status == "ok" ? kExitOk : kExitCheckFailed;
}

/// Scores for the ts criterion, measured on a split of the training set so validation stays untouched.
inline std::vector<ComponentScore> ts_scores(const RunConfig& c, const DataSplit& split) {
  if (!c.compare.scores_file.empty()) {
    std::ifstream is(c.compare.scores_file);
    if (!is) throw UsageError("cannot open scores file " + c.compare.scores_file);
    return read_scores_csv(is);
  }
  const auto inner = split_stratified(split.train, c.compare.score_fraction, c.split_seed + 1);
  const auto hyper = resolved_hyper(c);
  const auto [base, rec] = pretrain_base(c.model, inner, hyper);
  return evaluate_grid(base, attention_grid(c.model), inner, c.compare.score_budget, hyper, c.workers);
}

inline void write_runs(const std::filesystem::path& dir, const std::string& row, const std::vector<RunRecord>& runs) {
  for (const auto& r : runs) write_run(dir / "runs" / row / ("seed_" + std::to_string(r.seed)), r);
}

inline int cmd_compare(const RunConfig& c, std::ostream& log = std::cout) {
  validate(c);
  const auto dir = output_dir(c);
  write_json(dir / "config.json", to_json(c));
  const auto t0 = std::chrono::steady_clock::now();
  const auto split = make_split(c);
  const auto hyper = resolved_hyper(c);
  bool ok = true;
  auto all_ok = [&](const std::vector<RunRecord>& runs) {
    for (const auto& r : runs) ok = ok && r.status == "ok";
  };
  std::ostringstream csv;
  csv << std::setprecision(std::numeric_limits<double>::max_digits10);
  json rows = json::array();

  std::optional<Summary> baseline;
  std::vector<Real> baseline_acc;
  if (c.compare.baseline) {
    const auto runs = run_seeds(gap_config(c.model), split, hyper, c.seeds, c.workers, "gap");
    all_ok(runs);
    write_runs(dir, "gap", runs);
    baseline_acc = final_accuracies(runs);
    baseline = summarize(baseline_acc);
    rows.push_back({{"method", "gap"}, {"mean", baseline->mean}, {"std", baseline->std}, {"per_seed", baseline_acc}});
    log << "gap: mean " << baseline->mean << " std " << baseline->std << '\n';
  }

  if (c.compare.kind == "sweep") {
    const auto crit = criterion_from_string(c.compare.criterion);
    std::vector<ComponentScore> scores;
    if (crit == Criterion::TS) {
      scores = ts_scores(c, split);
      std::ostringstream sc;
      write_scores_csv(sc, scores);
      write_text(dir / "scores.csv", sc.str());
    }
    const auto table = sweep_k(crit, c.compare.ks, split, c.seeds, c.model, hyper, scores, c.workers);
    csv << "method,k,k_used,components,mean,std,per_seed\n";
    if (baseline)
      csv << "gap,,,," << baseline->mean << ',' << baseline->std << ',' << detail::join(baseline_acc) << '\n';
    for (const auto& r : table) {
      all_ok(r.runs);
      write_runs(dir, std::string(to_string(crit)) + "_k" + std::to_string(r.k), r.runs);
      csv << to_string(crit) << ',' << r.k << ',' << r.k_used << ',' << detail::join(r.components) << ','
          << r.accuracy.mean << ',' << r.accuracy.std << ',' << detail::join(r.per_seed) << '\n';
      rows.push_back({{"method", to_string(crit)},
                      {"k", r.k},
                      {"k_used", r.k_used},
                      {"components", components_to_json(r.components)},
                      {"mean", r.accuracy.mean},
                      {"std", r.accuracy.std},
                      {"per_seed", r.per_seed}});
      log << to_string(crit) << " k=" << r.k << " (used " << r.k_used << "): mean " << r.accuracy.mean << " std "
          << r.accuracy.std << '\n';
    }
  } else {
    std::vector<LearnMode> modes;
    for (const auto& m : c.compare.modes) modes.push_back(mode_from_string(m));
    const auto table = compare_learnable(modes, split, c.seeds, c.model, hyper, c.workers);
    csv << "method,trainable_params,mean,std,per_seed\n";
    if (baseline)
      csv << "gap,," << baseline->mean << ',' << baseline->std << ',' << detail::join(baseline_acc) << '\n';
    for (const auto& r : table) {
      all_ok(r.runs);
      write_runs(dir, r.mode, r.runs);
      csv << r.mode << ',' << r.trainable_params << ',' << r.accuracy.mean << ',' << r.accuracy.std << ','
          << detail::join(r.per_seed) << '\n';
      rows.push_back({{"method", r.mode},
                      {"trainable_params", r.trainable_params},
                      {"mean", r.accuracy.mean},
                      {"std", r.accuracy.std},
                      {"per_seed", r.per_seed}});
      log << r.mode << ": mean " << r.accuracy.mean << " std " << r.accuracy.std << " params " << r.trainable_params
          << '\n';
    }
  }
  write_text(dir / "table.csv", csv.str());
  write_json(dir / "table.json",
             {{"schema", "fca.table/1"}, {"kind", c.compare.kind}, {"seeds", c.seeds}, {"rows", rows}});
  detail::write_timing(dir, detail::seconds_since(t0));
  return ok ? kExitOk : kExitCheckFailed;
}

// --- bench -------------------------------------------------------------------------

/// Timings vary run to run; bench output is the one artifact outside the determinism contract.
inline int cmd_bench(const RunConfig& c, std::ostream& log = std::cout) {
  validate(c);
  const auto dir = output_dir(c);
  write_json(dir / "config.json", to_json(c));
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<Real> d(-1, 1);
  std::ostringstream csv;
  csv << "op,size,flops,seconds_per_call\n";
  auto row = [&](const std::string& op, std::size_t n, std::size_t flops, double s) {
    csv << op << ',' << n << ',' << flops << ',' << s << '\n';
    log << op << " " << n << "x" << n << ": " << flops << " flops, " << s * 1e6 << " us\n";
  };
  volatile Real sink = 0;
  for (auto n : c.bench.sizes) {
    Tensor x({n, n});
    for (auto& v : x.data()) v = d(rng);
    row("dct2_separable", n, 4 * n * n * n, detail::time_per_call(c.bench.reps, [&] { sink = sink + dct2(x)[0]; }));
    row("dct2_naive", n, 2 * n * n * n * n, detail::time_per_call(c.bench.reps, [&] { sink = sink + dct2(x, DctPath::Naive)[0]; }));

    const std::size_t ch = 64;
    Tensor fm({ch, n, n});
    for (auto& v : fm.data()) v = d(rng);
    std::size_t k = 1;
    while (k * 2 <= std::min<std::size_t>(16, n * n)) k *= 2;
    const auto lf = assign_lf(ch, k, {n, n});
    // multiply-adds count as two; the fc head and channel scaling are shared by both blocks
    const std::size_t head = 2 * (2 * ch * (ch / 16)) + ch / 16 + ch, scale = ch * n * n;
    auto gap = make_attention_params(ch, 16, GapCompression{}, rng);
    auto ms = make_attention_params(ch, 16, MultiSpectralCompression{lf}, rng);
    row("attention_gap", n, ch * n * n + head + scale, detail::time_per_call(c.bench.reps, [&] {
          sink = sink + apply_attention(fm, attention_forward(fm, gap).att)[0];
        }));
    row("attention_multispectral", n, 2 * ch * n * n + head + scale, detail::time_per_call(c.bench.reps, [&] {
          sink = sink + apply_attention(fm, attention_forward(fm, ms).att)[0];
        }));
  }
  write_text(dir / "bench.csv", csv.str());
  return kExitOk;
}

inline int run_command(const RunConfig& c, std::ostream& log = std::cout) {
  if (c.command == "roundtrip") return cmd_roundtrip(c, log);
  if (c.command == "eval-components") return cmd_eval_components(c, log);
  if (c.command == "train") return cmd_train(c, log);
  if (c.command == "search") return cmd_search(c, log);
  if (c.command == "compare") return cmd_compare(c, log);
  if (c.command == "bench") return cmd_bench(c, log);
  throw UsageError("unknown command '" + c.command + "'");
}

} // namespace fca

#endif
