// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Usage: fca_acceptance [--out DIR] [criterion ...]
// where each criterion is a number 1-10 (default: all).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fca/commands.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using fca::Component;
using fca::json;
using fca::Tensor;

namespace {

// Tolerances and budgets, pinned here.
constexpr double kTheoremTol = 1e-9;
constexpr double kTheoremSeconds = 5;
constexpr double kOracleTol = 1e-12;
constexpr double kRoundtripTol = 1e-9;
constexpr double kDctSeconds = 10;
constexpr double kGradTol = 1e-5;
constexpr std::size_t kGradInstances = 20;
constexpr double kGradSeconds = 60;
constexpr double kGapEquivTol = 1e-10;
constexpr double kDcScoreGap = 0.02;
constexpr double kComponentsSeconds = 10 * 60;
constexpr double kSweepSeconds = 20 * 60;
constexpr double kNasTol = 1e-10;
constexpr double kOneHotTol = 1e-9;
constexpr double kNasSeconds = 10 * 60;
const std::vector<std::uint64_t> kSeeds{1, 2, 3, 4, 5};

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path g_out = "acceptance_out";
std::ostringstream g_log; // command chatter, kept out of the summary lines

double rel(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

fca::RunConfig base_config(const std::string& command, const std::string& dir) {
  auto c = fca::default_run_config();
  c.command = command;
  c.out = (g_out / dir).string();
  return c;
}

// Every CSV/JSON below `dir`, relative path -> bytes. Timing files are excluded.
std::map<std::string, std::string> artifacts(const fs::path& dir) {
  std::map<std::string, std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto ext = e.path().extension();
    if ((ext != ".json" && ext != ".csv") || e.path().filename() == "timing.json") continue;
    std::ifstream is(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    out[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return out;
}

// Files of `sub` must be byte-identical to the same relative paths in `full`.
bool same_files(const fs::path& full, const fs::path& sub, const std::vector<std::string>& prefixes,
                std::string& why) {
  const auto a = artifacts(full);
  const auto b = artifacts(sub);
  if (a.empty()) {
    why = "reference run " + full.string() + " missing";
    return false;
  }
  std::size_t compared = 0;
  for (const auto& [path, bytes] : b) {
    bool wanted = prefixes.empty();
    for (const auto& p : prefixes) wanted = wanted || path.rfind(p, 0) == 0;
    if (!wanted) continue;
    auto it = a.find(path);
    if (it == a.end() || it->second != bytes) {
      why = path + " differs";
      return false;
    }
    ++compared;
  }
  if (compared == 0) {
    why = "nothing compared under " + sub.string();
    return false;
  }
  why = std::to_string(compared) + " files identical";
  return true;
}

// --- 1 ------------------------------------------------------------------------------

Outcome theorem_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::pair<std::size_t, std::size_t>> shapes{{4, 4}, {7, 7}, {8, 16}};
  std::mt19937_64 rng(1001);
  double worst = 0;
  for (std::size_t t = 0; t < 1000; ++t) {
    const auto [h, w] = shapes[t % shapes.size()];
    const auto x = oracle::random_tensor({h, w}, rng);
    double plain = 0;
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) plain += x(i, j);
    const double dc = fca::dct2(x)(0, 0);
    const double gap_scaled = static_cast<double>(h * w) * fca::reduce_mean_hw(x.reshaped({1, h, w}))[0];
    worst = std::max({worst, rel(dc, plain), rel(dc, gap_scaled)});
  }
  const double secs = fca::detail::seconds_since(t0);
  return {worst < kTheoremTol && secs < kTheoremSeconds,
          "max rel err " + fmt(worst) + " over 1000 tensors, " + fmt(secs) + " s"};
}

// --- 2 ------------------------------------------------------------------------------

Outcome dct_oracles() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2002);
  double sep = 0, naive = 0, roundtrip = 0;
  for (std::size_t h = 1; h <= 8; ++h)
    for (std::size_t w = 1; w <= 8; ++w)
      for (int t = 0; t < 100; ++t) {
        const auto x = oracle::random_tensor({h, w}, rng);
        const auto ref = oracle::dct2(oracle::to_grid(x));
        const auto fs = fca::dct2(x);
        const auto fn = fca::dct2(x, fca::DctPath::Naive);
        for (std::size_t u = 0; u < h; ++u)
          for (std::size_t v = 0; v < w; ++v) {
            sep = std::max(sep, std::abs(fs(u, v) - ref[u][v]));
            naive = std::max(naive, std::abs(fn(u, v) - ref[u][v]));
          }
      }
  for (std::size_t h = 1; h <= 16; ++h)
    for (std::size_t w = 1; w <= 16; ++w)
      for (int t = 0; t < 5; ++t) {
        const auto x = oracle::random_tensor({h, w}, rng);
        roundtrip = std::max(roundtrip, fca::max_abs_diff(fca::idct2(fca::dct2(x), fca::Normalization::Orthonormal), x));
      }
  const double secs = fca::detail::seconds_since(t0);
  return {sep < kOracleTol && naive < kOracleTol && roundtrip < kRoundtripTol && secs < kDctSeconds,
          "separable " + fmt(sep) + ", naive " + fmt(naive) + " vs oracle; roundtrip " + fmt(roundtrip) + "; " +
              fmt(secs) + " s"};
}

// --- 3 ------------------------------------------------------------------------------

double grad_error(const fca::AttentionParams& p0, std::mt19937_64& rng) {
  auto p = p0;
  const std::size_t c = p.channels;
  std::uniform_int_distribution<std::size_t> ext(2, 5);
  std::size_t h = ext(rng), w = ext(rng);
  if (const auto* ms = std::get_if<fca::MultiSpectralCompression>(&p.compression)) {
    h = ms->assignment.height;
    w = ms->assignment.width;
  } else if (const auto* lc = std::get_if<fca::LearnableCompression>(&p.compression)) {
    h = lc->assignment.height;
    w = lc->assignment.width;
  }
  auto x = oracle::random_tensor({c, h, w}, rng);
  const auto probe = oracle::random_tensor({c, h, w}, rng);
  auto loss = [&] {
    const auto fwd = fca::attention_forward(x, p);
    return fca::elementwise_mul_sum(fca::apply_attention(x, fwd.att), probe);
  };
  const auto fwd = fca::attention_forward(x, p);
  const auto g = fca::attention_backward(probe, fwd.cache);
  double worst = oracle::max_relative_error(g.x, oracle::finite_difference(x, loss));
  worst = std::max(worst, oracle::max_relative_error(g.w1, oracle::finite_difference(p.w1, loss)));
  worst = std::max(worst, oracle::max_relative_error(g.b1, oracle::finite_difference(p.b1, loss)));
  worst = std::max(worst, oracle::max_relative_error(g.w2, oracle::finite_difference(p.w2, loss)));
  worst = std::max(worst, oracle::max_relative_error(g.b2, oracle::finite_difference(p.b2, loss)));
  if (auto* lc = std::get_if<fca::LearnableCompression>(&p.compression)) {
    if (!g.compression) return 1;
    worst = std::max(worst, oracle::max_relative_error(*g.compression,
                                                       oracle::finite_difference(lc->tensor.weights, loss)));
  } else if (auto* nas = std::get_if<fca::NasCompression>(&p.compression)) {
    if (!g.compression) return 1;
    worst = std::max(worst, oracle::max_relative_error(*g.compression,
                                                       oracle::finite_difference(nas->state.alpha, loss)));
  }
  return worst;
}

Outcome gradient_checks() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  auto randomize = [&](fca::AttentionParams& p) {
    for (auto* t : {&p.b1, &p.b2}) for (auto& v : t->data()) v = u(rng);
    p.input_scale = std::uniform_real_distribution<double>(0.1, 1.5)(rng);
  };
  std::map<std::string, double> worst;
  for (std::size_t i = 0; i < kGradInstances; ++i) {
    const std::size_t c = i % 2 ? 8 : 4;
    const std::size_t h = 3 + i % 3, w = 2 + (i * 7) % 4;
    std::uniform_int_distribution<std::size_t> uu(0, h - 1), vv(0, w - 1);
    const auto assign = fca::make_assignment(c, h, w, {{uu(rng), vv(rng)}, {uu(rng), vv(rng)}});

    auto gap = fca::make_attention_params(c, 2, fca::GapCompression{}, rng);
    auto ms = fca::make_attention_params(c, 2, fca::MultiSpectralCompression{assign}, rng);
    auto lt = fca::make_attention_params(
        c, 2, fca::make_learnable(assign, i % 2 ? fca::TensorInit::Random : fca::TensorInit::Dct, true, rng), rng);
    auto st = fca::make_nas_state(2, {2, 2}, std::uniform_real_distribution<double>(0.5, 2.0)(rng));
    for (auto& v : st.alpha.data()) v = u(rng) * 4;
    auto nas = fca::make_attention_params(c, 2, fca::NasCompression{st}, rng);
    for (auto* p : {&gap, &ms, &lt, &nas}) randomize(*p);
    worst["gap"] = std::max(worst["gap"], grad_error(gap, rng));
    worst["ms"] = std::max(worst["ms"], grad_error(ms, rng));
    worst["learnable"] = std::max(worst["learnable"], grad_error(lt, rng));
    worst["nas"] = std::max(worst["nas"], grad_error(nas, rng));
  }
  const double secs = fca::detail::seconds_since(t0);
  bool ok = secs < kGradSeconds;
  std::string detail;
  for (const auto& [k, v] : worst) {
    ok = ok && v < kGradTol;
    detail += k + " " + fmt(v) + ", ";
  }
  return {ok, detail + std::to_string(kGradInstances) + " instances each, " + fmt(secs) + " s"};
}

// --- 4 ------------------------------------------------------------------------------

Outcome parameter_parity() {
  std::size_t cases = 0;
  for (std::size_t c : {4, 16, 32, 64, 128, 256, 512, 1024, 2048})
    for (std::size_t r : {1, 2, 4, 8, 16, 32}) {
      if (c % r != 0) continue;
      for (std::size_t n : {1, 2, 4}) {
        const auto assign = fca::assign_lf(c, n, {7, 7});
        const auto a = fca::param_count(c, r, fca::MultiSpectralCompression{assign});
        const auto b = fca::param_count(c, r, fca::GapCompression{});
        const std::size_t se = 2 * c * (c / r) + c / r + c; // two fc layers with biases
        if (a != b || b != se) return {false, "mismatch at C=" + std::to_string(c) + " r=" + std::to_string(r)};
        ++cases;
      }
    }
  return {true, std::to_string(cases) + " (C, r, n) cases equal to the SE head count"};
}

// --- 5 ------------------------------------------------------------------------------

Outcome gap_equivalence() {
  std::mt19937_64 rng(5005);
  double worst = 0;
  for (std::size_t h : {1, 3, 4, 7})
    for (std::size_t n : {1, 2, 4}) {
      const std::size_t c = 8, w = h + 1;
      auto gap = fca::make_attention_params(c, 2, fca::GapCompression{}, rng);
      auto ms = gap;
      ms.compression = fca::MultiSpectralCompression{fca::make_assignment(c, h, w, std::vector<Component>(n))};
      ms.input_scale = 1.0 / static_cast<double>(h * w);
      const auto x = oracle::random_tensor({c, h, w}, rng, -2, 2);
      worst = std::max(worst, fca::max_abs_diff(fca::attention_forward(x, ms).att, fca::attention_forward(x, gap).att));
    }
  // Whole models on shared weights.
  fca::ModelConfig gcfg;
  gcfg.attention = fca::AttentionKind::Gap;
  gcfg.attention_w2_scale = 1;
  auto mcfg = gcfg;
  mcfg.attention = fca::AttentionKind::MultiSpectral;
  mcfg.components = std::vector<Component>(4);
  const auto g = fca::init_model(gcfg, 8);
  auto m = fca::init_model(mcfg, 8);
  m.conv = g.conv;
  m.classifier = g.classifier;
  for (std::size_t s = 0; s < m.attention.size(); ++s) {
    auto comp = m.attention[s].compression;
    const auto scale = m.attention[s].input_scale;
    m.attention[s] = g.attention[s];
    m.attention[s].compression = comp;
    m.attention[s].input_scale = scale;
  }
  fca::SyntheticSpec spec;
  spec.samples_per_class = 5;
  const auto ds = fca::gen_synthetic(spec);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto a = fca::forward(g, ds.inputs[i], ds.labels[i]);
    const auto b = fca::forward(m, ds.inputs[i], ds.labels[i]);
    worst = std::max({worst, fca::max_abs_diff(a.probs, b.probs), std::abs(a.loss - b.loss)});
  }
  return {worst < kGapEquivTol, "max |difference| " + fmt(worst) + " over blocks and 20 model forwards"};
}

// --- 6 ------------------------------------------------------------------------------

Outcome component_scores() {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = base_config("eval-components", "eval_components");
  fs::remove_all(cfg.out);
  const int code = fca::cmd_eval_components(cfg, g_log);
  const double secs = fca::detail::seconds_since(t0);
  if (code != fca::kExitOk) return {false, "eval-components exited " + std::to_string(code)};
  const auto j = fca::read_json(fs::path(cfg.out) / "components.json");
  const auto& scores = j.at("scores");
  bool finite = scores.size() == 16;
  double dc = -1;
  for (const auto& s : scores) {
    finite = finite && std::isfinite(s.at("score").get<double>());
    if (s.at("u") == 0 && s.at("v") == 0) dc = s.at("score").get<double>();
  }
  const double gap = j.at("gap_score").get<double>();
  const bool ok = finite && std::abs(dc - gap) <= kDcScoreGap && secs < kComponentsSeconds;
  return {ok, std::to_string(scores.size()) + " finite scores; (0,0) " + fmt(dc) + " vs gap " + fmt(gap) +
                  "; base " + fmt(j.at("base_accuracy").get<double>()) + "; " + fmt(secs) + " s"};
}

// --- 7 ------------------------------------------------------------------------------

double row_mean(const json& table, const std::string& method) {
  for (const auto& r : table.at("rows"))
    if (r.at("method") == method) return r.at("mean").get<double>();
  throw std::runtime_error("no row " + method);
}

Outcome sweep_vs_gap() {
  const auto t0 = std::chrono::steady_clock::now();
  auto spec = fca::default_run_config().data;
  spec.noise_sigma = 0;
  const double oracle_acc = fca::band_energy_accuracy(fca::gen_synthetic(spec), spec);

  auto lf = base_config("compare", "sweep_lf");
  lf.seeds = kSeeds;
  lf.compare.criterion = "lf";
  lf.compare.ks = {2};
  auto ts = base_config("compare", "sweep_ts");
  ts.seeds = kSeeds;
  ts.compare.criterion = "ts";
  ts.compare.ks = {16};
  ts.compare.baseline = false;
  fs::remove_all(lf.out);
  fs::remove_all(ts.out);
  if (fca::cmd_compare(lf, g_log) != fca::kExitOk) return {false, "lf sweep failed"};
  if (fca::cmd_compare(ts, g_log) != fca::kExitOk) return {false, "ts sweep failed"};
  const double secs = fca::detail::seconds_since(t0);
  const auto lt = fca::read_json(fs::path(lf.out) / "table.json");
  const auto tt = fca::read_json(fs::path(ts.out) / "table.json");
  const double gap = row_mean(lt, "gap"), lf2 = row_mean(lt, "lf"), ts16 = row_mean(tt, "ts");
  const bool ok = oracle_acc == 1.0 && lf2 > gap && ts16 > gap && secs < kSweepSeconds;
  return {ok, "oracle@noise0 " + fmt(oracle_acc) + "; mean acc gap " + fmt(gap) + ", lf k=2 " + fmt(lf2) +
                  ", ts k=16 " + fmt(ts16) + " over 5 seeds; " + fmt(secs) + " s"};
}

// --- 8 ------------------------------------------------------------------------------

Outcome learnable_table() {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = base_config("compare", "learnable");
  cfg.seeds = kSeeds;
  cfg.compare.kind = "learnable";
  cfg.compare.baseline = false;
  cfg.model.components = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  fs::remove_all(cfg.out);
  if (fca::cmd_compare(cfg, g_log) != fca::kExitOk) return {false, "compare exited nonzero"};
  auto again = cfg;
  again.seeds = {kSeeds.front()};
  again.out = (g_out / "learnable_rerun").string();
  fs::remove_all(again.out);
  if (fca::cmd_compare(again, g_log) != fca::kExitOk) return {false, "rerun exited nonzero"};
  std::string why;
  const bool same = same_files(cfg.out, again.out, {"runs/"}, why);

  const auto table = fca::read_json(fs::path(cfg.out) / "table.json");
  const auto& rows = table.at("rows");
  bool complete = rows.size() == 4;
  std::string detail;
  for (const auto& r : rows) {
    complete = complete && r.at("per_seed").size() == kSeeds.size() && r.contains("std");
    detail += r.at("method").get<std::string>() + " " + fmt(r.at("mean").get<double>()) + "+-" +
              fmt(r.at("std").get<double>()) + ", ";
  }
  for (const auto& mode : cfg.compare.modes)
    for (auto s : kSeeds)
      complete = complete &&
                 fs::exists(fs::path(cfg.out) / "runs" / mode / ("seed_" + std::to_string(s)) / "result.json");
  const double dct = (row_mean(table, "LD") + row_mean(table, "FD")) / 2;
  const double rnd = (row_mean(table, "LR") + row_mean(table, "FR")) / 2;
  detail += std::string("DCT-initialized ") + (dct >= rnd ? ">=" : "<") + " random (reported only); rerun " + why +
            "; " + fmt(fca::detail::seconds_since(t0)) + " s";
  return {complete && same, detail};
}

// --- 9 ------------------------------------------------------------------------------

Outcome nas_contract() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(9009);
  double norm = 0, shift = 0, onehot = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t gh = 1 + t % 4, gw = 1 + (t / 4) % 4, h = gh + t % 3, w = gw + 1;
    const double temp = std::uniform_real_distribution<double>(0.25, 3)(rng);
    auto alpha = oracle::random_tensor({gh, gw}, rng, -3, 3);
    const auto x = oracle::random_tensor({3, h, w}, rng);
    const auto wts = fca::nas_weights(alpha, temp);
    norm = std::max(norm, std::abs(fca::sum(wts) - 1));
    // mixture against pooled oracle bases
    const auto mix = fca::nas_mix(x, alpha, temp);
    std::vector<double> ref(3, 0.0);
    for (std::size_t u = 0; u < gh; ++u)
      for (std::size_t v = 0; v < gw; ++v) {
        const auto p = oracle::pool(x, u, v);
        for (std::size_t c = 0; c < 3; ++c) ref[c] += wts(u, v) * p[c];
      }
    for (std::size_t c = 0; c < 3; ++c) norm = std::max(norm, std::abs(mix[c] - ref[c]));
    auto shifted = alpha;
    for (auto& v : shifted.data()) v += 17.25;
    shift = std::max(shift, fca::max_abs_diff(fca::nas_mix(x, shifted, temp), mix));

    // one-hot alpha against the fixed multi-spectral block
    const std::size_t c = 8, parts = 2;
    std::uniform_int_distribution<std::size_t> pu(0, gh - 1), pv(0, gw - 1);
    std::vector<Component> chosen{{pu(rng), pv(rng)}, {pu(rng), pv(rng)}};
    auto st = fca::make_nas_state(parts, {gh, gw}, temp);
    for (std::size_t p = 0; p < parts; ++p)
      for (std::size_t u = 0; u < gh; ++u)
        for (std::size_t v = 0; v < gw; ++v)
          st.alpha(p, u, v) = (Component{u, v} == chosen[p]) ? 0.0 : -1e4;
    const auto fm = oracle::random_tensor({c, h, w}, rng);
    auto nas = fca::make_attention_params(c, 2, fca::NasCompression{st}, rng);
    auto ms = nas;
    ms.compression = fca::MultiSpectralCompression{fca::make_assignment(c, h, w, chosen)};
    onehot = std::max(onehot, fca::max_abs_diff(fca::compress(fm, nas), fca::compress(fm, ms)));
  }

  auto cfg = base_config("search", "search");
  fs::remove_all(cfg.out);
  const int code = fca::cmd_search(cfg, g_log);
  bool valid = code == fca::kExitOk;
  std::string derived;
  if (valid) {
    const auto a = fca::read_json(fs::path(cfg.out) / "assignment.json");
    const auto comps = fca::components_from_json(a.at("components"));
    valid = a.at("n").get<std::size_t>() == cfg.model.nas_parts && comps.size() == cfg.model.nas_parts;
    const auto grid = fca::attention_grid(cfg.model);
    for (auto cc : comps) valid = valid && grid.contains(cc);
    valid = valid && fca::check_result_schema(fca::read_json(fs::path(cfg.out) / "result.json")).empty();
    derived = fca::detail::join(comps);
  }
  const double secs = fca::detail::seconds_since(t0);
  const bool ok = valid && norm < kNasTol && shift < kNasTol && onehot < kOneHotTol && secs < kNasSeconds;
  return {ok, "derived [" + derived + "]; normalization " + fmt(norm) + ", shift " + fmt(shift) + ", one-hot " +
                  fmt(onehot) + "; " + fmt(secs) + " s"};
}

// --- 10 -----------------------------------------------------------------------------

Outcome determinism() {
  std::vector<std::string> notes;
  bool ok = true;
  auto check = [&](const std::string& name, const fs::path& first, const fs::path& second,
                   const std::vector<std::string>& prefixes) {
    std::string why;
    const bool same = same_files(first, second, prefixes, why);
    ok = ok && same;
    notes.push_back(name + ": " + why);
  };
  auto twice = [&](fca::RunConfig cfg, const std::string& name,
                   const std::function<int(const fca::RunConfig&, std::ostream&)>& cmd) {
    const fs::path a = g_out / ("det_" + name + "_a"), b = g_out / ("det_" + name + "_b");
    fs::remove_all(a);
    fs::remove_all(b);
    cfg.out = a.string();
    const int ca = cmd(cfg, g_log);
    cfg.out = b.string();
    const int cb = cmd(cfg, g_log);
    if (ca != cb) {
      ok = false;
      notes.push_back(name + ": exit codes differ");
      return;
    }
    check(name, a, b, {});
  };
  twice(base_config("roundtrip", ""), "roundtrip", fca::cmd_roundtrip);
  auto tr = base_config("train", "");
  tr.model.attention = fca::AttentionKind::MultiSpectral;
  tr.model.components = {{0, 0}, {0, 1}};
  twice(tr, "train", fca::cmd_train);

  // Reruns of the commands from criteria 6-9 must reproduce their files.
  auto ev = base_config("eval-components", "det_eval_components");
  fs::remove_all(ev.out);
  fca::cmd_eval_components(ev, g_log);
  check("eval-components", g_out / "eval_components", ev.out, {});
  auto se = base_config("search", "det_search");
  fs::remove_all(se.out);
  fca::cmd_search(se, g_log);
  check("search", g_out / "search", se.out, {});
  // Per-seed runs are independent, so rerunning one seed must reproduce that seed's files.
  auto lf = base_config("compare", "det_sweep_lf");
  lf.seeds = {kSeeds.front()};
  lf.compare.ks = {2};
  fs::remove_all(lf.out);
  fca::cmd_compare(lf, g_log);
  check("compare lf", g_out / "sweep_lf", lf.out, {"runs/"});
  auto ts = base_config("compare", "det_sweep_ts");
  ts.seeds = {kSeeds.front()};
  ts.compare.criterion = "ts";
  ts.compare.ks = {16};
  ts.compare.baseline = false;
  fs::remove_all(ts.out);
  fca::cmd_compare(ts, g_log);
  check("compare ts", g_out / "sweep_ts", ts.out, {"runs/", "scores.csv"});

  std::string detail;
  for (const auto& n : notes) detail += n + "; ";
  return {ok, detail};
}

} // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out" && i + 1 < argc) {
      g_out = argv[++i];
    } else {
      try {
        selected.insert(std::stoi(a));
      } catch (const std::exception&) {
        std::cerr << "usage: fca_acceptance [--out DIR] [criterion ...]\n";
        return 2;
      }
    }
  }
  fs::create_directories(g_out);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"DC coefficient equals sum and scaled GAP", theorem_suite},
      {"DCT matches oracle; orthonormal roundtrip", dct_oracles},
      {"attention gradients match finite differences", gradient_checks},
      {"multi-spectral head has SE parameter count", parameter_parity},
      {"all-(0,0) multi-spectral equals GAP", gap_equivalence},
      {"per-component scores on a 4x4 grid", component_scores},
      {"LF k=2 and TS k=16 beat GAP over 5 seeds", sweep_vs_gap},
      {"FR/LR/LD/FD table", learnable_table},
      {"NAS search and mixture contract", nas_contract},
      {"reruns are bit-identical", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("AC%-2d %s  %s: %s\n", id, o.pass ? "PASS" : "FAIL", criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::ofstream(g_out / "commands.log") << g_log.str();
  return failed == 0 ? 0 : 1;
}
