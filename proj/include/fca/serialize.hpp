#ifndef FCA_SERIALIZE_HPP
#define FCA_SERIALIZE_HPP

// JSON and CSV forms of the library's value types.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fca/attention.hpp"
#include "fca/frequency.hpp"
#include "fca/model.hpp"
#include "fca/selection.hpp"
#include "fca/synthetic.hpp"
#include "fca/tensor_io.hpp"
#include "fca/train.hpp"

namespace fca {

using json = nlohmann::json;

inline constexpr const char* kResultSchema = "fca.result/1";
inline constexpr const char* kAttentionSchema = "fca.attention/1";

// --- components and assignments ---------------------------------------------

inline json components_to_json(const std::vector<Component>& cs) {
  json arr = json::array();
  for (auto c : cs) arr.push_back({c.u, c.v});
  return arr;
}

inline std::vector<Component> components_from_json(const json& j) {
  std::vector<Component> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw FormatError("component must be a [u, v] pair");
    out.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
  }
  return out;
}

/// {n, H, W, components: [[u, v], ...]}
inline json assignment_to_json(const FrequencyAssignment& a) {
  return {{"n", a.parts()}, {"H", a.height}, {"W", a.width}, {"components", components_to_json(a.components)}};
}

inline FrequencyAssignment assignment_from_json(const json& j, std::size_t channels) {
  auto comps = components_from_json(j.at("components"));
  if (j.at("n").get<std::size_t>() != comps.size()) throw FormatError("assignment: n does not match components");
  return make_assignment(channels, j.at("H").get<std::size_t>(), j.at("W").get<std::size_t>(), std::move(comps));
}

// --- component scores (CSV: u,v,score) --------------------------------------

inline void write_scores_csv(std::ostream& os, const std::vector<ComponentScore>& scores) {
  os << "u,v,score\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& s : scores) os << s.component.u << ',' << s.component.v << ',' << s.score << '\n';
}

inline std::vector<ComponentScore> read_scores_csv(std::istream& is) {
  std::string line;
  std::vector<ComponentScore> out;
  if (!std::getline(is, line) || line.rfind("u,v,score", 0) != 0) throw FormatError("scores csv: bad header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string u, v, s;
    if (!std::getline(ls, u, ',') || !std::getline(ls, v, ',') || !std::getline(ls, s, ','))
      throw FormatError("scores csv: malformed row '" + line + "'");
    out.push_back({{std::stoul(u), std::stoul(v)}, static_cast<Real>(std::stod(s))});
  }
  return out;
}

// --- tensors inside JSON -----------------------------------------------------

inline json tensor_to_json(const Tensor& t) { return {{"shape", t.shape()}, {"data", t.values()}}; }

/// Inline tensors are {shape, data}; referenced ones are {ref: "<file>"} resolved against `base_dir`.
inline Tensor tensor_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  if (j.contains("ref")) return load_tensor((base_dir / j.at("ref").get<std::string>()).string());
  return Tensor(j.at("shape").get<Shape>(), j.at("data").get<std::vector<Real>>());
}

/// Writes AttentionParams as JSON; with `ref_dir` set, weights go to sibling .fcat files instead.
inline json attention_to_json(const AttentionParams& p, const std::filesystem::path& ref_dir = {},
                              const std::string& prefix = "attention") {
  auto put = [&](const Tensor& t, const std::string& name) -> json {
    if (ref_dir.empty()) return tensor_to_json(t);
    const std::string file = prefix + "_" + name + ".fcat";
    save_tensor((ref_dir / file).string(), t);
    return {{"ref", file}};
  };
  json strategy = std::visit(
      [&](const auto& s) -> json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, GapCompression>) {
          return {{"type", "gap"}};
        } else if constexpr (std::is_same_v<S, MultiSpectralCompression>) {
          return {{"type", "multispectral"}, {"assignment", assignment_to_json(s.assignment)}};
        } else if constexpr (std::is_same_v<S, LearnableCompression>) {
          return {{"type", "learnable"},
                  {"assignment", assignment_to_json(s.assignment)},
                  {"init", s.init == TensorInit::Dct ? "dct" : "random"},
                  {"trainable", s.tensor.trainable},
                  {"tensor", put(s.tensor.weights, "tensor")}};
        } else {
          return {{"type", "nas"}, {"temperature", s.state.temperature}, {"alpha", put(s.state.alpha, "alpha")}};
        }
      },
      p.compression);
  return {{"schema", kAttentionSchema},
          {"channels", p.channels},
          {"reduction", p.reduction},
          {"input_scale", p.input_scale},
          {"strategy", strategy},
          {"w1", put(p.w1, "w1")},
          {"b1", put(p.b1, "b1")},
          {"w2", put(p.w2, "w2")},
          {"b2", put(p.b2, "b2")}};
}

inline AttentionParams attention_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  if (j.value("schema", "") != kAttentionSchema) throw FormatError("attention json: unknown schema");
  AttentionParams p;
  p.channels = j.at("channels").get<std::size_t>();
  p.reduction = j.at("reduction").get<std::size_t>();
  validate_head(p.channels, p.reduction);
  p.input_scale = j.at("input_scale").get<Real>();
  p.w1 = tensor_from_json(j.at("w1"), base_dir);
  p.b1 = tensor_from_json(j.at("b1"), base_dir);
  p.w2 = tensor_from_json(j.at("w2"), base_dir);
  p.b2 = tensor_from_json(j.at("b2"), base_dir);
  const std::size_t hid = p.hidden();
  if (p.w1.shape() != Shape{hid, p.channels} || p.b1.shape() != Shape{hid} ||
      p.w2.shape() != Shape{p.channels, hid} || p.b2.shape() != Shape{p.channels})
    throw FormatError("attention json: fc weight shapes do not match channels/reduction");
  const json& s = j.at("strategy");
  const auto type = s.at("type").get<std::string>();
  if (type == "gap") {
    p.compression = GapCompression{};
  } else if (type == "multispectral") {
    p.compression = MultiSpectralCompression{assignment_from_json(s.at("assignment"), p.channels)};
  } else if (type == "learnable") {
    LearnableCompression lc;
    lc.assignment = assignment_from_json(s.at("assignment"), p.channels);
    lc.init = s.at("init").get<std::string>() == "dct" ? TensorInit::Dct : TensorInit::Random;
    lc.tensor = {tensor_from_json(s.at("tensor"), base_dir), s.at("trainable").get<bool>()};
    p.compression = std::move(lc);
  } else if (type == "nas") {
    p.compression = NasCompression{{tensor_from_json(s.at("alpha"), base_dir), s.at("temperature").get<Real>()}};
  } else {
    throw FormatError("attention json: unknown strategy '" + type + "'");
  }
  return p;
}

// --- configs -----------------------------------------------------------------

inline json to_json(const SyntheticSpec& s) {
  json bands = json::array();
  for (const auto& b : s.class_bands) bands.push_back(components_to_json(b));
  return {{"height", s.height},
          {"width", s.width},
          {"num_classes", s.num_classes},
          {"samples_per_class", s.samples_per_class},
          {"noise_sigma", s.noise_sigma},
          {"amplitude_min", s.amplitude_min},
          {"amplitude_max", s.amplitude_max},
          {"class_bands", bands},
          {"seed", s.seed}};
}

/// Missing keys keep the values already in `s`.
inline void update_from_json(SyntheticSpec& s, const json& j) {
  s.height = j.value("height", s.height);
  s.width = j.value("width", s.width);
  s.num_classes = j.value("num_classes", s.num_classes);
  s.samples_per_class = j.value("samples_per_class", s.samples_per_class);
  s.noise_sigma = j.value("noise_sigma", s.noise_sigma);
  s.amplitude_min = j.value("amplitude_min", s.amplitude_min);
  s.amplitude_max = j.value("amplitude_max", s.amplitude_max);
  s.seed = j.value("seed", s.seed);
  if (j.contains("class_bands")) {
    s.class_bands.clear();
    for (const auto& b : j.at("class_bands")) s.class_bands.push_back(components_from_json(b));
  }
}

inline json to_json(const ModelConfig& c) {
  return {{"height", c.height},
          {"width", c.width},
          {"in_channels", c.in_channels},
          {"num_classes", c.num_classes},
          {"channels", c.channels},
          {"strides", c.strides},
          {"reduction", c.reduction},
          {"attention", to_string(c.attention)},
          {"components", components_to_json(c.components)},
          {"tensor_init", c.tensor_init == TensorInit::Dct ? "dct" : "random"},
          {"tensor_trainable", c.tensor_trainable},
          {"nas_parts", c.nas_parts},
          {"nas_temperature", c.nas_temperature},
          {"nas_lr_multiplier", c.nas_lr_multiplier},
          {"attention_bias", c.attention_bias},
          {"attention_w2_scale", c.attention_w2_scale},
          {"normalize_dct_pooling", c.normalize_dct_pooling}};
}

inline void update_from_json(ModelConfig& c, const json& j) {
  c.height = j.value("height", c.height);
  c.width = j.value("width", c.width);
  c.in_channels = j.value("in_channels", c.in_channels);
  c.num_classes = j.value("num_classes", c.num_classes);
  c.channels = j.value("channels", c.channels);
  c.strides = j.value("strides", c.strides);
  c.reduction = j.value("reduction", c.reduction);
  if (j.contains("attention")) c.attention = attention_kind_from_string(j.at("attention").get<std::string>());
  if (j.contains("components")) c.components = components_from_json(j.at("components"));
  if (j.contains("tensor_init")) {
    const auto s = j.at("tensor_init").get<std::string>();
    if (s != "dct" && s != "random") throw FormatError("tensor_init must be dct or random");
    c.tensor_init = s == "dct" ? TensorInit::Dct : TensorInit::Random;
  }
  c.tensor_trainable = j.value("tensor_trainable", c.tensor_trainable);
  c.nas_parts = j.value("nas_parts", c.nas_parts);
  c.nas_temperature = j.value("nas_temperature", c.nas_temperature);
  c.nas_lr_multiplier = j.value("nas_lr_multiplier", c.nas_lr_multiplier);
  c.attention_bias = j.value("attention_bias", c.attention_bias);
  c.attention_w2_scale = j.value("attention_w2_scale", c.attention_w2_scale);
  c.normalize_dct_pooling = j.value("normalize_dct_pooling", c.normalize_dct_pooling);
}

inline json to_json(const TrainHyper& h) {
  return {{"lr", h.lr},
          {"lr_schedule", to_string(h.schedule)},
          {"momentum", h.momentum},
          {"weight_decay", h.weight_decay},
          {"label_smoothing", h.label_smoothing},
          {"finetune_lr", h.finetune_lr},
          {"epochs", h.epochs},
          {"batch", h.batch},
          {"seed", h.seed}};
}

inline void update_from_json(TrainHyper& h, const json& j) {
  h.lr = j.value("lr", h.lr);
  if (j.contains("lr_schedule")) h.schedule = parse_lr_schedule(j.at("lr_schedule").get<std::string>());
  h.momentum = j.value("momentum", h.momentum);
  h.weight_decay = j.value("weight_decay", h.weight_decay);
  h.label_smoothing = j.value("label_smoothing", h.label_smoothing);
  h.finetune_lr = j.value("finetune_lr", h.finetune_lr);
  h.epochs = j.value("epochs", h.epochs);
  h.batch = j.value("batch", h.batch);
  h.seed = j.value("seed", h.seed);
}

// --- run records ---------------------------------------------------------------

/// Deterministic summary of a run. Wall-clock time is deliberately absent.
inline json result_json(const RunRecord& r) {
  json j = {{"schema", kResultSchema},
            {"label", r.label},
            {"status", r.status},
            {"diagnostic", r.diagnostic},
            {"seed", r.seed},
            {"attention", to_string(r.config.attention)},
            {"epochs", r.hyper.epochs},
            {"history_length", r.train_loss.size()},
            {"trainable_params", r.trainable_params},
            {"initial_val_accuracy", r.initial_val_accuracy},
            {"final_val_accuracy", r.final_val_accuracy},
            {"final_val_loss", r.final_val_loss},
            {"final_train_loss", r.train_loss.empty() ? json(nullptr) : json(r.train_loss.back())}};
  j["derived_assignment"] = r.derived ? assignment_to_json(*r.derived) : json(nullptr);
  return j;
}

/// Empty when `j` conforms to the current result schema; otherwise one message per problem.
inline std::vector<std::string> check_result_schema(const json& j) {
  std::vector<std::string> errs;
  if (!j.is_object()) return {"result is not an object"};
  if (j.value("schema", "") != kResultSchema) errs.push_back("schema tag is not " + std::string(kResultSchema));
  const std::pair<const char*, json::value_t> fields[] = {
      {"label", json::value_t::string},
      {"status", json::value_t::string},
      {"diagnostic", json::value_t::string},
      {"seed", json::value_t::number_unsigned},
      {"attention", json::value_t::string},
      {"epochs", json::value_t::number_unsigned},
      {"history_length", json::value_t::number_unsigned},
      {"trainable_params", json::value_t::number_unsigned},
      {"initial_val_accuracy", json::value_t::number_float},
      {"final_val_accuracy", json::value_t::number_float},
      {"final_val_loss", json::value_t::number_float},
  };
  for (const auto& [key, type] : fields) {
    if (!j.contains(key)) {
      errs.push_back(std::string("missing field '") + key + "'");
      continue;
    }
    const auto t = j.at(key).type();
    const bool numeric_ok = type == json::value_t::number_float && j.at(key).is_number();
    const bool unsigned_ok = type == json::value_t::number_unsigned && j.at(key).is_number_integer() &&
                             j.at(key).get<long long>() >= 0;
    if (t != type && !numeric_ok && !unsigned_ok) errs.push_back(std::string("field '") + key + "' has wrong type");
  }
  for (const char* acc : {"initial_val_accuracy", "final_val_accuracy"}) {
    if (j.contains(acc) && j.at(acc).is_number()) {
      const double a = j.at(acc).get<double>();
      if (a < 0 || a > 1) errs.push_back(std::string(acc) + " outside [0, 1]");
    }
  }
  if (j.contains("status") && j.at("status").is_string()) {
    const auto st = j.at("status").get<std::string>();
    if (st != "ok" && st != "diverged") errs.push_back("status must be ok or diverged");
    if (st == "ok" && j.contains("history_length") && j.contains("epochs") &&
        j.at("history_length") != j.at("epochs"))
      errs.push_back("history_length differs from epochs");
  }
  if (!j.contains("derived_assignment")) errs.push_back("missing field 'derived_assignment'");
  return errs;
}

inline void write_history_csv(std::ostream& os, const RunRecord& r) {
  os << "epoch,train_loss,val_accuracy\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t e = 0; e < r.train_loss.size(); ++e)
    os << e + 1 << ',' << r.train_loss[e] << ',' << r.val_accuracy[e] << '\n';
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot write " + path.string());
  os << text;
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline json read_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

/// result.json, history.csv and (for NAS runs) assignment.json under `dir`.
inline void write_run(const std::filesystem::path& dir, const RunRecord& r) {
  std::filesystem::create_directories(dir);
  write_json(dir / "result.json", result_json(r));
  std::ostringstream hist;
  write_history_csv(hist, r);
  write_text(dir / "history.csv", hist.str());
  if (r.derived) write_json(dir / "assignment.json", assignment_to_json(*r.derived));
}

} // namespace fca

#endif
