// fca: command-line front end for the multi-spectral attention library.
//
//   fca <command> [--config FILE] [flags...]
//
// Flags override values from the JSON config file; the resolved config is
// written to <out>/config.json. Without --out, results go to
// $FCA_OUT_ROOT/<command> (or ./fca_out/<command>).

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fca/commands.hpp"

namespace {

using fca::RunConfig;

// "u,v;u,v;..." -> components
std::vector<fca::Component> parse_components(const std::string& text) {
  std::vector<fca::Component> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto comma = item.find(',');
    if (comma == std::string::npos) throw fca::UsageError("component '" + item + "' is not u,v");
    try {
      out.push_back({std::stoul(item.substr(0, comma)), std::stoul(item.substr(comma + 1))});
    } catch (const std::logic_error&) {
      throw fca::UsageError("component '" + item + "' is not u,v");
    }
  }
  return out;
}

// Every override is optional so that only flags actually given replace config-file values.
struct Overrides {
  std::string config_file;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed, data_seed, split_seed;
  std::optional<std::size_t> workers, epochs, batch, samples_per_class, reduction, nas_parts;
  std::optional<double> noise, lr, momentum, weight_decay, label_smoothing, finetune_lr, attention_bias, temperature;
  std::optional<std::string> attention, components, tensor_init, lr_schedule;
  std::optional<bool> tensor_trainable;
  std::optional<std::size_t> height, width, trials, budget, score_budget, reps;
  std::optional<double> tolerance;
  std::optional<std::vector<std::size_t>> grid, ks, sizes;
  std::optional<std::vector<std::uint64_t>> seeds;
  std::optional<std::vector<std::string>> modes;
  std::optional<std::string> kind, criterion, scores_file;
  bool no_baseline = false;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("-c,--config", o.config_file, "JSON config file")->check(CLI::ExistingFile);
  sub->add_option("-o,--out", o.out, "Output directory");
  sub->add_option("--seed", o.seed, "Run seed");
  sub->add_option("--workers", o.workers, "Worker threads for independent runs");
}

void add_training(CLI::App* sub, Overrides& o) {
  sub->add_option("--data-seed", o.data_seed, "Synthetic data seed");
  sub->add_option("--split-seed", o.split_seed, "Train/validation split seed");
  sub->add_option("--noise", o.noise, "Synthetic noise sigma");
  sub->add_option("--samples-per-class", o.samples_per_class, "Synthetic samples per class");
  sub->add_option("--epochs", o.epochs, "Training epochs");
  sub->add_option("--batch", o.batch, "Minibatch size");
  sub->add_option("--lr", o.lr, "Learning rate");
  sub->add_option("--lr-schedule", o.lr_schedule, "constant|cosine");
  sub->add_option("--momentum", o.momentum, "SGD momentum");
  sub->add_option("--weight-decay", o.weight_decay, "Weight decay");
  sub->add_option("--label-smoothing", o.label_smoothing, "Label smoothing of the training loss");
  sub->add_option("--finetune-lr", o.finetune_lr, "Learning rate when fine-tuning with added attention");
  sub->add_option("--attention", o.attention, "none|gap|ms|learnable|nas");
  sub->add_option("--components", o.components, "Frequency components as u,v;u,v;...");
  sub->add_option("--reduction", o.reduction, "fc reduction ratio");
  sub->add_option("--attention-bias", o.attention_bias, "Initial fc output bias of attention heads");
  sub->add_option("--tensor-init", o.tensor_init, "dct|random (learnable attention)");
  sub->add_option("--tensor-trainable", o.tensor_trainable, "Train the compression tensor (learnable attention)");
  sub->add_option("--nas-parts", o.nas_parts, "Channel parts searched by nas");
  sub->add_option("--temperature", o.temperature, "nas softmax temperature");
}

void apply(const Overrides& o, RunConfig& c) {
  if (o.out) c.out = *o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (o.data_seed) c.data.seed = *o.data_seed;
  if (o.split_seed) c.split_seed = *o.split_seed;
  if (o.noise) c.data.noise_sigma = *o.noise;
  if (o.samples_per_class) c.data.samples_per_class = *o.samples_per_class;
  if (o.epochs) c.train.epochs = *o.epochs;
  if (o.batch) c.train.batch = *o.batch;
  if (o.lr) c.train.lr = *o.lr;
  if (o.lr_schedule) {
    try {
      c.train.schedule = fca::parse_lr_schedule(*o.lr_schedule);
    } catch (const std::invalid_argument& e) {
      throw fca::UsageError(e.what());
    }
  }
  if (o.momentum) c.train.momentum = *o.momentum;
  if (o.weight_decay) c.train.weight_decay = *o.weight_decay;
  if (o.label_smoothing) c.train.label_smoothing = *o.label_smoothing;
  if (o.finetune_lr) c.train.finetune_lr = *o.finetune_lr;
  if (o.attention) {
    try {
      c.model.attention = fca::attention_kind_from_string(*o.attention);
    } catch (const std::invalid_argument& e) {
      throw fca::UsageError(e.what());
    }
  }
  if (o.components) c.model.components = parse_components(*o.components);
  if (o.reduction) c.model.reduction = *o.reduction;
  if (o.attention_bias) c.model.attention_bias = *o.attention_bias;
  if (o.tensor_init) {
    if (*o.tensor_init != "dct" && *o.tensor_init != "random") throw fca::UsageError("--tensor-init: dct or random");
    c.model.tensor_init = *o.tensor_init == "dct" ? fca::TensorInit::Dct : fca::TensorInit::Random;
  }
  if (o.tensor_trainable) c.model.tensor_trainable = *o.tensor_trainable;
  if (o.nas_parts) c.model.nas_parts = *o.nas_parts;
  if (o.temperature) c.model.nas_temperature = *o.temperature;
  if (o.height) c.roundtrip.height = *o.height;
  if (o.width) c.roundtrip.width = *o.width;
  if (o.trials) c.roundtrip.trials = *o.trials;
  if (o.tolerance) c.roundtrip.tolerance = *o.tolerance;
  if (o.grid) {
    if (o.grid->size() != 2) throw fca::UsageError("--grid takes two values: H W");
    c.components.grid_height = (*o.grid)[0];
    c.components.grid_width = (*o.grid)[1];
  }
  if (o.budget) c.components.budget = *o.budget;
  if (o.kind) c.compare.kind = *o.kind;
  if (o.criterion) c.compare.criterion = *o.criterion;
  if (o.ks) c.compare.ks = *o.ks;
  if (o.modes) c.compare.modes = *o.modes;
  if (o.seeds) c.seeds = *o.seeds;
  if (o.no_baseline) c.compare.baseline = false;
  if (o.score_budget) c.compare.score_budget = *o.score_budget;
  if (o.scores_file) c.compare.scores_file = *o.scores_file;
  if (o.sizes) c.bench.sizes = *o.sizes;
  if (o.reps) c.bench.reps = *o.reps;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-spectral channel attention: checks, experiments and benchmarks"};
  app.require_subcommand(1);
  Overrides o;

  auto* roundtrip = app.add_subcommand("roundtrip", "DCT roundtrip, DC-coefficient and oracle-equivalence checks");
  add_common(roundtrip, o);
  roundtrip->add_option("--height", o.height, "Map height");
  roundtrip->add_option("--width", o.width, "Map width");
  roundtrip->add_option("--trials", o.trials, "Random inputs per check");
  roundtrip->add_option("--tolerance", o.tolerance, "Maximum allowed error");

  auto* eval = app.add_subcommand("eval-components", "Score each DCT component with single-component attention");
  add_common(eval, o);
  add_training(eval, o);
  eval->add_option("--grid", o.grid, "Component grid H W")->expected(2);
  eval->add_option("--budget", o.budget, "Fine-tune epochs per component");

  auto* train = app.add_subcommand("train", "Train one model");
  add_common(train, o);
  add_training(train, o);

  auto* search = app.add_subcommand("search", "Search components with the softmax relaxation");
  add_common(search, o);
  add_training(search, o);

  auto* compare = app.add_subcommand("compare", "Component-count sweep or learnable-tensor comparison over seeds");
  add_common(compare, o);
  add_training(compare, o);
  compare->add_option("--kind", o.kind, "sweep|learnable");
  compare->add_option("--criterion", o.criterion, "lf|ts (sweep)");
  compare->add_option("--ks", o.ks, "Component counts (sweep)")->delimiter(',');
  compare->add_option("--modes", o.modes, "FR,LR,LD,FD (learnable)")->delimiter(',');
  compare->add_option("--seeds", o.seeds, "Seeds per row")->delimiter(',');
  compare->add_flag("--no-baseline", o.no_baseline, "Skip the Gap baseline row");
  compare->add_option("--score-budget", o.score_budget, "Fine-tune epochs per component for ts scores");
  compare->add_option("--scores", o.scores_file, "Precomputed u,v,score CSV for ts");

  auto* bench = app.add_subcommand("bench", "Time separable vs naive DCT and attention blocks");
  add_common(bench, o);
  bench->add_option("--sizes", o.sizes, "Map sizes")->delimiter(',');
  bench->add_option("--reps", o.reps, "Calls per timing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? fca::kExitOk : fca::kExitUsage;
  }

  try {
    RunConfig cfg = fca::default_run_config();
    if (!o.config_file.empty()) {
      fca::json j;
      try {
        j = fca::read_json(o.config_file);
      } catch (const fca::FormatError& e) {
        throw fca::UsageError(e.what());
      }
      fca::update_from_json(cfg, j);
    }
    cfg.command = app.get_subcommands().front()->get_name();
    apply(o, cfg);
    return fca::run_command(cfg);
  } catch (const fca::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return fca::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fca::kExitCheckFailed;
  }
}
