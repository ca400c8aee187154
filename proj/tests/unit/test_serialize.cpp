#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "fca/commands.hpp"
#include "fca/serialize.hpp"
#include "oracles.hpp"

using fca::Component;
using fca::json;
using fca::Tensor;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("fca_serialize_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

fca::RunRecord sample_record() {
  fca::RunRecord r;
  r.label = "ms";
  r.seed = 4;
  r.hyper.epochs = 2;
  r.train_loss = {1.25, 0.75};
  r.val_accuracy = {0.5, 0.625};
  r.initial_val_accuracy = 0.25;
  r.final_val_accuracy = 0.625;
  r.final_val_loss = 0.9;
  r.trainable_params = 1234;
  return r;
}

} // namespace

TEST(Serialize, AssignmentRoundTrip) {
  const auto a = fca::make_assignment(8, 4, 4, {{0, 0}, {1, 2}});
  const json j = fca::assignment_to_json(a);
  EXPECT_EQ(j.at("n"), 2);
  EXPECT_EQ(j.at("H"), 4);
  EXPECT_EQ(j.at("components"), json::parse("[[0,0],[1,2]]"));
  const auto b = fca::assignment_from_json(j, 8);
  EXPECT_EQ(b.components, a.components);
  EXPECT_EQ(b.height, 4u);
}

TEST(Serialize, AssignmentRejectsInconsistentCount) {
  json j = fca::assignment_to_json(fca::make_assignment(8, 4, 4, {{0, 0}, {1, 2}}));
  j["n"] = 3;
  EXPECT_THROW(fca::assignment_from_json(j, 8), fca::FormatError);
  j["n"] = 2;
  j["components"] = json::parse("[[0,0],[9,9]]");
  EXPECT_THROW(fca::assignment_from_json(j, 8), std::out_of_range);
}

TEST(Serialize, ScoresCsvRoundTrip) {
  const std::vector<fca::ComponentScore> scores{{{0, 0}, 0.5}, {{0, 1}, 0.1 + 0.2}, {{3, 3}, 1.0 / 3.0}};
  std::stringstream ss;
  fca::write_scores_csv(ss, scores);
  const auto back = fca::read_scores_csv(ss);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].component, scores[i].component);
    EXPECT_EQ(back[i].score, scores[i].score);
  }
  std::stringstream bad("x,y\n");
  EXPECT_THROW(fca::read_scores_csv(bad), fca::FormatError);
}

class AttentionJson : public ::testing::TestWithParam<int> {};

TEST_P(AttentionJson, RoundTripPreservesForward) {
  std::mt19937_64 rng(static_cast<unsigned>(GetParam()) + 40);
  const auto assign = fca::make_assignment(8, 4, 4, {{0, 1}, {2, 1}});
  std::vector<fca::Compression> strategies{
      fca::GapCompression{}, fca::MultiSpectralCompression{assign},
      fca::make_learnable(assign, fca::TensorInit::Random, true, rng),
      fca::NasCompression{fca::make_nas_state(2, {4, 4}, 0.5)}};
  const auto x = oracle::random_tensor({8, 4, 4}, rng);
  const auto dir = scratch_dir("attention_" + std::to_string(GetParam()));
  for (const auto& s : strategies) {
    auto p = fca::make_attention_params(8, 2, s, rng);
    p.input_scale = 0.0625;
    const bool by_ref = GetParam() == 1;
    const json j = fca::attention_to_json(p, by_ref ? dir : std::filesystem::path{});
    const auto q = fca::attention_from_json(json::parse(j.dump()), dir);
    EXPECT_EQ(fca::attention_forward(x, q).att, fca::attention_forward(x, p).att) << fca::compression_name(s);
    EXPECT_EQ(fca::params_fingerprint(q), fca::params_fingerprint(p));
  }
}

INSTANTIATE_TEST_SUITE_P(InlineAndReferenced, AttentionJson, ::testing::Values(0, 1));

TEST(Serialize, AttentionRejectsBadInput) {
  std::mt19937_64 rng(1);
  json j = fca::attention_to_json(fca::make_attention_params(8, 2, fca::GapCompression{}, rng));
  json wrong_shape = j;
  wrong_shape["w1"]["shape"] = json::array({3, 8});
  EXPECT_THROW(fca::attention_from_json(wrong_shape), std::exception);
  json wrong_schema = j;
  wrong_schema["schema"] = "fca.attention/0";
  EXPECT_THROW(fca::attention_from_json(wrong_schema), fca::FormatError);
  json wrong_type = j;
  wrong_type["strategy"]["type"] = "wavelet";
  EXPECT_THROW(fca::attention_from_json(wrong_type), fca::FormatError);
}

TEST(Serialize, ConfigsRoundTrip) {
  fca::ModelConfig m;
  m.attention = fca::AttentionKind::Learnable;
  m.components = {{0, 1}, {3, 2}};
  m.tensor_init = fca::TensorInit::Random;
  m.attention_bias = -0.5;
  fca::ModelConfig m2;
  fca::update_from_json(m2, fca::to_json(m));
  EXPECT_EQ(fca::to_json(m2), fca::to_json(m));

  fca::SyntheticSpec s;
  s.noise_sigma = 0.123;
  s.class_bands = {{{0, 1}}, {{2, 2}, {3, 1}}};
  s.num_classes = 2;
  fca::SyntheticSpec s2;
  fca::update_from_json(s2, fca::to_json(s));
  EXPECT_EQ(fca::to_json(s2), fca::to_json(s));

  fca::TrainHyper h;
  h.lr = 0.0125;
  h.batch = 3;
  h.schedule = fca::LrSchedule::Cosine;
  fca::TrainHyper h2;
  fca::update_from_json(h2, fca::to_json(h));
  EXPECT_EQ(fca::to_json(h2), fca::to_json(h));
}

TEST(Serialize, RunConfigRoundTripIsLossless) {
  auto c = fca::default_run_config();
  c.command = "compare";
  c.seed = 99;
  c.compare.ks = {1, 4};
  c.compare.modes = {"LD"};
  c.model.nas_temperature = 0.25;
  c.data.noise_sigma = 0.1 + 0.2;
  auto d = fca::default_run_config();
  fca::update_from_json(d, json::parse(fca::to_json(c).dump()));
  EXPECT_EQ(fca::to_json(d), fca::to_json(c));
  EXPECT_EQ(d.data.noise_sigma, c.data.noise_sigma);
}

TEST(Serialize, RunConfigRejectsUnknownKeysAndTypes) {
  auto c = fca::default_run_config();
  EXPECT_THROW(fca::update_from_json(c, json::parse(R"({"sede": 3})")), fca::UsageError);
  EXPECT_THROW(fca::update_from_json(c, json::parse(R"({"train": {"epochs": "many"}})")), fca::UsageError);
  EXPECT_THROW(fca::update_from_json(c, json::parse(R"({"model": {"attention": "se"}})")), fca::UsageError);
}

TEST(ResultSchema, RecordConforms) {
  const auto j = fca::result_json(sample_record());
  EXPECT_EQ(j.at("schema"), fca::kResultSchema);
  EXPECT_TRUE(fca::check_result_schema(j).empty());
  EXPECT_TRUE(fca::check_result_schema(json::parse(j.dump())).empty());
  EXPECT_FALSE(j.contains("wall_seconds"));
}

TEST(ResultSchema, ProblemsAreReported) {
  auto j = fca::result_json(sample_record());
  j.erase("final_val_accuracy");
  EXPECT_EQ(fca::check_result_schema(j).size(), 1u);
  j = fca::result_json(sample_record());
  j["schema"] = "fca.result/0";
  EXPECT_FALSE(fca::check_result_schema(j).empty());
  j = fca::result_json(sample_record());
  j["final_val_accuracy"] = 1.5;
  EXPECT_FALSE(fca::check_result_schema(j).empty());
  j = fca::result_json(sample_record());
  j["history_length"] = 7;
  EXPECT_FALSE(fca::check_result_schema(j).empty());
  EXPECT_FALSE(fca::check_result_schema(json::array()).empty());
}

TEST(ResultSchema, NasRecordCarriesAssignment) {
  auto r = sample_record();
  r.derived = fca::make_assignment(64, 4, 4, {{0, 0}, {1, 1}, {0, 1}, {1, 1}});
  const auto dir = scratch_dir("run");
  fca::write_run(dir, r);
  const auto j = fca::read_json(dir / "result.json");
  EXPECT_TRUE(fca::check_result_schema(j).empty());
  EXPECT_EQ(j.at("derived_assignment").at("n"), 4);
  EXPECT_TRUE(std::filesystem::exists(dir / "assignment.json"));
  std::ifstream hist(dir / "history.csv");
  std::string header, first;
  std::getline(hist, header);
  std::getline(hist, first);
  EXPECT_EQ(header, "epoch,train_loss,val_accuracy");
  EXPECT_EQ(first, "1,1.25,0.5");
}
