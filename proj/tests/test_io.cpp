#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <sstream>

#include "lipgm/dataset_io.hpp"
#include "lipgm/errors.hpp"
#include "lipgm/model_io.hpp"
#include "lipgm/rng.hpp"
#include "lipgm/synth.hpp"

using namespace lipgm;

namespace {

ErrorCode code_of(const std::function<void()>& f, std::string* what = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (what) *what = e.what();
    return e.code();
  }
  ADD_FAILURE() << "no lipgm::Error thrown";
  return ErrorCode::Io;
}

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  if (pos != std::string::npos) s.replace(pos, from.size(), to);
  return s;
}

ModelDocument ggm_doc(std::uint64_t seed) {
  const GenSpec spec{6, 0.5, 0.1, seed};
  return {random_ggm(spec), {"random_ggm", spec, {{"note", "unit diagonal"}}}};
}

}  // namespace

TEST(ModelIo, GaussianRoundTripIsBitwise) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ModelDocument doc = ggm_doc(s);
    const std::string text = model_to_json(doc);
    const ModelDocument back = model_from_json(text);
    const auto& a = std::get<GaussianModel>(doc.model);
    const auto& b = std::get<GaussianModel>(back.model);
    EXPECT_EQ(a.omega(), b.omega());
    EXPECT_EQ(a.alpha(), b.alpha());
    EXPECT_EQ(a.beta(), b.beta());
    EXPECT_EQ(model_to_json(back), text);
    EXPECT_EQ(back.provenance.source, "random_ggm");
    ASSERT_TRUE(back.provenance.spec.has_value());
    EXPECT_EQ(back.provenance.spec->seed, s);
    EXPECT_EQ(back.provenance.notes.at("note"), "unit diagonal");
  }
}

TEST(ModelIo, DiscreteAndContinuousRoundTrip) {
  const DiscreteFactorGraph d = random_ising({5, 0.7, 0.1, 3});
  const ModelDocument dd{d, {"random_ising", std::nullopt, {}}};
  const std::string dt = model_to_json(dd);
  EXPECT_EQ(model_kind(model_from_json(dt).model), "dfg");
  EXPECT_EQ(std::get<DiscreteFactorGraph>(model_from_json(dt).model).weights(), d.weights());
  EXPECT_EQ(model_to_json(model_from_json(dt)), dt);

  const FeatureMap table = FeatureMap::lookup({2, 3}, {{0.1}, {0.2}, {-0.3}, {1.0}, {-1.0}, {0.0}});
  const DiscreteFactorGraph lt(StateSpace::integer({2, 3}), table, Vec{0.7});
  const std::string lt_text = model_to_json({lt, {}});
  EXPECT_EQ(model_to_json(model_from_json(lt_text)), lt_text);

  const auto c = ContinuousFactorGraph::from_precision(random_ggm({3, 0.5, 0.1, 4}).omega(), 50.0, Norm::L2);
  const std::string ct = model_to_json({c, {"manual", std::nullopt, {}}});
  const auto back = std::get<ContinuousFactorGraph>(model_from_json(ct).model);
  EXPECT_EQ(back.weights(), c.weights());
  EXPECT_EQ(back.alpha_feat(), 50.0);
  EXPECT_EQ(back.p_norm(), Norm::L2);
  EXPECT_EQ(model_to_json(model_from_json(ct)), ct);
}

TEST(ModelIo, Errors) {
  const std::string text = model_to_json(ggm_doc(1));
  std::string what;
  EXPECT_EQ(code_of([&] { model_from_json(replace_once(text, "\"kind\"", "\"kinds\"")); }, &what),
            ErrorCode::MalformedField);
  EXPECT_NE(what.find("kind"), std::string::npos);
  EXPECT_EQ(code_of([&] { model_from_json(replace_once(text, "\"schema_version\": 1", "\"schema_version\": 2")); },
                    &what),
            ErrorCode::SchemaVersionMismatch);
  EXPECT_NE(what.find('2'), std::string::npos);
  EXPECT_NE(what.find('1'), std::string::npos);
  EXPECT_EQ(code_of([&] { model_from_json(text.substr(0, text.size() / 2)); }), ErrorCode::MalformedField);
  EXPECT_EQ(code_of([&] { model_from_json(replace_once(text, "\"ggm\"", "\"svm\"")); }), ErrorCode::MalformedField);
  EXPECT_EQ(code_of([] { load_model("/nonexistent/model.json"); }), ErrorCode::Io);
}

TEST(ModelIo, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "lipgm_test_io";
  std::filesystem::create_directories(dir);
  const ModelDocument doc = ggm_doc(2);
  save_model(dir / "m.json", doc);
  EXPECT_EQ(model_to_json(load_model(dir / "m.json")), model_to_json(doc));
  std::filesystem::remove_all(dir);
}

TEST(DatasetIo, ContinuousRoundTripIsExact) {
  Rng rng(5);
  Dataset d{default_column_names(3), Matrix(20, 3)};
  for (double& v : d.values.data()) v = rng.normal() * 1e3;
  std::stringstream ss;
  write_csv(ss, d);
  const Dataset back = read_csv(ss);
  EXPECT_EQ(back.names, (std::vector<std::string>{"x0", "x1", "x2"}));
  EXPECT_EQ(back.values, d.values);
}

TEST(DatasetIo, DiscreteDataAreIntegers) {
  Dataset d{default_column_names(2), Matrix::from_rows({{1.0, -1.0}, {-1.0, -1.0}})};
  std::stringstream ss;
  write_csv(ss, d, true);
  EXPECT_EQ(ss.str(), "x0,x1\n1,-1\n-1,-1\n");
}

TEST(DatasetIo, MalformedInput) {
  std::stringstream ragged("a,b\n1,2\n3\n");
  EXPECT_EQ(code_of([&] { read_csv(ragged); }), ErrorCode::MalformedField);
  std::stringstream bad("a\n1.5x\n");
  EXPECT_EQ(code_of([&] { read_csv(bad); }), ErrorCode::MalformedField);
}
