#include "lipgm/model_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lipgm/errors.hpp"

namespace lipgm {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) fail(ErrorCode::MalformedField, std::string("missing field '") + name + "'");
  return j.at(name);
}

template <class T>
T get(const json& j, const char* name) {
  const json& v = field(j, name);
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCode::MalformedField, std::string("field '") + name + "': " + e.what());
  }
}

json feature_map_json(const FeatureMap& f) {
  json j = {{"kind", to_string(f.kind())}, {"input_dim", f.input_dim()}, {"output_dim", f.output_dim()}};
  if (const auto& b = f.declared_bound())
    j["bound"] = {{"value", b->value}, {"norm", to_string(b->norm)}};
  else
    j["bound"] = nullptr;
  if (f.kind() == FeatureKind::LookupTable) {
    j["cardinalities"] = f.cardinalities();
    j["table"] = f.table();
  }
  return j;
}

FeatureMap feature_map_from(const json& j) {
  const auto kind_name = get<std::string>(j, "kind");
  const FeatureKind kind = feature_kind_from_string(kind_name);
  const auto in = get<std::size_t>(j, "input_dim");
  FeatureMap f = [&] {
    switch (kind) {
      case FeatureKind::Linear: return FeatureMap::linear(in);
      case FeatureKind::PairwiseProducts: return FeatureMap::pairwise(in);
      case FeatureKind::PairwiseWithField: return FeatureMap::pairwise_with_field(in);
      case FeatureKind::Quadratic: return FeatureMap::quadratic(in);
      case FeatureKind::LookupTable:
        return FeatureMap::lookup(get<std::vector<std::size_t>>(j, "cardinalities"), get<std::vector<Vec>>(j, "table"));
    }
    fail(ErrorCode::MalformedField, "unknown feature map kind");
  }();
  if (j.contains("output_dim") && get<std::size_t>(j, "output_dim") != f.output_dim())
    fail(ErrorCode::MalformedField, "feature_map.output_dim does not match its kind and input_dim");
  if (j.contains("bound") && !j.at("bound").is_null()) {
    const json& b = j.at("bound");
    f = f.with_bound({get<double>(b, "value"), norm_from_string(get<std::string>(b, "norm"))});
  }
  return f;
}

json provenance_json(const Provenance& p) {
  json j = {{"source", p.source}, {"notes", p.notes}};
  if (p.spec)
    j["spec"] = {{"n_vars", p.spec->n_vars},
                 {"density", p.spec->density},
                 {"min_eig", p.spec->min_eig},
                 {"seed", p.spec->seed}};
  else
    j["spec"] = nullptr;
  return j;
}

Provenance provenance_from(const json& j) {
  Provenance p;
  if (!j.is_object()) return p;
  if (j.contains("source")) p.source = get<std::string>(j, "source");
  if (j.contains("notes")) p.notes = get<std::map<std::string, std::string>>(j, "notes");
  if (j.contains("spec") && !j.at("spec").is_null()) {
    const json& s = j.at("spec");
    p.spec = GenSpec{get<std::size_t>(s, "n_vars"), get<double>(s, "density"), get<double>(s, "min_eig"),
                     get<std::uint64_t>(s, "seed")};
  }
  return p;
}

Vec as_vec(std::span<const double> s) { return Vec(s.begin(), s.end()); }

}  // namespace

std::string_view model_kind(const AnyModel& m) noexcept {
  switch (m.index()) {
    case 0: return "ggm";
    case 1: return "dfg";
    default: return "cfg";
  }
}

std::string model_to_json(const ModelDocument& doc) {
  json j = {{"schema_version", kModelSchemaVersion}, {"kind", model_kind(doc.model)}};
  if (const auto* g = std::get_if<GaussianModel>(&doc.model)) {
    j["dim"] = g->dim();
    j["omega"] = as_vec(g->omega().data());
    j["bounds"] = {{"alpha", g->alpha()}, {"beta", g->beta()}};
  } else if (const auto* d = std::get_if<DiscreteFactorGraph>(&doc.model)) {
    j["n_vars"] = d->num_vars();
    j["domains"] = d->space().domains();
    j["feature_map"] = feature_map_json(d->psi());
    j["weights"] = d->weights();
  } else {
    const auto& c = std::get<ContinuousFactorGraph>(doc.model);
    j["dim"] = c.dim();
    j["feature_map"] = feature_map_json(c.psi());
    j["weights"] = c.weights();
    j["bounds"] = {{"alpha_feat", c.alpha_feat()}, {"p_norm", to_string(c.p_norm())}};
  }
  j["provenance"] = provenance_json(doc.provenance);
  return j.dump(2) + "\n";
}

ModelDocument model_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::MalformedField, std::string("model JSON does not parse: ") + e.what());
  }
  const int version = get<int>(j, "schema_version");
  if (version != kModelSchemaVersion)
    fail(ErrorCode::SchemaVersionMismatch, "model schema_version " + std::to_string(version) +
                                               " is not the supported version " +
                                               std::to_string(kModelSchemaVersion));
  const auto kind = get<std::string>(j, "kind");
  Provenance prov = j.contains("provenance") ? provenance_from(j.at("provenance")) : Provenance{};
  if (kind == "ggm") {
    const auto n = get<std::size_t>(j, "dim");
    const auto omega = get<Vec>(j, "omega");
    if (omega.size() != n * n)
      fail(ErrorCode::MalformedField, "omega has " + std::to_string(omega.size()) + " entries, expected " +
                                          std::to_string(n * n));
    Matrix m(n, n);
    std::copy(omega.begin(), omega.end(), m.data().begin());
    const json& b = field(j, "bounds");
    return {GaussianModel(SymMatrix::from_full(m), get<double>(b, "alpha"), get<double>(b, "beta")),
            std::move(prov)};
  }
  if (kind == "dfg") {
    auto domains = get<std::vector<Vec>>(j, "domains");
    if (domains.size() != get<std::size_t>(j, "n_vars"))
      fail(ErrorCode::MalformedField, "domains length does not match n_vars");
    return {DiscreteFactorGraph(StateSpace(std::move(domains)), feature_map_from(field(j, "feature_map")),
                                get<Vec>(j, "weights")),
            std::move(prov)};
  }
  if (kind == "cfg") {
    const json& b = field(j, "bounds");
    ContinuousFactorGraph c(feature_map_from(field(j, "feature_map")), get<Vec>(j, "weights"),
                            get<double>(b, "alpha_feat"), norm_from_string(get<std::string>(b, "p_norm")));
    if (c.dim() != get<std::size_t>(j, "dim")) fail(ErrorCode::MalformedField, "dim does not match feature map");
    return {std::move(c), std::move(prov)};
  }
  fail(ErrorCode::MalformedField, "unknown model kind '" + kind + "'");
}

void save_model(const std::filesystem::path& path, const ModelDocument& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << model_to_json(doc);
  if (!out) fail(ErrorCode::Io, "write to " + path.string() + " failed");
}

ModelDocument load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace lipgm
