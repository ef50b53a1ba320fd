#include "bioinv/io.hpp"
#include "json_util.hpp"

namespace bioinv {

using detail::json;
using detail::ObjectReader;

namespace {

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

ChannelBounds bounds_from(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  ChannelBounds b;
  b.lower = r.matrix("lower");
  b.upper = r.matrix("upper");
  b.budget_lower = r.vector("budget_lower");
  b.budget_upper = r.vector("budget_upper");
  r.finish();
  return b;
}

json bounds_json(const ChannelBounds& b) {
  return {{"lower", matrix_json(b.lower)},
          {"upper", matrix_json(b.upper)},
          {"budget_lower", b.budget_lower},
          {"budget_upper", b.budget_upper}};
}

DemandScenario scenario_from(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  DemandScenario s{r.matrix("walkin"), r.matrix("online")};
  r.finish();
  if (s.walkin.size() != s.online.size()) detail::fail(path, "walkin and online cover different horizons");
  return s;
}

json scenario_json(const DemandScenario& s) {
  return {{"walkin", matrix_json(s.walkin)}, {"online", matrix_json(s.online)}};
}

template <class F>
auto with_source(const std::string& text, const std::string& source, F&& f) {
  const json doc = detail::parse_document(text, source);
  try {
    return f(doc);
  } catch (const ParseError& e) {
    throw ParseError(source + ": " + e.what());
  }
}

}  // namespace

const char* to_string(SampleFamily family) { return family == SampleFamily::poisson ? "poisson" : "uniform"; }

SampleFamily parse_family(const std::string& name) {
  if (name == "poisson") return SampleFamily::poisson;
  if (name == "uniform") return SampleFamily::uniform;
  throw ParseError("unknown sample family \"" + name + "\" (expected poisson or uniform)");
}

UncertaintySet parse_uncertainty_set(const std::string& text, const std::string& source) {
  return with_source(text, source, [](const json& doc) {
    ObjectReader r(doc, "");
    UncertaintySet set{bounds_from(r.at("walkin"), "walkin"), bounds_from(r.at("online"), "online")};
    r.finish();
    return set;
  });
}

std::string dump_uncertainty_set(const UncertaintySet& set) {
  json doc{{"walkin", bounds_json(set.walkin)}, {"online", bounds_json(set.online)}};
  return doc.dump(2) + "\n";
}

UncertaintySet load_uncertainty_set(const std::string& path) {
  return parse_uncertainty_set(detail::read_file(path), path);
}

void save_uncertainty_set(const UncertaintySet& set, const std::string& path) {
  detail::write_file(path, dump_uncertainty_set(set));
}

DemandMeans parse_means(const std::string& text, const std::string& source) {
  return with_source(text, source, [](const json& doc) { return scenario_from(doc, ""); });
}

std::string dump_means(const DemandMeans& means) { return scenario_json(means).dump(2) + "\n"; }

DemandMeans load_means(const std::string& path) { return parse_means(detail::read_file(path), path); }

void save_means(const DemandMeans& means, const std::string& path) { detail::write_file(path, dump_means(means)); }

ScenarioBatch parse_scenarios(const std::string& text, const std::string& source) {
  return with_source(text, source, [](const json& doc) {
    ObjectReader r(doc, "");
    ScenarioBatch batch;
    const auto& seed = r.at("seed");
    if (!seed.is_number_unsigned()) detail::fail("seed", "expected a nonnegative integer");
    batch.seed = seed.get<std::uint64_t>();
    try {
      batch.family = parse_family(r.text("family"));
    } catch (const ParseError& e) {
      detail::fail("family", e.what());
    }
    const auto& list = r.at("scenarios");
    if (!list.is_array()) detail::fail("scenarios", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      batch.scenarios.push_back(scenario_from(list[i], "scenarios[" + std::to_string(i) + "]"));
    }
    r.finish();
    return batch;
  });
}

std::string dump_scenarios(const ScenarioBatch& batch) {
  json list = json::array();
  for (const auto& s : batch.scenarios) list.push_back(scenario_json(s));
  json doc{{"seed", batch.seed}, {"family", to_string(batch.family)}, {"scenarios", list}};
  return doc.dump() + "\n";
}

ScenarioBatch load_scenarios(const std::string& path) { return parse_scenarios(detail::read_file(path), path); }

void save_scenarios(const ScenarioBatch& batch, const std::string& path) {
  detail::write_file(path, dump_scenarios(batch));
}

}  // namespace bioinv
