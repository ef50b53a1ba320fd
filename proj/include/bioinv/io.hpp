#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bioinv/instance.hpp"
#include "bioinv/uncertainty.hpp"

namespace bioinv {

/// Malformed document.  The message carries the source and either a line/column
/// (syntax) or a field path such as `econ.holding[2]` (semantics).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Instance parse_instance(const std::string& text, const std::string& source = "<string>");
std::string dump_instance(const Instance& instance);
Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

UncertaintySet parse_uncertainty_set(const std::string& text, const std::string& source = "<string>");
std::string dump_uncertainty_set(const UncertaintySet& set);
UncertaintySet load_uncertainty_set(const std::string& path);
void save_uncertainty_set(const UncertaintySet& set, const std::string& path);

DemandMeans parse_means(const std::string& text, const std::string& source = "<string>");
std::string dump_means(const DemandMeans& means);
DemandMeans load_means(const std::string& path);
void save_means(const DemandMeans& means, const std::string& path);

/// Scenarios plus the sampler settings that produced them.
struct ScenarioBatch {
  std::uint64_t seed = 0;
  SampleFamily family = SampleFamily::poisson;
  std::vector<DemandScenario> scenarios;
};

ScenarioBatch parse_scenarios(const std::string& text, const std::string& source = "<string>");
std::string dump_scenarios(const ScenarioBatch& batch);
ScenarioBatch load_scenarios(const std::string& path);
void save_scenarios(const ScenarioBatch& batch, const std::string& path);

const char* to_string(SampleFamily family);
SampleFamily parse_family(const std::string& name);

}  // namespace bioinv
