#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lopt/detection.hpp"

namespace lopt {

// Derived per-gate constants: the accepting detector pattern and the ideal
// conditioned success probability.
struct GateFixture {
  std::string gate;
  DetectorPattern accept_pattern;
  double success_probability = 0.0;
  std::string provenance;
  std::string generated_at;
};

// Recomputes every fixture from the accept-pattern search and the ideal
// conditioned run.
std::vector<GateFixture> generate_fixtures();

nlohmann::json fixtures_to_json(const std::vector<GateFixture>& fixtures);
std::vector<GateFixture> fixtures_from_json(const nlohmann::json& j);

std::vector<GateFixture> load_fixtures(const std::string& path);
void save_fixtures(const std::string& path, const std::vector<GateFixture>& fixtures);

const GateFixture& find_fixture(const std::vector<GateFixture>& fixtures, std::string_view gate);

// Human-readable differences, ignoring generated_at. Empty when equal.
std::vector<std::string> diff_fixtures(const std::vector<GateFixture>& committed,
                                       const std::vector<GateFixture>& fresh,
                                       double tolerance = 1e-12);

}  // namespace lopt
