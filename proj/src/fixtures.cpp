#include "lopt/fixtures.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "lopt/gates.hpp"

namespace lopt {

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

AcceptSearch search_space(const GateDefinition& gate) {
  if (gate.ancilla_kind == AncillaKind::EntangledPair) {
    return {{{"a_h", "a_v"}, {"b_h", "b_v"}}, {"d", "e"}};
  }
  AcceptSearch s{{{"a"}, {"b"}}, {}};
  for (const auto& m : {"v1", "v2"}) {
    if (gate.layout.contains(m)) s.dark.emplace_back(m);
  }
  return s;
}

}  // namespace

std::vector<GateFixture> generate_fixtures() {
  const std::string stamp = utc_now();
  std::vector<GateFixture> out;
  for (const auto& name : gate_names()) {
    auto gate = gate_by_name(name);
    gate.accept = find_accept_pattern(gate, search_space(gate));
    const auto run =
        run_conditioned(gate, QubitAmplitudes::horizontal(), QubitAmplitudes::horizontal(), 4);
    out.push_back({name, gate.accept, run.probability,
                   "find_accept_pattern over ideal single-photon inputs (16 product states, "
                   "h/v/d/r basis); success probability from run_conditioned on |hh>",
                   stamp});
  }
  return out;
}

nlohmann::json fixtures_to_json(const std::vector<GateFixture>& fixtures) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& f : fixtures) {
    out.push_back({{"gate", f.gate},
                   {"accept_pattern", pattern_to_json(f.accept_pattern)},
                   {"success_probability", f.success_probability},
                   {"provenance", f.provenance},
                   {"generated_at", f.generated_at}});
  }
  return out;
}

std::vector<GateFixture> fixtures_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error("fixture file must hold a JSON array");
  std::vector<GateFixture> out;
  for (const auto& item : j) {
    out.push_back({item.at("gate").get<std::string>(),
                   pattern_from_json(item.at("accept_pattern")),
                   item.at("success_probability").get<double>(),
                   item.value("provenance", std::string{}),
                   item.value("generated_at", std::string{})});
  }
  return out;
}

std::vector<GateFixture> load_fixtures(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read fixture file '" + path + "'");
  try {
    return fixtures_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed fixture file '" + path + "': " + e.what());
  }
}

void save_fixtures(const std::string& path, const std::vector<GateFixture>& fixtures) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write fixture file '" + path + "'");
  out << fixtures_to_json(fixtures).dump(2) << '\n';
}

const GateFixture& find_fixture(const std::vector<GateFixture>& fixtures, std::string_view gate) {
  for (const auto& f : fixtures) {
    if (f.gate == gate) return f;
  }
  throw Error("no fixture for gate '" + std::string(gate) + "'");
}

std::vector<std::string> diff_fixtures(const std::vector<GateFixture>& committed,
                                       const std::vector<GateFixture>& fresh, double tolerance) {
  std::vector<std::string> diffs;
  for (const auto& f : fresh) {
    const GateFixture* old = nullptr;
    for (const auto& c : committed) {
      if (c.gate == f.gate) old = &c;
    }
    if (!old) {
      diffs.push_back("+ " + f.gate + ": new fixture");
      continue;
    }
    if (std::abs(old->success_probability - f.success_probability) > tolerance) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "~ %s: success_probability %.17g -> %.17g", f.gate.c_str(),
                    old->success_probability, f.success_probability);
      diffs.emplace_back(buf);
    }
    if (!(old->accept_pattern == f.accept_pattern)) {
      diffs.push_back("~ " + f.gate + ": accept_pattern " +
                      pattern_to_json(old->accept_pattern).dump() + " -> " +
                      pattern_to_json(f.accept_pattern).dump());
    }
    if (old->provenance != f.provenance) diffs.push_back("~ " + f.gate + ": provenance changed");
  }
  for (const auto& c : committed) {
    bool present = false;
    for (const auto& f : fresh) present = present || f.gate == c.gate;
    if (!present) diffs.push_back("- " + c.gate + ": fixture no longer generated");
  }
  return diffs;
}

}  // namespace lopt
