// Command-line front end: gate verification, visibility sweeps, fixture
// maintenance and state dumps.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lopt/fixtures.hpp"
#include "lopt/gates.hpp"
#include "lopt/visibility.hpp"

#ifndef LOPT_DEFAULT_FIXTURES
#define LOPT_DEFAULT_FIXTURES "data/fixtures.json"
#endif

namespace {

using namespace lopt;
using nlohmann::json;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error("malformed JSON in '" + path + "': " + e.what());
  }
}

GateDefinition load_gate(const std::string& name, const std::string& circuit_path) {
  GateDefinition gate;
  try {
    gate = gate_by_name(name);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (!circuit_path.empty()) {
    gate.circuit = circuit_from_json(read_json_file(circuit_path));
    validate(gate.circuit, gate.layout);
  }
  return gate;
}

std::string fmt(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// ---- verify ----------------------------------------------------------------

struct VerifyOptions {
  std::string gate;
  std::string circuit;
  std::string fixtures = LOPT_DEFAULT_FIXTURES;
};

int cmd_verify(const VerifyOptions& opt) {
  const auto gate = load_gate(opt.gate, opt.circuit);
  const double r = 1.0 / std::sqrt(2.0);
  const std::vector<std::pair<std::string, std::pair<QubitAmplitudes, QubitAmplitudes>>> rows = {
      {"h h", {QubitAmplitudes::horizontal(), QubitAmplitudes::horizontal()}},
      {"h v", {QubitAmplitudes::horizontal(), QubitAmplitudes::vertical()}},
      {"v h", {QubitAmplitudes::vertical(), QubitAmplitudes::horizontal()}},
      {"v v", {QubitAmplitudes::vertical(), QubitAmplitudes::vertical()}},
      {"d h", {{r, r}, QubitAmplitudes::horizontal()}},
      {"d d", {{r, r}, {r, r}}},
  };

  std::optional<double> fixture;
  try {
    fixture = find_fixture(load_fixtures(opt.fixtures), gate.name).success_probability;
  } catch (const Error&) {
  }

  std::cout << "gate " << gate.name << "  nominal success " << fmt(gate.nominal_success);
  if (fixture) std::cout << "  fixture " << fmt(*fixture);
  std::cout << "\n";
  std::cout << "input  fidelity          success\n";
  bool ok = true;
  for (const auto& [label, in] : rows) {
    double f = 0.0, p = 0.0;
    try {
      const auto run = run_conditioned(gate, in.first, in.second);
      f = fidelity(run.state, ideal_cnot(in.first, in.second));
      p = run.probability;
    } catch (const Error& e) {
      std::cout << label << "    failed: " << e.what() << "\n";
      ok = false;
      continue;
    }
    const bool row_ok = f >= 1.0 - 1e-9;
    ok = ok && row_ok;
    std::printf("%-6s %-17s %-17s%s\n", label.c_str(), fmt(f, 15).c_str(), fmt(p, 15).c_str(),
                row_ok ? "" : "  FAIL");
  }
  std::cout << (ok ? "CNOT verified\n" : "CNOT verification failed\n");
  return ok ? 0 : kExitRuntime;
}

// ---- sweep -----------------------------------------------------------------

struct SweepFlags {
  std::string config;
  std::string gate;
  std::string source;
  std::string lambda;
  std::string epsilon;
  bool tie = false;
  unsigned n_max = kDefaultMaxPhotons;
  std::string output;
  unsigned jobs = 1;
  unsigned grid_points = 9;
  double tolerance = 1e-8;
  unsigned max_evals = 2000;
  std::string circuit;
};

struct SweepOptionHandles {
  CLI::Option* gate;
  CLI::Option* source;
  CLI::Option* lambda;
  CLI::Option* epsilon;
  CLI::Option* tie;
  CLI::Option* n_max;
  CLI::Option* output;
  CLI::Option* jobs;
  CLI::Option* grid_points;
  CLI::Option* tolerance;
  CLI::Option* max_evals;
  CLI::Option* circuit;
};

std::string range_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return fmt(v.get<double>(), 17);
  throw UsageError("range must be a number or \"start:stop:count\"");
}

std::string default_source(const std::string& gate) {
  return gate == "pjf" ? to_string(SourceVariant::DoubleCrystalPlusSPDC)
                       : to_string(SourceVariant::TwoSPDC);
}

int cmd_sweep(SweepFlags flags, const SweepOptionHandles& h) {
  json config = json::object();
  if (!flags.config.empty()) config = read_json_file(flags.config);

  // Flags given on the command line win over the config file.
  auto pick = [&](CLI::Option* opt, const char* key, auto& value) {
    using T = std::decay_t<decltype(value)>;
    if (opt->count() == 0 && config.contains(key)) {
      try {
        if constexpr (std::is_same_v<T, std::string>) {
          value = config[key].is_string() ? config[key].get<std::string>() : range_text(config[key]);
        } else {
          value = config[key].get<T>();
        }
      } catch (const json::exception&) {
        throw UsageError(std::string("config key '") + key + "' has the wrong type");
      }
    }
  };
  pick(h.gate, "gate", flags.gate);
  pick(h.source, "source", flags.source);
  pick(h.lambda, "lambda", flags.lambda);
  pick(h.epsilon, "epsilon", flags.epsilon);
  pick(h.tie, "tie_epsilon_to_lambda", flags.tie);
  pick(h.n_max, "n_max", flags.n_max);
  pick(h.output, "output", flags.output);
  pick(h.jobs, "jobs", flags.jobs);
  pick(h.grid_points, "grid_points", flags.grid_points);
  pick(h.tolerance, "tolerance", flags.tolerance);
  pick(h.max_evals, "max_evaluations", flags.max_evals);
  pick(h.circuit, "circuit", flags.circuit);

  if (flags.gate.empty()) throw UsageError("--gate is required");
  if (flags.lambda.empty()) throw UsageError("--lambda is required");
  const auto gate = load_gate(flags.gate, flags.circuit);
  if (flags.source.empty()) flags.source = default_source(flags.gate);

  SweepGrid grid;
  grid.gate = flags.gate;
  grid.n_max = flags.n_max;
  grid.tie_epsilon_to_lambda = flags.tie;
  grid.jobs = flags.jobs;
  grid.optimizer = {flags.grid_points, flags.tolerance, flags.max_evals};
  try {
    grid.variant = source_variant_from_string(flags.source);
    grid.lambdas = Range::parse(flags.lambda).values();
    if (!flags.epsilon.empty()) grid.epsilons = Range::parse(flags.epsilon).values();
    grid.check();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  const bool to_stdout = flags.output.empty() || flags.output == "-";
  std::ofstream file;
  if (!to_stdout) {
    file.open(flags.output);
    if (!file) {
      std::cerr << "error: cannot write '" << flags.output << "'\n";
      return kExitRuntime;
    }
  }

  auto custom = gate;
  if (config.contains("coincidence")) custom.coincidence = pattern_from_json(config["coincidence"]);
  const auto records = sweep(custom, grid);

  std::ostream& out = to_stdout ? std::cout : file;
  write_csv(out, records);
  if (!out) {
    std::cerr << "error: failed writing '" << flags.output << "'\n";
    return kExitRuntime;
  }

  // Best lambda for each ancilla strength.
  auto& log = to_stdout ? std::cerr : std::cout;
  std::map<double, const VisibilityRecord*> best;
  std::vector<double> order;
  for (const auto& r : records) {
    if (!r.error.empty()) {
      log << "point lambda=" << fmt(r.source.lambda.real()) << " failed: " << r.error << "\n";
      continue;
    }
    const double key = grid.tie_epsilon_to_lambda ? 0.0
                       : r.source.variant == SourceVariant::SPDCPlusCoherent
                           ? r.source.alpha.real()
                           : r.source.epsilon.real();
    auto it = best.find(key);
    if (it == best.end()) order.push_back(key);
    if (it == best.end() || r.V > it->second->V) best[key] = &r;
  }
  for (double key : order) {
    const auto* r = best[key];
    if (grid.tie_epsilon_to_lambda) {
      log << "max V " << fmt(r->V) << " at lambda=epsilon=" << fmt(r->source.lambda.real()) << "\n";
    } else {
      log << "epsilon " << fmt(key) << ": max V " << fmt(r->V) << " at lambda "
          << fmt(r->source.lambda.real()) << "\n";
    }
  }
  return 0;
}

// ---- fixtures --------------------------------------------------------------

int cmd_fixtures(const std::string& path, bool regen) {
  const auto fresh = generate_fixtures();
  std::vector<GateFixture> committed;
  try {
    committed = load_fixtures(path);
  } catch (const Error& e) {
    if (!regen) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitRuntime;
    }
  }
  const auto diffs = diff_fixtures(committed, fresh);
  for (const auto& d : diffs) std::cout << d << "\n";
  if (regen) {
    save_fixtures(path, fresh);
    std::cout << "wrote " << path << " (" << diffs.size() << " change(s))\n";
    return 0;
  }
  if (diffs.empty()) std::cout << "fixtures up to date\n";
  return diffs.empty() ? 0 : kExitRuntime;
}

// ---- state / circuit -------------------------------------------------------

struct StateOptions {
  std::string gate;
  std::string source = "single-photons";
  double lambda = 0, epsilon = 0, alpha = 0;
  std::string beta;
  std::vector<double> control{0.0, 0.0};
  std::vector<double> target{0.0, 0.0};
  unsigned n_max = kDefaultMaxPhotons;
  bool propagate = false;
};

int cmd_state(const StateOptions& opt) {
  const auto gate = load_gate(opt.gate, "");
  SourceSpec src;
  try {
    src.variant = source_variant_from_string(opt.source);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  src.lambda = opt.lambda;
  src.epsilon = opt.epsilon;
  src.alpha = opt.alpha;
  src.beta = opt.beta.empty() ? Amplitude(0.0, opt.alpha) : Amplitude(std::stod(opt.beta));
  const auto c = QubitAmplitudes::bloch(opt.control.at(0), opt.control.at(1));
  const auto t = QubitAmplitudes::bloch(opt.target.at(0), opt.target.at(1));
  auto state = assemble_input(gate, src, c, t, opt.n_max);
  if (opt.propagate) state = apply_circuit(state, gate.circuit);
  json out = {{"gate", gate.name},
              {"modes", gate.layout.names()},
              {"n_max", opt.n_max},
              {"source", source_to_json(src)},
              {"terms", to_json(state)}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_circuit(const std::string& name) {
  const auto gate = load_gate(name, "");
  json out = {{"gate", gate.name},
              {"modes", gate.layout.names()},
              {"elements", circuit_to_json(gate.circuit)},
              {"accept", pattern_to_json(gate.accept)},
              {"coincidence", pattern_to_json(gate.coincidence)}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear-optical CNOT gates with realistic sources and non-selective detectors"};
  app.require_subcommand(1);
  const std::vector<std::string> gates = gate_names();

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check the ideal conditioned truth table of a gate");
  verify_cmd->add_option("gate", verify.gate, "Gate name")->required()->check(CLI::IsMember(gates));
  verify_cmd->add_option("--circuit", verify.circuit, "Replace the gate circuit with a JSON circuit file");
  verify_cmd->add_option("--fixtures", verify.fixtures, "Fixture file to report against");

  SweepFlags sweep_flags;
  SweepOptionHandles h{};
  auto* sweep_cmd = app.add_subcommand("sweep", "Visibility over a grid of source strengths (CSV)");
  sweep_cmd->add_option("--config", sweep_flags.config, "JSON config; flags override its keys");
  h.gate = sweep_cmd->add_option("--gate", sweep_flags.gate, "sklm | pjf | knill");
  h.source = sweep_cmd->add_option("--source", sweep_flags.source,
                                   "two-spdc | spdc-coherent | double-crystal | single-photons");
  h.lambda = sweep_cmd->add_option("--lambda", sweep_flags.lambda, "Control/target SPDC strengths, start:stop:count or a value");
  h.epsilon = sweep_cmd->add_option("--epsilon", sweep_flags.epsilon, "Ancilla strengths (alpha for spdc-coherent, beta = i alpha)");
  h.tie = sweep_cmd->add_flag("--tie-epsilon-to-lambda", sweep_flags.tie, "Use epsilon = lambda at every point");
  h.n_max = sweep_cmd->add_option("--n-max", sweep_flags.n_max, "Total-photon truncation")->capture_default_str();
  h.output = sweep_cmd->add_option("--output,-o", sweep_flags.output, "CSV path ('-' for stdout)");
  h.jobs = sweep_cmd->add_option("--jobs,-j", sweep_flags.jobs, "Parallel workers")->capture_default_str()->check(CLI::PositiveNumber);
  h.grid_points = sweep_cmd->add_option("--grid-points", sweep_flags.grid_points, "Coarse grid points per Bloch angle")->capture_default_str();
  h.tolerance = sweep_cmd->add_option("--tolerance", sweep_flags.tolerance, "Relative simplex tolerance")->capture_default_str();
  h.max_evals = sweep_cmd->add_option("--max-evals", sweep_flags.max_evals, "Refinement budget per point")->capture_default_str();
  h.circuit = sweep_cmd->add_option("--circuit", sweep_flags.circuit, "Replace the gate circuit with a JSON circuit file");

  std::string fixture_path = LOPT_DEFAULT_FIXTURES;
  bool regen = false;
  auto* fixtures_cmd = app.add_subcommand("fixtures", "Compare (or regenerate) derived gate fixtures");
  fixtures_cmd->add_option("--path", fixture_path, "Fixture file")->capture_default_str();
  fixtures_cmd->add_flag("--regen", regen, "Rewrite the fixture file");

  StateOptions state;
  auto* state_cmd = app.add_subcommand("state", "Dump an input (or output) state as JSON");
  state_cmd->add_option("--gate", state.gate, "Gate name")->required()->check(CLI::IsMember(gates));
  state_cmd->add_option("--source", state.source, "Source variant")->capture_default_str();
  state_cmd->add_option("--lambda", state.lambda, "Control/target SPDC strength");
  state_cmd->add_option("--epsilon", state.epsilon, "Ancilla SPDC strength");
  state_cmd->add_option("--alpha", state.alpha, "Coherent amplitude on a");
  state_cmd->add_option("--beta", state.beta, "Real coherent amplitude on b (default i alpha)");
  state_cmd->add_option("--control", state.control, "Control Bloch angles theta phi")->expected(2);
  state_cmd->add_option("--target", state.target, "Target Bloch angles theta phi")->expected(2);
  state_cmd->add_option("--n-max", state.n_max, "Total-photon truncation")->capture_default_str();
  state_cmd->add_flag("--propagate", state.propagate, "Apply the gate circuit before dumping");

  std::string circuit_gate;
  auto* circuit_cmd = app.add_subcommand("circuit", "Print a gate's circuit and detector patterns as JSON");
  circuit_cmd->add_option("gate", circuit_gate, "Gate name")->required()->check(CLI::IsMember(gates));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*verify_cmd) return cmd_verify(verify);
    if (*sweep_cmd) return cmd_sweep(sweep_flags, h);
    if (*fixtures_cmd) return cmd_fixtures(fixture_path, regen);
    if (*state_cmd) return cmd_state(state);
    if (*circuit_cmd) return cmd_circuit(circuit_gate);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
