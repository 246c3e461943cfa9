#include "lopt/gates.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace lopt {

using std::numbers::pi;

double SklmAngles::theta1() { return std::acos(std::sqrt(5.0 - 3.0 * std::sqrt(2.0))); }
double SklmAngles::theta2() { return std::acos(std::sqrt((3.0 - std::sqrt(2.0)) / 7.0)); }

double KnillAngles::theta1() { return std::acos(std::sqrt(1.0 / 3.0)); }
double KnillAngles::theta2() { return -theta1(); }
double KnillAngles::theta3() { return std::acos(std::sqrt(0.5 + 1.0 / std::sqrt(6.0))); }

double sklm_success_probability() {
  const double ns = (3.0 - std::sqrt(2.0)) / 7.0;
  return ns * ns;
}

namespace {

DetectorPattern four_fold(const std::vector<std::string>& a_modes,
                          const std::vector<std::string>& b_modes) {
  return DetectorPattern{{
      bucket("c", {"c_h", "c_v"}, Outcome::click()),
      bucket("t", {"t_h", "t_v"}, Outcome::click()),
      bucket("a", a_modes, Outcome::click()),
      bucket("b", b_modes, Outcome::click()),
  }};
}

SparseState photon_pair_prep(const ModeLayout& layout) {
  return basis_state(layout, make_occupation(layout, {{"a", 1}, {"b", 1}}), 2);
}

}  // namespace

GateDefinition sklm_gate() {
  GateDefinition g;
  g.name = "sklm";
  g.layout = ModeLayout{"c_h", "c_v", "t_h", "t_v", "a", "b", "v1", "v2"};
  const double t1 = SklmAngles::theta1(), t2 = SklmAngles::theta2(), q = pi / 4;
  // Written product, rightmost first:
  // B_{t_h t_v}(q) B_{c_v t_h}(q) B_{b t_h}(t2) B_{a c_v}(t2)
  // B_{c_v t_h}(q) B_{t_h v2}(t1) B_{t_h t_v}(q) B_{v1 c_v}(t1)
  g.circuit.then(Beamsplitter{t1, "v1", "c_v"})
      .then(Beamsplitter{q, "t_h", "t_v"})
      .then(Beamsplitter{t1, "t_h", "v2"})
      .then(Beamsplitter{q, "c_v", "t_h"})
      .then(Beamsplitter{t2, "a", "c_v"})
      .then(Beamsplitter{t2, "b", "t_h"})
      .then(Beamsplitter{q, "c_v", "t_h"})
      .then(Beamsplitter{q, "t_h", "t_v"});
  g.ancilla_kind = AncillaKind::PhotonPair;
  g.ancilla_modes = {"a", "b"};
  g.ancilla_prep = photon_pair_prep(g.layout);
  g.accept = DetectorPattern{{
      single_mode("a", Outcome::exactly(1)),
      single_mode("b", Outcome::exactly(1)),
      single_mode("v1", Outcome::exactly(0)),
      single_mode("v2", Outcome::exactly(0)),
  }};
  g.coincidence = four_fold({"a"}, {"b"});
  g.nominal_success = sklm_success_probability();
  return g;
}

GateDefinition pjf_gate() {
  GateDefinition g;
  g.name = "pjf";
  // d and e are the vertical outputs of the analyzer PBSs on b and a.
  g.layout = ModeLayout{"c_h", "c_v", "t_h", "t_v", "a_h", "a_v", "b_h", "b_v", "d", "e"};
  // Written product, rightmost first:
  // P_bd P_ae W_a W_t W_b P_bt W_t W_b P_ac
  g.circuit.then(PolarizingBS{"a_h", "a_v", "c_h", "c_v"})
      .then(HalfWavePlate{"b_h", "b_v"})
      .then(HalfWavePlate{"t_h", "t_v"})
      .then(PolarizingBS{"b_h", "b_v", "t_h", "t_v"})
      .then(HalfWavePlate{"b_h", "b_v"})
      .then(HalfWavePlate{"t_h", "t_v"})
      .then(HalfWavePlate{"a_h", "a_v"})
      .then(PolarizingBS{"a_h", "a_v", "", "e"})
      .then(PolarizingBS{"b_h", "b_v", "", "d"});
  g.ancilla_kind = AncillaKind::EntangledPair;
  g.ancilla_modes = {"a_h", "b_h", "a_v", "b_v"};
  {
    SparseState prep(g.layout, 2);
    prep.add(make_occupation(g.layout, {{"a_h", 1}, {"b_h", 1}}), 1.0 / std::sqrt(2.0));
    prep.add(make_occupation(g.layout, {{"a_v", 1}, {"b_v", 1}}), 1.0 / std::sqrt(2.0));
    g.ancilla_prep = std::move(prep);
  }
  g.coincidence = four_fold({"a_h", "a_v"}, {"b_h", "b_v"});
  g.nominal_success = 1.0 / 16.0;
  g.accept = find_accept_pattern(g, AcceptSearch{{{"a_h", "a_v"}, {"b_h", "b_v"}}, {"d", "e"}});
  return g;
}

GateDefinition knill_gate() {
  GateDefinition g;
  g.name = "knill";
  g.layout = ModeLayout{"c_h", "c_v", "t_h", "t_v", "a", "b"};
  const double t1 = KnillAngles::theta1(), t2 = KnillAngles::theta2();
  const double t3 = KnillAngles::theta3(), q = pi / 4;
  // Written product, rightmost first:
  // B_{t_v t_h}(q) B_{ab}(t3) B_{c_v t_v}(t2) B_{t_v b}(t1) B_{c_v a}(t1) B_{t_v t_h}(q) F_a(pi)
  g.circuit.then(PhaseShift{pi, "a"})
      .then(Beamsplitter{q, "t_v", "t_h"})
      .then(Beamsplitter{t1, "c_v", "a"})
      .then(Beamsplitter{t1, "t_v", "b"})
      .then(Beamsplitter{t2, "c_v", "t_v"})
      .then(Beamsplitter{t3, "a", "b"})
      .then(Beamsplitter{q, "t_v", "t_h"});
  g.ancilla_kind = AncillaKind::PhotonPair;
  g.ancilla_modes = {"a", "b"};
  g.ancilla_prep = photon_pair_prep(g.layout);
  g.accept = DetectorPattern{{
      single_mode("a", Outcome::exactly(1)),
      single_mode("b", Outcome::exactly(1)),
  }};
  g.coincidence = four_fold({"a"}, {"b"});
  g.nominal_success = 2.0 / 27.0;
  return g;
}

GateDefinition gate_by_name(std::string_view name) {
  if (name == "sklm") return sklm_gate();
  if (name == "pjf") return pjf_gate();
  if (name == "knill") return knill_gate();
  throw Error("unknown gate '" + std::string(name) + "'");
}

std::vector<std::string> gate_names() { return {"sklm", "pjf", "knill"}; }

const ModeLayout& qubit_layout() {
  static const ModeLayout layout{"c_h", "c_v", "t_h", "t_v"};
  return layout;
}

SparseState ideal_cnot(const QubitAmplitudes& control, const QubitAmplitudes& target) {
  control.check();
  target.check();
  const auto& l = qubit_layout();
  SparseState s(l, 2);
  s.add(make_occupation({1, 0, 1, 0}), control.h * target.h);
  s.add(make_occupation({1, 0, 0, 1}), control.h * target.v);
  s.add(make_occupation({0, 1, 1, 0}), control.v * target.v);
  s.add(make_occupation({0, 1, 0, 1}), control.v * target.h);
  s.prune();
  return s;
}

ConditionedRun run_conditioned(const GateDefinition& gate, const QubitAmplitudes& control,
                               const QubitAmplitudes& target, unsigned n_max) {
  const auto input = assemble_input(gate, SourceSpec::single_photons(), control, target, n_max);
  const auto output = apply_circuit(input, gate.circuit);
  auto cond = conditional_state(output, gate.accept);
  return {embed(cond.state, qubit_layout()), cond.probability};
}

double concurrence(const SparseState& two_qubit) {
  const auto s = normalize(embed(two_qubit, qubit_layout()));
  const auto hh = s.amplitude(make_occupation({1, 0, 1, 0}));
  const auto hv = s.amplitude(make_occupation({1, 0, 0, 1}));
  const auto vh = s.amplitude(make_occupation({0, 1, 1, 0}));
  const auto vv = s.amplitude(make_occupation({0, 1, 0, 1}));
  return 2.0 * std::abs(hh * vv - hv * vh);
}

namespace {

std::vector<QubitAmplitudes> tomographic_inputs() {
  const double r = 1.0 / std::sqrt(2.0);
  return {QubitAmplitudes::horizontal(), QubitAmplitudes::vertical(), {r, r},
          {r, Amplitude(0.0, r)}};
}

}  // namespace

double cnot_map_deviation(const GateDefinition& gate, const DetectorPattern& accept) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<SparseState> produced;
  std::vector<SparseState> expected;
  for (const auto& c : tomographic_inputs()) {
    for (const auto& t : tomographic_inputs()) {
      const auto input = assemble_input(gate, SourceSpec::single_photons(), c, t, 4);
      const auto output = apply_circuit(input, gate.circuit);
      Conditioned cond{SparseState(qubit_layout(), 4), 0.0};
      try {
        cond = conditional_state(output, accept);
      } catch (const Error&) {
        return kInf;
      }
      if (!(cond.state.layout() == qubit_layout())) return kInf;
      produced.push_back(scale(cond.state, std::sqrt(cond.probability)));
      expected.push_back(ideal_cnot(c, t));
    }
  }
  const Amplitude phase = inner_product(expected.front(), produced.front());
  if (std::abs(phase) == 0.0) return kInf;
  double worst = 0.0;
  for (std::size_t k = 0; k < produced.size(); ++k) {
    const auto diff = add_scaled(produced[k], expected[k], -phase);
    worst = std::max(worst, diff.norm() / std::abs(phase));
  }
  return worst;
}

DetectorPattern find_accept_pattern(const GateDefinition& gate, const AcceptSearch& search) {
  std::vector<std::size_t> choice(search.groups.size(), 0);
  while (true) {
    DetectorPattern p;
    for (std::size_t g = 0; g < search.groups.size(); ++g) {
      for (std::size_t k = 0; k < search.groups[g].size(); ++k) {
        p.detectors.push_back(
            single_mode(search.groups[g][k], Outcome::exactly(k == choice[g] ? 1 : 0)));
      }
    }
    for (const auto& m : search.dark) p.detectors.push_back(single_mode(m, Outcome::exactly(0)));
    if (cnot_map_deviation(gate, p) < 1e-9) return p;

    std::size_t g = 0;
    while (g < choice.size() && ++choice[g] == search.groups[g].size()) choice[g++] = 0;
    if (g == choice.size()) break;
  }
  throw Error("no accepting pattern realizes CNOT for gate '" + gate.name + "'");
}

}  // namespace lopt
