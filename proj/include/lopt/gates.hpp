#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lopt/detection.hpp"
#include "lopt/fock.hpp"
#include "lopt/optics.hpp"
#include "lopt/sources.hpp"

namespace lopt {

// How ancilla photons are supplied: one photon each in single modes a and b,
// or a polarization-entangled pair over (a_h, b_h, a_v, b_v).
enum class AncillaKind { PhotonPair, EntangledPair };

struct GateDefinition {
  std::string name;
  ModeLayout layout;
  Circuit circuit;
  std::pair<std::string, std::string> control{"c_h", "c_v"};
  std::pair<std::string, std::string> target{"t_h", "t_v"};
  AncillaKind ancilla_kind = AncillaKind::PhotonPair;
  // PhotonPair: {a, b}. EntangledPair: {a_h, b_h, a_v, b_v}.
  std::vector<std::string> ancilla_modes;
  // Ideal ancilla preparation on the full layout, vacuum on control/target.
  SparseState ancilla_prep;
  // Exact pattern for heralded operation.
  DetectorPattern accept;
  // Non-selective four-fold coincidence pattern.
  DetectorPattern coincidence;
  double nominal_success = 0.0;
};

// Closed-form beamsplitter angles.
struct SklmAngles {
  static double theta1();  // arccos sqrt(5 - 3 sqrt 2)
  static double theta2();  // arccos sqrt((3 - sqrt 2) / 7)
};
struct KnillAngles {
  static double theta1();  // arccos sqrt(1/3)
  static double theta2();  // -theta1
  static double theta3();  // arccos sqrt(1/2 + 1/sqrt 6)
};

// Exact success probability of the simplified KLM gate with ideal inputs,
// ((3 - sqrt 2) / 7)^2.
double sklm_success_probability();

GateDefinition sklm_gate();
GateDefinition pjf_gate();
GateDefinition knill_gate();

GateDefinition gate_by_name(std::string_view name);
std::vector<std::string> gate_names();

const ModeLayout& qubit_layout();

// A_h B_h |hh> + A_h B_v |hv> + A_v B_v |vh> + A_v B_h |vv> on (c_h, c_v, t_h, t_v).
SparseState ideal_cnot(const QubitAmplitudes& control, const QubitAmplitudes& target);

struct ConditionedRun {
  SparseState state;  // on qubit_layout()
  double probability;
};

// Ideal single-photon inputs through the circuit, conditioned on gate.accept.
ConditionedRun run_conditioned(const GateDefinition& gate, const QubitAmplitudes& control,
                               const QubitAmplitudes& target,
                               unsigned n_max = kDefaultMaxPhotons);

double concurrence(const SparseState& two_qubit);

// Candidate groups of ancilla detection modes: exactly one mode per group
// receives the photon, the others and every `dark` mode must stay empty.
struct AcceptSearch {
  std::vector<std::vector<std::string>> groups;
  std::vector<std::string> dark;
};

// Returns the first pattern under which the conditioned map equals CNOT up to
// a global phase on a tomographically complete product-input set. Throws if
// none exists.
DetectorPattern find_accept_pattern(const GateDefinition& gate, const AcceptSearch& search);

// Largest deviation of the conditioned map from CNOT on the tomographic set,
// relative to the success amplitude; 0 for an exact CNOT.
double cnot_map_deviation(const GateDefinition& gate, const DetectorPattern& accept);

}  // namespace lopt
