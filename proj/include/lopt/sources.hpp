#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "lopt/fock.hpp"

namespace lopt {

struct GateDefinition;

// Polarization qubit h|h> + v|v>, |h|^2 + |v|^2 = 1.
struct QubitAmplitudes {
  Amplitude h = 1.0;
  Amplitude v = 0.0;

  static QubitAmplitudes horizontal() { return {1.0, 0.0}; }
  static QubitAmplitudes vertical() { return {0.0, 1.0}; }
  // cos(theta/2)|h> + e^{i phi} sin(theta/2)|v>
  static QubitAmplitudes bloch(double theta, double phi);

  void check() const;
};

enum class SourceVariant { SinglePhotons, TwoSPDC, SPDCPlusCoherent, DoubleCrystalPlusSPDC };

// Source strengths are dimensionless. lambda feeds the control/target pair;
// epsilon the ancilla pair (or the double crystal); alpha/beta the coherent
// ancillas on a and b.
struct SourceSpec {
  SourceVariant variant = SourceVariant::SinglePhotons;
  Amplitude lambda = 0.0;
  Amplitude epsilon = 0.0;
  Amplitude alpha = 0.0;
  Amplitude beta = 0.0;

  static SourceSpec single_photons() { return {}; }
  static SourceSpec two_spdc(Amplitude lambda, Amplitude epsilon) {
    return {SourceVariant::TwoSPDC, lambda, epsilon, 0.0, 0.0};
  }
  static SourceSpec spdc_plus_coherent(Amplitude lambda, Amplitude alpha, Amplitude beta) {
    return {SourceVariant::SPDCPlusCoherent, lambda, 0.0, alpha, beta};
  }
  static SourceSpec double_crystal_plus_spdc(Amplitude epsilon, Amplitude lambda) {
    return {SourceVariant::DoubleCrystalPlusSPDC, lambda, epsilon, 0.0, 0.0};
  }

  void check() const;
};

std::string to_string(SourceVariant v);
SourceVariant source_variant_from_string(std::string_view s);

// {variant, lambda, epsilon, alpha, beta}; complex strengths may be given as
// a number or as [re, im].
nlohmann::json source_to_json(const SourceSpec& src);
SourceSpec source_from_json(const nlohmann::json& j);

// sum_k lambda^k (a^dagger b^dagger)^k / k! |0>, truncated and normalized.
SparseState spdc_state(Amplitude lambda, const ModeLayout& layout, std::string_view mode_a,
                       std::string_view mode_b, unsigned n_max = kDefaultMaxPhotons);

// Two type-I crystals sharing one pump: product of SPDC expansions on
// (a_h, b_h) and (a_v, b_v) with equal phase, so the pair term is
// (|1100> + |0011>) in (a_h, b_h, a_v, b_v) order.
SparseState double_crystal_state(Amplitude epsilon, const ModeLayout& layout,
                                 std::string_view a_h, std::string_view b_h,
                                 std::string_view a_v, std::string_view b_v,
                                 unsigned n_max = kDefaultMaxPhotons);

// sum_n alpha^n (a^dagger)^n / n! |0>, truncated and normalized.
SparseState coherent_state(Amplitude alpha, const ModeLayout& layout, std::string_view mode,
                           unsigned n_max = kDefaultMaxPhotons);

// Rotates m_h^dagger -> q.h m_h^dagger + q.v m_v^dagger. The state may only
// populate m_h on this pair.
SparseState encode_qubit(const SparseState& state, std::string_view mode_h,
                         std::string_view mode_v, const QubitAmplitudes& q);

// Source output on the gate layout before qubit encoding: control and target
// photons sit in the h modes.
SparseState assemble_source(const GateDefinition& gate, const SourceSpec& src,
                            unsigned n_max = kDefaultMaxPhotons);

SparseState assemble_input(const GateDefinition& gate, const SourceSpec& src,
                           const QubitAmplitudes& control, const QubitAmplitudes& target,
                           unsigned n_max = kDefaultMaxPhotons);

}  // namespace lopt
