#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "lopt/detection.hpp"
#include "lopt/gates.hpp"
#include "lopt/optics.hpp"
#include "lopt/sources.hpp"

namespace lopt::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240611);
  return engine;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Amplitude gaussian_amplitude() {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng()), n(rng())};
}

inline QubitAmplitudes random_qubit() {
  const double theta = std::acos(uniform(-1.0, 1.0));
  return QubitAmplitudes::bloch(theta, uniform(0.0, 2 * std::numbers::pi));
}

// Normalized state with random amplitudes on every basis state up to n_max.
inline SparseState random_state(const ModeLayout& layout, unsigned n_max) {
  SparseState s(layout, n_max);
  for (const auto& occ : fock_basis(layout.size(), n_max)) s.add(occ, gaussian_amplitude());
  return normalize(s);
}

inline ModeMatrix random_unitary(std::size_t n) {
  Eigen::MatrixXcd g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) g(i, j) = gaussian_amplitude();
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return qr.householderQ();
}

inline Eigen::VectorXcd dense(const SparseState& s, const std::vector<Occupation>& basis) {
  Eigen::VectorXcd v(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) v(i) = s.amplitude(basis[i]);
  return v;
}

// Largest amplitude difference over the union of stored terms.
inline double max_abs_diff(const SparseState& a, const SparseState& b) {
  double worst = 0.0;
  for (const auto& [occ, amp] : a.terms()) worst = std::max(worst, std::abs(amp - b.amplitude(occ)));
  for (const auto& [occ, amp] : b.terms()) worst = std::max(worst, std::abs(amp - a.amplitude(occ)));
  return worst;
}

// Terms of the state that pass every detector of the pattern.
inline SparseState accepted_part(const SparseState& s, const DetectorPattern& pattern) {
  CompiledPattern compiled(pattern, s.layout());
  SparseState out(s.layout(), s.n_max());
  for (const auto& [occ, amp] : s.terms()) {
    if (compiled.accepts(occ)) out.add(occ, amp);
  }
  return out;
}

inline SparseState encode(const GateDefinition& gate, const SparseState& s,
                          const QubitAmplitudes& control, const QubitAmplitudes& target) {
  auto out = encode_qubit(s, gate.control.first, gate.control.second, control);
  return encode_qubit(out, gate.target.first, gate.target.second, target);
}

// c * prod (a_mode^dagger)^k |0> on the gate layout.
inline SparseState monomial(const GateDefinition& gate,
                            std::initializer_list<std::pair<std::string_view, unsigned>> powers,
                            Amplitude c = 1.0, unsigned n_max = kDefaultMaxPhotons) {
  return apply_monomial(vacuum(gate.layout, n_max), make_occupation(gate.layout, powers), c);
}

// Four-fold coincidence probability of one (encoded) input component.
inline double coincidence_of(const GateDefinition& gate, const SparseState& input) {
  return outcome_probability(apply_circuit(input, gate.circuit), gate.coincidence);
}

}  // namespace lopt::testing
