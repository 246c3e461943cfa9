#pragma once

#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "lopt/fock.hpp"

namespace lopt {

// Reflection-convention beamsplitter: first -> first cos + second sin,
// second -> first sin - second cos. cos^2(theta) is the reflectivity.
struct Beamsplitter {
  double theta;
  std::string first;
  std::string second;
};

// Multiplies the creation operator of `mode` by exp(i theta).
struct PhaseShift {
  double theta;
  std::string mode;
};

// h -> cos2φ h + sin2φ v, v -> sin2φ h - cos2φ v. The default φ = π/8 is a
// Hadamard on the polarization pair.
struct HalfWavePlate {
  std::string mode_h;
  std::string mode_v;
  double angle = std::numbers::pi / 8;
};

// Horizontal modes pass, vertical modes v1 and v2 are exchanged. The h modes
// are carried for bookkeeping and may be empty for single-mode dump ports.
struct PolarizingBS {
  std::string h1;
  std::string v1;
  std::string h2;
  std::string v2;
};

using OpticalElement = std::variant<Beamsplitter, PhaseShift, HalfWavePlate, PolarizingBS>;

// Column i is the image of a_i^dagger: a_i^dagger -> sum_j M(j, i) a_j^dagger.
using ModeMatrix = Eigen::MatrixXcd;

// Elements in application order: elements.front() acts first. Operator
// products written right-to-left have to be reversed when building one.
struct Circuit {
  std::vector<OpticalElement> elements;

  Circuit& then(OpticalElement e) {
    elements.push_back(std::move(e));
    return *this;
  }
  std::size_t size() const { return elements.size(); }
};

void validate(const OpticalElement& element, const ModeLayout& layout);
void validate(const Circuit& circuit, const ModeLayout& layout);

ModeMatrix mode_matrix(const OpticalElement& element, const ModeLayout& layout);
// Product of all element matrices, later elements on the left.
ModeMatrix circuit_matrix(const Circuit& circuit, const ModeLayout& layout);

bool is_unitary(const ModeMatrix& m, double tol = 1e-9);

// Lifts the mode transformation to Fock space by multinomial expansion of
// every basis term. Throws on a non-unitary matrix.
SparseState apply_mode_matrix(const SparseState& state, const ModeMatrix& m);
SparseState apply_element(const SparseState& state, const OpticalElement& element);
SparseState apply_circuit(const SparseState& state, const Circuit& circuit);

// All occupations of `modes` modes with total <= n_max, ordered by total
// photon number then lexicographically descending (|10>, |01> for n = 1).
std::vector<Occupation> fock_basis(std::size_t modes, unsigned n_max);

inline constexpr std::size_t kDenseOracleLimit = 5000;

// Explicit Fock-space matrix of a mode transformation built from matrix
// permanents, <m|U|n> = per(M[m, n]) / sqrt(prod m! prod n!). Test-only
// reference path; rows and columns follow fock_basis().
Eigen::MatrixXcd dense_lift_oracle(const ModeMatrix& m, const ModeLayout& layout,
                                   unsigned n_max);

// Circuit files: [{"type": ..., "modes": [...], "theta": ...}, ...]
// type is one of beamsplitter, phase, hwp, pbs. pbs modes are
// [h1, v1, h2, v2] with null or "" allowed for the h entries.
nlohmann::json circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const nlohmann::json& j);

}  // namespace lopt
