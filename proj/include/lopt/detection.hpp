#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lopt/fock.hpp"

namespace lopt {

enum class OutcomeKind { NoClick, Click, Exactly };

// Non-selective detectors resolve NoClick (projector onto |0>) versus Click
// (sum over n >= 1). Exactly(k) models a number-resolving detector.
struct Outcome {
  OutcomeKind kind = OutcomeKind::Click;
  unsigned count = 0;

  static Outcome no_click() { return {OutcomeKind::NoClick, 0}; }
  static Outcome click() { return {OutcomeKind::Click, 0}; }
  static Outcome exactly(unsigned k) { return {OutcomeKind::Exactly, k}; }

  bool accepts(unsigned photons) const;
  bool operator==(const Outcome&) const = default;
};

// A detector watches a bucket of modes and sees only their total photon number.
struct Detector {
  std::string name;
  std::vector<std::string> modes;
  Outcome outcome;

  bool operator==(const Detector&) const = default;
};

struct DetectorPattern {
  std::vector<Detector> detectors;

  bool operator==(const DetectorPattern&) const = default;
};

Detector single_mode(std::string mode, Outcome outcome);
Detector bucket(std::string name, std::vector<std::string> modes, Outcome outcome);

// Throws on unknown modes, overlapping buckets or an empty bucket.
void validate(const DetectorPattern& pattern, const ModeLayout& layout);

// Pattern resolved to mode indices for repeated evaluation.
class CompiledPattern {
 public:
  CompiledPattern(const DetectorPattern& pattern, const ModeLayout& layout);
  bool accepts(const Occupation& occ) const;

 private:
  std::vector<std::pair<std::vector<std::size_t>, Outcome>> detectors_;
};

// Sum of |amplitude|^2 over terms satisfying every detector. Modes outside
// all detectors are traced out.
double outcome_probability(const SparseState& state, const DetectorPattern& pattern);

struct Conditioned {
  SparseState state;
  double probability;
};

// Projects onto the Exactly outcomes, drops the measured modes from the
// layout and renormalizes. Multi-mode buckets are only allowed for Exactly(0),
// since any other count would leave a mixed remainder.
Conditioned conditional_state(const SparseState& state, const DetectorPattern& pattern);

struct CoincidenceTable {
  double hh = 0, hv = 0, vh = 0, vv = 0;
  double total() const { return hh + hv + vh + vv; }
};

// Polarization-resolved joint click probabilities on the control and target
// pairs (exactly one mode of each pair clicks) together with the ancilla
// pattern. Not normalized.
CoincidenceTable coincidence_table(const SparseState& state,
                                   const std::pair<std::string, std::string>& control,
                                   const std::pair<std::string, std::string>& target,
                                   const DetectorPattern& ancilla);

// [{detector, modes, outcome: "click" | "noclick" | {"exactly": k}}, ...]
nlohmann::json pattern_to_json(const DetectorPattern& pattern);
DetectorPattern pattern_from_json(const nlohmann::json& j);

}  // namespace lopt
