#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lopt/gates.hpp"

namespace lopt {

struct SignalTerms {
  double p1;  // weight of the all-single-photon source term
  double P1;  // ideal conditioned success probability
  double s;   // p1 * P1
};

SignalTerms single_photon_signal(const GateDefinition& gate, const SourceSpec& src,
                                 unsigned n_max = kDefaultMaxPhotons);

// Four-fold coincidence probability for one product qubit input, by direct
// simulation of the encoded input state.
double coincidence_P(const GateDefinition& gate, const SourceSpec& src,
                     const QubitAmplitudes& control, const QubitAmplitudes& target,
                     unsigned n_max = kDefaultMaxPhotons);

// Detection probability as a function of the encoded qubits. Encoding maps
// c_h^k t_h^l to sums of monomials A_h^i A_v^(k-i) B_h^j B_v^(l-j) times fixed
// Fock vectors, so after propagating each monomial's vector once the
// probability is the Hermitian form m^H G m in the monomial values m.
class CoincidenceResponse {
 public:
  CoincidenceResponse(const GateDefinition& gate, const SparseState& source,
                      const DetectorPattern& pattern);
  CoincidenceResponse(const GateDefinition& gate, const SourceSpec& src, unsigned n_max);

  double probability(const QubitAmplitudes& control, const QubitAmplitudes& target) const;
  std::size_t monomials() const { return exponents_.size(); }

 private:
  std::vector<std::array<unsigned, 4>> exponents_;  // powers of A_h, A_v, B_h, B_v
  Eigen::MatrixXcd gram_;
};

struct OptimizerSettings {
  unsigned grid_points = 9;        // per Bloch angle
  double tolerance = 1e-8;         // relative spread of the simplex values
  unsigned max_evaluations = 2000; // refinement budget per point
};

// Bloch angles (theta_A, phi_A, theta_B, phi_B).
using BlochAngles = std::array<double, 4>;

struct ErrorSup {
  double e = 0.0;
  BlochAngles angles{};
  double grid_best = 0.0;
  unsigned evaluations = 0;
};

// sup over product inputs of |P - s|: coarse Bloch grid, then Nelder-Mead
// from the best grid point.
ErrorSup error_sup(const CoincidenceResponse& response, double s,
                   const OptimizerSettings& settings = {});
ErrorSup error_sup(const GateDefinition& gate, const SourceSpec& src,
                   unsigned n_max = kDefaultMaxPhotons, const OptimizerSettings& settings = {});

// V = ((s - e) / (s + e) + 1) / 2, i.e. s / (s + e).
double visibility_value(double s, double e);

struct VisibilityRecord {
  std::string gate;
  SourceSpec source;
  unsigned n_max = kDefaultMaxPhotons;
  double p1 = 0, P1 = 0, s = 0, e = 0, V = 0;
  BlochAngles argmax{};
  std::string error;  // non-empty if the point failed

  QubitAmplitudes argmax_control() const { return QubitAmplitudes::bloch(argmax[0], argmax[1]); }
  QubitAmplitudes argmax_target() const { return QubitAmplitudes::bloch(argmax[2], argmax[3]); }
};

VisibilityRecord visibility(const GateDefinition& gate, const SourceSpec& src,
                            unsigned n_max = kDefaultMaxPhotons,
                            const OptimizerSettings& settings = {});

// Inclusive linear range start:stop:count.
struct Range {
  double start = 0, stop = 0;
  unsigned count = 1;

  std::vector<double> values() const;
  static Range parse(std::string_view text);
};

struct SweepGrid {
  std::string gate;
  SourceVariant variant = SourceVariant::TwoSPDC;
  std::vector<double> lambdas;
  // Ancilla strengths: epsilon, or alpha (with beta = i alpha) for coherent ancillas.
  std::vector<double> epsilons;
  bool tie_epsilon_to_lambda = false;
  unsigned n_max = kDefaultMaxPhotons;
  OptimizerSettings optimizer;
  unsigned jobs = 1;

  void check() const;
  std::vector<SourceSpec> points() const;
};

// One record per grid point in epsilon-major order; failing points carry
// their error and do not stop the sweep.
std::vector<VisibilityRecord> sweep(const SweepGrid& grid);
// Same, with an explicit (possibly modified) gate in place of grid.gate.
std::vector<VisibilityRecord> sweep(const GateDefinition& gate, const SweepGrid& grid);

inline constexpr const char* kCsvHeader =
    "gate,source,lambda,epsilon,n_max,p1,P1,s,e,V,theta_A,phi_A,theta_B,phi_B";
void write_csv(std::ostream& out, const std::vector<VisibilityRecord>& records);

struct ScalingReport {
  std::vector<VisibilityRecord> records;
  double c = 0;            // least-squares fit of (1 - V) / V = c lambda^2
  double slope = 0;        // log-log slope of (1 - V) / V against lambda
  std::vector<double> residuals;  // V - 1 / (1 + c lambda^2)
};

// sKLM with two SPDC sources and epsilon = lambda.
ScalingReport sklm_scaling_check(const std::vector<double>& lambdas, unsigned n_max = 8,
                                 const OptimizerSettings& settings = {});

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace lopt
