#include "lopt/visibility.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <thread>

namespace lopt {

using std::numbers::pi;

SignalTerms single_photon_signal(const GateDefinition& gate, const SourceSpec& src,
                                 unsigned n_max) {
  const auto source = assemble_source(gate, src, n_max);
  const auto ideal = normalize(assemble_source(gate, SourceSpec::single_photons(), n_max));
  const double p1 = std::norm(inner_product(ideal, source));
  const double P1 =
      run_conditioned(gate, QubitAmplitudes::horizontal(), QubitAmplitudes::horizontal(), n_max)
          .probability;
  return {p1, P1, p1 * P1};
}

double coincidence_P(const GateDefinition& gate, const SourceSpec& src,
                     const QubitAmplitudes& control, const QubitAmplitudes& target,
                     unsigned n_max) {
  const auto input = assemble_input(gate, src, control, target, n_max);
  return outcome_probability(apply_circuit(input, gate.circuit), gate.coincidence);
}

CoincidenceResponse::CoincidenceResponse(const GateDefinition& gate, const SparseState& source,
                                         const DetectorPattern& pattern) {
  const auto& layout = gate.layout;
  const auto ch = layout.index(gate.control.first), cv = layout.index(gate.control.second);
  const auto th = layout.index(gate.target.first), tv = layout.index(gate.target.second);

  std::map<std::array<unsigned, 4>, SparseState> by_monomial;
  for (const auto& [occ, amp] : source.terms()) {
    if (occ[cv] != 0 || occ[tv] != 0) {
      throw Error("source populates a vertical qubit mode before encoding");
    }
    const unsigned k = occ[ch], l = occ[th];
    for (unsigned i = 0; i <= k; ++i) {
      for (unsigned j = 0; j <= l; ++j) {
        // (A_h c_h + A_v c_v)^k / sqrt(k!) |0> has Fock weight sqrt(C(k, i)) on
        // |i, k - i>, likewise for the target.
        const double weight = std::sqrt(std::tgamma(k + 1.0) / (std::tgamma(i + 1.0) *
                                                                std::tgamma(k - i + 1.0)) *
                                        std::tgamma(l + 1.0) /
                                        (std::tgamma(j + 1.0) * std::tgamma(l - j + 1.0)));
        Occupation encoded = occ;
        encoded[ch] = static_cast<std::uint8_t>(i);
        encoded[cv] = static_cast<std::uint8_t>(k - i);
        encoded[th] = static_cast<std::uint8_t>(j);
        encoded[tv] = static_cast<std::uint8_t>(l - j);
        const std::array<unsigned, 4> key{i, k - i, j, l - j};
        auto it = by_monomial.find(key);
        if (it == by_monomial.end()) {
          it = by_monomial.emplace(key, SparseState(layout, source.n_max())).first;
        }
        it->second.add(encoded, amp * weight);
      }
    }
  }

  const CompiledPattern compiled(pattern, layout);
  std::vector<SparseState> outputs;
  std::unordered_map<Occupation, Eigen::Index, OccupationHash> columns;
  for (auto& [key, state] : by_monomial) {
    exponents_.push_back(key);
    outputs.push_back(apply_circuit(state, gate.circuit));
    for (const auto& [occ, amp] : outputs.back().terms()) {
      if (compiled.accepts(occ) && !columns.contains(occ)) {
        columns.emplace(occ, static_cast<Eigen::Index>(columns.size()));
      }
    }
  }

  const auto rows = static_cast<Eigen::Index>(outputs.size());
  Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(rows, static_cast<Eigen::Index>(columns.size()));
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (const auto& [occ, amp] : outputs[static_cast<std::size_t>(r)].terms()) {
      auto it = columns.find(occ);
      if (it != columns.end()) phi(r, it->second) = amp;
    }
  }
  gram_ = phi.conjugate() * phi.transpose();
}

CoincidenceResponse::CoincidenceResponse(const GateDefinition& gate, const SourceSpec& src,
                                         unsigned n_max)
    : CoincidenceResponse(gate, assemble_source(gate, src, n_max), gate.coincidence) {}

double CoincidenceResponse::probability(const QubitAmplitudes& control,
                                        const QubitAmplitudes& target) const {
  // Integer powers; std::pow on a complex zero base yields NaN even for 0^0.
  const auto ipow = [](Amplitude z, unsigned k) {
    Amplitude out = 1.0;
    for (unsigned i = 0; i < k; ++i) out *= z;
    return out;
  };
  const auto n = static_cast<Eigen::Index>(exponents_.size());
  Eigen::VectorXcd m(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& e = exponents_[static_cast<std::size_t>(r)];
    m(r) = ipow(control.h, e[0]) * ipow(control.v, e[1]) * ipow(target.h, e[2]) *
           ipow(target.v, e[3]);
  }
  return (m.adjoint() * gram_ * m)(0, 0).real();
}

namespace {

BlochAngles canonical(BlochAngles a) {
  for (int q = 0; q < 2; ++q) {
    double& theta = a[2 * q];
    double& phi = a[2 * q + 1];
    theta = std::fmod(theta, 2 * pi);
    if (theta < 0) theta += 2 * pi;
    if (theta > pi) {
      theta = 2 * pi - theta;
      phi += pi;
    }
    phi = std::fmod(phi, 2 * pi);
    if (phi < 0) phi += 2 * pi;
  }
  return a;
}

struct Simplex {
  std::array<BlochAngles, 5> x;
  std::array<double, 5> f;  // objective negated: lower is better
};

// Nelder-Mead minimization of g, starting from a simplex around x0.
template <class F>
std::pair<BlochAngles, double> nelder_mead(F&& g, const BlochAngles& x0, double f0, double step,
                                           double tol, unsigned budget, unsigned& evaluations) {
  constexpr std::size_t n = 4;
  Simplex s;
  s.x[0] = x0;
  s.f[0] = f0;
  for (std::size_t i = 0; i < n; ++i) {
    s.x[i + 1] = x0;
    s.x[i + 1][i] += step;
    s.f[i + 1] = g(s.x[i + 1]);
  }
  auto lincomb = [](const BlochAngles& a, const BlochAngles& b, double t) {
    BlochAngles out;
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  };

  while (evaluations < budget) {
    std::array<std::size_t, 5> order{0, 1, 2, 3, 4};
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return s.f[a] < s.f[b]; });
    Simplex sorted;
    for (std::size_t i = 0; i <= n; ++i) {
      sorted.x[i] = s.x[order[i]];
      sorted.f[i] = s.f[order[i]];
    }
    s = sorted;

    const double spread = std::abs(s.f[n] - s.f[0]);
    if (spread <= tol * std::max(std::abs(s.f[0]), std::numeric_limits<double>::min())) break;

    BlochAngles centroid{};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) centroid[k] += s.x[i][k] / n;
    }
    const auto reflected = lincomb(centroid, s.x[n], -1.0);
    const double fr = g(reflected);
    if (fr < s.f[0]) {
      const auto expanded = lincomb(centroid, s.x[n], -2.0);
      const double fe = g(expanded);
      if (fe < fr) {
        s.x[n] = expanded;
        s.f[n] = fe;
      } else {
        s.x[n] = reflected;
        s.f[n] = fr;
      }
    } else if (fr < s.f[n - 1]) {
      s.x[n] = reflected;
      s.f[n] = fr;
    } else {
      const bool outside = fr < s.f[n];
      const auto contracted = outside ? lincomb(centroid, reflected, 0.5)
                                      : lincomb(centroid, s.x[n], 0.5);
      const double fc = g(contracted);
      if (fc < std::min(fr, s.f[n])) {
        s.x[n] = contracted;
        s.f[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          s.x[i] = lincomb(s.x[0], s.x[i], 0.5);
          s.f[i] = g(s.x[i]);
        }
      }
    }
  }
  const auto best = std::min_element(s.f.begin(), s.f.end()) - s.f.begin();
  return {s.x[static_cast<std::size_t>(best)], s.f[static_cast<std::size_t>(best)]};
}

}  // namespace

ErrorSup error_sup(const CoincidenceResponse& response, double s,
                   const OptimizerSettings& settings) {
  const unsigned points = std::max(settings.grid_points, 2u);
  auto objective = [&](const BlochAngles& a) {
    return std::abs(response.probability(QubitAmplitudes::bloch(a[0], a[1]),
                                         QubitAmplitudes::bloch(a[2], a[3])) -
                    s);
  };

  std::vector<double> thetas(points), phis(points);
  for (unsigned i = 0; i < points; ++i) {
    thetas[i] = pi * i / (points - 1);
    phis[i] = 2 * pi * i / points;
  }

  ErrorSup out;
  out.e = -1.0;
  for (double ta : thetas) {
    for (double pa : phis) {
      for (double tb : thetas) {
        for (double pb : phis) {
          const BlochAngles a{ta, pa, tb, pb};
          const double f = objective(a);
          ++out.evaluations;
          if (f > out.e) {
            out.e = f;
            out.angles = a;
          }
        }
      }
    }
  }
  out.grid_best = out.e;

  unsigned refine = 0;
  auto negated = [&](const BlochAngles& a) {
    ++refine;
    return -objective(a);
  };
  double step = pi / (points - 1) / 2;
  BlochAngles x = out.angles;
  double fx = -out.e;
  // One restart from the converged point guards against a collapsed simplex.
  for (int pass = 0; pass < 2 && refine < settings.max_evaluations; ++pass) {
    auto [xn, fn] = nelder_mead(negated, x, fx, step, settings.tolerance,
                                settings.max_evaluations, refine);
    if (fn <= fx) {
      x = xn;
      fx = fn;
    }
    step /= 4;
  }
  if (-fx > out.e) {
    out.e = -fx;
    out.angles = x;
  }
  out.angles = canonical(out.angles);
  out.evaluations += refine;
  return out;
}

ErrorSup error_sup(const GateDefinition& gate, const SourceSpec& src, unsigned n_max,
                   const OptimizerSettings& settings) {
  const auto signal = single_photon_signal(gate, src, n_max);
  return error_sup(CoincidenceResponse(gate, src, n_max), signal.s, settings);
}

double visibility_value(double s, double e) {
  if (s < 0 || e < 0) throw Error("signal and error must be non-negative");
  if (s + e == 0.0) throw Error("visibility undefined for s = e = 0");
  return 0.5 * ((s - e) / (s + e) + 1.0);
}

VisibilityRecord visibility(const GateDefinition& gate, const SourceSpec& src, unsigned n_max,
                            const OptimizerSettings& settings) {
  VisibilityRecord r;
  r.gate = gate.name;
  r.source = src;
  r.n_max = n_max;
  const auto signal = single_photon_signal(gate, src, n_max);
  r.p1 = signal.p1;
  r.P1 = signal.P1;
  r.s = signal.s;
  const auto sup = error_sup(CoincidenceResponse(gate, src, n_max), r.s, settings);
  r.e = sup.e;
  r.argmax = sup.angles;
  r.V = visibility_value(r.s, r.e);
  return r;
}

std::vector<double> Range::values() const {
  if (count == 0) throw Error("range count must be at least 1");
  std::vector<double> out(count);
  for (unsigned i = 0; i < count; ++i) {
    out[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  }
  return out;
}

Range Range::parse(std::string_view text) {
  auto number = [&](std::string_view part) {
    double v = 0;
    const auto* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw Error("bad number '" + std::string(part) + "'");
    return v;
  };
  const auto first = text.find(':');
  if (first == std::string_view::npos) {
    const double v = number(text);
    return {v, v, 1};
  }
  const auto second = text.find(':', first + 1);
  if (second == std::string_view::npos) throw Error("range must be start:stop:count");
  Range r;
  r.start = number(text.substr(0, first));
  r.stop = number(text.substr(first + 1, second - first - 1));
  const double count = number(text.substr(second + 1));
  if (count < 1 || count != std::floor(count)) throw Error("range count must be a positive integer");
  r.count = static_cast<unsigned>(count);
  return r;
}

void SweepGrid::check() const {
  if (lambdas.empty()) throw Error("empty lambda grid");
  if (!tie_epsilon_to_lambda && epsilons.empty() && variant != SourceVariant::SinglePhotons) {
    throw Error("empty epsilon grid");
  }
  for (double l : lambdas) {
    if (l < 0 || l >= 1) throw Error("lambda values must lie in [0, 1)");
  }
  for (double e : epsilons) {
    if (e < 0 || (e >= 1 && variant != SourceVariant::SPDCPlusCoherent)) {
      throw Error("epsilon values must lie in [0, 1)");
    }
  }
}

std::vector<SourceSpec> SweepGrid::points() const {
  check();
  auto make = [&](double lambda, double eps) {
    switch (variant) {
      case SourceVariant::SinglePhotons:
        return SourceSpec::single_photons();
      case SourceVariant::TwoSPDC:
        return SourceSpec::two_spdc(lambda, eps);
      case SourceVariant::SPDCPlusCoherent:
        return SourceSpec::spdc_plus_coherent(lambda, eps, Amplitude(0.0, eps));
      case SourceVariant::DoubleCrystalPlusSPDC:
        return SourceSpec::double_crystal_plus_spdc(eps, lambda);
    }
    throw Error("unhandled source variant");
  };
  std::vector<SourceSpec> out;
  if (tie_epsilon_to_lambda) {
    for (double l : lambdas) out.push_back(make(l, l));
  } else if (variant == SourceVariant::SinglePhotons) {
    out.push_back(make(0, 0));
  } else {
    for (double e : epsilons) {
      for (double l : lambdas) out.push_back(make(l, e));
    }
  }
  return out;
}

std::vector<VisibilityRecord> sweep(const SweepGrid& grid) {
  return sweep(gate_by_name(grid.gate), grid);
}

std::vector<VisibilityRecord> sweep(const GateDefinition& gate, const SweepGrid& grid) {
  const auto points = grid.points();
  std::vector<VisibilityRecord> records(points.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        records[i] = visibility(gate, points[i], grid.n_max, grid.optimizer);
      } catch (const std::exception& ex) {
        VisibilityRecord r;
        r.gate = gate.name;
        r.source = points[i];
        r.n_max = grid.n_max;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.p1 = r.P1 = r.s = r.e = r.V = nan;
        r.argmax = {nan, nan, nan, nan};
        r.error = ex.what();
        records[i] = std::move(r);
      }
    }
  };
  const unsigned jobs = std::clamp<unsigned>(grid.jobs, 1, static_cast<unsigned>(points.size()));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return records;
}

namespace {

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<VisibilityRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    const double ancilla = r.source.variant == SourceVariant::SPDCPlusCoherent
                               ? r.source.alpha.real()
                               : r.source.epsilon.real();
    out << r.gate << ',' << to_string(r.source.variant) << ',' << fmt12(r.source.lambda.real())
        << ',' << fmt12(ancilla) << ',' << r.n_max << ',' << fmt12(r.p1) << ',' << fmt12(r.P1)
        << ',' << fmt12(r.s) << ',' << fmt12(r.e) << ',' << fmt12(r.V);
    for (double a : r.argmax) out << ',' << fmt12(a);
    out << '\n';
  }
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("slope fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw Error("slope fit needs distinct x values");
  return sxy / sxx;
}

ScalingReport sklm_scaling_check(const std::vector<double>& lambdas, unsigned n_max,
                                 const OptimizerSettings& settings) {
  SweepGrid grid;
  grid.gate = "sklm";
  grid.variant = SourceVariant::TwoSPDC;
  grid.lambdas = lambdas;
  grid.tie_epsilon_to_lambda = true;
  grid.n_max = n_max;
  grid.optimizer = settings;
  grid.jobs = std::max(1u, std::thread::hardware_concurrency());

  ScalingReport report;
  report.records = sweep(grid);
  std::vector<double> lx, ly;
  double num = 0, den = 0;
  for (const auto& r : report.records) {
    if (!r.error.empty()) throw Error("scaling point failed: " + r.error);
    const double l = r.source.lambda.real();
    const double ratio = (1 - r.V) / r.V;
    lx.push_back(std::log(l));
    ly.push_back(std::log(ratio));
    num += ratio * l * l;
    den += l * l * l * l;
  }
  report.c = num / den;
  report.slope = fit_slope(lx, ly);
  for (const auto& r : report.records) {
    const double l = r.source.lambda.real();
    report.residuals.push_back(r.V - 1.0 / (1.0 + report.c * l * l));
  }
  return report;
}

}  // namespace lopt
