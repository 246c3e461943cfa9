// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <thread>

#include "lopt/fixtures.hpp"
#include "lopt/visibility.hpp"
#include "support.hpp"

using namespace lopt;
using namespace lopt::testing;

namespace {

struct Result {
  bool pass;
  std::string detail;
};

const double kR = 1 / std::sqrt(2.0);

std::vector<std::pair<QubitAmplitudes, QubitAmplitudes>> truth_table_inputs() {
  const auto h = QubitAmplitudes::horizontal(), v = QubitAmplitudes::vertical();
  const QubitAmplitudes d{kR, kR};
  return {{h, h}, {h, v}, {v, h}, {v, v}, {d, h}, {d, d}};
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// 1. Ideal conditioned truth tables and success probabilities.
Result ideal_gates() {
  const auto fixtures = load_fixtures(LOPT_FIXTURES_PATH);
  const auto fresh = generate_fixtures();
  bool ok = diff_fixtures(fixtures, fresh).empty();
  double worst_fid = 1.0, worst_p = 0.0;
  for (const auto& name : gate_names()) {
    const auto gate = gate_by_name(name);
    const double target = name == "knill" ? 2.0 / 27
                          : name == "pjf" ? 1.0 / 16
                                          : find_fixture(fresh, "sklm").success_probability;
    for (const auto& [A, B] : truth_table_inputs()) {
      const auto run = run_conditioned(gate, A, B);
      worst_fid = std::min(worst_fid, fidelity(run.state, ideal_cnot(A, B)));
      worst_p = std::max(worst_p, std::abs(run.probability - target));
    }
  }
  ok = ok && worst_fid >= 1 - 1e-9 && worst_p <= 1e-9;
  return {ok, fmt("min fidelity %.15f, max |P1 - expected| %.2e", worst_fid, worst_p)};
}

// 2. sKLM two-pair error terms give no four-fold coincidences.
Result sklm_postselection() {
  const auto gate = sklm_gate();
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto A = random_qubit(), B = random_qubit();
    worst = std::max(worst, coincidence_of(gate, encode(gate, monomial(gate, {{"c_h", 2}, {"t_h", 2}}, 0.5), A, B)));
    worst = std::max(worst, coincidence_of(gate, encode(gate, monomial(gate, {{"a", 2}, {"b", 2}}, 0.5), A, B)));
  }
  return {worst < 1e-12, fmt("max contribution %.2e", worst)};
}

// 3. Coherent ancillas with beta = i alpha: the surviving four-photon error is
// the propagated i alpha^4 / 6 (a^3 b - a b^3) term for every qubit input.
Result coherent_cancellation() {
  const auto gate = sklm_gate();
  const double lambda = 0.1, alpha = 0.3;
  const Amplitude beta(0, alpha);
  const auto src = SourceSpec::spdc_plus_coherent(lambda, alpha, beta);

  auto residual = monomial(gate, {{"a", 3}, {"b", 1}}, Amplitude(0, std::pow(alpha, 4) / 6));
  residual = add_scaled(residual, monomial(gate, {{"a", 1}, {"b", 3}}, Amplitude(0, -std::pow(alpha, 4) / 6)), 1.0);
  const auto expected = accepted_part(photon_sector(apply_circuit(residual, gate.circuit), 4), gate.coincidence);

  double worst = 0.0, mixed = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto A = random_qubit(), B = random_qubit();
    const auto source = assemble_source(gate, src);
    const auto in = encode(gate, source, A, B);
    // Raw amplitudes relative to the vacuum term; drop the single-photon term.
    auto four = scale(photon_sector(in, 4), 1.0 / in.amplitude(Occupation{}));
    const auto signal = encode(gate, monomial(gate, {{"c_h", 1}, {"t_h", 1}, {"a", 1}, {"b", 1}}, lambda * alpha * beta), A, B);
    four = add_scaled(four, signal, -1.0);
    const auto surviving = accepted_part(apply_circuit(four, gate.circuit), gate.coincidence);
    worst = std::max(worst, max_abs_diff(surviving, expected));

    auto cross = monomial(gate, {{"c_h", 1}, {"t_h", 1}, {"a", 2}}, lambda * alpha * alpha / 2.0);
    cross = add_scaled(cross, monomial(gate, {{"c_h", 1}, {"t_h", 1}, {"b", 2}}, lambda * beta * beta / 2.0), 1.0);
    mixed = std::max(mixed, max_abs_diff(accepted_part(apply_circuit(encode(gate, cross, A, B), gate.circuit), gate.coincidence),
                                         SparseState(gate.layout, kDefaultMaxPhotons)));
  }
  const bool ok = worst <= 1e-10 && mixed <= 1e-10 && expected.norm() > 1e-4;
  return {ok, fmt("max residual mismatch %.2e, mixed-term amplitude %.2e, |residual| %.3e", worst, mixed, expected.norm())};
}

// 4. PJF surviving four-photon output against its closed form.
Result pjf_output() {
  const auto gate = pjf_gate();
  const auto& l = gate.layout;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double lambda = uniform(0.01, 0.3), eps = uniform(0.01, 0.3);
    const auto A = random_qubit(), B = random_qubit();
    const auto in = assemble_input(gate, SourceSpec::double_crystal_plus_spdc(eps, lambda), A, B);
    const auto out = apply_circuit(in, gate.circuit);
    const auto surviving = scale(accepted_part(photon_sector(out, 4), gate.coincidence), 1.0 / in.amplitude(Occupation{}));

    const Amplitude k = lambda / (2 * std::sqrt(2.0));
    const Amplitude mix = A.v * B.h * B.h * lambda - A.v * B.v * B.v * lambda;
    SparseState expected(l, kDefaultMaxPhotons);
    const auto add = [&](std::string_view c, std::string_view t, Amplitude amp) {
      expected.add(make_occupation(l, {{"a_h", 1}, {"b_h", 1}, {c, 1}, {t, 1}}), k * amp);
    };
    add("c_v", "t_v", A.v * B.h * eps);
    add("c_v", "t_h", A.v * B.v * eps);
    add("c_h", "t_v", A.h * (mix + B.v * eps));
    add("c_h", "t_h", A.h * (mix + B.h * eps));
    worst = std::max(worst, max_abs_diff(surviving, expected));
  }
  return {worst <= 1e-9, fmt("max amplitude mismatch %.2e", worst)};
}

// 5. sKLM visibility scaling with epsilon = lambda.
Result sklm_scaling() {
  const auto lambdas = Range{0.02, 0.3, 15}.values();
  const auto report = sklm_scaling_check(lambdas, 8);
  bool finite = true;
  for (const auto& r : report.records) finite = finite && r.error.empty() && r.V < 1.0;
  const bool ok = finite && std::abs(report.slope - 2.0) <= 0.1 && report.c > 0;
  return {ok, fmt("log-log slope %.4f, c = %.4f", report.slope, report.c)};
}

// 6. Interior visibility optimum for pjf and knill.
Result interior_optimum() {
  bool ok = true;
  std::string detail;
  for (const std::string gate : {"pjf", "knill"}) {
    for (double eps : {0.1, 0.2}) {
      SweepGrid grid;
      grid.gate = gate;
      grid.variant = gate == "pjf" ? SourceVariant::DoubleCrystalPlusSPDC : SourceVariant::TwoSPDC;
      grid.lambdas = Range{0.005, 0.2, 25}.values();
      grid.epsilons = {eps};
      grid.n_max = 6;
      grid.jobs = std::max(1u, std::thread::hardware_concurrency());
      const auto records = sweep(grid);
      std::size_t best = 0;
      bool clean = true;
      for (std::size_t i = 0; i < records.size(); ++i) {
        clean = clean && records[i].error.empty();
        if (records[i].V > records[best].V) best = i;
      }
      const bool interior = best > 0 && best + 1 < records.size() &&
                            records[best - 1].V < records[best].V && records[best + 1].V < records[best].V;
      bool unimodal = true;
      for (std::size_t i = 1; i < records.size(); ++i) {
        if (i <= best) unimodal = unimodal && records[i].V >= records[i - 1].V;
        else unimodal = unimodal && records[i].V <= records[i - 1].V;
      }
      ok = ok && clean && interior && unimodal;
      detail += "; " + gate + fmt(" eps=%.1f: max V %.4f at lambda %.4f", eps, records[best].V,
                                  records[best].source.lambda.real());
      if (!unimodal) detail += " (not unimodal)";
    }
  }
  return {ok, detail.substr(2)};
}

// 7. Knill c^2 t^2 contribution scales as lambda^4.
Result knill_scaling() {
  const auto gate = knill_gate();
  const auto A = QubitAmplitudes::bloch(1.1, 0.4), B = QubitAmplitudes::bloch(2.0, 1.3);
  const auto ct = make_occupation(gate.layout, {{"c_h", 2}, {"t_h", 2}});
  std::vector<double> xs, ys;
  for (double lambda : Range{0.01, 0.1, 10}.values()) {
    const auto source = assemble_source(gate, SourceSpec::two_spdc(lambda, 0.1));
    SparseState term(gate.layout, kDefaultMaxPhotons);
    term.add(ct, source.amplitude(ct));
    const double p = coincidence_of(gate, encode(gate, term, A, B));
    if (!(p > 0)) return {false, fmt("vanishing contribution at lambda %.3f", lambda)};
    xs.push_back(std::log(lambda));
    ys.push_back(std::log(p));
  }
  const double slope = fit_slope(xs, ys);
  return {std::abs(slope - 4.0) <= 0.05, fmt("log-log slope %.4f, contribution at lambda 0.1: %.3e", slope, std::exp(ys.back()))};
}

// 8. Fock-engine properties.
Result engine_properties() {
  double oracle = 0.0;
  for (std::size_t modes = 1; modes <= 6; ++modes) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < modes; ++i) names.push_back("m" + std::to_string(i));
    const ModeLayout layout(names);
    const auto u = random_unitary(modes);
    for (unsigned n_max = 1; n_max <= 4; ++n_max) {
      const auto dense_u = dense_lift_oracle(u, layout, n_max);
      const auto basis = fock_basis(modes, n_max);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const auto out = apply_mode_matrix(basis_state(layout, basis[k], n_max), u);
        oracle = std::max(oracle, (dense(out, basis) - dense_u.col(k)).cwiseAbs().maxCoeff());
      }
    }
  }

  const ModeLayout pair{"a", "b"};
  const auto hom = apply_element(basis_state(pair, make_occupation({1, 1})), Beamsplitter{std::numbers::pi / 4, "a", "b"});
  const double hom_amp = std::abs(hom.amplitude(make_occupation({1, 1})));

  const ModeLayout five{"a", "b", "c", "d", "e"};
  double conservation = 0.0, norm = 0.0, sum_rule = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = random_state(five, 3);
    const auto out = apply_mode_matrix(s, random_unitary(5));
    for (const auto& [occ, amp] : out.terms()) {
      if (occ.total() > 3) conservation = std::max(conservation, std::abs(amp));
    }
    for (unsigned n = 0; n <= 3; ++n) {
      conservation = std::max(conservation, std::abs(photon_sector(out, n).norm() - photon_sector(s, n).norm()));
    }
    norm = std::max(norm, std::abs(out.norm() - 1.0));
    double total = 0.0;
    for (unsigned mask = 0; mask < 32; ++mask) {
      DetectorPattern p;
      for (std::size_t i = 0; i < 5; ++i) {
        p.detectors.push_back(single_mode(five.name(i), (mask >> i) & 1 ? Outcome::click() : Outcome::no_click()));
      }
      total += outcome_probability(out, p);
    }
    sum_rule = std::max(sum_rule, std::abs(total - 1.0));
  }
  const bool ok = oracle <= 1e-10 && hom_amp <= 1e-12 && conservation <= 1e-10 && norm <= 1e-10 && sum_rule <= 1e-10;
  char buf[256];
  std::snprintf(buf, sizeof buf, "oracle %.1e, HOM |11> %.1e, conservation %.1e, norm %.1e, sum rule %.1e", oracle,
                hom_amp, conservation, norm, sum_rule);
  return {ok, buf};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Result()>> criteria[] = {
      {"1 ideal-gate correctness", ideal_gates},
      {"2 sKLM two-pair terms postselected out", sklm_postselection},
      {"3 coherent-ancilla cancellation", coherent_cancellation},
      {"4 PJF four-photon output oracle", pjf_output},
      {"5 sKLM visibility scaling", sklm_scaling},
      {"6 interior visibility optimum", interior_optimum},
      {"7 Knill two-pair term scaling", knill_scaling},
      {"8 engine property suite", engine_properties},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  criterion %s: %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", name, r.detail.c_str(), secs);
    std::fflush(stdout);
    failures += r.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
