#include "lopt/sources.hpp"

#include <cmath>

#include "lopt/gates.hpp"
#include "lopt/optics.hpp"

namespace lopt {

QubitAmplitudes QubitAmplitudes::bloch(double theta, double phi) {
  return {std::cos(theta / 2), std::polar(std::sin(theta / 2), phi)};
}

void QubitAmplitudes::check() const {
  const double n = std::norm(h) + std::norm(v);
  if (std::abs(n - 1.0) > 1e-12) throw Error("qubit amplitudes are not normalized");
}

void SourceSpec::check() const {
  if (std::abs(lambda) >= 1.0 || std::abs(epsilon) >= 1.0) {
    throw Error("SPDC strengths must satisfy |lambda|, |epsilon| < 1");
  }
}

std::string to_string(SourceVariant v) {
  switch (v) {
    case SourceVariant::SinglePhotons:
      return "single-photons";
    case SourceVariant::TwoSPDC:
      return "two-spdc";
    case SourceVariant::SPDCPlusCoherent:
      return "spdc-coherent";
    case SourceVariant::DoubleCrystalPlusSPDC:
      return "double-crystal";
  }
  return "unknown";
}

SourceVariant source_variant_from_string(std::string_view s) {
  for (auto v : {SourceVariant::SinglePhotons, SourceVariant::TwoSPDC,
                 SourceVariant::SPDCPlusCoherent, SourceVariant::DoubleCrystalPlusSPDC}) {
    if (to_string(v) == s) return v;
  }
  throw Error("unknown source variant '" + std::string(s) + "'");
}

namespace {

nlohmann::json complex_to_json(Amplitude z) {
  if (z.imag() == 0.0) return z.real();
  return nlohmann::json::array({z.real(), z.imag()});
}

Amplitude complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw Error("expected a number or [re, im], got " + j.dump());
}

}  // namespace

nlohmann::json source_to_json(const SourceSpec& src) {
  return {{"variant", to_string(src.variant)},
          {"lambda", complex_to_json(src.lambda)},
          {"epsilon", complex_to_json(src.epsilon)},
          {"alpha", complex_to_json(src.alpha)},
          {"beta", complex_to_json(src.beta)}};
}

SourceSpec source_from_json(const nlohmann::json& j) {
  SourceSpec s;
  s.variant = source_variant_from_string(j.at("variant").get<std::string>());
  if (j.contains("lambda")) s.lambda = complex_from_json(j["lambda"]);
  if (j.contains("epsilon")) s.epsilon = complex_from_json(j["epsilon"]);
  if (j.contains("alpha")) s.alpha = complex_from_json(j["alpha"]);
  if (j.contains("beta")) s.beta = complex_from_json(j["beta"]);
  s.check();
  return s;
}

SparseState spdc_state(Amplitude lambda, const ModeLayout& layout, std::string_view mode_a,
                       std::string_view mode_b, unsigned n_max) {
  if (std::abs(lambda) >= 1.0) throw Error("SPDC strength must satisfy |lambda| < 1");
  const auto a = layout.index(mode_a), b = layout.index(mode_b);
  SparseState s(layout, n_max);
  Amplitude coeff = 1.0;
  // (a^dagger b^dagger)^k / k! |0> = |k, k>, so the Fock amplitude is lambda^k.
  for (unsigned k = 0; 2 * k <= n_max; ++k) {
    Occupation occ;
    occ[a] = static_cast<std::uint8_t>(k);
    occ[b] = static_cast<std::uint8_t>(k);
    s.add(occ, coeff);
    coeff *= lambda;
  }
  s.prune();
  return normalize(s);
}

SparseState double_crystal_state(Amplitude epsilon, const ModeLayout& layout,
                                 std::string_view a_h, std::string_view b_h,
                                 std::string_view a_v, std::string_view b_v, unsigned n_max) {
  if (std::abs(epsilon) >= 1.0) throw Error("SPDC strength must satisfy |epsilon| < 1");
  const auto ah = layout.index(a_h), bh = layout.index(b_h);
  const auto av = layout.index(a_v), bv = layout.index(b_v);
  SparseState s(layout, n_max);
  for (unsigned m = 0; 2 * m <= n_max; ++m) {
    for (unsigned k = 0; 2 * (m + k) <= n_max; ++k) {
      Occupation occ;
      occ[ah] = occ[bh] = static_cast<std::uint8_t>(m);
      occ[av] = occ[bv] = static_cast<std::uint8_t>(k);
      s.add(occ, std::pow(epsilon, m + k));
    }
  }
  s.prune();
  return normalize(s);
}

SparseState coherent_state(Amplitude alpha, const ModeLayout& layout, std::string_view mode,
                           unsigned n_max) {
  const auto a = layout.index(mode);
  SparseState s(layout, n_max);
  Amplitude coeff = 1.0;
  for (unsigned n = 0; n <= n_max; ++n) {
    Occupation occ;
    occ[a] = static_cast<std::uint8_t>(n);
    s.add(occ, coeff);
    coeff *= alpha / std::sqrt(double(n + 1));
  }
  s.prune();
  return normalize(s);
}

SparseState encode_qubit(const SparseState& state, std::string_view mode_h,
                         std::string_view mode_v, const QubitAmplitudes& q) {
  q.check();
  const auto& layout = state.layout();
  const auto h = static_cast<Eigen::Index>(layout.index(mode_h));
  const auto v = static_cast<Eigen::Index>(layout.index(mode_v));
  for (const auto& [occ, amp] : state.terms()) {
    if (occ[static_cast<std::size_t>(v)] != 0) {
      throw Error("encode_qubit expects mode '" + std::string(mode_v) + "' to be empty");
    }
  }
  const auto n = static_cast<Eigen::Index>(layout.size());
  ModeMatrix m = ModeMatrix::Identity(n, n);
  m(h, h) = q.h;
  m(v, h) = q.v;
  m(h, v) = -std::conj(q.v);
  m(v, v) = std::conj(q.h);
  return apply_mode_matrix(state, m);
}

namespace {

void require(bool ok, const GateDefinition& gate, const SourceSpec& src) {
  if (!ok) {
    throw Error("source '" + to_string(src.variant) + "' is not compatible with gate '" +
                gate.name + "'");
  }
}

}  // namespace

SparseState assemble_source(const GateDefinition& gate, const SourceSpec& src, unsigned n_max) {
  src.check();
  const std::string& ch = gate.control.first;
  const std::string& th = gate.target.first;
  const bool pair = gate.ancilla_kind == AncillaKind::PhotonPair;

  switch (src.variant) {
    case SourceVariant::SinglePhotons: {
      Occupation photons;
      photons[gate.layout.index(ch)] = 1;
      photons[gate.layout.index(th)] = 1;
      return apply_monomial(truncate(gate.ancilla_prep, n_max), photons);
    }
    case SourceVariant::TwoSPDC: {
      require(pair, gate, src);
      const ModeLayout ct{ch, th};
      const ModeLayout ab{gate.ancilla_modes.at(0), gate.ancilla_modes.at(1)};
      auto joint = tensor(spdc_state(src.lambda, ct, ch, th, n_max),
                          spdc_state(src.epsilon, ab, ab.name(0), ab.name(1), n_max));
      return normalize(embed(joint, gate.layout));
    }
    case SourceVariant::SPDCPlusCoherent: {
      require(pair, gate, src);
      const ModeLayout ct{ch, th};
      const ModeLayout a{gate.ancilla_modes.at(0)};
      const ModeLayout b{gate.ancilla_modes.at(1)};
      auto joint = tensor(tensor(spdc_state(src.lambda, ct, ch, th, n_max),
                                 coherent_state(src.alpha, a, a.name(0), n_max)),
                          coherent_state(src.beta, b, b.name(0), n_max));
      return normalize(embed(joint, gate.layout));
    }
    case SourceVariant::DoubleCrystalPlusSPDC: {
      require(gate.ancilla_kind == AncillaKind::EntangledPair, gate, src);
      const ModeLayout ct{ch, th};
      const auto& m = gate.ancilla_modes;
      const ModeLayout anc{m.at(0), m.at(1), m.at(2), m.at(3)};
      auto joint = tensor(spdc_state(src.lambda, ct, ch, th, n_max),
                          double_crystal_state(src.epsilon, anc, m[0], m[1], m[2], m[3], n_max));
      return normalize(embed(joint, gate.layout));
    }
  }
  throw Error("unhandled source variant");
}

SparseState assemble_input(const GateDefinition& gate, const SourceSpec& src,
                           const QubitAmplitudes& control, const QubitAmplitudes& target,
                           unsigned n_max) {
  auto s = assemble_source(gate, src, n_max);
  s = encode_qubit(s, gate.control.first, gate.control.second, control);
  return encode_qubit(s, gate.target.first, gate.target.second, target);
}

}  // namespace lopt
