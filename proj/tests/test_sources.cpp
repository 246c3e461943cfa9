#include <doctest.h>

#include "support.hpp"

using namespace lopt;
using namespace lopt::testing;

TEST_SUITE("sources") {
  TEST_CASE("spdc") {
    const ModeLayout pair{"a", "b"};
    CHECK(max_abs_diff(spdc_state(0.0, pair, "a", "b"), vacuum(pair)) < 1e-15);

    const auto s = spdc_state(0.2, pair, "a", "b", 6);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const auto ratio = s.amplitude(make_occupation({2, 2})) / s.amplitude(make_occupation({1, 1}));
    CHECK(std::abs(ratio - 0.2) < 1e-14);
    for (const auto& [occ, amp] : s.terms()) CHECK(occ[0] == occ[1]);
  }

  TEST_CASE("double crystal") {
    const ModeLayout l{"a_h", "b_h", "a_v", "b_v"};
    CHECK(max_abs_diff(double_crystal_state(0.0, l, "a_h", "b_h", "a_v", "b_v"), vacuum(l)) < 1e-15);

    const double eps = 0.15;
    const auto s = double_crystal_state(eps, l, "a_h", "b_h", "a_v", "b_v", 6);
    const auto two = normalize(photon_sector(s, 2));
    SparseState bell(l, 6);
    bell.add(make_occupation({0, 0, 1, 1}), 1 / std::sqrt(2.0));
    bell.add(make_occupation({1, 1, 0, 0}), 1 / std::sqrt(2.0));
    CHECK(max_abs_diff(two, bell) < 1e-14);

    // eps^2 ((a_h b_h)^2 / 2 + a_h b_h a_v b_v + (a_v b_v)^2 / 2) |0>.
    const auto v = vacuum(l, 6);
    auto l4 = apply_monomial(v, make_occupation({2, 2, 0, 0}), 0.5 * eps * eps);
    l4 = add_scaled(l4, apply_monomial(v, make_occupation({1, 1, 1, 1}), eps * eps), 1.0);
    l4 = add_scaled(l4, apply_monomial(v, make_occupation({0, 0, 2, 2}), 0.5 * eps * eps), 1.0);
    const auto four = scale(photon_sector(s, 4), 1.0 / s.amplitude(Occupation{}));
    CHECK(four.size() == 3);
    CHECK(max_abs_diff(four, l4) < 1e-14);
    for (const auto& [occ, amp] : four.terms()) CHECK(std::abs(amp - eps * eps) < 1e-14);
  }

  TEST_CASE("coherent") {
    const ModeLayout one{"a"};
    CHECK(max_abs_diff(coherent_state(0.0, one, "a"), vacuum(one)) < 1e-15);

    const Amplitude alpha(0.3, -0.2);
    const auto s = coherent_state(alpha, one, "a", 6);
    const auto ratio = s.amplitude(make_occupation({2})) / s.amplitude(make_occupation({1}));
    CHECK(std::abs(ratio - alpha / std::sqrt(2.0)) < 1e-14);

    const auto small = coherent_state(0.1, one, "a", 6);
    double mean = 0.0;
    for (const auto& [occ, amp] : small.terms()) mean += occ[0] * std::norm(amp);
    CHECK(std::abs(mean - 0.01) < 1e-6);
  }

  TEST_CASE("qubit encoding") {
    const ModeLayout l{"h", "v"};
    const auto one = basis_state(l, make_occupation({1, 0}));
    CHECK(max_abs_diff(encode_qubit(one, "h", "v", QubitAmplitudes::horizontal()), one) < 1e-15);

    const double r = 1 / std::sqrt(2.0);
    const auto d = encode_qubit(one, "h", "v", {r, r});
    CHECK(std::abs(d.amplitude(make_occupation({1, 0})) - r) < 1e-15);
    CHECK(std::abs(d.amplitude(make_occupation({0, 1})) - r) < 1e-15);

    CHECK_THROWS_AS(encode_qubit(basis_state(l, make_occupation({0, 1})), "h", "v", {r, r}), Error);
    CHECK_THROWS_AS(QubitAmplitudes({1.0, 1.0}).check(), Error);
  }

  TEST_CASE("encoding an SPDC pair factorizes over control and target") {
    const ModeLayout l{"c_h", "c_v", "t_h", "t_v"};
    const auto A = random_qubit(), B = random_qubit();
    const double lambda = 0.2;
    auto s = spdc_state(lambda, l, "c_h", "t_h");
    s = encode_qubit(encode_qubit(s, "c_h", "c_v", A), "t_h", "t_v", B);
    const auto two = scale(photon_sector(s, 2), 1.0 / s.amplitude(Occupation{}));

    SparseState expected(l, 6);
    const auto v = vacuum(l, 6);
    const std::pair<Amplitude, unsigned> cs[] = {{A.h, 0}, {A.v, 1}};
    const std::pair<Amplitude, unsigned> ts[] = {{B.h, 2}, {B.v, 3}};
    for (const auto& [ca, ci] : cs) {
      for (const auto& [ta, ti] : ts) {
        Occupation p{};
        p[ci] = 1;
        p[ti] = 1;
        expected = add_scaled(expected, apply_monomial(v, p, lambda * ca * ta), 1.0);
      }
    }
    CHECK(max_abs_diff(two, expected) < 1e-14);
  }

  TEST_CASE("assembled inputs") {
    const auto gate = sklm_gate();
    const auto in = assemble_input(gate, SourceSpec::single_photons(), QubitAmplitudes::horizontal(),
                                   QubitAmplitudes::vertical());
    CHECK(in.size() == 1);
    CHECK(std::abs(in.amplitude(make_occupation(gate.layout, {{"c_h", 1}, {"t_v", 1}, {"a", 1}, {"b", 1}})) - 1.0) < 1e-15);

    const double lambda = 0.1, eps = 0.2;
    const auto two = assemble_source(gate, SourceSpec::two_spdc(lambda, eps));
    const auto four = photon_sector(two, 4);
    CHECK(four.size() == 3);
    const auto vac = two.amplitude(Occupation{});
    const auto amp = [&](std::initializer_list<std::pair<std::string_view, unsigned>> p) {
      return two.amplitude(make_occupation(gate.layout, p)) / vac;
    };
    CHECK(std::abs(amp({{"c_h", 2}, {"t_h", 2}}) - lambda * lambda) < 1e-15);
    CHECK(std::abs(amp({{"c_h", 1}, {"t_h", 1}, {"a", 1}, {"b", 1}}) - lambda * eps) < 1e-15);
    CHECK(std::abs(amp({{"a", 2}, {"b", 2}}) - eps * eps) < 1e-15);

    const double alpha = 0.25;
    const auto coh = assemble_source(gate, SourceSpec::spdc_plus_coherent(lambda, alpha, Amplitude(0, alpha)));
    const auto coh4 = photon_sector(coh, 4);
    CHECK(coh4.size() == 9);
    const auto signal = coh.amplitude(make_occupation(gate.layout, {{"c_h", 1}, {"t_h", 1}, {"a", 1}, {"b", 1}}));
    CHECK(std::abs(signal / coh.amplitude(Occupation{}) - lambda * alpha * Amplitude(0, alpha)) < 1e-15);
  }

  TEST_CASE("sources are unit norm after truncation") {
    for (const auto& name : gate_names()) {
      const auto gate = gate_by_name(name);
      for (int i = 0; i < 5; ++i) {
        const double l = uniform(0.0, 0.5), e = uniform(0.0, 0.5);
        SourceSpec src = gate.ancilla_kind == AncillaKind::EntangledPair
                             ? SourceSpec::double_crystal_plus_spdc(e, l)
                             : (i % 2 ? SourceSpec::two_spdc(l, e)
                                      : SourceSpec::spdc_plus_coherent(l, e, Amplitude(0, e)));
        for (unsigned n : {4u, 6u}) {
          CHECK(assemble_source(gate, src, n).norm() == doctest::Approx(1.0).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("incompatible sources and strengths are rejected") {
    CHECK_THROWS_AS(SourceSpec::two_spdc(1.0, 0.1).check(), Error);
    CHECK_THROWS_AS(assemble_source(pjf_gate(), SourceSpec::two_spdc(0.1, 0.1)), Error);
    CHECK_THROWS_AS(assemble_source(sklm_gate(), SourceSpec::double_crystal_plus_spdc(0.1, 0.1)), Error);
    CHECK_THROWS_AS(source_variant_from_string("laser"), Error);
  }

  TEST_CASE("source json round trip") {
    const auto src = SourceSpec::spdc_plus_coherent(0.1, 0.2, Amplitude(0, 0.2));
    const auto back = source_from_json(source_to_json(src));
    CHECK(back.variant == src.variant);
    CHECK(back.lambda == src.lambda);
    CHECK(back.alpha == src.alpha);
    CHECK(back.beta == src.beta);
  }
}
