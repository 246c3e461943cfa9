#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "lopt/fixtures.hpp"
#include "lopt/gates.hpp"

using namespace lopt;

TEST_SUITE("fixtures") {
  TEST_CASE("committed fixtures match regeneration") {
    const auto committed = load_fixtures(LOPT_FIXTURES_PATH);
    const auto fresh = generate_fixtures();
    CHECK(diff_fixtures(committed, fresh).empty());
    CHECK(find_fixture(committed, "sklm").success_probability ==
          doctest::Approx(sklm_success_probability()).epsilon(1e-12));
    CHECK(find_fixture(committed, "pjf").success_probability == doctest::Approx(1.0 / 16).epsilon(1e-12));
    for (const auto& f : committed) {
      CHECK_FALSE(f.provenance.empty());
      CHECK_FALSE(f.generated_at.empty());
    }
  }

  TEST_CASE("corrupted fixtures are reported") {
    auto fixtures = generate_fixtures();
    auto broken = fixtures;
    broken[0].success_probability += 1e-6;
    broken[1].accept_pattern.detectors.pop_back();
    CHECK(diff_fixtures(broken, fixtures).size() == 2);
    broken.pop_back();
    CHECK(diff_fixtures(broken, fixtures).size() == 3);
    CHECK_THROWS_AS(find_fixture(broken, "knill"), Error);
  }

  TEST_CASE("round trip through a file") {
    const auto fixtures = generate_fixtures();
    const auto path = std::filesystem::temp_directory_path() / "lopt_fixture_roundtrip.json";
    save_fixtures(path.string(), fixtures);
    const auto back = load_fixtures(path.string());
    std::filesystem::remove(path);
    CHECK(diff_fixtures(back, fixtures).empty());
    CHECK(back[0].generated_at == fixtures[0].generated_at);
    CHECK_THROWS_AS(load_fixtures("/nonexistent/fixtures.json"), Error);
  }
}
