#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "popdyn/model.hpp"

using namespace popdyn;
using doctest::Approx;

namespace {

PopulationModel plant() {
  return validate_model(fixture::plant_transition(), fixture::plant_fertility());
}

PopulationModel r0_zero_model() {
  return validate_model(fixture::mat2(0, 1, 0, 0), fixture::mat2(0, 1, 0, 0));
}

}  // namespace

TEST_CASE("validate_model: examples") {
  const auto m = plant();
  CHECK(m.warnings().empty());
  CHECK(m.transition_radius() == 0.0);

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(3, 3);
  t(1, 0) = 1.0;
  t(2, 0) = 0.5;
  const auto warned = validate_model(t, Eigen::MatrixXd::Identity(3, 3));
  REQUIRE(warned.warnings().size() == 1);
  CHECK(warned.warnings()[0].find("column 1") != std::string::npos);

  CHECK_THROWS_WITH_AS(validate_model(Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Ones(2, 2)),
                       doctest::Contains("rho(T) >= 1"), ValidationError);
}

TEST_CASE("validate_model: error paths") {
  CHECK_THROWS_WITH_AS(validate_model(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)),
                       "fertility matrix is zero", ValidationError);
  CHECK_THROWS_AS(validate_model(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Ones(3, 3)),
                  ValidationError);
  CHECK_THROWS_AS(validate_model(fixture::mat2(0, -0.1, 0, 0), Eigen::MatrixXd::Ones(2, 2)),
                  ValidationError);
  CHECK_THROWS_AS(validate_model(Eigen::MatrixXd::Zero(2, 2), fixture::mat2(0, -1, 1, 0)),
                  ValidationError);
}

TEST_CASE("next_generation_matrix: examples") {
  CHECK((next_generation_matrix(plant()) - fixture::plant_next_generation()).cwiseAbs().maxCoeff() <
        1e-12);

  const Eigen::MatrixXd f = fixture::mat2(1, 2, 3, 4);
  CHECK(next_generation_matrix(validate_model(Eigen::MatrixXd::Zero(2, 2), f)).isApprox(f));

  const Eigen::MatrixXd q = next_generation_matrix(r0_zero_model());
  // F (I + T) with T nilpotent of index 2.
  CHECK(q.isApprox(fixture::mat2(0, 1, 0, 0)));
}

TEST_CASE("analyze: plant") {
  const auto report = analyze(plant());
  CHECK(std::abs(report.r - std::sqrt(2.0) / 2) < 1e-9);
  CHECK(std::abs(report.r0 - 0.375) < 1e-10);
  CHECK(report.trichotomy == Trichotomy::Declining);
  CHECK(report.strict);
  CHECK(report.r0 < report.r);
  CHECK(report.structure.imprimitivity_index == 2);
  REQUIRE(report.q_pattern);
  CHECK(report.q_pattern->q11_indices == std::vector<int>{0, 2});
  REQUIRE(report.stability_residual);
  CHECK(*report.stability_residual < 1e-10);
}

TEST_CASE("analyze: reducible stationary example") {
  const auto report =
      analyze(validate_model(fixture::mat2(0, 0, 1, 0), Eigen::MatrixXd::Identity(2, 2)));
  CHECK(report.r == Approx(1.0).epsilon(1e-12));
  CHECK(report.r0 == Approx(1.0).epsilon(1e-12));
  CHECK(report.trichotomy == Trichotomy::Stationary);
  CHECK_FALSE(report.strict);
  CHECK_FALSE(report.q_pattern);
}

TEST_CASE("analyze: two-class Leslie model") {
  // 2 r^2 - 2 r - 1 = 0 gives r = (1 + sqrt 3) / 2.
  const auto report =
      analyze(validate_model(fixture::mat2(0, 0, 0.5, 0), fixture::mat2(1, 1, 0, 0)));
  CHECK(std::abs(report.r - (1 + std::sqrt(3.0)) / 2) < 1e-10);
  CHECK(std::abs(report.r0 - 1.5) < 1e-12);
  CHECK(report.trichotomy == Trichotomy::Growing);
  CHECK(report.strict);
}

TEST_CASE("analyze: zero transition matrix is never strict") {
  // P = F, Q = F, so r = R0 = 2 and only the weak ordering can hold.
  const auto report = analyze(validate_model(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Ones(2, 2)));
  CHECK(report.r == Approx(2.0).epsilon(1e-12));
  CHECK(report.r0 == Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(report.strict);
  CHECK(report.trichotomy == Trichotomy::Growing);
}

TEST_CASE("classify_growth: branches and inconsistencies") {
  CHECK(classify_growth(1.0, 1.0, true) == Trichotomy::Stationary);
  CHECK(classify_growth(1.2, 1.5, true) == Trichotomy::Growing);
  CHECK(classify_growth(0.7, 0.4, true) == Trichotomy::Declining);
  CHECK(classify_growth(0.0, 0.0, false) == Trichotomy::Declining);
  CHECK(classify_growth(1.3, 1.3, false) == Trichotomy::Growing);
  CHECK_THROWS_AS(classify_growth(1.3, 1.3, true), ConsistencyError);
  CHECK_THROWS_AS(classify_growth(1.5, 1.2, false), ConsistencyError);
  CHECK_THROWS_AS(classify_growth(0.5, 0.8, false), ConsistencyError);
  CHECK_THROWS_AS(classify_growth(0.5, 0.0, true), ConsistencyError);
}

TEST_CASE("stabilizing_scale: examples") {
  const auto scaled = stabilizing_scale(plant());
  CHECK((scaled.fertility() - fixture::plant_fertility() * 8.0 / 3.0).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(spectral_radius(scaled.projection()) == Approx(1.0).epsilon(1e-10));

  const auto stationary = validate_model(Eigen::MatrixXd::Constant(1, 1, 0.5), Eigen::MatrixXd::Constant(1, 1, 0.5));
  const auto same = stabilizing_scale(stationary);
  CHECK(std::abs(same.fertility()(0, 0) - 0.5) < 1e-9 * 0.5);

  // rho(T + aF) = 0 for every a: nothing to scale.
  const Eigen::MatrixXd nil = fixture::mat2(0, 1, 0, 0);
  for (double a : {1.0, 10.0, 1e6}) CHECK(oracle::char_poly_spectral_radius(nil + a * nil) == 0.0);
  CHECK_THROWS_AS(stabilizing_scale(r0_zero_model()), ValidationError);
}

TEST_CASE("target_growth_scale: plant closed forms") {
  const auto m = plant();
  SUBCASE("s = 1") {
    const auto t = target_growth_scale(m, 1.0);
    CHECK(std::abs(t.q - 0.375) < 1e-10);
    CHECK(std::abs(t.r0_scaled - 1.0) < 1e-10);
  }
  SUBCASE("s = growth rate") {
    const auto t = target_growth_scale(m, std::sqrt(2.0) / 2);
    CHECK(std::abs(t.q - 1.0) < 1e-9);
  }
  SUBCASE("s = 2") {
    const auto t = target_growth_scale(m, 2.0);
    CHECK(std::abs(t.q - 9.0 / 128.0) < 1e-12);
    CHECK(std::abs(t.r0_scaled - 16.0 / 3.0) < 1e-9);
    CHECK(std::abs(t.achieved_growth - 2.0) < 1e-10);
    const Eigen::VectorXd expected = fixture::normalized(fixture::vec({32, 8, 136, 36, 9}));
    CHECK((t.stable_population - expected).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("grid") {
    for (double s : {0.5, 0.8, 1.5, 3.0, 10.0})
      CHECK(std::abs(target_growth_scale(m, s).q - fixture::plant_q(s)) < 1e-9 * fixture::plant_q(s));
  }
}

TEST_CASE("target_growth_scale: domain and structure errors") {
  CHECK_THROWS_AS(target_growth_scale(plant(), 0.0), ValidationError);
  const auto m = validate_model(Eigen::MatrixXd::Constant(1, 1, 0.6), Eigen::MatrixXd::Constant(1, 1, 0.1));
  CHECK_THROWS_AS(target_growth_scale(m, 0.6), ValidationError);
  CHECK_NOTHROW(target_growth_scale(m, 0.61));
  CHECK_THROWS_AS(target_growth_scale(r0_zero_model(), 2.0), StructureError);
}

TEST_CASE("r0_positive: examples") {
  CHECK(r0_positive(plant()));
  CHECK_FALSE(r0_positive(r0_zero_model()));
  gen::Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = gen::random_irreducible(rng, gen::uniform_int(rng, 1, 8));
    CHECK(r0_positive(validate_model(m.transition, m.fertility)));
  }
}

TEST_CASE("wielandt_bracket: examples") {
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(2, 2);
  auto b = wielandt_bracket(ones, fixture::vec({1, 1}));
  CHECK(b.lo == 2.0);
  CHECK(b.hi == 2.0);
  b = wielandt_bracket(ones, fixture::vec({2, 1}));
  CHECK(b.lo == 1.5);
  CHECK(b.hi == 3.0);

  const Eigen::MatrixXd p = fixture::plant_transition() + fixture::plant_fertility();
  b = wielandt_bracket(p, fixture::plant_stable_population());
  CHECK(std::abs(b.lo - std::sqrt(2.0) / 2) < 1e-15);
  CHECK(std::abs(b.hi - std::sqrt(2.0) / 2) < 1e-15);

  CHECK_THROWS_AS(wielandt_bracket(ones, fixture::vec({1, 0})), ValidationError);
}

TEST_CASE("property: strict trichotomy on random irreducible models") {
  gen::Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const auto pair = gen::random_irreducible(rng, gen::uniform_int(rng, 1, 10));
    const auto m = validate_model(pair.transition, pair.fertility);
    const auto report = analyze(m);
    CHECK(report.strict);
    const bool stationary = std::abs(report.r - 1) <= 1e-9 && std::abs(report.r0 - 1) <= 1e-9;
    const bool growing = 1 < report.r && report.r < report.r0;
    const bool declining = 0 < report.r0 && report.r0 < report.r && report.r < 1;
    CHECK(int(stationary) + int(growing) + int(declining) == 1);
    const double rho = spectral_radius(Eigen::MatrixXd(m.transition() + m.fertility() / report.r0));
    CHECK(std::abs(rho - 1) <= 1e-8);
  }
}

TEST_CASE("property: weak trichotomy and R0 certificate on general models") {
  gen::Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const auto pair = gen::random_general(rng, gen::uniform_int(rng, 1, 8));
    const auto m = validate_model(pair.transition, pair.fertility);
    const auto report = analyze(m);
    const double r = report.r, r0 = report.r0;
    const bool ok = (std::abs(r - 1) <= 1e-9 && std::abs(r0 - 1) <= 1e-9) ||
                    (1 < r && r <= r0 + 1e-9) || (0 <= r0 && r0 <= r + 1e-9 && r < 1);
    CHECK(ok);
    CHECK(r0_positive(m) == (r0 > 1e-9));
  }
}

TEST_CASE("property: target growth scaling consistency") {
  gen::Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pair = gen::random_irreducible(rng, gen::uniform_int(rng, 1, 8));
    const auto m = validate_model(pair.transition, pair.fertility);
    const double r0 = analyze(m).r0;
    const double s = gen::uniform(rng, m.transition_radius() + 0.05, 3.0);
    const auto t = target_growth_scale(m, s);
    CHECK(std::abs(spectral_radius(t.scaled.projection()) - s) <= 1e-8 * std::max(1.0, s));
    CHECK(std::abs(t.r0_scaled - r0 / t.q) <= 1e-10 * std::max(1.0, t.r0_scaled));

    double previous = growth_scaling_factor(m, m.transition_radius() + 0.01);
    for (int k = 1; k <= 10; ++k) {
      const double q = growth_scaling_factor(m, m.transition_radius() + 0.01 + 0.3 * k);
      CHECK(q < previous);
      previous = q;
    }
    CHECK(growth_scaling_factor(m, 1024.0) < 1e-2 * growth_scaling_factor(m, 1.0));
  }
}

TEST_CASE("property: Wielandt bracket encloses the spectral radius") {
  gen::Rng rng(44);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = gen::uniform_int(rng, 1, 8);
    const auto pair = gen::random_irreducible(rng, n);
    const Eigen::MatrixXd a = pair.transition + pair.fertility;
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = gen::uniform(rng, 0.1, 2.0);
    const auto b = wielandt_bracket(a, x);
    const double rho = spectral_radius(a);
    CHECK(b.lo <= rho * (1 + 1e-12));
    CHECK(b.hi >= rho * (1 - 1e-12));
  }
}
