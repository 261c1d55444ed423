#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "psdsparse/potential.hpp"
#include "psdsparse/verify.hpp"
#include "test_support.hpp"

using namespace psdsparse;

namespace {

CenteredFamily canonical_family() {
  return center(validate_family(2, {0.5, 0.5}, {SymMatrix::diagonal({2.0, 0.0}), SymMatrix::diagonal({0.0, 2.0})}));
}

CenteredFamily single_family(std::size_t d) { return center(validate_family(d, {1.0}, {SymMatrix::identity(d)})); }

}  // namespace

TEST_CASE("one-step inequality") {
  const double psi2 = (std::exp(1.0) - 2.0) / 4.0;
  const double lhs = std::log(2.0 * (std::exp(0.5) + std::exp(-0.5)));
  CHECK(std::exp(lhs) == doctest::Approx(4.5105).epsilon(1e-4));
  CHECK(4.0 * std::exp(2.0 * psi2) == doctest::Approx(5.729).epsilon(1e-3));

  const CheckReport r = check_one_step(canonical_family(), SymMatrix::zero(2), 0.5);
  CHECK(r.pass);
  CHECK(r.worst_slack == doctest::Approx(2.0 * psi2 + std::log(4.0) - lhs).epsilon(1e-12));
  CHECK(r.worst_slack > 0.0);

  Rng rng(1);
  const SymMatrix y = psdsparse::testing::random_sym(2, 3.0, rng);
  CHECK(check_one_step(canonical_family(), y, 1e-6).worst_slack >= -1e-9);

  // X = 0: both sides carry the same potential; slack is M psi_M(delta).
  const CenteredFamily one = single_family(3);
  const SymMatrix y3 = psdsparse::testing::random_sym(3, 1.0, rng);
  const CheckReport s = check_one_step(one, y3, 0.4);
  CHECK(s.worst_slack == doctest::Approx(1.0 * psi(1.0, 0.4).value).epsilon(1e-9));
}

TEST_CASE("matrix mgf bound") {
  CHECK(check_mgf(single_family(4), 0.7).pass);

  const double c = std::cosh(0.5);
  const double cap = std::exp(2.0 * psi(2.0, 0.5).value);
  CHECK(c == doctest::Approx(1.1276).epsilon(1e-4));
  CHECK(cap == doctest::Approx(1.432).epsilon(1e-3));
  const CheckReport r = check_mgf(canonical_family(), 0.5);
  CHECK(r.pass);
  CHECK(r.worst_slack == doctest::Approx(1.0 - c / cap).epsilon(1e-12));

  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + rng.below(10);
    const Instance inst = trial % 2 == 0 ? gen_bases(d, 1 + rng.below(3), rng.next_u64())
                                         : gen_random_psd(d, d + rng.below(10), 1, 1e6, rng.next_u64());
    const double delta = rng.uniform(1e-6, 1.0) / inst.norm_bound();
    CHECK(check_mgf(center(inst), delta).pass);
  }
}

TEST_CASE("Golden-Thompson check") {
  const CheckReport commuting =
      check_golden_thompson(SymMatrix::diagonal({0.3, -1.0, 2.0}), SymMatrix::diagonal({1.5, 0.2, -0.7}));
  CHECK(std::abs(commuting.worst_slack) <= 1e-12);

  // tr e^{U+V} = 2 cosh(sqrt 2), tr(e^U e^V) = 2 cosh(1)^2.
  const CheckReport strict = check_golden_thompson(SymMatrix::from_rows({{0, 1}, {1, 0}}), SymMatrix::diagonal({1, -1}));
  const double rhs = 2.0 * std::cosh(1.0) * std::cosh(1.0);
  const double lhs = 2.0 * std::cosh(std::sqrt(2.0));
  CHECK(strict.worst_slack == doctest::Approx((rhs - lhs) / rhs).epsilon(1e-12));
  CHECK(strict.worst_slack > 0.0);

  Rng rng(2);
  const CheckReport zero = check_golden_thompson(psdsparse::testing::random_sym(5, 0.5, rng), SymMatrix::zero(5));
  CHECK(std::abs(zero.worst_slack) <= 1e-12);
}

TEST_CASE("interpolation check") {
  Rng rng(9);
  const SymMatrix y = psdsparse::testing::random_sym(6, 2.0, rng);
  CHECK(std::abs(check_interpolation(y, 0.8, 0.8, 6).worst_slack) <= 1e-12);
  CHECK(check_interpolation(y, 0.0, 0.8, 6).worst_slack == 0.0);
  for (int trial = 0; trial < 50; ++trial) {
    const SymMatrix z = psdsparse::testing::random_sym(1 + trial % 9, 3.0, rng);
    const double delta = rng.uniform(0.01, 2.0);
    CHECK(check_interpolation(z, delta / 2.0, delta, z.dim()).worst_slack >= 0.0);
  }
  CHECK_THROWS_AS(check_interpolation(y, 0.9, 0.8, 6), Error);
  CHECK_THROWS_AS(check_interpolation(y, 0.1, 0.8, 5), Error);
}

TEST_CASE("lower bound check") {
  CHECK(check_lower_bound(SymMatrix::zero(3), 0.5).worst_slack == doctest::Approx(std::log(6.0)));
  const double expected = std::log(2.0 * std::exp(1.0) + 2.0 * std::exp(-1.0)) - 1.0;
  CHECK(check_lower_bound(SymMatrix::diagonal({1.0, -1.0}), 1.0).worst_slack == doctest::Approx(expected));
}

TEST_CASE("scalar grid and psi checks") {
  for (double m1 : {0.1, 1.0, 8.0}) CHECK(check_scalar_grid(m1).pass);
  CHECK(check_psi(2.0, 0.0).pass);
  CHECK(check_psi(2.0, 0.5).pass);
  CHECK(check_psi(1.0, 4.0).pass);
}

TEST_CASE("random centered families are centered without positivity") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CenteredFamily fam = random_centered_family(1 + seed % 7, 2 + seed % 5, seed);
    const auto n = static_cast<Eigen::Index>(fam.dim());
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < fam.size(); ++i) mean += fam.weights()[i] * fam.centered()[i].mat();
    CHECK(mean.norm() <= 1e-12 * (1.0 + fam.m1()));
    CHECK(fam.m1() <= 8.0 + 1e-12);
    CHECK(fam.m2() <= fam.m1() * fam.m1() + 1e-12);
  }
}

TEST_CASE("suites pass and do not depend on the thread count") {
  for (const auto& name : suite_names()) {
    setenv("PSDSPARSE_THREADS", "1", 1);
    const CheckReport one = run_suite(name, 150, 42);
    setenv("PSDSPARSE_THREADS", "4", 1);
    const CheckReport four = run_suite(name, 150, 42);
    unsetenv("PSDSPARSE_THREADS");
    CHECK_MESSAGE(one.pass, name);
    CHECK(one.trials == 150);
    CHECK(one.seed == 42);
    CHECK(one.worst_slack == four.worst_slack);
    CHECK(one.worst_seed == four.worst_seed);
  }
  CHECK_THROWS_AS(run_suite("nope", 10, 1), Error);
  CHECK_THROWS_AS(run_suite("gt", 0, 1), Error);
}
