#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "casimir/quad/qmc.hpp"
#include "casimir/quad/sobol.hpp"

using namespace casimir::quad;

TEST_CASE("first points of the 2-D sequence") {
  SobolSequence seq(2);
  const std::uint32_t zero[2] = {0, 0};
  const double expect[5][2] = {{0.5, 0.5},
                               {0.75, 0.25},
                               {0.25, 0.75},
                               {0.375, 0.375},
                               {0.875, 0.875}};
  for (std::uint64_t k = 1; k <= 5; ++k) {
    double u[2];
    seq.point(k, std::span<const std::uint32_t>(zero, 2),
              std::span<double>(u, 2));
    for (int j = 0; j < 2; ++j)
      CHECK(u[j] == Catch::Approx(expect[k - 1][j]).margin(1e-9));
  }
}

TEST_CASE("balance: each dyadic slab gets the same count") {
  SobolSequence seq(7);
  const std::uint32_t zero[7] = {0};
  constexpr int N = 1 << 10;
  for (int j = 0; j < 7; ++j) {
    int counts[8] = {0};
    for (std::uint64_t k = 0; k < N; ++k) {
      const double u = (static_cast<double>(seq.raw(k, j)) + 0.5) / 4294967296.0;
      ++counts[static_cast<int>(u * 8.0)];
    }
    for (int c : counts) CHECK(c == N / 8);
    (void)zero;
  }
}

TEST_CASE("qmc moments in 7 dimensions") {
  QuadSpec spec;
  spec.dim = 7;
  spec.budget = 1u << 14;
  spec.replications = 8;
  spec.seed = 2718;
  auto prod = [](std::span<const double> u) {
    double p = 1.0;
    for (double x : u) p *= x;
    return p;
  };
  const auto r = integrate_qmc(prod, spec);
  CHECK(std::abs(r.value - std::pow(0.5, 7)) <= 3.0 * r.std_error + 1e-10);
  CHECK(r.n_total == spec.budget * 8);
}

TEST_CASE("qmc gaussian bump in 7 dimensions against closed form") {
  QuadSpec spec;
  spec.dim = 7;
  spec.budget = 1u << 15;
  spec.replications = 8;
  spec.seed = 31415;
  auto bump = [](std::span<const double> u) {
    double p = 1.0;
    for (double x : u) p *= std::exp(-8.0 * (x - 0.5) * (x - 0.5));
    return p;
  };
  const double per_dim =
      std::sqrt(std::numbers::pi / 8.0) * std::erf(std::sqrt(2.0));
  const auto r = integrate_qmc(bump, spec);
  CHECK(std::abs(r.value - std::pow(per_dim, 7)) <= 3.0 * r.std_error);
}

TEST_CASE("constant integrand has zero spread") {
  QuadSpec spec;
  spec.dim = 3;
  spec.budget = 1u << 10;
  spec.replications = 4;
  const auto r = integrate_qmc([](std::span<const double>) { return 1.0; },
                               spec);
  CHECK(r.value == Catch::Approx(1.0).margin(1e-14));
  CHECK(r.std_error == Catch::Approx(0.0).margin(1e-15));
  CHECK(r.converged);
}

TEST_CASE("bitwise determinism across worker counts") {
  auto f = [](std::span<const double> u) {
    double s = 1.0;
    for (double x : u) s *= 1.0 + 0.3 * std::sin(7.0 * x);
    return s;
  };
  QuadSpec spec;
  spec.dim = 9;
  spec.budget = 1u << 13;
  spec.replications = 6;
  spec.seed = 99;
  std::vector<double> values, errors;
  for (int threads : {1, 2, 4, 7}) {
    spec.threads = threads;
    const auto r = integrate_qmc(f, spec);
    values.push_back(r.value);
    errors.push_back(r.std_error);
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    CHECK(values[i] == values[0]);
    CHECK(errors[i] == errors[0]);
  }
}

TEST_CASE("different seeds decorrelate, same seed reproduces") {
  auto f = [](std::span<const double> u) { return u[0] * u[1]; };
  QuadSpec spec;
  spec.dim = 2;
  spec.budget = 1u << 10;
  spec.replications = 4;
  spec.seed = 1;
  const auto a = integrate_qmc(f, spec);
  const auto b = integrate_qmc(f, spec);
  CHECK(a.value == b.value);
  spec.seed = 2;
  const auto c = integrate_qmc(f, spec);
  CHECK(a.value != c.value);
}

TEST_CASE("spec validation") {
  QuadSpec spec;
  spec.dim = 2;
  spec.budget = 1000;  // not a power of two
  CHECK_THROWS_AS(
      integrate_qmc([](std::span<const double>) { return 0.0; }, spec),
      std::invalid_argument);
  spec.budget = 1024;
  spec.replications = 1;
  CHECK_THROWS_AS(
      integrate_qmc([](std::span<const double>) { return 0.0; }, spec),
      std::invalid_argument);
  spec.replications = 2;
  spec.dim = 99;
  CHECK_THROWS_AS(
      integrate_qmc([](std::span<const double>) { return 0.0; }, spec),
      std::invalid_argument);
}

TEST_CASE("NaN from the integrand aborts with coordinates") {
  QuadSpec spec;
  spec.dim = 2;
  spec.budget = 256;
  spec.replications = 2;
  auto bad = [](std::span<const double> u) {
    return u[0] > 0.7 ? std::nan("") : 1.0;
  };
  CHECK_THROWS_WITH(integrate_qmc(bad, spec),
                    Catch::Matchers::ContainsSubstring("NaN"));
}

TEST_CASE("error calibration over seeded runs") {
  // 3-sigma coverage of the replication-based error bars on a known
  // integral, across 100 seeds.
  auto bump = [](std::span<const double> u) {
    double p = 1.0;
    for (double x : u) p *= std::exp(-8.0 * (x - 0.5) * (x - 0.5));
    return p;
  };
  const double per_dim =
      std::sqrt(std::numbers::pi / 8.0) * std::erf(std::sqrt(2.0));
  const double truth = std::pow(per_dim, 7);
  int covered = 0;
  for (int s = 0; s < 100; ++s) {
    QuadSpec spec;
    spec.dim = 7;
    spec.budget = 1u << 12;
    spec.replications = 8;
    spec.seed = 5000 + s;
    const auto r = integrate_qmc(bump, spec);
    if (std::abs(r.value - truth) <= 3.0 * r.std_error) ++covered;
  }
  CHECK(covered >= 95);
}
