// Discrete averaging operators: grid semantics, exact small kernels, mass
// preservation, L^p contraction on random inputs, the convolution theorem
// against the torus multiplier path, and the maximal-function probes.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "doctest.h"

#include "diomax/arith.hpp"
#include "diomax/counting.hpp"
#include "diomax/forms.hpp"
#include "diomax/multipliers.hpp"
#include "diomax/operators.hpp"
#include "diomax/rng.hpp"

using namespace diomax;

namespace {

GridFunction random_torus(int n, int64_t N, uint64_t stream) {
  auto f = GridFunction::torus(n, N);
  RandomStream rng(4242, stream);
  for (auto& v : f.values())
    v = cplx(rng.next_double() - 0.5, rng.next_double() - 0.5);
  return f;
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("grid function storage and norms") {
  auto f = GridFunction::box(2, 3);
  CHECK(f.kind() == GridKind::box);
  CHECK(f.dimension() == 2);
  CHECK(f.side() == 7);
  CHECK(f.cells() == 49);
  CHECK(f.half_width() == 3);
  f.at({3, -3}) = cplx(2, 0);
  f.at({0, 0}) = cplx(0, -1);
  CHECK(f.at({3, -3}) == cplx(2, 0));
  CHECK(f.value_or_zero({4, 0}) == cplx(0, 0));
  CHECK_THROWS_AS(f.at({4, 0}), input_error);
  CHECK_THROWS_AS(f.at({0, 0, 0}), input_error);
  // Flat-index decoding is the inverse of at().
  for (int64_t flat : {0, 5, 24, 48}) {
    auto x = f.coordinates(flat);
    CHECK(&f.at(x) == &f.values()[size_t(flat)]);
  }
  CHECK(f.norm(1) == doctest::Approx(3.0));
  CHECK(f.norm(2) == doctest::Approx(std::sqrt(5.0)));
  CHECK(f.norm(0.5) == doctest::Approx(std::pow(std::sqrt(2.0) + 1.0, 2.0)));
  double inf = std::numeric_limits<double>::infinity();
  CHECK(f.norm(inf) == doctest::Approx(2.0));
  CHECK(std::abs(f.total() - cplx(2, -1)) < 1e-15);
  CHECK_THROWS_AS(f.norm(0.0), input_error);

  auto g = GridFunction::torus(2, 5);
  CHECK(g.side() == 5);
  CHECK(g.cells() == 25);
  g.at({7, -3}) = cplx(1, 1);
  CHECK(g.at({2, 2}) == cplx(1, 1));  // wrapped aliases
  CHECK_THROWS_AS(g.half_width(), input_error);
  CHECK_THROWS_AS(GridFunction::box(0, 2), input_error);
  CHECK_THROWS_AS(GridFunction::torus(2, 0), input_error);
}

TEST_CASE("weighted solution lists") {
  auto s3 = IntegralForm::diagonal(2, {1, 1, 1});
  auto ws = weighted_solutions(s3, CutoffPsi::unit(), 5);
  CHECK(ws.lambda == 5);
  CHECK(ws.points.size() == 24);
  CHECK(ws.weights.size() == 24);
  CHECK(ws.weight_total == doctest::Approx(24.0));
  CHECK(ws.radius == 2);
  for (double w : ws.weights) CHECK(w == 1.0);
  std::set<std::vector<int64_t>> seen(ws.points.begin(), ws.points.end());
  CHECK(seen.size() == 24);  // no duplicates
  for (const auto& x : ws.points) CHECK(s3.eval(x) == 5);
}

TEST_CASE("averaging a delta spreads uniformly over the level set") {
  auto s3 = IntegralForm::diagonal(2, {1, 1, 1});
  auto psi = CutoffPsi::unit();
  auto f = GridFunction::box(3, 2);
  f.at({0, 0, 0}) = 1.0;
  auto g = apply_average(s3, psi, 1, f);
  CHECK(g.kind() == GridKind::box);
  CHECK(g.half_width() == 3);  // padded by the solution radius 1
  CHECK(std::abs(g.at({1, 0, 0}) - cplx(1.0 / 6.0, 0)) < 1e-15);
  CHECK(std::abs(g.at({0, 0, -1}) - cplx(1.0 / 6.0, 0)) < 1e-15);
  CHECK(std::abs(g.at({0, 0, 0})) == 0.0);
  CHECK(std::abs(g.at({1, 1, 0})) == 0.0);
  CHECK(std::abs(g.total() - f.total()) < 1e-12);

  // The precomputed-solutions overload is the same operator.
  auto ws = weighted_solutions(s3, psi, 1);
  auto g2 = apply_average(ws, f);
  REQUIRE(g2.cells() == g.cells());
  for (int64_t i = 0; i < g.cells(); ++i)
    CHECK(std::abs(g2.values()[size_t(i)] - g.values()[size_t(i)]) < 1e-15);

  // Torus version wraps: on (Z/4)^3 the translate by -1 lands at 3.
  auto t = GridFunction::torus(3, 4);
  t.at({0, 0, 0}) = 1.0;
  auto gt = apply_average(s3, psi, 1, t);
  CHECK(gt.kind() == GridKind::torus);
  CHECK(gt.side() == 4);
  CHECK(std::abs(gt.at({1, 0, 0}) - cplx(1.0 / 6.0, 0)) < 1e-15);
  CHECK(std::abs(gt.at({3, 0, 0}) - cplx(1.0 / 6.0, 0)) < 1e-15);
  CHECK(std::abs(gt.total() - t.total()) < 1e-12);

  // Empty psi-mass is rejected.
  auto q3 = IntegralForm::diagonal(4, {1, 1, 1});
  CHECK_THROWS_AS(apply_average(q3, psi, 4, f), input_error);
}

TEST_CASE("averages preserve mass and contract every L^p") {
  auto s3 = IntegralForm::diagonal(2, {1, 1, 1});
  auto psi = CutoffPsi::unit();
  double inf = std::numeric_limits<double>::infinity();
  for (uint64_t trial = 0; trial < 10; ++trial) {
    auto f = random_torus(3, 5, trial);
    auto g = apply_average(s3, psi, 2, f);
    CHECK(std::abs(g.total() - f.total()) <= 1e-12 * f.norm(1));
    for (double p : {1.0, 1.5, 2.0, inf})
      CHECK(g.norm(p) <= f.norm(p) * (1.0 + 1e-12));
  }
}

TEST_CASE("multiplier path: identity, shift, convolution theorem") {
  auto f = random_torus(2, 6, 77);
  auto id = apply_multiplier([](const std::vector<double>&) { return cplx(1); },
                             f);
  for (int64_t i = 0; i < f.cells(); ++i)
    CHECK(std::abs(id.values()[size_t(i)] - f.values()[size_t(i)]) < 1e-12);

  // symbol e(-xi . v) translates by the integer vector v.
  std::vector<int64_t> v = {1, 4};
  auto sh = apply_multiplier(
      [&](const std::vector<double>& xi) {
        return unit_phase(-(xi[0] * double(v[0]) + xi[1] * double(v[1])));
      },
      f);
  for (int64_t i = 0; i < f.cells(); ++i) {
    auto y = f.coordinates(i);
    CHECK(std::abs(sh.at(y) - f.at({y[0] - v[0], y[1] - v[1]})) < 1e-12);
  }

  // For a symmetric level set omega_hat is the convolution symbol of the
  // average.
  auto s3 = IntegralForm::diagonal(2, {1, 1, 1});
  auto psi = CutoffPsi::unit();
  auto f3 = random_torus(3, 8, 5);
  auto direct = apply_average(s3, psi, 2, f3);
  auto via = apply_multiplier(
      [&](const std::vector<double>& xi) { return omega_hat(s3, psi, 2, xi); },
      f3);
  for (int64_t i = 0; i < f3.cells(); ++i)
    CHECK(std::abs(direct.values()[size_t(i)] - via.values()[size_t(i)]) <
          1e-10);

  auto box = GridFunction::box(2, 2);
  CHECK_THROWS_AS(
      apply_multiplier([](const std::vector<double>&) { return cplx(1); },
                       box),
      input_error);
}

TEST_CASE("maximal function is the pointwise sup of the levels") {
  auto s3 = IntegralForm::diagonal(2, {1, 1, 1});
  auto psi = CutoffPsi::unit();
  std::vector<int64_t> lambdas = {1, 2, 3};
  auto f = random_torus(3, 5, 13);
  auto m = maximal_apply(s3, psi, lambdas, f);
  CHECK(m.kind() == GridKind::torus);
  CHECK(m.cells() == f.cells());
  std::vector<GridFunction> each;
  for (int64_t lam : lambdas) each.push_back(apply_average(s3, psi, lam, f));
  for (int64_t i = 0; i < m.cells(); ++i) {
    double want = 0;
    for (const auto& g : each)
      want = std::max(want, std::abs(g.values()[size_t(i)]));
    CHECK(m.values()[size_t(i)].imag() == 0.0);
    CHECK(m.values()[size_t(i)].real() == doctest::Approx(want).epsilon(1e-12));
  }

  // Box inputs pad to the largest solution radius.
  auto fb = GridFunction::box(3, 1);
  fb.at({0, 0, 0}) = 1.0;
  fb.at({1, -1, 0}) = cplx(0, 0.5);
  auto mb = maximal_apply(s3, psi, lambdas, fb);
  CHECK(mb.kind() == GridKind::box);
  int64_t radius = 0;
  for (int64_t lam : lambdas)
    radius = std::max(radius, weighted_solutions(s3, psi, lam).radius);
  CHECK(mb.half_width() == 1 + radius);
  std::vector<GridFunction> boxed;
  for (int64_t lam : lambdas) boxed.push_back(apply_average(s3, psi, lam, fb));
  for (int64_t i = 0; i < mb.cells(); ++i) {
    auto y = mb.coordinates(i);
    double want = 0;
    for (const auto& g : boxed)
      want = std::max(want, std::abs(g.value_or_zero(y)));
    CHECK(mb.values()[size_t(i)].real() == doctest::Approx(want).epsilon(1e-12));
  }

  CHECK_THROWS_AS(maximal_apply(s3, psi, {}, f), input_error);
}

TEST_CASE("norm ratios certify lower bounds") {
  auto f = GridFunction::torus(1, 4);
  f.at({0}) = 3.0;
  f.at({2}) = 4.0;
  auto g = GridFunction::torus(1, 4);
  g.at({1}) = 10.0;
  CHECK(norm_ratio(g, f, 2) == doctest::Approx(10.0 / 5.0));
  CHECK(norm_ratio(g, f, 1) == doctest::Approx(10.0 / 7.0));
  auto z = GridFunction::torus(1, 4);
  CHECK_THROWS_AS(norm_ratio(g, z, 2), input_error);
}

TEST_CASE("maximal level probe reports its best trial") {
  auto s3 = IntegralForm::diagonal(2, {1, 1, 1});
  auto psi = CutoffPsi::unit();
  auto probe = probe_maximal_level(
      s3, {2, 5}, 2, 2.0, 9,
      [&](int64_t lambda, const std::vector<double>& xi) {
        return omega_hat(s3, psi, lambda, xi);
      },
      3);
  CHECK(probe.j == 2);
  CHECK(probe.p == 2.0);
  CHECK_FALSE(probe.per_trial.empty());
  double best = 0;
  for (double r : probe.per_trial) {
    CHECK(r >= 0.0);
    best = std::max(best, r);
  }
  CHECK(probe.best == doctest::Approx(best));
  // omega_hat has sup-norm <= 1, so no ratio can exceed 1 on the torus.
  CHECK(probe.best <= 1.0 + 1e-9);
  CHECK_THROWS_AS(probe_maximal_level(
                      s3, {}, 2, 2.0, 9,
                      [&](int64_t, const std::vector<double>&) {
                        return cplx(1);
                      },
                      3),
                  input_error);
}

}  // TEST_SUITE
