// Integral forms: exact evaluation (with overflow promotion), gradients,
// rank data, and the cutoff family.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "doctest.h"

#include "diomax/arith.hpp"
#include "diomax/forms.hpp"

using namespace diomax;

TEST_SUITE("forms") {

TEST_CASE("diagonal evaluation and gradients") {
  auto sphere5 = IntegralForm::diagonal(2, {1, 1, 1, 1, 1});
  CHECK(sphere5.dimension() == 5);
  CHECK(sphere5.degree() == 2);
  CHECK(sphere5.eval({1, 1, 1, 1, 1}) == 5);
  CHECK(sphere5.eval({2, -1, 0, 0, 3}) == 14);
  CHECK(sphere5.gradient({1, 2, 3, -4, 0}) ==
        std::vector<int64_t>({2, 4, 6, -8, 0}));

  auto quartic = IntegralForm::diagonal(4, {1, 1, 1});
  CHECK(quartic.eval({2, 0, 0}) == 16);
  CHECK(quartic.eval({1, -1, 2}) == 18);
  CHECK(quartic.gradient({1, -1, 2}) == std::vector<int64_t>({4, -4, 32}));

  auto weighted = IntegralForm::diagonal(2, {2, 3});
  CHECK(weighted.eval({3, 1}) == 21);
  CHECK(weighted.eval_real({0.5, 1.0}) == doctest::Approx(3.5));
}

TEST_CASE("quadratic gram evaluation") {
  auto f = IntegralForm::quadratic({2, 1, 1, 2}, 2);  // 2x^2 + 2xy + 2y^2
  CHECK(f.degree() == 2);
  CHECK(f.eval({1, 1}) == 6);
  CHECK(f.eval({1, -1}) == 2);
  CHECK(f.gradient({1, 0}) == std::vector<int64_t>({4, 2}));  // 2*A*x
  CHECK_THROWS_AS(IntegralForm::quadratic({1, 2, 3, 4}, 2), input_error);
  CHECK_THROWS_AS(IntegralForm::quadratic({1, 2, 3}, 2), input_error);
}

TEST_CASE("generic monomial evaluation") {
  // Q(x, y) = x^3 - 2 x y^2
  auto f = IntegralForm::generic(
      2, 3, {{{3, 0}, 1}, {{1, 2}, -2}}, std::nullopt);
  CHECK(f.eval({2, 1}) == 4);
  CHECK(f.eval({1, 3}) == -17);
  CHECK(f.gradient({2, 1}) == std::vector<int64_t>({10, -8}));
  CHECK_THROWS_AS(IntegralForm::generic(2, 3, {{{1, 1}, 1}}, std::nullopt),
                  input_error);  // inhomogeneous
}

TEST_CASE("eval_mod agrees with eval for signed points") {
  auto forms = {IntegralForm::diagonal(2, {1, 1, 1}),
                IntegralForm::diagonal(4, {1, 2}),
                IntegralForm::quadratic({2, 1, 1, 3}, 2)};
  for (const auto& f : forms) {
    std::vector<int64_t> x(size_t(f.dimension()));
    for (int64_t t = -20; t <= 20; ++t) {
      for (int i = 0; i < f.dimension(); ++i)
        x[size_t(i)] = t + 7 * i * (i % 2 ? -1 : 1);
      for (int64_t q : {2, 3, 7, 12})
        CHECK(f.eval_mod(x, q) == mod_i64(f.eval(x), q));
    }
  }
}

TEST_CASE("overflow promotes exactly and reports unrepresentable values") {
  auto f = IntegralForm::diagonal(2, {1});
  int64_t big = int64_t(1) << 32;
  CHECK_THROWS_AS(f.eval({big}), diomax::overflow_error);  // 2^64 > max
  // 3037000499^2 still fits; the checked fast path must not flag it.
  CHECK(f.eval({3037000499}) == int64_t(3037000499) * 3037000499);
  // Intermediate overflow with a representable final value goes through GMP.
  auto g = IntegralForm::generic(
      1, 2, {{{2}, 1}, {{2}, 1}, {{2}, -2}}, std::nullopt);  // x^2+x^2-2x^2 = 0
  CHECK(g.eval({int64_t(1) << 33}) == 0);
}

TEST_CASE("definiteness, rank, coercivity") {
  auto sphere5 = IntegralForm::diagonal(2, {1, 1, 1, 1, 1});
  CHECK(sphere5.positive_definite());
  CHECK_FALSE(IntegralForm::diagonal(2, {1, -1}).positive_definite());
  CHECK(IntegralForm::quadratic({2, 1, 1, 2}, 2).positive_definite());
  CHECK_FALSE(IntegralForm::quadratic({1, 2, 2, 1}, 2).positive_definite());

  auto b5 = sphere5.birch_rank();
  CHECK(b5.value == 5);
  CHECK(b5.status == BirchRank::Status::verified);
  CHECK(b5.regular);  // 5 > (2-1)*2^2
  auto b4 = IntegralForm::diagonal(2, {1, 1, 1, 1}).birch_rank();
  CHECK(b4.value == 4);
  CHECK_FALSE(b4.regular);
  auto bq = IntegralForm::quadratic({1, 1, 1, 1}, 2).birch_rank();  // rank 1
  CHECK(bq.value == 1);
  auto bg = IntegralForm::generic(3, 3, {{{3, 0, 0}, 1}}, 1).birch_rank();
  CHECK(bg.value == 1);
  CHECK(bg.status == BirchRank::Status::declared);

  // Coercivity: Q(x) >= mu * |x|_2^k on sampled directions.
  for (const auto& f : {IntegralForm::diagonal(2, {2, 3}),
                        IntegralForm::diagonal(4, {1, 1, 1}),
                        IntegralForm::quadratic({2, 1, 1, 2}, 2)}) {
    double mu = f.coercivity_bound();
    CHECK(mu > 0);
    std::vector<double> x(size_t(f.dimension()));
    for (int t = 0; t < 200; ++t) {
      double norm2 = 0;
      for (int i = 0; i < f.dimension(); ++i) {
        x[size_t(i)] = std::cos(0.7 * t + 1.3 * i) * (1 + (t % 5));
        norm2 += x[size_t(i)] * x[size_t(i)];
      }
      double k = f.degree();
      CHECK(f.eval_real(x) >= mu * std::pow(norm2, k / 2) - 1e-9);
    }
  }
  CHECK_THROWS_AS(IntegralForm::diagonal(2, {1, -1}).coercivity_bound(),
                  input_error);
}

TEST_CASE("smooth step is a symmetric C-infinity ramp") {
  CHECK(smooth_step(-1.0) == 0.0);
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(2.0) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  for (double s = 0.05; s < 0.5; s += 0.05)
    CHECK(smooth_step(s) + smooth_step(1 - s) == doctest::Approx(1.0));
  for (double s = 0.1; s < 0.95; s += 0.1)
    CHECK(smooth_step(s + 0.05) > smooth_step(s));
}

TEST_CASE("cutoff family") {
  auto unit = CutoffPsi::unit();
  CHECK(unit({1.0, -2.0, 3.0}) == 1.0);
  CHECK(unit.coordinate_factor(-5.0) == 1.0);
  CHECK(unit.support_box() == std::numeric_limits<double>::infinity());

  auto orth = CutoffPsi::positive_orthant();
  CHECK(orth({1.0, 1.0}) == 1.0);
  CHECK(orth({0.2, 0.5}) == 1.0);     // both above 3/20
  CHECK(orth({-0.5, 1.0}) == 0.0);    // negative coordinate kills it
  CHECK(orth({0.04, 1.0}) == 0.0);    // below 1/20
  double mid = orth({0.1, 1.0});
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);

  auto rad = CutoffPsi::custom_radial({{0.0, 1.0}, {1.0, 1.0}, {2.0, 0.0}});
  CHECK(rad({0.3, 0.4}) == doctest::Approx(1.0));          // |x| = 0.5
  CHECK(rad({1.5, 0.0}) == doctest::Approx(0.5));          // linear ramp
  CHECK(rad({3.0, 0.0}) == 0.0);
  CHECK(rad.support_box() == doctest::Approx(2.0));
  CHECK_FALSE(rad.factors_per_coordinate());
  CHECK_THROWS_AS(rad.coordinate_factor(0.5), input_error);
  CHECK_THROWS_AS(CutoffPsi::custom_radial({{0.0, 1.0}}), input_error);
  CHECK_THROWS_AS(CutoffPsi::custom_radial({{0.0, 2.0}, {1.0, 0.0}}),
                  input_error);
}

TEST_CASE("construction rejects malformed input") {
  CHECK_THROWS_AS(IntegralForm::diagonal(2, {1, 0, 1}), input_error);
  CHECK_THROWS_AS(IntegralForm::diagonal(0, {1}), input_error);
  CHECK_THROWS_AS(IntegralForm::generic(2, 2, {}, std::nullopt), input_error);
  auto f = IntegralForm::diagonal(2, {1, 1});
  CHECK_THROWS_AS(f.eval({1}), input_error);
  CHECK_THROWS_AS(f.eval_mod({1, 1}, 0), input_error);
}

}  // TEST_SUITE
