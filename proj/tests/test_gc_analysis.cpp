#include "doctest.h"
#include "fixtures.hpp"

#include "q1d/errors.hpp"
#include "q1d/gc_analysis.hpp"
#include "q1d/simulate.hpp"

#include <cmath>

using namespace q1d;

namespace {

std::vector<CycleSample> draw(const CycleLaw& law, std::size_t n, std::uint64_t seed) {
  const CycleSampler s(law);
  Rng rng = substream(seed, 0);
  std::vector<CycleSample> xs(n);
  for (auto& x : xs) x = s(rng);
  return xs;
}

}  // namespace

TEST_CASE("minimal graphs satisfy the symmetry with c = -delta") {
  std::mt19937_64 rng(8);
  for (const auto& base : {fixtures::two_vertex(4, 1), fixtures::chain3(), fixtures::tooth()}) {
    for (int k = 0; k < 5; ++k) {
      const auto s = k == 0 ? base : fixtures::redraw(base, rng);
      CAPTURE(s.name);
      const GcReport r = gc_check_analytic(s.law());
      CHECK(r.verdict == GcVerdict::holds);
      REQUIRE(r.c);
      REQUIRE(r.delta);
      CHECK(std::abs(*r.c + *r.delta) < 1e-8);
      CHECK(r.symmetry_residual < 1e-6);
      const auto pred = gc_predict(s.cell());
      CHECK(pred.prediction == GcPrediction::holds);
      CHECK(*pred.delta == doctest::Approx(*r.delta));
    }
  }
}

TEST_CASE("two-vertex constant is the rate ratio") {
  const GcReport r = gc_check_analytic(fixtures::two_vertex(4, 1).law());
  CHECK(*r.C == doctest::Approx(4.0));
  CHECK(*r.c == doctest::Approx(-std::log(4.0)));
}

TEST_CASE("diamond breaks the symmetry") {
  const GcReport r = gc_check_analytic(fixtures::diamond().law());
  CHECK(r.verdict == GcVerdict::fails);
  CHECK(r.max_ratio_deviation > 1e-4);
  CHECK_FALSE(r.c);
  CHECK_FALSE(r.delta);
  CHECK(gc_predict(fixtures::diamond().cell()).prediction == GcPrediction::generically_fails);
}

TEST_CASE("diamond with balanced loop rates still satisfies the symmetry") {
  // Equal products around the x and y branches: the ratio phi+/phi- is then constant.
  auto s = fixtures::diamond();
  s.rates = {{{"u", "x"}, 2.0}, {{"x", "u"}, 1.0}, {{"x", "w"}, 3.0}, {{"w", "x"}, 1.0},
             {{"u", "y"}, 2.0}, {{"y", "u"}, 1.0}, {{"y", "w"}, 3.0}, {{"w", "y"}, 1.0}};
  CHECK(gc_check_analytic(s.law()).verdict == GcVerdict::holds);
}

TEST_CASE("asymmetric support cannot be predicted") {
  try {
    (void)gc_predict(fixtures::mixed5().cell());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::asymmetric_support);
  }
}

TEST_CASE("exponential clocks: symmetry iff equal rates") {
  const GcReport same = gc_check_analytic(ExponentialLaw{0.7, 1.5, 1.5});
  CHECK(same.verdict == GcVerdict::holds);
  CHECK(*same.c == doctest::Approx(std::log(0.3 / 0.7)));
  CHECK(gc_check_analytic(ExponentialLaw{0.5, 1.0, 2.0}).verdict == GcVerdict::fails);
}

TEST_CASE("independence test: KS path") {
  const auto indep = independence_test(draw(ExponentialLaw{0.5, 1.0, 1.0}, 10'000, 3), 0.01);
  CHECK(indep.method == IndependenceMethod::kolmogorov_smirnov);
  CHECK_FALSE(indep.reject);
  const auto dep = independence_test(draw(ExponentialLaw{0.5, 1.0, 2.0}, 10'000, 3), 0.01);
  CHECK(dep.reject);
  CHECK(dep.n_plus + dep.n_minus == 10'000);
}

TEST_CASE("independence test: permutation path for atoms") {
  const DiscreteLaw indep{{{1, 1.0, 0.3}, {1, 2.0, 0.3}, {-1, 1.0, 0.2}, {-1, 2.0, 0.2}}};
  const auto a = independence_test(draw(indep, 4'000, 9), 0.01, IndependenceMethod::automatic, 5);
  CHECK(a.method == IndependenceMethod::permutation);
  CHECK_FALSE(a.reject);
  const DiscreteLaw dep{{{1, 1.0, 0.5}, {-1, 2.0, 0.5}}};
  const auto b = independence_test(draw(dep, 4'000, 9), 0.01, IndependenceMethod::automatic, 5);
  CHECK(b.reject);
  CHECK(b.p_value == doctest::Approx(1.0 / 1000.0));
  // Same seed, same p-value.
  CHECK(independence_test(draw(indep, 4'000, 9), 0.01, IndependenceMethod::automatic, 5).p_value == a.p_value);
}

TEST_CASE("independence test needs both signs") {
  try {
    (void)independence_test(draw(ExponentialLaw{0.995, 1.0, 1.0}, 5'000, 1), 0.01);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::insufficient_samples);
  }
}

TEST_CASE("KS statistic and p-value") {
  const std::vector<double> a{0.1, 0.2, 0.3, 0.4}, b{0.25, 0.35, 0.45, 0.55, 0.65};
  // Brute force over all jump points.
  double d = 0;
  for (double t : {0.1, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.55, 0.65}) {
    double fa = 0, fb = 0;
    for (double x : a) fa += x <= t;
    for (double x : b) fb += x <= t;
    d = std::max(d, std::abs(fa / 4 - fb / 5));
  }
  CHECK(ks_statistic(a, b) == doctest::Approx(d));
  CHECK(ks_statistic(a, a) == 0.0);
  // Asymptotic Kolmogorov tail: Q(1.36) = 0.04939..., Q(1.0) = 0.26999...
  const double n = 1e8;  // effective sample size large enough that the
  const double scale = std::sqrt(n / 2) + 0.12 + 0.11 / std::sqrt(n / 2);  // correction is negligible
  CHECK(ks_p_value(1.36 / scale, static_cast<std::size_t>(n), static_cast<std::size_t>(n)) == doctest::Approx(0.0494859).epsilon(1e-5));
  CHECK(ks_p_value(1.0 / scale, static_cast<std::size_t>(n), static_cast<std::size_t>(n)) == doctest::Approx(0.2699996).epsilon(1e-5));
  CHECK(ks_p_value(0.0, 10, 10) == 1.0);
}

TEST_CASE("symmetry residual needs a mirrored grid") {
  RateCurve c;
  c.grid = {-1.0, 0.0, 2.0};
  c.values = {ExtReal::finite(1), ExtReal::finite(0), ExtReal::finite(1)};
  try {
    (void)gc_symmetry_residual(c, 0.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::asymmetric_grid);
  }
  const auto g = symmetric_grid(2.0, 4);
  REQUIRE(g.size() == 9);
  CHECK(g.front() == -2.0);
  CHECK(g.back() == 2.0);
  const RateCurve bd = rate_curve(fixtures::two_vertex(4, 1).law(), CurveKind::position, g);
  CHECK(gc_symmetry_residual(bd, -std::log(4.0)) < 1e-8);
  CHECK(gc_symmetry_residual(bd, 0.0) > 1.0);
}
