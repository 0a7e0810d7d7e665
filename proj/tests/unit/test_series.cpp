#include <doctest.h>

#include <cmath>

#include "potlab/error.hpp"
#include "potlab/series.hpp"

using namespace potlab;

namespace {

std::vector<double> terms(std::size_t N, double (*f)(double)) {
  std::vector<double> t(N + 1, 0.0);
  for (std::size_t n = 1; n <= N; ++n) t[n] = f(static_cast<double>(n));
  return t;
}

}  // namespace

TEST_CASE("least squares line") {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.residual == doctest::Approx(0.0));
  CHECK_THROWS_AS(fit_line(std::vector<double>{1.0}, std::vector<double>{2.0}), Error);
}

TEST_CASE("volume power fit") {
  BallProfile p;
  for (int r = 0; r <= 64; ++r) p.ball_measure.push_back(3.0 * std::pow(r, 2.5) + (r == 0));
  const PowerFit f = fit_volume_power(p, 8, 64);
  CHECK(f.exponent == doctest::Approx(2.5));
  CHECK(f.prefactor == doctest::Approx(3.0));
  CHECK_THROWS_AS(fit_volume_power(p, 8, 65), Error);
}

TEST_CASE("doubling checkpoints") {
  CHECK(doubling_checkpoints(1, 20) == std::vector<std::uint64_t>{1, 2, 4, 8, 16, 20});
  CHECK(doubling_checkpoints(0, 16) == std::vector<std::uint64_t>{1, 2, 4, 8, 16});
}

TEST_CASE("classification of model series") {
  const auto harmonic = summarize_series(terms(4096, [](double n) { return 1.0 / n; }), 1);
  CHECK(harmonic.model == SeriesModel::LogDivergent);
  CHECK(std::abs(harmonic.slope) < 0.05);
  CHECK(harmonic.final_sum() == doctest::Approx(std::log(4096.0) + 0.5772156649).epsilon(1e-3));

  const auto square = summarize_series(terms(4096, [](double n) { return 1.0 / (n * n); }), 1);
  CHECK(square.model == SeriesModel::Convergent);
  CHECK(square.slope == doctest::Approx(-1.0).epsilon(0.02));

  const auto root = summarize_series(terms(4096, [](double n) { return 1.0 / std::sqrt(n); }), 1);
  CHECK(root.model == SeriesModel::PowerDivergent);
  CHECK(root.exponent == doctest::Approx(0.5).epsilon(0.02));

  const auto geometric = summarize_series(terms(4096, [](double n) { return std::pow(0.5, n); }), 1);
  CHECK(geometric.model == SeriesModel::Convergent);

  CHECK_THROWS_AS(summarize_series(terms(4, [](double n) { return n; }), 1), Error);
}

TEST_CASE("partial sums are nondecreasing") {
  const auto v = summarize_series(terms(1000, [](double n) { return 1.0 / n; }), 1);
  for (std::size_t i = 1; i < v.checkpoints.size(); ++i) {
    CHECK(v.checkpoints[i].partial_sum >= v.checkpoints[i - 1].partial_sum);
  }
}
