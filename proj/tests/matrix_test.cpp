#include <doctest.h>

#include <cmath>
#include <random>

#include "spou/errors.hpp"
#include "spou/matrix.hpp"

using namespace spou;

namespace {

const SquareMatrix kCounter{{0.0, 2.0}, {0.75, 0.0}};  // expanding, not norm-monotone

SquareMatrix random_matrix(int d, std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  SquareMatrix m(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m.at(i, j) = uni(rng);
  return m;
}

}  // namespace

TEST_CASE("spectral radius of diagonal and anti-diagonal matrices") {
  CHECK(spectral_radius(SquareMatrix::scalar(2, 2.0)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(spectral_radius(SquareMatrix::scalar(2, 0.5)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(spectral_radius(kCounter) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
  CHECK(spectral_radius(SquareMatrix{{0.0, 1.0}, {0.0, 0.0}}) == doctest::Approx(0.0));
}

TEST_CASE("spectral radius via Gelfand iteration for d >= 3") {
  SquareMatrix diag(3);
  diag.at(0, 0) = 2.0;
  diag.at(1, 1) = -3.0;
  diag.at(2, 2) = 4.0;
  CHECK(spectral_radius(diag) == doctest::Approx(4.0).epsilon(1e-10));

  // defective: single eigenvalue 2 with a full Jordan block
  SquareMatrix jordan{{2.0, 1.0, 0.0}, {0.0, 2.0, 1.0}, {0.0, 0.0, 2.0}};
  CHECK(spectral_radius(jordan) == doctest::Approx(2.0).epsilon(1e-10));

  // rotation-and-scale: complex spectrum of modulus sqrt(2)
  SquareMatrix rot{{1.0, -1.0, 0.0}, {1.0, 1.0, 0.0}, {0.0, 0.0, 1.2}};
  CHECK(spectral_radius(rot) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("expanding classification") {
  const auto c1 = is_expanding(SquareMatrix::scalar(1, 2.0));
  CHECK(c1.is_expanding);
  CHECK(c1.norm_monotone);
  CHECK(c1.growth);

  const auto ci = is_expanding(SquareMatrix::identity(2));
  CHECK_FALSE(ci.is_expanding);

  const auto cc = is_expanding(kCounter);
  CHECK(cc.is_expanding);
  CHECK(cc.spectral_radius_of_inverse == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-10));
  CHECK_FALSE(cc.norm_monotone);  // Me_1 = (0, 3/4) shrinks

  SquareMatrix singular{{1.0, 2.0}, {2.0, 4.0}};
  CHECK_THROWS_AS(is_expanding(singular), input_error);

  SquareMatrix bad{{1.0, 0.0}, {0.0, std::nan("")}};
  CHECK_THROWS_AS(is_expanding(bad), input_error);
}

TEST_CASE("growth constants hold on a fresh sample") {
  std::mt19937 rng(123);
  std::normal_distribution<double> normal;
  for (const SquareMatrix& m : {SquareMatrix::scalar(2, 2.0), kCounter}) {
    const auto cert = is_expanding(m);
    REQUIRE(cert.growth);
    const double c = cert.growth->C;
    const double alpha = cert.growth->alpha;
    CHECK(c > 0.0);
    CHECK(c <= 1.0);
    CHECK(alpha > 1.0);
    for (int s = 0; s < 1000; ++s) {
      std::vector<double> x = {normal(rng), normal(rng)};
      const double x0 = vec_norm(x, Norm::euclidean);
      if (x0 < 1e-3) continue;
      double pw = 1.0;
      std::vector<double> cur = x, next(2);
      for (int n = 1; n <= 24; ++n) {
        m.apply(cur, next);
        cur.swap(next);
        pw *= alpha;
        CHECK(vec_norm(cur, Norm::euclidean) >= c * pw * x0 * (1.0 - 1e-12));
      }
    }
  }
}

TEST_CASE("singular intervals of matrix powers") {
  const auto b3 = singular_interval(SquareMatrix::scalar(2, 2.0), 3);
  CHECK(b3.lambda == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(b3.mu == doctest::Approx(8.0).epsilon(1e-12));

  // anti-diagonal: orthogonal columns, singular values are the entries
  const auto b1 = singular_interval(kCounter, 1);
  CHECK(b1.lambda == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(b1.mu == doctest::Approx(2.0).epsilon(1e-12));

  const auto b0 = singular_interval(kCounter, 0);
  CHECK(b0.lambda == 1.0);
  CHECK(b0.mu == 1.0);

  CHECK_THROWS_AS(singular_interval(kCounter, kPowerIndexCap + 1), spou::range_error);
}

TEST_CASE("power bound reciprocity and norm domination") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    SquareMatrix m = random_matrix(d, rng);
    if (std::abs(m.determinant()) < 1e-3) continue;
    for (int j : {1, 2, 3}) {
      const auto fwd = singular_interval(m, j);
      const auto bwd = singular_interval(m, -j);
      CHECK(bwd.mu == doctest::Approx(1.0 / fwd.lambda).epsilon(1e-9));
      CHECK(bwd.lambda == doctest::Approx(1.0 / fwd.mu).epsilon(1e-9));
    }
    CHECK(spectral_radius(m) <= singular_interval(m, 1).mu * (1.0 + 1e-9));
  }
}

TEST_CASE("singular values multiply to the determinant") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 4;
    const SquareMatrix m = random_matrix(d, rng);
    const auto sv = singular_values(m);
    double prod = 1.0;
    for (double s : sv) prod *= s;
    CHECK(prod == doctest::Approx(std::abs(m.determinant())).epsilon(1e-8));
    // gains observed on random vectors stay inside [sigma_min, sigma_max]
    std::normal_distribution<double> normal;
    for (int k = 0; k < 50; ++k) {
      std::vector<double> x(d);
      for (double& v : x) v = normal(rng);
      const double nx = vec_norm(x, Norm::euclidean);
      if (nx < 1e-6) continue;
      const double gain = vec_norm(m.apply(x), Norm::euclidean) / nx;
      CHECK(gain >= sv.front() * (1.0 - 1e-9));
      CHECK(gain <= sv.back() * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("max-norm operator bounds") {
  SquareMatrix shear{{1.0, 1.0}, {0.0, 1.0}};
  CHECK(operator_norm(shear, Norm::max) == doctest::Approx(2.0));  // max abs row sum
  // inverse is [[1,-1],[0,1]], same row-sum norm
  CHECK(min_gain(shear, Norm::max) == doctest::Approx(0.5));

  const auto pb = singular_interval(shear, 2, Norm::max);
  // shear^2 = [[1,2],[0,1]]: row sums give mu = 3, inverse row sums give lambda = 1/3
  CHECK(pb.mu == doctest::Approx(3.0));
  CHECK(pb.lambda == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("determinant and inverse on small cases") {
  CHECK(kCounter.determinant() == doctest::Approx(-1.5));
  const SquareMatrix inv = kCounter.inverse();
  CHECK(inv.at(0, 1) == doctest::Approx(4.0 / 3.0));
  CHECK(inv.at(1, 0) == doctest::Approx(0.5));
  const SquareMatrix prod = kCounter * inv;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(prod.at(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));

  SquareMatrix singular{{1.0, 1.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(singular.inverse(), input_error);
}
