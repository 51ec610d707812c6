#include <doctest.h>

#include <complex>
#include <random>

#include "minispice/linalg.hpp"

using namespace minispice;

namespace {

template <typename Scalar>
DenseMatrix<Scalar> random_matrix(std::mt19937_64& rng, std::size_t n, double diag_boost) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix<Scalar> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if constexpr (std::is_same_v<Scalar, double>) {
        a(i, j) = u(rng);
      } else {
        a(i, j) = Scalar(u(rng), u(rng));
      }
    }
    a(i, i) += diag_boost;
  }
  return a;
}

}  // namespace

TEST_CASE("solves a small system exactly") {
  RealMatrix a(3);
  a(0, 0) = 2; a(0, 1) = 1; a(0, 2) = 1;
  a(1, 0) = 4; a(1, 1) = -6; a(1, 2) = 0;
  a(2, 0) = -2; a(2, 1) = 7; a(2, 2) = 2;
  const std::vector<double> b{5, -2, 9};
  const auto x = solve(a, std::span<const double>(b));
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(1.0));
  CHECK(x[2] == doctest::Approx(2.0));
}

TEST_CASE("partial pivoting handles a zero leading entry") {
  RealMatrix a(2);
  a(0, 0) = 0; a(0, 1) = 1;
  a(1, 0) = 1; a(1, 1) = 0;
  const std::vector<double> b{3, 4};
  const auto x = solve(a, std::span<const double>(b));
  CHECK(x[0] == 4.0);
  CHECK(x[1] == 3.0);
}

TEST_CASE("singular matrix reports the failing column") {
  RealMatrix a(3);
  a(0, 0) = 1; a(0, 1) = 2; a(0, 2) = 3;
  a(1, 0) = 2; a(1, 1) = 4; a(1, 2) = 6;
  a(2, 0) = 1; a(2, 1) = 0; a(2, 2) = 1;
  try {
    (void)lu_factor(a);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.kind() == SolverErrorKind::Singular);
    CHECK(e.column >= 1);
    CHECK(e.column <= 3);
  }
}

TEST_CASE("dimension mismatch") {
  const auto f = lu_factor(RealMatrix::identity(3));
  const std::vector<double> b{1, 2};
  CHECK_THROWS_AS(lu_solve(f, std::span<const double>(b)), SolverError);
}

TEST_CASE("columns of A map to unit vectors") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {1u, 2u, 5u, 17u, 64u}) {
    const auto a = random_matrix<double>(rng, n, 0.0 + static_cast<double>(n) * 0.1);
    const auto f = lu_factor(a);
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<double> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = a(i, k);
      const auto x = lu_solve(f, std::span<const double>(col));
      for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(i == k ? 1.0 : 0.0).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("residual is small relative to the data") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10 + static_cast<std::size_t>(trial) * 7;
    const auto a = random_matrix<double>(rng, n, 0.0);
    std::vector<double> b(n);
    for (auto& v : b) v = u(rng);
    const auto x = solve(a, std::span<const double>(b));
    const auto ax = multiply(a, std::span<const double>(x));
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = ax[i] - b[i];
    CHECK(norm_inf(std::span<const double>(r)) <=
          1e-10 * (norm_inf(a) * norm_inf(std::span<const double>(x)) + 1.0));
  }
}

TEST_CASE("complex solve") {
  std::mt19937_64 rng(13);
  using C = std::complex<double>;
  const auto a = random_matrix<C>(rng, 30, 3.0);
  std::vector<C> xs(30);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = C(static_cast<double>(i), -1.0);
  const auto b = multiply(a, std::span<const C>(xs));
  const auto x = solve(a, std::span<const C>(b));
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(x[i] - xs[i]) < 1e-10);
}

TEST_CASE("parallel factorization is bit-identical to the serial reference") {
  std::mt19937_64 rng(14);
  for (std::size_t n : {3u, 49u, 50u, 120u, 200u}) {
    const auto a = random_matrix<double>(rng, n, 0.0);
    const auto p = lu_factor(a);
    const auto s = lu_factor_serial(a);
    CHECK(p.perm == s.perm);
    bool same = true;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) same = same && p.lu(i, j) == s.lu(i, j);
    }
    CHECK(same);
  }
  const auto c = random_matrix<std::complex<double>>(rng, 100, 0.0);
  const auto pc = lu_factor(c);
  const auto sc = lu_factor_serial(c);
  bool same = pc.perm == sc.perm;
  for (std::size_t i = 0; i < 100; ++i) {
    for (std::size_t j = 0; j < 100; ++j) same = same && pc.lu(i, j) == sc.lu(i, j);
  }
  CHECK(same);
}
