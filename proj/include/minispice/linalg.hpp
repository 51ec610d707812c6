#pragma once

// Dense LU with partial pivoting, shared by the real (DC, transient) and
// complex (AC) solvers.
//
// lu_factor() distributes the trailing-row updates of each elimination step
// over OpenMP threads. Every row update is independent, so the result is
// bit-identical to lu_factor_serial(), which is kept as the reference for
// tests and the benchmark.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "minispice/error.hpp"

namespace minispice {

enum class ScalarField { Real, Complex };

template <class Scalar>
inline constexpr ScalarField scalar_field_v = ScalarField::Real;
template <>
inline constexpr ScalarField scalar_field_v<std::complex<double>> = ScalarField::Complex;

template <class Scalar>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, Scalar{}) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar{1};
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  Scalar& operator()(std::size_t row, std::size_t col) { return data_[row * n_ + col]; }
  const Scalar& operator()(std::size_t row, std::size_t col) const {
    return data_[row * n_ + col];
  }

  std::span<Scalar> row(std::size_t r) { return {data_.data() + r * n_, n_}; }
  std::span<const Scalar> row(std::size_t r) const { return {data_.data() + r * n_, n_}; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Scalar> data_;
};

using RealMatrix = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<std::complex<double>>;

template <class Scalar>
struct LuFactors {
  static constexpr ScalarField field = scalar_field_v<Scalar>;

  // Unit-lower L below the diagonal, U on and above it.
  DenseMatrix<Scalar> lu;
  // perm[i] = original row placed at position i.
  std::vector<std::size_t> perm;

  std::size_t size() const noexcept { return lu.size(); }
};

inline constexpr double kPivotRelTol = 1e-13;
inline constexpr double kPivotFloor = 1e-300;

// Throws SolverError(Singular) naming the 1-based column whose best pivot
// falls below kPivotRelTol * max|a_ij| (floored at kPivotFloor).
template <class Scalar>
LuFactors<Scalar> lu_factor(DenseMatrix<Scalar> a);

template <class Scalar>
LuFactors<Scalar> lu_factor_serial(DenseMatrix<Scalar> a);

template <class Scalar>
std::vector<Scalar> lu_solve(const LuFactors<Scalar>& f, std::span<const Scalar> b);

template <class Scalar>
std::vector<Scalar> solve(DenseMatrix<Scalar> a, std::span<const Scalar> b) {
  return lu_solve(lu_factor(std::move(a)), b);
}

template <class Scalar>
std::vector<Scalar> multiply(const DenseMatrix<Scalar>& a, std::span<const Scalar> x);

// Max-row-sum and max-abs norms.
template <class Scalar>
double norm_inf(const DenseMatrix<Scalar>& a);
template <class Scalar>
double norm_inf(std::span<const Scalar> v);
template <class Scalar>
double max_abs(const DenseMatrix<Scalar>& a);

}  // namespace minispice
