#include "minispice/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace minispice {

namespace {

// Below this many trailing rows the fork/join overhead dominates.
constexpr std::ptrdiff_t kParallelRows = 48;

template <class Scalar>
double pivot_threshold(const DenseMatrix<Scalar>& a) {
  return std::max(kPivotRelTol * max_abs(a), kPivotFloor);
}

template <class Scalar>
std::size_t select_pivot(DenseMatrix<Scalar>& a, std::vector<std::size_t>& perm, std::size_t k,
                         double threshold) {
  const std::size_t n = a.size();
  std::size_t best = k;
  double best_mag = std::abs(a(k, k));
  for (std::size_t i = k + 1; i < n; ++i) {
    const double mag = std::abs(a(i, k));
    if (mag > best_mag) {
      best_mag = mag;
      best = i;
    }
  }
  if (!(best_mag >= threshold)) {
    SolverError err(SolverErrorKind::Singular,
                    "singular matrix: pivot too small at column " + std::to_string(k + 1));
    err.column = k + 1;
    throw err;
  }
  if (best != k) {
    std::swap_ranges(a.row(k).begin(), a.row(k).end(), a.row(best).begin());
    std::swap(perm[k], perm[best]);
  }
  return best;
}

template <class Scalar>
void eliminate_row(DenseMatrix<Scalar>& a, std::size_t k, std::size_t i) {
  const std::size_t n = a.size();
  const Scalar factor = a(i, k) / a(k, k);
  a(i, k) = factor;
  if (factor == Scalar{}) return;
  const Scalar* pivot_row = &a(k, 0);
  Scalar* target = &a(i, 0);
  for (std::size_t j = k + 1; j < n; ++j) target[j] -= factor * pivot_row[j];
}

}  // namespace

template <class Scalar>
LuFactors<Scalar> lu_factor_serial(DenseMatrix<Scalar> a) {
  const std::size_t n = a.size();
  const double threshold = pivot_threshold(a);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; ++k) {
    select_pivot(a, perm, k, threshold);
    for (std::size_t i = k + 1; i < n; ++i) eliminate_row(a, k, i);
  }
  return {std::move(a), std::move(perm)};
}

template <class Scalar>
LuFactors<Scalar> lu_factor(DenseMatrix<Scalar> a) {
  const std::size_t n = a.size();
  const double threshold = pivot_threshold(a);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; ++k) {
    select_pivot(a, perm, k, threshold);
    const auto first = static_cast<std::ptrdiff_t>(k + 1);
    const auto last = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (last - first > kParallelRows)
    for (std::ptrdiff_t i = first; i < last; ++i) {
      eliminate_row(a, k, static_cast<std::size_t>(i));
    }
  }
  return {std::move(a), std::move(perm)};
}

template <class Scalar>
std::vector<Scalar> lu_solve(const LuFactors<Scalar>& f, std::span<const Scalar> b) {
  const std::size_t n = f.size();
  if (b.size() != n) {
    throw SolverError(SolverErrorKind::DimensionMismatch,
                      "right-hand side has " + std::to_string(b.size()) +
                          " entries, system has " + std::to_string(n));
  }
  std::vector<Scalar> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    Scalar s = b[f.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    Scalar s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

template <class Scalar>
std::vector<Scalar> multiply(const DenseMatrix<Scalar>& a, std::span<const Scalar> x) {
  const std::size_t n = a.size();
  if (x.size() != n) {
    throw SolverError(SolverErrorKind::DimensionMismatch, "vector length does not match matrix");
  }
  std::vector<Scalar> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Scalar s{};
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

template <class Scalar>
double norm_inf(const DenseMatrix<Scalar>& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double s = 0.0;
    for (const auto& v : a.row(i)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

template <class Scalar>
double norm_inf(std::span<const Scalar> v) {
  double best = 0.0;
  for (const auto& x : v) best = std::max(best, static_cast<double>(std::abs(x)));
  return best;
}

template <class Scalar>
double max_abs(const DenseMatrix<Scalar>& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (const auto& v : a.row(i)) best = std::max(best, static_cast<double>(std::abs(v)));
  }
  return best;
}

#define MINISPICE_INSTANTIATE(S)                                                   \
  template LuFactors<S> lu_factor<S>(DenseMatrix<S>);                              \
  template LuFactors<S> lu_factor_serial<S>(DenseMatrix<S>);                       \
  template std::vector<S> lu_solve<S>(const LuFactors<S>&, std::span<const S>);    \
  template std::vector<S> multiply<S>(const DenseMatrix<S>&, std::span<const S>);  \
  template double norm_inf<S>(const DenseMatrix<S>&);                              \
  template double norm_inf<S>(std::span<const S>);                                 \
  template double max_abs<S>(const DenseMatrix<S>&);

MINISPICE_INSTANTIATE(double)
MINISPICE_INSTANTIATE(std::complex<double>)

#undef MINISPICE_INSTANTIATE

std::string_view to_string(SolverErrorKind kind) {
  switch (kind) {
    case SolverErrorKind::Singular: return "SINGULAR";
    case SolverErrorKind::NoConvergence: return "NO_CONVERGENCE";
    case SolverErrorKind::DimensionMismatch: return "DIMENSION_MISMATCH";
    case SolverErrorKind::UnknownSource: return "UNKNOWN_SOURCE";
    case SolverErrorKind::NonlinearDeck: return "NONLINEAR_DECK";
    case SolverErrorKind::UnbalancedNeumann: return "UNBALANCED_NEUMANN";
    case SolverErrorKind::InvalidArgument: return "INVALID_ARGUMENT";
  }
  return "?";
}

}  // namespace minispice
