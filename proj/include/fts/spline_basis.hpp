#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "fts/error.hpp"

namespace fts {

inline constexpr int kCubic = 3;

/// Clamped knot sequence for a cubic B-spline basis on [front, back].
template <typename Scalar>
struct KnotVector {
  std::vector<Scalar> knots;
  int degree = kCubic;

  Scalar lower() const { return knots.front(); }
  Scalar upper() const { return knots.back(); }
  int num_functions() const { return static_cast<int>(knots.size()) - degree - 1; }
  int num_interior() const { return static_cast<int>(knots.size()) - 2 * (degree + 1); }
};

/// Nonzero basis values at a point: functions first .. first+3.
template <typename Scalar>
struct LocalBasis {
  int first = 0;
  std::array<Scalar, kCubic + 1> values{};
};

template <typename Scalar>
struct Rectangle {
  Scalar lon_min, lon_max, lat_min, lat_max;

  bool contains(Scalar lon, Scalar lat) const {
    return lon >= lon_min && lon <= lon_max && lat >= lat_min && lat <= lat_max;
  }
};

template <typename Scalar>
KnotVector<Scalar> make_clamped_knots(Scalar min, Scalar max, int n_interior) {
  if (!(max > min)) throw Error(ErrorCode::InvalidRange, "knot range requires max > min");
  if (n_interior < 0) throw Error(ErrorCode::NegativeCount, "interior knot count must be >= 0");
  KnotVector<Scalar> kv;
  kv.knots.reserve(static_cast<std::size_t>(n_interior + 2 * (kCubic + 1)));
  for (int i = 0; i <= kCubic; ++i) kv.knots.push_back(min);
  const Scalar step = (max - min) / static_cast<Scalar>(n_interior + 1);
  for (int i = 1; i <= n_interior; ++i) kv.knots.push_back(min + step * static_cast<Scalar>(i));
  for (int i = 0; i <= kCubic; ++i) kv.knots.push_back(max);
  return kv;
}

/// Index of the knot span [t_s, t_{s+1}) containing x. The right endpoint
/// belongs to the last nondegenerate span (limit from the left).
template <typename Scalar>
int find_span(const KnotVector<Scalar>& kv, Scalar x) {
  const auto& t = kv.knots;
  const int n = kv.num_functions();
  if (x >= t[static_cast<std::size_t>(n)]) return n - 1;
  int lo = kv.degree;
  int hi = n;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (x < t[static_cast<std::size_t>(mid)]) hi = mid; else lo = mid;
  }
  return lo;
}

template <typename Scalar>
void check_in_range(const KnotVector<Scalar>& kv, Scalar x) {
  if (!(x >= kv.lower() && x <= kv.upper()))
    throw Error(ErrorCode::OutOfDomain, "evaluation point outside the knot range");
}

/// The (at most) four nonzero cubic basis values at x, by the triangular
/// Cox-de Boor scheme.
template <typename Scalar>
LocalBasis<Scalar> local_basis(const KnotVector<Scalar>& kv, Scalar x) {
  check_in_range(kv, x);
  const auto& t = kv.knots;
  const int span = find_span(kv, x);
  LocalBasis<Scalar> out;
  out.first = span - kCubic;
  auto& N = out.values;
  std::array<Scalar, kCubic + 1> left{}, right{};
  N[0] = Scalar(1);
  for (int j = 1; j <= kCubic; ++j) {
    left[j] = x - t[static_cast<std::size_t>(span + 1 - j)];
    right[j] = t[static_cast<std::size_t>(span + j)] - x;
    Scalar saved(0);
    for (int r = 0; r < j; ++r) {
      const Scalar tmp = N[r] / (right[r + 1] + left[j - r]);
      N[r] = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    N[j] = saved;
  }
  return out;
}

/// Dense vector of all basis values at x.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eval_1d(const KnotVector<Scalar>& kv, Scalar x) {
  const auto lb = local_basis(kv, x);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(kv.num_functions());
  for (int r = 0; r <= kCubic; ++r) out(lb.first + r) = lb.values[static_cast<std::size_t>(r)];
  return out;
}

/// Tensor product of two clamped cubic bases over a rectangle.
///
/// Flattening is lon-major: the function with longitude index i and latitude
/// index j (both zero based) sits at position i * num_lat() + j.
template <typename Scalar>
class TensorSplineBasis {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using SparseVector = Eigen::SparseVector<Scalar>;

  /// Values below this magnitude are stored as structural zeros.
  static constexpr double kDropTolerance = 1e-14;

  TensorSplineBasis(KnotVector<Scalar> lon, KnotVector<Scalar> lat)
      : lon_(std::move(lon)), lat_(std::move(lat)) {}

  TensorSplineBasis(const Rectangle<Scalar>& domain, int n_interior_lon, int n_interior_lat)
      : lon_(make_clamped_knots(domain.lon_min, domain.lon_max, n_interior_lon)),
        lat_(make_clamped_knots(domain.lat_min, domain.lat_max, n_interior_lat)) {}

  const KnotVector<Scalar>& lon_knots() const { return lon_; }
  const KnotVector<Scalar>& lat_knots() const { return lat_; }
  int num_lon() const { return lon_.num_functions(); }
  int num_lat() const { return lat_.num_functions(); }
  int size() const { return num_lon() * num_lat(); }

  Rectangle<Scalar> domain() const {
    return {lon_.lower(), lon_.upper(), lat_.lower(), lat_.upper()};
  }

  int flat_index(int i_lon, int i_lat) const { return i_lon * num_lat() + i_lat; }
  std::array<int, 2> split_index(int j) const { return {j / num_lat(), j % num_lat()}; }

  /// Visits the nonzero tensor values at (lon, lat) in increasing flat index.
  template <typename Fn>
  void for_each_nonzero(Scalar lon, Scalar lat, Fn&& fn) const {
    if (!domain().contains(lon, lat))
      throw Error(ErrorCode::OutOfDomain, "location outside the spline domain");
    const auto bx = local_basis(lon_, lon);
    const auto by = local_basis(lat_, lat);
    for (int a = 0; a <= kCubic; ++a) {
      for (int b = 0; b <= kCubic; ++b) {
        const Scalar v = bx.values[static_cast<std::size_t>(a)] * by.values[static_cast<std::size_t>(b)];
        if (std::abs(v) < Scalar(kDropTolerance)) continue;
        fn(flat_index(bx.first + a, by.first + b), v);
      }
    }
  }

  SparseVector eval(Scalar lon, Scalar lat) const {
    SparseVector out(size());
    out.reserve(16);
    for_each_nonzero(lon, lat, [&](int j, Scalar v) { out.insertBack(j) = v; });
    return out;
  }

  Vector eval_dense(Scalar lon, Scalar lat) const {
    Vector out = Vector::Zero(size());
    for_each_nonzero(lon, lat, [&](int j, Scalar v) { out(j) = v; });
    return out;
  }

  /// Surface value sum_j coeffs[j] * S_j(lon, lat).
  template <typename Derived>
  Scalar evaluate(const Eigen::MatrixBase<Derived>& coeffs, Scalar lon, Scalar lat) const {
    Scalar acc(0);
    for_each_nonzero(lon, lat, [&](int j, Scalar v) { acc += coeffs(j) * v; });
    return acc;
  }

 private:
  KnotVector<Scalar> lon_;
  KnotVector<Scalar> lat_;
};

using Knots = KnotVector<double>;
using SplineBasis = TensorSplineBasis<double>;
using Domain = Rectangle<double>;

/// Default domain: the lower 48 states.
inline constexpr Domain kDefaultDomain{-124.0, -66.0, 24.0, 49.0};
inline constexpr int kDefaultInteriorKnots = 13;

}  // namespace fts
