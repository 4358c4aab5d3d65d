#pragma once

#include <vector>

namespace cloakspec {

/// Largest supported order and argument for the Bessel routines.
inline constexpr int kBesselMaxOrder = 20;
inline constexpr double kBesselMaxArgument = 100.0;
inline constexpr int kBesselMaxRootIndex = 20;

/// J_m(x) for 0 <= m <= 20, 0 <= x <= 100, absolute error below 1e-10.
///
/// Arguments below 10 use the ascending power series (largest term is
/// under 1e3, so cancellation costs at most three digits). Larger arguments
/// use Miller's backward recurrence normalised by J_0 + 2*sum J_2k = 1.
/// Throws RangeError outside the supported range.
double bessel_j(int m, double x);

/// J_m'(x) = (J_{m-1}(x) - J_{m+1}(x)) / 2, with J_0' = -J_1.
double bessel_j_prime(int m, double x);

/// k-th positive zero j_{m,k} of J_m (k >= 1, k <= 20), to about 1e-13.
/// Roots are bracketed by a sign scan and refined by bisection, then cached
/// per order.
double bessel_root(int m, int k);

/// Append-only cache of the positive zeros of one order.
struct BesselRootTable {
  int order = 0;
  std::vector<double> roots;  // strictly increasing
  double tolerance = 1e-12;   // |J_order(r)| <= tolerance for every root
};

/// Snapshot of the cached table for order m holding at least k roots.
BesselRootTable bessel_root_table(int m, int k);

}  // namespace cloakspec
