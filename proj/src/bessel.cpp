#include "cloakspec/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "cloakspec/errors.hpp"

namespace cloakspec {
namespace {

constexpr double kSeriesLimit = 10.0;

void check_range(int m, double x) {
  if (m < 0 || m > kBesselMaxOrder) {
    throw RangeError("bessel order " + std::to_string(m) + " outside [0, 20]");
  }
  if (!(x >= 0.0) || x > kBesselMaxArgument) {
    throw RangeError("bessel argument " + std::to_string(x) +
                     " outside [0, 100]");
  }
}

double ascending_series(int m, double x) {
  const double half = 0.5 * x;
  const double q = -half * half;
  // leading term (x/2)^m / m!
  double term = 1.0;
  for (int i = 1; i <= m; ++i) term *= half / i;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + m));
    sum += term;
    if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

double miller_recurrence(int m, double x) {
  const int top = std::max(m, static_cast<int>(x));
  int start = top + 20 + static_cast<int>(std::sqrt(40.0 * top));
  if (start % 2 != 0) ++start;

  double next = 0.0;  // J_{k+1}
  double curr = 1e-30;  // J_k, arbitrary scale
  double norm = 0.0;
  double wanted = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = (2.0 * k / x) * curr - next;  // J_{k-1}
    next = curr;
    curr = prev;
    if (k - 1 == m) wanted = curr;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * curr;
    if (std::abs(curr) > 1e250) {
      curr *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      wanted *= 1e-250;
    }
  }
  norm += curr;  // J_0 term
  return wanted / norm;
}

// Unchecked evaluation; valid for orders up to 21 (needed by the derivative).
double eval_j(int m, double x) {
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  return x < kSeriesLimit ? ascending_series(m, x) : miller_recurrence(m, x);
}

struct RootCache {
  std::mutex lock;
  std::map<int, BesselRootTable> tables;
};

RootCache& root_cache() {
  static RootCache cache;
  return cache;
}

double bisect(int m, double lo, double hi) {
  double flo = eval_j(m, lo);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = eval_j(m, mid);
    if (fmid == 0.0) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Extends `table` until it holds k roots. Zeros of J_m are at least ~3
// apart, so a 0.25 scan step cannot skip a sign change pair.
void fill_roots(BesselRootTable& table, int k) {
  const int m = table.order;
  constexpr double step = 0.25;
  double x = table.roots.empty() ? std::max(0.5, static_cast<double>(m))
                                 : table.roots.back() + 1.0;
  double fx = eval_j(m, x);
  while (static_cast<int>(table.roots.size()) < k) {
    const double xn = x + step;
    if (xn > kBesselMaxArgument + 10.0) {
      throw InternalError("bessel_root: bracketing failed for order " +
                          std::to_string(m));
    }
    const double fn = eval_j(m, xn);
    if (fn == 0.0) {
      table.roots.push_back(xn);
      x = xn + 1.0;
      fx = eval_j(m, x);
      continue;
    }
    if ((fx < 0.0) != (fn < 0.0)) table.roots.push_back(bisect(m, x, xn));
    x = xn;
    fx = fn;
  }
}

}  // namespace

double bessel_j(int m, double x) {
  check_range(m, x);
  return eval_j(m, x);
}

double bessel_j_prime(int m, double x) {
  check_range(m, x);
  if (m == 0) return -eval_j(1, x);
  return 0.5 * (eval_j(m - 1, x) - eval_j(m + 1, x));
}

BesselRootTable bessel_root_table(int m, int k) {
  if (m < 0 || m > kBesselMaxOrder || k < 1 || k > kBesselMaxRootIndex) {
    throw RangeError("bessel_root: (m, k) = (" + std::to_string(m) + ", " +
                     std::to_string(k) + ") outside supported range");
  }
  auto& cache = root_cache();
  std::lock_guard guard(cache.lock);
  auto [it, inserted] = cache.tables.try_emplace(m);
  if (inserted) it->second.order = m;
  if (static_cast<int>(it->second.roots.size()) < k) fill_roots(it->second, k);
  return it->second;
}

double bessel_root(int m, int k) {
  return bessel_root_table(m, k).roots[static_cast<std::size_t>(k - 1)];
}

}  // namespace cloakspec
