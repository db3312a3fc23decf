#pragma once

// Internal root-finding helpers over Boost.Math.

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cstdint>
#include <utility>

namespace robust_reserve::detail {

/// Root of a monotone f on [lo, hi] by bisection, stopping once the bracket
/// is narrower than `abs_tol`. f(lo) and f(hi) must not share a sign.
template <class F>
double bisect_root(F&& f, double lo, double hi, double abs_tol) {
  auto tol = [abs_tol](double a, double b) { return b - a <= abs_tol; };
  std::uintmax_t max_iter = 400;
  const auto bracket = boost::math::tools::bisect(f, lo, hi, tol, max_iter);
  return 0.5 * (bracket.first + bracket.second);
}

/// Root of f on [lo, hi] by TOMS 748 with relative tolerance of `bits` bits.
template <class F>
double toms748_root(F&& f, double lo, double hi, double f_lo, double f_hi, int bits = 52) {
  boost::math::tools::eps_tolerance<double> tol(bits);
  std::uintmax_t max_iter = 200;
  const auto bracket = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, max_iter);
  return 0.5 * (bracket.first + bracket.second);
}

}  // namespace robust_reserve::detail
