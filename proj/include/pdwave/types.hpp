#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace pdwave {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

namespace detail {

inline void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

inline void require_domain(bool cond, const char* what) {
  if (!cond) throw std::domain_error(what);
}

inline double norm_l2(const cvec& a) {
  double acc = 0.0;
  for (const cplx& v : a) acc += std::norm(v);
  return std::sqrt(acc);
}

inline double energy(const cvec& a) {
  double acc = 0.0;
  for (const cplx& v : a) acc += std::norm(v);
  return acc;
}

}  // namespace detail

}  // namespace pdwave
