#include "dyncap/roots.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "dyncap/errors.hpp"

namespace dyncap {

namespace {

// Newton correction p(z)/p'(z); for |z| > 1 evaluated through the reversed
// polynomial to avoid overflow and cancellation.
template <typename T>
std::complex<T> newton_ratio(const Poly<std::complex<T>>& p, std::complex<T> z) {
  using cd = std::complex<T>;
  constexpr T kEps = std::numeric_limits<T>::epsilon();
  const cd zero(0), one(1);
  const int n = static_cast<int>(p.size()) - 1;
  if (std::abs(z) <= T(1)) {
    cd v = p.back(), dv = zero;
    for (int i = n - 1; i >= 0; --i) {
      dv = dv * z + v;
      v = v * z + p[static_cast<size_t>(i)];
    }
    if (dv == zero) return v == zero ? zero : cd(kEps * (1 + std::abs(z)));
    return v / dv;
  }
  const cd y = one / z;
  cd q = p[0], dq = zero;  // q(y) = sum p_i y^(n-i)
  for (int i = 1; i <= n; ++i) {
    dq = dq * y + q;
    q = q * y + p[static_cast<size_t>(i)];
  }
  if (q == zero) return zero;
  return z / (cd(static_cast<T>(n)) - y * dq / q);
}

}  // namespace

template <typename T>
T backward_error(const Poly<std::complex<T>>& p, std::complex<T> z) {
  using cd = std::complex<T>;
  const T r = std::abs(z);
  cd v(0);
  T s = 0;
  if (r <= T(1)) {
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
      v = v * z + *it;
      s = s * r + std::abs(*it);
    }
  } else {
    const cd y = cd(1) / z;
    const T ry = T(1) / r;
    for (const auto& c : p) {
      v = v * y + c;
      s = s * ry + std::abs(c);
    }
  }
  return s == T(0) ? T(0) : std::abs(v) / s;
}

template <typename T>
std::complex<T> newton_polish(const Poly<std::complex<T>>& p, std::complex<T> z, int steps) {
  std::complex<T> best = z;
  T best_err = backward_error(p, z);
  for (int k = 0; k < steps && best_err > T(0); ++k) {
    z -= newton_ratio(p, z);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) break;
    const T e = backward_error(p, z);
    if (e < best_err) {
      best = z;
      best_err = e;
    }
  }
  return best;
}

template <typename T>
std::vector<std::complex<T>> polynomial_roots(const Poly<std::complex<T>>& p_in, const RootOptions& opts) {
  using cd = std::complex<T>;
  constexpr T kEps = std::numeric_limits<T>::epsilon();
  const cd zero(0), one(1);
  const Poly<cd> p = trimmed(p_in);
  const int n = static_cast<int>(p.size()) - 1;
  if (n < 0) throw InvalidInput("roots of the zero polynomial");
  std::vector<cd> z;
  if (n == 0) return z;

  // Zero roots are exact.
  size_t low = 0;
  while (p[low] == zero) ++low;
  const Poly<cd> core(p.begin() + static_cast<long>(low), p.end());
  const int m = n - static_cast<int>(low);
  z.assign(low, zero);
  if (m == 0) return z;
  if (m == 1) {
    z.push_back(-core[0] / core[1]);
    return z;
  }

  // Starting circle at the geometric-mean modulus, offset from the axes.
  const T radius = std::pow(std::abs(core[0]) / std::abs(core.back()), T(1) / m);
  std::vector<cd> r(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k)
    r[static_cast<size_t>(k)] = std::polar(radius, T(2) * std::numbers::pi_v<T> * k / m + T(0.4));
  std::vector<bool> done(static_cast<size_t>(m), false);
  int remaining = m;
  for (int it = 0; it < opts.max_iterations && remaining > 0; ++it) {
    for (size_t i = 0; i < r.size(); ++i) {
      if (done[i]) continue;
      const cd ratio = newton_ratio(core, r[i]);
      cd s = zero;
      for (size_t j = 0; j < r.size(); ++j)
        if (j != i) s += one / (r[i] - r[j]);
      const cd w = ratio / (one - ratio * s);
      r[i] -= w;
      if (std::abs(w) <= 4 * kEps * std::abs(r[i]) || ratio == zero) {
        done[i] = true;
        --remaining;
      }
    }
  }
  for (size_t i = 0; i < r.size(); ++i) {
    r[i] = newton_polish(core, r[i], opts.polish_steps);
    if (!std::isfinite(r[i].real()) || !std::isfinite(r[i].imag()))
      throw NumericalFailure("root finder diverged on a polynomial of degree " + std::to_string(m));
    if (!done[i] && !(backward_error(core, r[i]) <= 64 * m * kEps)) {
      std::ostringstream msg;
      msg << "root finder did not converge: degree " << m << ", root " << r[i] << ", backward error "
          << backward_error(core, r[i]);
      throw NumericalFailure(msg.str());
    }
  }
  z.insert(z.end(), r.begin(), r.end());
  return z;
}

template std::vector<std::complex<double>> polynomial_roots(const CPoly&, const RootOptions&);
template std::vector<std::complex<long double>> polynomial_roots(const Poly<std::complex<long double>>&,
                                                                 const RootOptions&);
template std::complex<double> newton_polish(const CPoly&, std::complex<double>, int);
template std::complex<long double> newton_polish(const Poly<std::complex<long double>>&, std::complex<long double>,
                                                 int);
template double backward_error(const CPoly&, std::complex<double>);
template long double backward_error(const Poly<std::complex<long double>>&, std::complex<long double>);

}  // namespace dyncap
