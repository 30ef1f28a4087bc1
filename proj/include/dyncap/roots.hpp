#pragma once

// Simultaneous root finding for complex polynomials (Aberth-Ehrlich) with
// Newton polishing.

#include <complex>
#include <vector>

#include "dyncap/polynomial.hpp"

namespace dyncap {

struct RootOptions {
  int max_iterations = 2000;
  int polish_steps = 3;
};

/// All roots of p with multiplicity (deg p of them). Exact-zero leading
/// coefficients are dropped first. A nonconvergent run is accepted only when
/// every root has a backward error within a small multiple of machine
/// epsilon (this admits the linear convergence near multiple roots);
/// otherwise NumericalFailure.
/// Instantiated for double and long double.
template <typename T>
std::vector<std::complex<T>> polynomial_roots(const Poly<std::complex<T>>& p, const RootOptions& opts = {});

/// Newton steps on p, keeping the best iterate.
template <typename T>
std::complex<T> newton_polish(const Poly<std::complex<T>>& p, std::complex<T> z, int steps = 3);

/// |p(z)| / sum |a_k| |z|^k.
template <typename T>
T backward_error(const Poly<std::complex<T>>& p, std::complex<T> z);

}  // namespace dyncap
