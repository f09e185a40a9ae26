#pragma once

#include <vector>

#include "rpm/riccati.hpp"

namespace rpm {

/// Uniform grid on [-L, L] including both endpoints, where the wavefunction
/// is pinned to zero. The eigenproblem lives on the N-2 interior points.
struct GridSpec {
  double half_width = 6.0;  // L
  int points = 2048;        // N, endpoints included

  double spacing() const { return 2.0 * half_width / (points - 1); }
};

/// Lowest `count` eigenvalues of the second-order central-difference
/// discretization of psi'' = (V - E) psi with Dirichlet walls at +-L,
/// Richardson-extrapolated over the two grids (N, 2N). Hardware floats
/// throughout: this is an independent cross-check of leading digits, not a
/// precision tool. Throws when the box is inadequate, i.e. the largest
/// returned eigenvalue comes within 20 energy units of V(+-L).
std::vector<double> grid_eigenvalues(const EvenPolynomial& pot, GridSpec grid,
                                     int count);

/// Same discretization without the Richardson step. Carries the full h^2
/// truncation error; useful for roughing passes and for measuring what the
/// extrapolation buys. No box adequacy check.
std::vector<double> grid_eigenvalues_single(const EvenPolynomial& pot,
                                            GridSpec grid, int count);

/// E_k (0-based, global ordering) of a confining even-polynomial well, with
/// the box grown automatically until the forbidden tail suppresses the
/// Dirichlet walls. Good for roughly 8-10 digits on low-lying states; used
/// to seed scan windows and to cross-check converged results.
double oracle_estimate(const EvenPolynomial& pot, int k);

/// E_k of V(x) = -x^2 + g x^4 from the grid oracle, with the box sized
/// automatically. A near-zero return confirms g sits at the critical
/// coupling for state k. Only k <= 5 is supported; grid accuracy degrades
/// beyond that.
double critical_check(int k, double g_value);

}  // namespace rpm
