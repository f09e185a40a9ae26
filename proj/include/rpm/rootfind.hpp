#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "rpm/numerics.hpp"

namespace rpm {

/// Scaled view of a function value: sign in {-1, 0, +1} and ln|f|. Determinant
/// magnitudes span thousands of orders, so root finding works in this space
/// rather than on raw values.
struct SignLog {
  int sign = 0;
  BigReal log_abs;
};

using RealProbe = std::function<SignLog(const BigReal&)>;

struct Bracket {
  BigReal lo;
  BigReal hi;
};

struct ScanResult {
  /// Sign changes between consecutive grid points (zero-width when a grid
  /// point hit an exact zero).
  std::vector<Bracket> sign_changes;
  /// Interior grid points where ln|f| has a strict local minimum with no
  /// sign change around it: candidate even-multiplicity roots.
  std::vector<BigReal> dips;
};

/// Probe the function on an ascending grid and classify what it saw.
ScanResult scan_real(const RealProbe& fn, const std::vector<BigReal>& grid);

/// Ascending log-spaced grid of n points covering [lo, hi], lo > 0.
std::vector<BigReal> log_grid(const BigReal& lo, const BigReal& hi, int n);

struct RefineResult {
  BigReal root;
  bool converged = false;
  int evaluations = 0;
};

/// Shrink a sign-change bracket to relative width rel_tol: plain bisection
/// until the width drops below 1000 * rel_tol * |midpoint|, then an Illinois
/// secant polish on sign * exp(log_abs - scale). Never steps outside the
/// bracket. max_evals bounds the number of probe calls.
RefineResult refine_real(const RealProbe& fn, Bracket bracket,
                         const BigReal& rel_tol, int max_evals = 400);

/// Function value and derivative at a complex point.
using ComplexEval =
    std::function<std::pair<BigComplex, BigComplex>(const BigComplex&)>;

struct ComplexRootResult {
  BigComplex root;
  bool converged = false;
  int iterations = 0;
};

/// Damped Newton iteration in the complex plane. Steps that fail to shrink
/// |f| are halved (up to 30 times); when the derivative is zero or
/// non-finite a one-sided finite difference with step 2^(-bits/3) stands in.
/// Divergence is declared after five consecutive iterations of growing step
/// size. Converges when the step drops below rel_tol * |z|.
ComplexRootResult newton_complex(const ComplexEval& fn, BigComplex start,
                                 const BigReal& rel_tol, int max_iter = 80);

/// One evaluation of a two-equation system and its Jacobian.
struct Eval2d {
  BigReal r1, r2;
  BigReal j11, j12, j21, j22;
};

using Fn2d = std::function<Eval2d(const BigReal&, const BigReal&)>;

struct Newton2dResult {
  BigReal x, y;
  bool converged = false;
  /// The iteration cycled between near-coincident points without residual
  /// progress instead of settling.
  bool oscillatory = false;
  int iterations = 0;
};

/// Damped two-dimensional Newton. Residuals are compared in a fixed scale
/// taken from the starting point so the two equations weigh equally. When no
/// damping factor reduces the residual the full step is taken anyway, which
/// lets genuinely oscillatory fixed cycles show themselves; a cycle is
/// reported when recent iterates revisit an earlier point to within
/// 1000 * rel_tol while the residual has not halved over the window.
Newton2dResult newton_2d(const Fn2d& fn, BigReal x0, BigReal y0,
                         const BigReal& rel_tol, int max_iter = 60);

/// Undamped two-dimensional Newton with a step-length trust region: each raw
/// Newton step is clamped to step_growth times the length of the previously
/// accepted step (the first step is free). No merit function is consulted, so
/// the iteration follows the plain Newton flow wherever that flow is tame and
/// is merely kept from jumping across basins where it is not. Convergence is
/// a step shorter than rel_tol * |x|. Two cycle classifications: recent
/// iterates revisiting each other to within 10 * rel_tol * |x| without the
/// residual halving, or the budget running out on a bounded orbit (trailing
/// iterates within a 2^-20 relative spread). An oscillatory result reports
/// the centroid of the trailing window as its representative point.
Newton2dResult newton_2d_tr(const Fn2d& fn, BigReal x0, BigReal y0,
                            const BigReal& rel_tol, int max_iter = 400,
                            long step_growth = 16);

}  // namespace rpm
