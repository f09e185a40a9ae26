#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rpm/hankel.hpp"
#include "rpm/numerics.hpp"
#include "rpm/riccati.hpp"

namespace rpm {

/// Which two Hankel conditions the shifted-origin workflow solves
/// simultaneously for (E, f0). parity_split applies the same (D, d) condition
/// to the even-index and odd-index coefficient subsequences separately; it is
/// the default because it reduces exactly to the symmetric machinery when the
/// expansion point is a symmetry center (even part vanishes identically) and
/// its per-dimension roots track the published sequences. The other two pair
/// full-sequence determinants at consecutive offsets or dimensions; they
/// converge to the same limit but follow different finite-D root chains.
enum class NonsymPairing { parity_split, next_offset, next_dimension };

/// Numeric knobs shared by every workflow. Mode-specific inputs (potential,
/// parity, start guesses) are arguments of the individual entry points.
struct SolveConfig {
  int dim_min = 2;  // smallest determinant dimension D
  int dim_max = 30;
  std::vector<int> offsets{0, 1};  // d values, one root sequence each
  long initial_bits = 256;
  int target_digits = 40;
  /// Scan window override; lo == hi == 0 means the mode default
  /// (g in (1e-3, 1) for critical parameters, oracle estimate +-10% for
  /// eigenvalues). Windows only seed scans, so doubles suffice.
  double window_lo = 0.0;
  double window_hi = 0.0;
  NonsymPairing pairing = NonsymPairing::parity_split;
};

/// One refined root at a given (D, d).
struct RootEntry {
  int dim = 0;     // D
  int offset = 0;  // d
  BigReal value;
  long precision_bits = 0;
  /// log10 of |H| / (|dH| * |root|) at the accepted root; large negative
  /// means the root is clean.
  double log10_residual = 0.0;
  bool converged = false;
  bool trusted = true;
};

/// The root sequence of one (state, d) pair over increasing dimension.
struct RootSequence {
  int offset = 0;
  /// First dimension at which the sequence exists; 0 when it never started.
  int start_dimension = 0;
  std::map<int, RootEntry> entries;  // keyed by D
};

/// Least-squares fit of ln(width) against D: width ~ amplitude *
/// exp(-rate * D).
struct ConvergenceFit {
  double amplitude = 0.0;
  double rate = 0.0;
  double r_squared = 0.0;
  bool valid = false;
};

/// Paired upper/lower sequences for one state, with convergence diagnostics.
struct BoundReport {
  int k = 0;       // state index (critical mode) or global index (eigenvalue)
  int parity = 0;  // s
  RootSequence lower;
  RootSequence upper;
  /// |upper - lower| at every dimension where both sequences have entries.
  std::vector<std::pair<int, BigReal>> widths;
  ConvergenceFit fit;
  /// Dimensions where the expected order upper > lower failed.
  int order_violations = 0;
  /// Set when the last three dimensions of both sequences agree on the same
  /// truncated target-digit string; that string is converged_value.
  bool converged = false;
  std::string converged_value;
  /// An evaluation hit the precision-escalation cap somewhere; affected
  /// roots were dropped from the sequences.
  bool untrusted_encountered = false;
};

/// Fit ln(width) vs D over dimensions in [dim_lo, dim_hi]; entries with
/// non-positive width are skipped. Needs at least three usable points.
ConvergenceFit fit_log_linear(const std::vector<std::pair<int, BigReal>>& widths,
                              int dim_lo, int dim_hi);

/// Critical couplings of V(x) = -x^2 + g x^4: for each state k = 0..k_max
/// the coupling where the k-th level crosses zero, bracketed by the d = 0
/// sequence from above and the d = 1 sequence from below. State parity is
/// k mod 2. Reports come back ordered by k.
std::vector<BoundReport> critical_parameters(int k_max, const SolveConfig& cfg);

/// Bounds for one bound-state energy of a fixed even-polynomial well. The
/// state is addressed by parity and by its index within that parity block
/// (0 = lowest). d = 0 approaches from below, d = 1 from above. The scan
/// window comes from the grid oracle unless the config overrides it.
BoundReport eigenvalue_bounds(const EvenPolynomial& pot, int parity,
                              int state_index, const SolveConfig& cfg);

/// One complex eigenvalue estimate at a given (D, d).
struct ResonanceEntry {
  int dim = 0;
  int offset = 0;
  BigComplex value;
  long precision_bits = 0;
  bool converged = false;
};

/// Complex eigenvalue sequences for a well with a negative quartic tail.
/// Each offset's sequence is warm-started from the previous dimension;
/// dimensions where Newton diverges are skipped. No bound ordering holds
/// here; convergence shows as inter-dimension agreement.
std::vector<ResonanceEntry> resonance_sequence(const EvenPolynomial& pot,
                                               int parity,
                                               const BigComplex& start,
                                               const SolveConfig& cfg);

/// One (E, f0) estimate of the shifted-origin workflow at a given (D, d).
struct NonsymEntry {
  int dim = 0;
  int offset = 0;
  BigReal energy;
  BigReal f0;  // series value at the expansion point
  long precision_bits = 0;
  bool converged = false;
  bool oscillatory = false;
};

/// Eigenvalue estimate for a symmetric double well treated without parity:
/// expand about the right-hand minimum and solve two Hankel conditions for
/// (E, f0) by 2-D Newton, one root stream per offset. Converges to the mean
/// of the lowest doublet. The default parity_split pairing runs each stream
/// as a trust-region Newton chain at a single fixed precision, seeded by an
/// f0 multistart and warm-started across and along streams; the legacy
/// pairings keep a damped-Newton warm chain per stream. Oscillatory Newton
/// runs are recorded and flagged, not fatal; they report the orbit centroid.
/// Only quartic potentials (two coefficients) are supported.
std::vector<NonsymEntry> nonsym_eigenvalue(const EvenPolynomial& pot,
                                           const SolveConfig& cfg);

/// Adaptive-precision determinant evaluation: run the supplied evaluation at
/// `bits` and `bits + 64`; when the two disagree in sign or by more than a
/// relative 1e-8, double `bits` and try again, up to cap_bits (defaults to
/// 16x the starting precision). The returned result is the higher-precision
/// member of the first agreeing pair. Exact zero at both precisions counts
/// as agreement. trusted == false means the cap was hit without agreement;
/// roots based on such evaluations must be discarded.
struct TrustedEval {
  DetResult<BigReal> det;
  long precision_used = 0;
  bool trusted = false;
};

TrustedEval escalate_precision(
    const std::function<DetResult<BigReal>(long)>& eval_at_bits,
    long initial_bits, long cap_bits = 0);

}  // namespace rpm
