#include "rpm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "rpm/oracle.hpp"
#include "rpm/rootfind.hpp"

namespace rpm {

namespace {

constexpr double kLn10 = 2.302585092994045684;

long round_to_limb(long bits) { return ((bits + 63) / 64) * 64; }

long bits_for_digits(long digits) {
  return static_cast<long>(static_cast<double>(digits) * 3.3219280948873623) +
         1;
}

/// 10^k at the given precision; k may be negative.
BigReal pow10_at(long prec, long k) {
  PrecisionCtx ctx(prec);
  BigReal r = ctx.real(1);
  BigReal ten = ctx.real(10);
  long n = k < 0 ? -k : k;
  for (long i = 0; i < n; ++i) r *= ten;
  if (k < 0) r = ctx.real(1) / r;
  return r;
}

std::vector<BigReal> linear_grid(const BigReal& lo, const BigReal& hi, int n) {
  if (n < 2) throw std::invalid_argument("grid needs at least two points");
  if (!(lo < hi)) throw std::invalid_argument("grid bounds out of order");
  const long prec = std::max(lo.precision(), hi.precision());
  PrecisionCtx ctx(prec);
  BigReal span = hi - lo;
  std::vector<BigReal> g;
  g.reserve(static_cast<size_t>(n));
  g.push_back(lo);
  for (int i = 1; i + 1 < n; ++i) {
    BigReal t = ctx.real(static_cast<long>(i)) / ctx.real(n - 1L);
    g.push_back(lo + span * t);
  }
  g.push_back(hi);
  return g;
}

/// The two evaluation channels every real-root workflow needs: the Hankel
/// determinant as a function of the scanned variable, and the same plus its
/// derivative for Newton polishing. Precision is a per-call argument so the
/// escalation loop can re-run the identical computation at more bits.
struct EvalPlan {
  std::function<DetResult<BigReal>(const BigReal&, long)> det;
  std::function<DetWithDerivative<BigReal>(const BigReal&, long)> det_deriv;
};

/// Critical-parameter channel: x is the coupling g of V = -x^2 + g x^4 at
/// fixed E = 0; the derivative is with respect to g.
EvalPlan critical_plan(int parity, int dim, int offset) {
  const int count = static_cast<int>(required_coefficients(dim, offset));
  EvalPlan plan;
  plan.det = [=](const BigReal& g, long bits) {
    PrecisionCtx ctx(bits);
    EvenPolynomial pot{{ctx.real(-1), g.with_precision(bits)}};
    auto f = symmetric_series<BigReal>(pot, ctx.real(0), parity, count);
    return hankel_det<BigReal>(f, dim, offset);
  };
  plan.det_deriv = [=](const BigReal& g, long bits) {
    PrecisionCtx ctx(bits);
    EvenPolynomial pot{{ctx.real(-1), g.with_precision(bits)}};
    auto s = symmetric_series_dcoeff(pot, ctx.real(0), parity, count, 1);
    return hankel_det_derivative<BigReal>(s.f, s.df, dim, offset);
  };
  return plan;
}

/// Eigenvalue channel: x is the energy at a fixed potential; the derivative
/// is with respect to E.
EvalPlan eigen_plan(const EvenPolynomial& pot, int parity, int dim,
                    int offset) {
  const int count = static_cast<int>(required_coefficients(dim, offset));
  std::vector<BigReal> coeffs = pot.coeffs;
  auto pot_at = [coeffs](long bits) {
    EvenPolynomial p;
    p.coeffs.reserve(coeffs.size());
    for (const auto& c : coeffs) p.coeffs.push_back(c.with_precision(bits));
    return p;
  };
  EvalPlan plan;
  plan.det = [=](const BigReal& e, long bits) {
    auto p = pot_at(bits);
    auto f =
        symmetric_series<BigReal>(p, e.with_precision(bits), parity, count);
    return hankel_det<BigReal>(f, dim, offset);
  };
  plan.det_deriv = [=](const BigReal& e, long bits) {
    auto p = pot_at(bits);
    auto s = symmetric_series_denergy<BigReal>(p, e.with_precision(bits),
                                               parity, count);
    return hankel_det_derivative<BigReal>(s.f, s.df, dim, offset);
  };
  return plan;
}

struct Refined {
  BigReal value;
  long precision_bits = 0;
  double log10_residual = 0.0;
  bool ok = false;
  bool converged = false;
  bool trusted = true;
};

/// Working precision for a refinement: headroom over the observed
/// cancellation so that target_digits survive with guard digits to spare,
/// never below the string-emission floor.
long refinement_bits(long bits_lost, int target_digits) {
  const long margin = bits_for_digits(target_digits + 18) + 64;
  const long w = std::max(bits_lost + margin, bits_for_digits(65));
  return round_to_limb(std::max(w, kMinPrecisionBits));
}

SignLog probe_det(const EvalPlan& plan, const BigReal& x, long bits) {
  auto r = plan.det(x, bits);
  SignLog s;
  s.sign = r.value.sign();
  s.log_abs = r.log_abs;
  return s;
}

/// Bisection tail shared by all real refinements: shrink the bracket at
/// fixed precision, then evaluate value and derivative at the accepted root
/// for the residual diagnostic.
Refined finish_refine(const EvalPlan& plan, const Bracket& br, long bits,
                      const SolveConfig& cfg) {
  Refined out;
  PrecisionCtx ctx(bits);
  const BigReal tol = pow10_at(bits, -(cfg.target_digits + 10));
  auto probe = [&](const BigReal& v) { return probe_det(plan, v, bits); };
  const int budget = static_cast<int>(10 * ctx.decimal_digits());
  RefineResult rr = refine_real(probe, br, tol, budget);
  if (!rr.converged) return out;

  auto fin = plan.det_deriv(rr.root, bits);
  if (fin.det.value.is_zero() || fin.derivative.is_zero()) {
    out.log10_residual = -1e9;
  } else {
    BigReal denom = abs(fin.derivative) * abs(rr.root);
    out.log10_residual = (fin.det.log_abs - log(denom)).to_double() / kLn10;
  }
  out.value = rr.root;
  out.precision_bits = bits;
  out.ok = true;
  out.converged = true;
  return out;
}

/// Refine a fresh scan bracket: trust-check at the midpoint sets the working
/// precision, then bisection does the rest.
Refined refine_bracket(const EvalPlan& plan, const Bracket& br,
                       const SolveConfig& cfg, long* bits_hint) {
  Refined out;
  const long start_bits = std::max(*bits_hint, cfg.initial_bits);
  BigReal mid = ldexp2(br.lo + br.hi, -1);
  TrustedEval te = escalate_precision(
      [&](long b) { return plan.det(mid, b); }, start_bits,
      16 * cfg.initial_bits);
  if (!te.trusted) {
    out.trusted = false;
    return out;
  }
  const long w = refinement_bits(te.det.bits_lost, cfg.target_digits);
  out = finish_refine(plan, br, w, cfg);
  if (out.ok) *bits_hint = std::max(cfg.initial_bits, te.precision_used);
  return out;
}

/// Warm-started refinement: Newton polish from the previous dimension's
/// root, then a tight bracket handed to bisection. gate_rel > 0 rejects
/// roots that drift more than that relative distance from the start, which
/// is what keeps a tracked sequence from hopping onto a neighbour.
Refined refine_root(const EvalPlan& plan, const BigReal& start,
                    double gate_rel, bool positive_only,
                    const SolveConfig& cfg, long* bits_hint) {
  Refined out;
  const long start_bits = std::max(*bits_hint, cfg.initial_bits);
  TrustedEval te = escalate_precision(
      [&](long b) { return plan.det(start, b); }, start_bits,
      16 * cfg.initial_bits);
  if (!te.trusted) {
    out.trusted = false;
    return out;
  }
  const long w = refinement_bits(te.det.bits_lost, cfg.target_digits);
  PrecisionCtx ctx(w);
  const BigReal tol_newton = pow10_at(w, -(cfg.target_digits + 12));
  const BigReal gate = gate_rel > 0
                           ? abs(start) * ctx.real_from_double(gate_rel)
                           : BigReal(w, 0L);

  BigReal x = start.with_precision(w);
  bool polished = false;
  for (int iter = 0; iter < 40; ++iter) {
    auto hd = plan.det_deriv(x, w);
    if (hd.det.value.is_zero()) {
      polished = true;
      break;
    }
    if (hd.derivative.is_zero() || !hd.derivative.is_finite()) break;
    BigReal step = hd.det.value / hd.derivative;
    BigReal cap = abs(x) * ctx.real_from_double(0.05);
    if (cap < abs(step)) step = step.sign() > 0 ? cap : -cap;
    BigReal xn = x - step;
    if (positive_only && !(xn.sign() > 0)) xn = ldexp2(x, -1);
    if (gate_rel > 0 && abs(xn - start) > gate) return out;
    BigReal moved = abs(xn - x);
    x = std::move(xn);
    if (moved <= abs(x) * tol_newton) {
      polished = true;
      break;
    }
  }

  BigReal h = polished ? abs(x) * pow10_at(w, -(cfg.target_digits + 8))
                       : abs(x) * ctx.real_from_double(1e-3);
  Bracket br;
  bool bracketed = false;
  for (int attempt = 0; attempt < 14 && !bracketed; ++attempt) {
    BigReal lo = x - h;
    BigReal hi = x + h;
    if (positive_only && !(lo.sign() > 0)) lo = ldexp2(x, -1);
    SignLog sl = probe_det(plan, lo, w);
    SignLog sh = probe_det(plan, hi, w);
    if (sl.sign == 0) {
      br = {lo, lo};
      bracketed = true;
    } else if (sh.sign == 0) {
      br = {hi, hi};
      bracketed = true;
    } else if (sl.sign * sh.sign < 0) {
      br = {std::move(lo), std::move(hi)};
      bracketed = true;
    } else {
      h = ldexp2(h, 3);
      if (gate_rel > 0 && h > gate) break;
    }
  }
  if (!bracketed) return out;

  out = finish_refine(plan, br, w, cfg);
  if (out.ok && gate_rel > 0 && abs(out.value - start) > gate) {
    out = Refined{};
    return out;
  }
  if (out.ok) *bits_hint = std::max(cfg.initial_bits, te.precision_used);
  return out;
}

/// Even-multiplicity root (degenerate eigenvalue, e.g. the harmonic level):
/// the determinant dips without a sign change, so locate the zero through
/// the sign change of the derivative and accept only if the dip is deep
/// enough to certify an actual zero rather than a shallow local minimum.
Refined refine_dip(const EvalPlan& plan, const Bracket& br0,
                   const SolveConfig& cfg, long bits) {
  Refined out;
  const long w = round_to_limb(std::max(bits, 2 * cfg.initial_bits));
  PrecisionCtx ctx(w);
  auto dprobe = [&](const BigReal& v) {
    auto r = plan.det_deriv(v, w);
    SignLog s;
    s.sign = r.derivative.sign();
    s.log_abs = log(abs(r.derivative));
    return s;
  };
  SignLog sl = dprobe(br0.lo);
  SignLog sh = dprobe(br0.hi);
  if (sl.sign * sh.sign >= 0 && sl.sign != 0 && sh.sign != 0) return out;
  const BigReal tol = pow10_at(w, -(cfg.target_digits + 10));
  const int budget = static_cast<int>(10 * ctx.decimal_digits());
  RefineResult rr = refine_real(dprobe, br0, tol, budget);
  if (!rr.converged) return out;

  // Depth certificate: |H| at the candidate must sit far below |H| a small
  // relative distance away, as an actual zero of even multiplicity does.
  auto at_root = plan.det(rr.root, w);
  BigReal away_x = rr.root + abs(rr.root) * pow10_at(w, -12);
  auto away = plan.det(away_x, w);
  double depth;
  if (at_root.value.is_zero()) {
    depth = 1e9;
  } else if (away.value.is_zero()) {
    return out;
  } else {
    depth = (away.log_abs - at_root.log_abs).to_double() / kLn10;
  }
  if (depth < 40.0) return out;

  out.value = rr.root;
  out.precision_bits = w;
  out.log10_residual = -depth;
  out.ok = true;
  out.converged = true;
  return out;
}

RootEntry make_entry(int dim, int offset, const Refined& r) {
  RootEntry e;
  e.dim = dim;
  e.offset = offset;
  e.value = r.value;
  e.precision_bits = r.precision_bits;
  e.log10_residual = r.log10_residual;
  e.converged = r.converged;
  e.trusted = r.trusted;
  return e;
}

/// One root sequence being followed across dimensions.
struct TrackedState {
  BigReal value;
  long bits_hint = 0;
  bool probation = false;  // opened at the previous D, not yet re-confirmed
  bool from_dip = false;
  int start_dim = 0;
  int misses = 0;
  std::map<int, RootEntry> entries;
};

/// Local rescue when warm Newton wanders: scan around the previous value and
/// refine the bracket nearest to it, accepting only a root within `gate_rel`.
Refined rescue_scan(const EvalPlan& plan, const BigReal& prev, double gate_rel,
                    const SolveConfig& cfg, long* bits_hint,
                    bool positive_only) {
  const long bits = std::max(*bits_hint, cfg.initial_bits);
  PrecisionCtx ctx(bits);
  BigReal spread = abs(prev) * ctx.real_from_double(std::max(0.15, gate_rel));
  BigReal lo = prev - spread;
  BigReal hi = prev + spread;
  if (positive_only && !(lo.sign() > 0)) lo = ldexp2(prev, -2);
  auto probe = [&](const BigReal& v) { return probe_det(plan, v, bits); };
  ScanResult sc = scan_real(probe, linear_grid(lo, hi, 48));
  const Bracket* best = nullptr;
  BigReal best_dist;
  for (const auto& b : sc.sign_changes) {
    BigReal mid = ldexp2(b.lo + b.hi, -1);
    BigReal dist = abs(mid - prev);
    if (best == nullptr || dist < best_dist) {
      best = &b;
      best_dist = std::move(dist);
    }
  }
  if (best == nullptr) return Refined{};
  Refined r = refine_bracket(plan, *best, cfg, bits_hint);
  if (r.ok && abs(r.value - prev) > abs(prev) * ctx.real_from_double(gate_rel)) {
    return Refined{};
  }
  return r;
}

RootSequence sequence_of(const TrackedState& ts, int offset) {
  RootSequence s;
  s.offset = offset;
  s.start_dimension = ts.start_dim;
  s.entries = ts.entries;
  return s;
}

/// True when the last three entries of the sequence agree on one rounded
/// string; that string is returned through `value`. Rounding (rather than
/// truncation) keeps the comparison stable when bounds straddle the target
/// value from opposite sides of a decimal boundary.
bool sequence_converged(const RootSequence& seq, int digits,
                        std::string* value) {
  if (seq.entries.size() < 3) return false;
  auto it = seq.entries.rbegin();
  std::string a = round_decimal(it->second.value, digits);
  ++it;
  std::string b = round_decimal(it->second.value, digits);
  ++it;
  std::string c = round_decimal(it->second.value, digits);
  if (a == b && b == c) {
    *value = a;
    return true;
  }
  return false;
}

/// Pair two sequences into a report: widths at common dimensions, ordering
/// violations (upper must not fall below lower; an exact tie is the
/// degenerate case where both conditions vanish at the level itself), the
/// log-linear convergence fit and the three-consecutive-agreement
/// convergence call.
BoundReport pair_report(int k, int parity, RootSequence lower,
                        RootSequence upper, const SolveConfig& cfg) {
  BoundReport br;
  br.k = k;
  br.parity = parity;
  for (const auto& [dim, lo_entry] : lower.entries) {
    auto it = upper.entries.find(dim);
    if (it == upper.entries.end()) continue;
    BigReal w = it->second.value - lo_entry.value;
    if (w.sign() < 0) ++br.order_violations;
    br.widths.emplace_back(dim, abs(w));
  }
  if (!br.widths.empty()) {
    br.fit = fit_log_linear(br.widths, br.widths.front().first,
                            br.widths.back().first);
  }
  std::string lo_str, up_str;
  if (sequence_converged(lower, cfg.target_digits, &lo_str) &&
      sequence_converged(upper, cfg.target_digits, &up_str) &&
      lo_str == up_str) {
    br.converged = true;
    br.converged_value = lo_str;
  }
  br.lower = std::move(lower);
  br.upper = std::move(upper);
  return br;
}

}  // namespace

TrustedEval escalate_precision(
    const std::function<DetResult<BigReal>(long)>& eval_at_bits,
    long initial_bits, long cap_bits) {
  long bits = std::max(initial_bits, kMinPrecisionBits);
  if (cap_bits <= 0) cap_bits = 16 * bits;
  const BigReal tol = BigReal::from_double(kMinPrecisionBits, 1e-8);
  TrustedEval out;
  for (;;) {
    DetResult<BigReal> lo = eval_at_bits(bits);
    DetResult<BigReal> hi = eval_at_bits(bits + 64);
    const bool zero_lo = lo.value.is_zero();
    const bool zero_hi = hi.value.is_zero();
    bool agree = zero_lo && zero_hi;
    if (!agree && !zero_lo && !zero_hi &&
        lo.value.sign() == hi.value.sign()) {
      BigReal diff = abs(lo.value - hi.value);
      BigReal scale = max(abs(lo.value), abs(hi.value));
      agree = diff <= scale * tol;
    }
    if (agree) {
      out.det = std::move(hi);
      out.precision_used = bits + 64;
      out.trusted = true;
      return out;
    }
    if (2 * bits > cap_bits) {
      out.det = std::move(hi);
      out.precision_used = bits + 64;
      out.trusted = false;
      return out;
    }
    bits *= 2;
  }
}

ConvergenceFit fit_log_linear(
    const std::vector<std::pair<int, BigReal>>& widths, int dim_lo,
    int dim_hi) {
  ConvergenceFit fit;
  std::vector<std::pair<double, double>> pts;
  for (const auto& [dim, w] : widths) {
    if (dim < dim_lo || dim > dim_hi) continue;
    if (!(w.sign() > 0)) continue;
    pts.emplace_back(static_cast<double>(dim), log(w).to_double());
  }
  if (pts.size() < 3) return fit;
  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0) return fit;
  const double slope = (n * sxy - sx * sy) / den;
  const double intercept = (sy - slope * sx) / n;
  const double cov = n * sxy - sx * sy;
  const double var_y = n * syy - sy * sy;
  fit.rate = -slope;
  fit.amplitude = std::exp(intercept);
  fit.r_squared = var_y > 0 ? (cov * cov) / (den * var_y) : 1.0;
  fit.valid = true;
  return fit;
}

std::vector<BoundReport> critical_parameters(int k_max,
                                             const SolveConfig& cfg) {
  if (k_max < 0 || k_max > 11) {
    throw std::invalid_argument("supported states are k = 0..11");
  }
  if (cfg.dim_min < 2) {
    throw std::invalid_argument("determinant dimension starts at 2");
  }
  if (cfg.dim_max < cfg.dim_min) {
    throw std::invalid_argument("dimension range is empty");
  }
  double wlo = cfg.window_lo;
  double whi = cfg.window_hi;
  if (!(whi > wlo) || !(wlo > 0)) {
    wlo = 1e-3;
    whi = 1.0;
  }

  struct Stream {
    int parity = 0;
    int offset = 0;
    int needed = 0;
    bool untrusted = false;
    std::vector<TrackedState> states;  // descending value; position = k/2
  };
  std::vector<Stream> streams;
  for (int s : {0, 1}) {
    if (s > k_max) continue;
    int needed = 0;
    for (int k = s; k <= k_max; k += 2) ++needed;
    for (int d : cfg.offsets) {
      Stream st;
      st.parity = s;
      st.offset = d;
      st.needed = needed;
      streams.push_back(std::move(st));
    }
  }

  for (int dim = cfg.dim_min; dim <= cfg.dim_max; ++dim) {
    for (auto& st : streams) {
      EvalPlan plan = critical_plan(st.parity, dim, st.offset);

      // Advance tracked states, largest root first. An upper sequence
      // (offset 0) approaches its limit from above and can step down by up
      // to ~18% right after opening, so its probation gate is wide in that
      // direction only; lower sequences (offset 1) open within a few
      // percent of their continuation. Against the approach direction both
      // gates stay tight: that is what rejects spurious companion roots,
      // which continue by hopping onto a neighbouring cluster.
      std::vector<size_t> drop;
      for (size_t i = 0; i < st.states.size(); ++i) {
        auto& ts = st.states[i];
        const BigReal prev = ts.value;
        const bool wide_down = ts.probation && st.offset == 0;
        const double gate = wide_down ? 0.25 : 0.10;
        long hint = ts.bits_hint;
        Refined r = refine_root(plan, prev, gate, true, cfg, &hint);
        if (!r.ok && r.trusted) {
          r = rescue_scan(plan, prev, gate, cfg, &hint, true);
        }
        if (!r.trusted) st.untrusted = true;
        if (r.ok && wide_down &&
            r.value.to_double() > 1.10 * prev.to_double()) {
          r.ok = false;
        }
        if (r.ok) {
          bool order_ok =
              i == 0 || r.value < st.states[i - 1].value;
          if (order_ok) {
            ts.value = r.value;
            ts.bits_hint = hint;
            ts.probation = false;
            ts.misses = 0;
            ts.entries.emplace(dim, make_entry(dim, st.offset, r));
            continue;
          }
        }
        if (ts.probation) {
          drop.push_back(i);
        } else {
          ++ts.misses;
        }
      }
      for (auto it = drop.rbegin(); it != drop.rend(); ++it) {
        st.states.erase(st.states.begin() + static_cast<long>(*it));
      }

      // The determinants carry spurious companion roots that shadow a
      // genuine cluster from a few percent below and creep toward it as the
      // dimension grows. Genuine neighbouring sequences stay well separated
      // (adjacent ratios never exceed ~0.87), so a lower state that has
      // climbed to within 10% of the one above it is a companion; its whole
      // history is suspect and the slot reopens.
      for (size_t i = st.states.size(); i-- > 1;) {
        if (st.states[i].value.to_double() >=
            0.90 * st.states[i - 1].value.to_double()) {
          st.states.erase(st.states.begin() + static_cast<long>(i));
        }
      }

      // Open the next state at the small-g end, one per dimension.
      if (static_cast<int>(st.states.size()) >= st.needed) continue;
      PrecisionCtx ctx(cfg.initial_bits);
      BigReal lo = ctx.real_from_double(wlo);
      BigReal hi = st.states.empty()
                       ? ctx.real_from_double(whi)
                       : st.states.back().value * ctx.real_from_double(0.95);
      if (!(lo < hi)) continue;
      long scan_bits = cfg.initial_bits;
      for (const auto& ts : st.states) {
        scan_bits = std::max(scan_bits, ts.bits_hint);
      }
      auto probe = [&](const BigReal& v) {
        return probe_det(plan, v, scan_bits);
      };
      const int n_points = st.states.empty() ? 160 : 96;
      ScanResult sc = scan_real(probe, log_grid(lo, hi, n_points));
      if (sc.sign_changes.empty()) continue;
      // Prefer the largest candidate clearly separated from the smallest
      // tracked sequence: companion roots hug it from within ~11%, while a
      // genuine new sequence first appears at least ~13% below. When every
      // candidate sits in the hug zone, take the largest anyway and let the
      // probation step vet it at the next dimension.
      size_t pick = sc.sign_changes.size() - 1;
      if (!st.states.empty()) {
        const double floor_sep = 0.88 * st.states.back().value.to_double();
        for (size_t i = sc.sign_changes.size(); i-- > 0;) {
          const Bracket& b = sc.sign_changes[i];
          const double mid = 0.5 * (b.lo.to_double() + b.hi.to_double());
          if (mid <= floor_sep) {
            pick = i;
            break;
          }
        }
      }
      long hint = scan_bits;
      Refined r = refine_bracket(plan, sc.sign_changes[pick], cfg, &hint);
      if (!r.trusted) st.untrusted = true;
      if (!r.ok) continue;
      if (!st.states.empty() && !(r.value < st.states.back().value)) continue;
      TrackedState ts;
      ts.value = r.value;
      ts.bits_hint = hint;
      ts.probation = true;
      ts.start_dim = dim;
      ts.entries.emplace(dim, make_entry(dim, st.offset, r));
      st.states.push_back(std::move(ts));
    }
  }

  auto stream_of = [&](int parity, int offset) -> const Stream* {
    for (const auto& st : streams) {
      if (st.parity == parity && st.offset == offset) return &st;
    }
    return nullptr;
  };

  std::vector<BoundReport> reports;
  reports.reserve(static_cast<size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    const int s = k % 2;
    const size_t pos = static_cast<size_t>(k / 2);
    RootSequence upper, lower;
    upper.offset = 0;
    lower.offset = 1;
    bool untrusted = false;
    if (const Stream* st = stream_of(s, 0)) {
      untrusted = untrusted || st->untrusted;
      if (pos < st->states.size()) upper = sequence_of(st->states[pos], 0);
    }
    if (const Stream* st = stream_of(s, 1)) {
      untrusted = untrusted || st->untrusted;
      if (pos < st->states.size()) lower = sequence_of(st->states[pos], 1);
    }
    // Critical ordering: the d=0 sequence approaches from above.
    BoundReport br = pair_report(k, s, std::move(lower), std::move(upper), cfg);
    br.untrusted_encountered = untrusted;
    reports.push_back(std::move(br));
  }
  return reports;
}

BoundReport eigenvalue_bounds(const EvenPolynomial& pot, int parity,
                              int state_index, const SolveConfig& cfg) {
  if (parity != 0 && parity != 1) {
    throw std::invalid_argument("parity must be 0 or 1");
  }
  if (state_index < 0) {
    throw std::invalid_argument("state index must be >= 0");
  }
  if (cfg.dim_min < 2 || cfg.dim_max < cfg.dim_min) {
    throw std::invalid_argument("bad dimension range");
  }
  const int global_k = 2 * state_index + parity;

  double wlo = cfg.window_lo;
  double whi = cfg.window_hi;
  if (!(whi > wlo)) {
    const double est = oracle_estimate(pot, global_k);
    wlo = est - 0.10 * std::abs(est);
    whi = est + 0.10 * std::abs(est);
    if (!(whi > wlo)) {  // estimate was ~0: fall back to a fixed box
      wlo = -1.0;
      whi = 1.0;
    }
  }
  const double centre = 0.5 * (wlo + whi);

  struct SingleStream {
    int offset = 0;
    bool untrusted = false;
    TrackedState state;
    bool open = false;
  };
  std::vector<SingleStream> streams;
  for (int d : cfg.offsets) {
    SingleStream s;
    s.offset = d;
    streams.push_back(std::move(s));
  }

  for (int dim = cfg.dim_min; dim <= cfg.dim_max; ++dim) {
    for (auto& st : streams) {
      EvalPlan plan = eigen_plan(pot, parity, dim, st.offset);
      if (st.open) {
        auto& ts = st.state;
        const double gate = ts.probation ? 0.25 : 0.10;
        long hint = ts.bits_hint;
        Refined r;
        // At an exactly degenerate level the root's multiplicity parity can
        // flip with the dimension (sign change at odd D, dip at even D), so
        // the two refinement kinds fall back to each other.
        if (ts.from_dip) {
          PrecisionCtx ctx(hint);
          BigReal spread = abs(ts.value) * ctx.real_from_double(0.02);
          Bracket br{ts.value - spread, ts.value + spread};
          r = refine_dip(plan, br, cfg, hint);
          if (!r.ok && r.trusted) {
            r = refine_root(plan, ts.value, gate, false, cfg, &hint);
            if (r.ok) ts.from_dip = false;
          }
        } else {
          r = refine_root(plan, ts.value, gate, false, cfg, &hint);
          if (!r.ok && r.trusted) {
            r = rescue_scan(plan, ts.value, gate, cfg, &hint, false);
          }
          if (!r.ok && r.trusted) {
            const long db = std::max(hint, cfg.initial_bits);
            PrecisionCtx ctx(db);
            BigReal spread = abs(ts.value) * ctx.real_from_double(0.02);
            Bracket br{ts.value - spread, ts.value + spread};
            r = refine_dip(plan, br, cfg, db);
            if (r.ok) ts.from_dip = true;
          }
        }
        if (!r.trusted) st.untrusted = true;
        if (r.ok) {
          ts.value = r.value;
          ts.bits_hint = std::max(hint, r.precision_bits);
          ts.probation = false;
          ts.misses = 0;
          ts.entries.emplace(dim, make_entry(dim, st.offset, r));
        } else if (ts.probation) {
          st.open = false;
          st.state = TrackedState{};
        } else {
          ++ts.misses;
        }
        continue;
      }

      // Sequence not started: scan the window.
      PrecisionCtx ctx(cfg.initial_bits);
      const long scan_bits = cfg.initial_bits;
      auto probe = [&](const BigReal& v) {
        return probe_det(plan, v, scan_bits);
      };
      ScanResult sc =
          scan_real(probe, linear_grid(ctx.real_from_double(wlo),
                                       ctx.real_from_double(whi), 128));
      Refined r;
      long hint = scan_bits;
      bool born_from_dip = false;
      if (!sc.sign_changes.empty()) {
        const Bracket* best = nullptr;
        double best_dist = 0;
        for (const auto& b : sc.sign_changes) {
          double mid = ldexp2(b.lo + b.hi, -1).to_double();
          double dist = std::abs(mid - centre);
          if (best == nullptr || dist < best_dist) {
            best = &b;
            best_dist = dist;
          }
        }
        r = refine_bracket(plan, *best, cfg, &hint);
      } else if (!sc.dips.empty()) {
        // No sign change anywhere: degenerate (even-multiplicity) root.
        const BigReal* best = nullptr;
        double best_dist = 0;
        for (const auto& d : sc.dips) {
          double dist = std::abs(d.to_double() - centre);
          if (best == nullptr || dist < best_dist) {
            best = &d;
            best_dist = dist;
          }
        }
        const BigReal span = (ctx.real_from_double(whi) -
                              ctx.real_from_double(wlo)) /
                             127L;
        Bracket br{*best - span, *best + span};
        r = refine_dip(plan, br, cfg, scan_bits);
        born_from_dip = true;
      }
      if (!r.trusted) st.untrusted = true;
      if (!r.ok) continue;
      TrackedState ts;
      ts.value = r.value;
      ts.bits_hint = std::max(hint, r.precision_bits);
      ts.probation = true;
      ts.from_dip = born_from_dip;
      ts.start_dim = dim;
      ts.entries.emplace(dim, make_entry(dim, st.offset, r));
      st.state = std::move(ts);
      st.open = true;
    }
  }

  RootSequence lower, upper;
  lower.offset = 0;
  upper.offset = 1;
  bool untrusted = false;
  for (auto& st : streams) {
    untrusted = untrusted || st.untrusted;
    if (!st.open) continue;
    if (st.offset == 0) lower = sequence_of(st.state, 0);
    if (st.offset == 1) upper = sequence_of(st.state, 1);
  }
  // Deep-well ordering: d=0 approaches from below, d=1 from above.
  BoundReport br =
      pair_report(global_k, parity, std::move(lower), std::move(upper), cfg);
  br.untrusted_encountered = untrusted;
  return br;
}

std::vector<ResonanceEntry> resonance_sequence(const EvenPolynomial& pot,
                                               int parity,
                                               const BigComplex& start,
                                               const SolveConfig& cfg) {
  if (cfg.dim_min < 2 || cfg.dim_max < cfg.dim_min) {
    throw std::invalid_argument("bad dimension range");
  }
  std::vector<ResonanceEntry> out;
  std::vector<BigReal> coeffs = pot.coeffs;
  auto pot_at = [&coeffs](long bits) {
    EvenPolynomial p;
    p.coeffs.reserve(coeffs.size());
    for (const auto& c : coeffs) p.coeffs.push_back(c.with_precision(bits));
    return p;
  };

  for (int d : cfg.offsets) {
    long w = round_to_limb(2 * cfg.initial_bits);
    BigComplex z = start.with_precision(w);
    for (int dim = cfg.dim_min; dim <= cfg.dim_max; ++dim) {
      const int count = static_cast<int>(required_coefficients(dim, d));
      auto eval_at = [&](long bits) {
        return [&, bits](const BigComplex& e)
                   -> std::pair<BigComplex, BigComplex> {
          auto p = pot_at(bits);
          auto s = symmetric_series_denergy<BigComplex>(
              p, e.with_precision(bits), parity, count);
          auto hd = hankel_det_derivative<BigComplex>(s.f, s.df, dim, d);
          return {hd.det.value, hd.derivative};
        };
      };

      bool recorded = false;
      const long cap = 16 * cfg.initial_bits;
      while (!recorded) {
        const BigReal tol = pow10_at(w, -(cfg.target_digits + 12));
        ComplexRootResult r1 = newton_complex(eval_at(w), z, tol, 120);
        if (!r1.converged) break;  // skip this dimension, keep the warm start
        // Stability check one notch up; a warm start makes it cheap.
        ComplexRootResult r2 =
            newton_complex(eval_at(w + 64), r1.root, tol, 40);
        bool stable = false;
        if (r2.converged) {
          BigReal diff = abs(r2.root - r1.root);
          BigReal scale = abs(r2.root);
          stable = diff <= scale * pow10_at(w, -(cfg.target_digits + 5));
        }
        if (stable) {
          ResonanceEntry e;
          e.dim = dim;
          e.offset = d;
          e.value = r2.root;
          e.precision_bits = w + 64;
          e.converged = true;
          // A root that collapsed onto the real axis is the wrong branch to
          // warm-start from; keep the previous start so the next dimension
          // can still reach the complex pair.
          if (abs(r2.root.im()) >
              abs(r2.root.re()) * pow10_at(w, -(cfg.target_digits + 12))) {
            z = r2.root;
          }
          out.push_back(std::move(e));
          recorded = true;
        } else if (2 * w <= cap) {
          w *= 2;
        } else {
          break;  // untrusted at the cap: drop the entry
        }
      }
    }
  }
  return out;
}

namespace {

/// Coefficients of the quartic double well re-expanded about its right-hand
/// minimum, at the given precision.
std::vector<BigReal> shifted_well_at(const std::vector<BigReal>& coeffs,
                                     long bits) {
  BigReal c1 = coeffs[0].with_precision(bits);
  BigReal c2 = coeffs[1].with_precision(bits);
  BigReal xm = sqrt(-c1 / (c2 * 2L));
  EvenPolynomial p{{std::move(c1), std::move(c2)}};
  return shifted_potential(p, xm);
}

/// Midpoint of the deepest dimension where both bound sequences have
/// entries. Returns false when the report never bracketed anything.
bool doublet_midpoint(const BoundReport& rep, long bits, BigReal* out) {
  for (auto it = rep.lower.entries.rbegin(); it != rep.lower.entries.rend();
       ++it) {
    auto jt = rep.upper.entries.find(it->first);
    if (jt == rep.upper.entries.end()) continue;
    *out = ldexp2(it->second.value.with_precision(bits) +
                      jt->second.value.with_precision(bits),
                  -1);
    return true;
  }
  return false;
}

/// The parity-split shifted-origin workflow. Runs one root stream per
/// offset, highest offset first, at a single fixed precision:
///   - every row is a trust-region Newton solve of the two subsequence
///     Hankel conditions at (D, d);
///   - the opening row of each stream is a multistart over a coarse f0 grid,
///     anchored at the doublet-mean estimate (d > 0) or at the harmonic
///     level of the shifted well (d = 0), keeping the converged root closest
///     to the doublet mean;
///   - later rows start from the same-dimension root of the next-higher
///     stream when that row converged, from that stream's last point once it
///     has ended (higher offsets need more coefficients, so they stop at
///     smaller D under the shared coefficient budget), and from the previous
///     row of their own stream otherwise (in particular when the neighbour
///     only oscillated);
///   - a bounded non-settling Newton orbit is recorded as oscillatory, with
///     the orbit centroid as its representative point, and the stream simply
///     continues through it.
std::vector<NonsymEntry> nonsym_parity_split(const EvenPolynomial& pot,
                                             const SolveConfig& cfg) {
  const std::vector<BigReal>& coeffs = pot.coeffs;
  // One fixed precision for the whole run: trajectories of an undamped
  // Newton flow are sensitive to rounding, so mid-run escalation would make
  // results depend on where it kicked in. 1024 bits leaves ~260 digits of
  // headroom over the 40-digit targets.
  const long bits = std::max<long>(1024, round_to_limb(2 * cfg.initial_bits));
  const BigReal tol =
      pow10_at(bits, std::min<long>(-80, -(cfg.target_digits + 12)));
  const int iter_cap = 400;
  const int lo = std::max(3, cfg.dim_min);

  // Doublet-mean estimate from the symmetric machinery: midpoints of the
  // lowest even and odd states' final bound intervals, averaged.
  BigReal doublet_mean(bits, 0L);
  {
    SolveConfig bc = cfg;
    bc.dim_min = 2;
    bc.dim_max = std::max(cfg.dim_max, 16);
    bc.offsets = {0, 1};
    bc.window_lo = 0.0;
    bc.window_hi = 0.0;
    BigReal m0(bits, 0L), m1(bits, 0L);
    if (!doublet_midpoint(eigenvalue_bounds(pot, 0, 0, bc), bits, &m0) ||
        !doublet_midpoint(eigenvalue_bounds(pot, 1, 0, bc), bits, &m1)) {
      throw std::runtime_error(
          "doublet-mean estimate failed: no common bound dimension");
    }
    doublet_mean = ldexp2(m0 + m1, -1);
  }

  auto solve_row = [&](int dim, int d, const BigReal& e0, const BigReal& f0) {
    const int count = 2 * static_cast<int>(required_coefficients(dim, d));
    auto u = shifted_well_at(coeffs, bits);
    Fn2d fn = [u = std::move(u), bits, count, dim,
               d](const BigReal& e, const BigReal& f) {
      NonSymSeries se = nonsym_series(u, e.with_precision(bits),
                                      f.with_precision(bits), count);
      // Same (D, d) condition on the even- and odd-index halves of the
      // coefficient sequence.
      std::vector<BigReal> pf, pe, pd, qf, qe, qd;
      for (size_t n = 0; n < se.f.size(); n += 2) {
        pf.push_back(se.f[n]);
        pe.push_back(se.dE[n]);
        pd.push_back(se.df0[n]);
      }
      for (size_t n = 1; n < se.f.size(); n += 2) {
        qf.push_back(se.f[n]);
        qe.push_back(se.dE[n]);
        qd.push_back(se.df0[n]);
      }
      auto a_e = hankel_det_derivative<BigReal>(pf, pe, dim, d);
      auto a_f = hankel_det_derivative<BigReal>(pf, pd, dim, d);
      auto b_e = hankel_det_derivative<BigReal>(qf, qe, dim, d);
      auto b_f = hankel_det_derivative<BigReal>(qf, qd, dim, d);
      Eval2d ev;
      ev.r1 = a_e.det.value;
      ev.j11 = a_e.derivative;
      ev.j12 = a_f.derivative;
      ev.r2 = b_e.det.value;
      ev.j21 = b_e.derivative;
      ev.j22 = b_f.derivative;
      return ev;
    };
    return newton_2d_tr(fn, e0.with_precision(bits), f0.with_precision(bits),
                        tol, iter_cap);
  };

  // Multistart over a coarse f0 grid; keep the converged root closest to
  // the doublet-mean estimate.
  auto seed_row = [&](int dim, int d, const BigReal& e_anchor,
                      Newton2dResult* best) {
    bool have = false;
    BigReal best_dist(bits, 0L);
    for (int i = -10; i <= 10; ++i) {
      BigReal f0 = BigReal(bits, 5L * i) / BigReal(bits, 100L);
      Newton2dResult r = solve_row(dim, d, e_anchor, f0);
      if (!r.converged) continue;
      BigReal dist = abs(r.x - doublet_mean);
      if (!have || dist < best_dist) {
        *best = std::move(r);
        best_dist = std::move(dist);
        have = true;
      }
    }
    return have;
  };

  std::vector<int> offsets_desc = cfg.offsets;
  std::sort(offsets_desc.begin(), offsets_desc.end(), std::greater<int>());
  offsets_desc.erase(std::unique(offsets_desc.begin(), offsets_desc.end()),
                     offsets_desc.end());

  std::map<int, std::map<int, NonsymEntry>> rows;  // offset -> dim -> entry
  std::map<int, int> stream_end;                   // offset -> last dim run
  for (int d : offsets_desc) {
    // Shared coefficient budget 4 * dim_max: a stream at offset d needs
    // 2 * (d + 2D) coefficients per row, so higher offsets end earlier.
    const int hi = std::min(cfg.dim_max, (2 * cfg.dim_max - d) / 2);
    stream_end[d] = hi;
    auto& mine = rows[d];
    for (int dim = lo; dim <= hi; ++dim) {
      Newton2dResult r;
      if (dim == lo) {
        BigReal anchor = doublet_mean;
        if (d == 0) {
          auto u = shifted_well_at(coeffs, bits);
          anchor = u[0] + sqrt(u[2]);  // harmonic level of the shifted well
        }
        if (!seed_row(dim, d, anchor, &r)) continue;  // stream never opened
      } else {
        const NonsymEntry* start = nullptr;
        auto hs = rows.find(d + 1);
        if (hs != rows.end() && !hs->second.empty()) {
          auto same = hs->second.find(dim);
          if (same != hs->second.end() && same->second.converged) {
            start = &same->second;
          } else if (dim > stream_end[d + 1]) {
            start = &hs->second.rbegin()->second;
          }
        }
        if (start == nullptr) {
          auto prev = mine.find(dim - 1);
          if (prev == mine.end()) continue;
          start = &prev->second;
        }
        r = solve_row(dim, d, start->energy, start->f0);
      }
      NonsymEntry e;
      e.dim = dim;
      e.offset = d;
      e.energy = r.x;
      e.f0 = r.y;
      e.precision_bits = bits;
      e.converged = r.converged;
      e.oscillatory = r.oscillatory;
      mine.emplace(dim, std::move(e));
    }
  }

  std::vector<NonsymEntry> out;
  for (int d : cfg.offsets) {
    auto it = rows.find(d);
    if (it == rows.end()) continue;
    for (auto& [dim, e] : it->second) out.push_back(e);
  }
  return out;
}

}  // namespace

std::vector<NonsymEntry> nonsym_eigenvalue(const EvenPolynomial& pot,
                                           const SolveConfig& cfg) {
  if (pot.half_degree() != 2) {
    throw std::invalid_argument(
        "shifted-origin workflow supports quartic potentials only");
  }
  if (!(pot.coeffs[0].sign() < 0) || !(pot.coeffs[1].sign() > 0)) {
    throw std::invalid_argument("potential must be a symmetric double well");
  }
  if (cfg.dim_min < 2 || cfg.dim_max < cfg.dim_min) {
    throw std::invalid_argument("bad dimension range");
  }
  if (cfg.pairing == NonsymPairing::parity_split) {
    return nonsym_parity_split(pot, cfg);
  }

  std::vector<BigReal> coeffs = pot.coeffs;
  auto shifted_at = [&coeffs](long bits) {
    return shifted_well_at(coeffs, bits);
  };

  std::vector<NonsymEntry> out;
  for (int d : cfg.offsets) {
    long w = round_to_limb(2 * cfg.initial_bits);
    // Harmonic start about the minimum: E ~ U0 + sqrt(U2), f0 ~ 0.
    bool have_warm = false;
    BigReal warm_e, warm_f;

    for (int dim = cfg.dim_min; dim <= cfg.dim_max; ++dim) {
      const int dim2 = cfg.pairing == NonsymPairing::next_dimension ? dim + 1
                                                                    : dim;
      const int off2 = cfg.pairing == NonsymPairing::next_offset ? d + 1 : d;
      const int count =
          static_cast<int>(std::max(required_coefficients(dim, d),
                                    required_coefficients(dim2, off2)));

      auto fn_at = [&](long bits) {
        auto u = shifted_at(bits);
        return [u = std::move(u), bits, count, dim, dim2, d,
                off2](const BigReal& e, const BigReal& f0) {
          NonSymSeries se = nonsym_series(u, e.with_precision(bits),
                                          f0.with_precision(bits), count);
          Eval2d ev;
          auto a_e = hankel_det_derivative<BigReal>(se.f, se.dE, dim, d);
          auto a_f = hankel_det_derivative<BigReal>(se.f, se.df0, dim, d);
          auto b_e = hankel_det_derivative<BigReal>(se.f, se.dE, dim2, off2);
          auto b_f = hankel_det_derivative<BigReal>(se.f, se.df0, dim2, off2);
          ev.r1 = a_e.det.value;
          ev.j11 = a_e.derivative;
          ev.j12 = a_f.derivative;
          ev.r2 = b_e.det.value;
          ev.j21 = b_e.derivative;
          ev.j22 = b_f.derivative;
          return ev;
        };
      };

      // Candidate starts: warm from the previous dimension, else the
      // harmonic approximation with a short f0 ladder.
      std::vector<std::pair<BigReal, BigReal>> starts;
      {
        PrecisionCtx ctx(w);
        if (have_warm) {
          starts.emplace_back(warm_e.with_precision(w),
                              warm_f.with_precision(w));
        } else {
          auto u = shifted_at(w);
          BigReal e0 = u[0] + sqrt(u[2]);
          for (double f : {0.0, 0.2, -0.2, 0.5, -0.5}) {
            starts.emplace_back(e0, ctx.real_from_double(f));
          }
        }
      }

      const long cap = 32 * cfg.initial_bits;
      bool done = false;
      for (const auto& [e0, f0] : starts) {
        if (done) break;
        long bits = w;
        while (!done) {
          const BigReal tol = pow10_at(bits, -(cfg.target_digits + 12));
          Newton2dResult r1 = newton_2d(fn_at(bits), e0.with_precision(bits),
                                        f0.with_precision(bits), tol, 60);
          if (r1.oscillatory) {
            NonsymEntry e;
            e.dim = dim;
            e.offset = d;
            e.energy = r1.x;
            e.f0 = r1.y;
            e.precision_bits = bits;
            e.converged = false;
            e.oscillatory = true;
            warm_e = r1.x;
            warm_f = r1.y;
            have_warm = true;
            out.push_back(std::move(e));
            done = true;
            break;
          }
          if (!r1.converged) break;  // next start candidate
          Newton2dResult r2 =
              newton_2d(fn_at(bits + 64), r1.x, r1.y, tol, 30);
          bool stable = false;
          if (r2.converged && !r2.oscillatory) {
            BigReal de = abs(r2.x - r1.x);
            BigReal df = abs(r2.y - r1.y);
            BigReal gate = pow10_at(bits, -(cfg.target_digits + 5));
            stable = de <= abs(r2.x) * gate && df <= abs(r2.y) * gate;
          }
          if (stable) {
            NonsymEntry e;
            e.dim = dim;
            e.offset = d;
            e.energy = r2.x;
            e.f0 = r2.y;
            e.precision_bits = bits + 64;
            e.converged = true;
            warm_e = r2.x;
            warm_f = r2.y;
            have_warm = true;
            w = bits;  // ratchet for the next dimension
            out.push_back(std::move(e));
            done = true;
          } else if (2 * bits <= cap) {
            bits *= 2;
          } else {
            break;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace rpm
