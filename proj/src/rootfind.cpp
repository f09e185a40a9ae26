#include "rpm/rootfind.hpp"

#include <deque>
#include <stdexcept>

namespace rpm {

ScanResult scan_real(const RealProbe& fn, const std::vector<BigReal>& grid) {
  ScanResult out;
  if (grid.empty()) return out;
  std::vector<SignLog> s;
  s.reserve(grid.size());
  for (const auto& x : grid) s.push_back(fn(x));

  for (size_t i = 0; i < grid.size(); ++i) {
    if (s[i].sign == 0) out.sign_changes.push_back({grid[i], grid[i]});
  }
  for (size_t i = 1; i < grid.size(); ++i) {
    if (s[i - 1].sign * s[i].sign < 0) {
      out.sign_changes.push_back({grid[i - 1], grid[i]});
    }
  }
  for (size_t i = 1; i + 1 < grid.size(); ++i) {
    if (s[i - 1].sign == s[i].sign && s[i].sign == s[i + 1].sign &&
        s[i].sign != 0 && s[i].log_abs < s[i - 1].log_abs &&
        s[i].log_abs < s[i + 1].log_abs) {
      out.dips.push_back(grid[i]);
    }
  }
  return out;
}

std::vector<BigReal> log_grid(const BigReal& lo, const BigReal& hi, int n) {
  if (n < 2) throw std::invalid_argument("grid needs at least two points");
  if (!(BigReal(lo.precision(), 0L) < lo) || !(lo < hi)) {
    throw std::invalid_argument("need 0 < lo < hi for a log grid");
  }
  std::vector<BigReal> g;
  g.reserve(static_cast<size_t>(n));
  BigReal llo = log(lo);
  BigReal step = (log(hi) - llo) / static_cast<long>(n - 1);
  g.push_back(lo);
  for (int k = 1; k + 1 < n; ++k) {
    g.push_back(exp(llo + step * static_cast<long>(k)));
  }
  g.push_back(hi);
  return g;
}

namespace {

/// sign * exp(log_abs - halvings*ln2 - ref), the scaled value the secant
/// stage works with.
BigReal scaled_value(const SignLog& s, int halvings, const BigReal& ref) {
  BigReal e = s.log_abs - ref;
  BigReal v = exp(e);
  v = ldexp2(v, -halvings);
  if (s.sign < 0) v = -v;
  return v;
}

BigReal effective_log(const SignLog& s, int halvings) {
  // halvings * ln2 subtracted in exponent space
  BigReal two(s.log_abs.precision(), 2L);
  return s.log_abs - log(two) * static_cast<long>(halvings);
}

}  // namespace

RefineResult refine_real(const RealProbe& fn, Bracket bracket,
                         const BigReal& rel_tol, int max_evals) {
  RefineResult out;
  int evals = 0;
  auto probe = [&](const BigReal& x) {
    ++evals;
    return fn(x);
  };

  BigReal lo = bracket.lo;
  BigReal hi = bracket.hi;
  if (!(lo <= hi)) throw std::invalid_argument("bracket endpoints reversed");
  SignLog slo = probe(lo);
  if (slo.sign == 0) {
    out.root = lo;
    out.converged = true;
    out.evaluations = evals;
    return out;
  }
  SignLog shi = probe(hi);
  if (shi.sign == 0) {
    out.root = hi;
    out.converged = true;
    out.evaluations = evals;
    return out;
  }
  if (slo.sign * shi.sign > 0) {
    throw std::invalid_argument("bracket does not straddle a sign change");
  }

  const long prec = lo.precision() > hi.precision() ? lo.precision()
                                                    : hi.precision();
  const BigReal coarse_factor(prec, 1000L);

  auto width_scale = [&](BigReal* width, BigReal* scale) {
    *width = hi - lo;
    *scale = max(abs(lo), abs(hi));
    if (scale->is_zero()) *scale = *width;
  };

  // Stage 1: bisection down to a thousand tolerances wide.
  while (true) {
    BigReal width(prec), scale(prec);
    width_scale(&width, &scale);
    if (width < rel_tol * scale) {
      out.root = (lo + hi) / 2;
      out.converged = true;
      out.evaluations = evals;
      return out;
    }
    if (width < coarse_factor * rel_tol * scale) break;
    if (evals >= max_evals) {
      out.root = (lo + hi) / 2;
      out.evaluations = evals;
      return out;
    }
    BigReal mid = (lo + hi) / 2;
    SignLog sm = probe(mid);
    if (sm.sign == 0) {
      out.root = mid;
      out.converged = true;
      out.evaluations = evals;
      return out;
    }
    if (sm.sign == slo.sign) {
      lo = std::move(mid);
      slo = std::move(sm);
    } else {
      hi = std::move(mid);
      shi = std::move(sm);
    }
  }

  // Stage 2: Illinois false position; a retained endpoint has its stored
  // magnitude halved so neither side can stick.
  int lo_halvings = 0;
  int hi_halvings = 0;
  while (evals < max_evals) {
    BigReal width(prec), scale(prec);
    width_scale(&width, &scale);
    if (width < rel_tol * scale) {
      out.root = (lo + hi) / 2;
      out.converged = true;
      out.evaluations = evals;
      return out;
    }
    BigReal ref = max(effective_log(slo, lo_halvings),
                      effective_log(shi, hi_halvings));
    BigReal glo = scaled_value(slo, lo_halvings, ref);
    BigReal ghi = scaled_value(shi, hi_halvings, ref);
    BigReal den = ghi - glo;
    BigReal x(prec);
    bool use_bisection = den.is_zero() || !den.is_finite();
    if (!use_bisection) {
      x = hi - ghi * (hi - lo) / den;
      use_bisection = !x.is_finite() || x <= lo || x >= hi;
    }
    if (use_bisection) x = (lo + hi) / 2;

    SignLog sx = probe(x);
    if (sx.sign == 0) {
      out.root = std::move(x);
      out.converged = true;
      out.evaluations = evals;
      return out;
    }
    if (sx.sign == shi.sign) {
      hi = std::move(x);
      shi = std::move(sx);
      hi_halvings = 0;
      ++lo_halvings;
    } else {
      lo = std::move(x);
      slo = std::move(sx);
      lo_halvings = 0;
      ++hi_halvings;
    }
  }
  out.root = (lo + hi) / 2;
  out.evaluations = evals;
  return out;
}

ComplexRootResult newton_complex(const ComplexEval& fn, BigComplex start,
                                 const BigReal& rel_tol, int max_iter) {
  ComplexRootResult out;
  const long prec = start.precision();
  BigComplex z = std::move(start);
  auto cur = fn(z);
  BigReal fmag = abs(cur.first);
  BigReal last_step(prec);
  bool have_last_step = false;
  int grow_count = 0;

  for (int it = 1; it <= max_iter; ++it) {
    out.iterations = it;
    if (cur.first.is_zero()) {
      out.converged = true;
      break;
    }
    BigComplex df = cur.second;
    if (df.is_zero() || !df.is_finite()) {
      BigReal zscale = max(abs(z), BigReal(prec, 1L));
      BigReal h = ldexp2(zscale, -(prec / 3));
      BigComplex zh = z + BigComplex(h, BigReal(prec, 0L));
      auto side = fn(zh);
      df = (side.first - cur.first) / BigComplex(h, BigReal(prec, 0L));
      if (df.is_zero() || !df.is_finite()) break;
    }
    BigComplex step = cur.first / df;  // z_next = z - step
    if (!step.is_finite()) break;

    bool accepted = false;
    BigComplex z_next(prec);
    std::pair<BigComplex, BigComplex> next;
    BigComplex trial_step = step;
    for (int halvings = 0; halvings <= 30; ++halvings) {
      z_next = z - trial_step;
      next = fn(z_next);
      if (abs(next.first) < fmag) {
        accepted = true;
        step = trial_step;
        break;
      }
      trial_step = trial_step / 2;
    }
    if (!accepted) break;

    BigReal step_mag = abs(step);
    if (have_last_step && step_mag > last_step) {
      ++grow_count;
    } else {
      grow_count = 0;
    }
    last_step = step_mag;
    have_last_step = true;
    if (grow_count >= 5) break;

    z = std::move(z_next);
    cur = std::move(next);
    fmag = abs(cur.first);

    BigReal zscale = max(abs(z), ldexp2(BigReal(prec, 1L), -prec));
    if (step_mag <= rel_tol * zscale) {
      out.converged = true;
      break;
    }
  }
  out.root = std::move(z);
  return out;
}

Newton2dResult newton_2d(const Fn2d& fn, BigReal x0, BigReal y0,
                         const BigReal& rel_tol, int max_iter) {
  Newton2dResult out;
  const long prec = x0.precision();
  BigReal x = std::move(x0);
  BigReal y = std::move(y0);

  Eval2d cur = fn(x, y);
  BigReal s1 = abs(cur.r1);
  BigReal s2 = abs(cur.r2);
  if (s1.is_zero()) s1 = BigReal(prec, 1L);
  if (s2.is_zero()) s2 = BigReal(prec, 1L);
  auto residual = [&](const Eval2d& e) { return abs(e.r1) / s1 + abs(e.r2) / s2; };
  BigReal rho = residual(cur);

  struct Iterate {
    BigReal x, y, rho;
  };
  std::deque<Iterate> history;
  int cycle_hits = 0;

  for (int it = 1; it <= max_iter; ++it) {
    out.iterations = it;
    if (rho.is_zero()) {
      out.converged = true;
      break;
    }
    BigReal det = cur.j11 * cur.j22;
    det.sub_mul(cur.j12, cur.j21);
    if (det.is_zero() || !det.is_finite()) break;
    // Solve J * d = -r by Cramer's rule.
    BigReal d1 = cur.r2 * cur.j12;
    d1.sub_mul(cur.r1, cur.j22);
    d1 /= det;
    BigReal d2 = cur.r1 * cur.j21;
    d2.sub_mul(cur.r2, cur.j11);
    d2 /= det;

    // Line search by step halving; if nothing reduces the residual, take the
    // full step anyway so a genuine cycle can show itself.
    BigReal ax(prec), ay(prec);
    Eval2d next;
    BigReal rho_next(prec);
    for (int halvings = 0; halvings <= 8; ++halvings) {
      BigReal tx = x + ldexp2(d1, -halvings);
      BigReal ty = y + ldexp2(d2, -halvings);
      Eval2d e = fn(tx, ty);
      BigReal r = residual(e);
      const bool reduces = r < rho;
      if (halvings == 0 || reduces) {
        ax = std::move(tx);
        ay = std::move(ty);
        next = std::move(e);
        rho_next = std::move(r);
      }
      if (reduces) break;
    }

    BigReal step1 = ax - x;
    BigReal step2 = ay - y;
    history.push_back({x, y, rho});
    if (history.size() > 7) history.pop_front();

    x = std::move(ax);
    y = std::move(ay);
    cur = std::move(next);
    rho = std::move(rho_next);

    BigReal point_scale = hypot(x, y);
    if (point_scale.is_zero()) point_scale = BigReal(prec, 1L);
    BigReal step_norm = hypot(step1, step2);
    if (step_norm <= rel_tol * point_scale) {
      out.converged = true;
      break;
    }

    // Two-cycle detection: the new point lands back on the point from two
    // steps ago, far closer than the stride of the cycle itself.
    if (history.size() >= 2) {
      const Iterate& prev2 = history[history.size() - 2];
      BigReal back = hypot(x - prev2.x, y - prev2.y);
      BigReal cycle_gate = ldexp2(step_norm, -7);
      if (back < cycle_gate) {
        ++cycle_hits;
      } else {
        cycle_hits = 0;
      }
    }
    bool stalled = false;
    if (history.size() == 7) {
      stalled = !(rho < history.front().rho / 2);
    }
    if (cycle_hits >= 3 && stalled) {
      out.oscillatory = true;
      break;
    }
  }

  if (!out.converged && !out.oscillatory && history.size() >= 4 &&
      out.iterations >= max_iter) {
    // Budget ran out on a bounded, non-settling orbit: call it oscillatory
    // when recent iterates stayed clustered relative to the point scale.
    BigReal point_scale = hypot(x, y);
    if (point_scale.is_zero()) point_scale = BigReal(prec, 1L);
    BigReal spread(prec, 0L);
    for (const auto& h : history) {
      BigReal d = hypot(x - h.x, y - h.y);
      if (spread < d) spread = std::move(d);
    }
    BigReal loose = ldexp2(point_scale, -20);
    if (spread < loose && !spread.is_zero()) out.oscillatory = true;
  }

  out.x = std::move(x);
  out.y = std::move(y);
  return out;
}

Newton2dResult newton_2d_tr(const Fn2d& fn, BigReal x0, BigReal y0,
                            const BigReal& rel_tol, int max_iter,
                            long step_growth) {
  Newton2dResult out;
  const long prec = x0.precision();
  BigReal x = std::move(x0);
  BigReal y = std::move(y0);

  struct Iterate {
    BigReal x, y, res;
  };
  std::deque<Iterate> history;
  BigReal step_cap(prec, 0L);  // zero means no cap yet (first step is free)

  for (int it = 1; it <= max_iter; ++it) {
    Eval2d cur = fn(x, y);
    BigReal det = cur.j11 * cur.j22;
    det.sub_mul(cur.j12, cur.j21);
    if (det.is_zero() || !det.is_finite()) break;
    BigReal d1 = cur.r2 * cur.j12;
    d1.sub_mul(cur.r1, cur.j22);
    d1 /= det;
    BigReal d2 = cur.r1 * cur.j21;
    d2.sub_mul(cur.r2, cur.j11);
    d2 /= det;

    BigReal step_norm = hypot(d1, d2);
    if (!step_cap.is_zero() && step_norm > step_cap) {
      BigReal scale = step_cap / step_norm;
      d1 *= scale;
      d2 *= scale;
      step_norm = step_cap;
    }
    step_cap = step_norm * BigReal(prec, step_growth);

    x += d1;
    y += d2;
    out.iterations = it;
    history.push_back({x, y, hypot(cur.r1, cur.r2)});
    if (history.size() > 6) history.pop_front();

    BigReal point_scale = hypot(x, y);
    if (point_scale.is_zero()) point_scale = BigReal(prec, 1L);
    if (step_norm <= rel_tol * point_scale) {
      out.converged = true;
      break;
    }

    // Revisit rule: the trailing window collapsed onto near-coincident
    // points while the residual made no real progress.
    if (history.size() == 6) {
      BigReal min_pair(prec, 0L);
      bool first = true;
      for (size_t a = 0; a < history.size(); ++a) {
        for (size_t b = a + 1; b < history.size(); ++b) {
          BigReal d = hypot(history[a].x - history[b].x,
                            history[a].y - history[b].y);
          if (first || d < min_pair) {
            min_pair = std::move(d);
            first = false;
          }
        }
      }
      bool res_stuck = !(history.back().res < history.front().res / 2);
      if (res_stuck && min_pair < rel_tol * point_scale * BigReal(prec, 10L)) {
        out.oscillatory = true;
        break;
      }
    }
  }

  if (!out.converged && !out.oscillatory && history.size() == 6 &&
      out.iterations >= max_iter) {
    // Budget exhausted on a bounded, non-settling orbit.
    BigReal spread(prec, 0L);
    for (size_t a = 0; a < history.size(); ++a) {
      for (size_t b = a + 1; b < history.size(); ++b) {
        BigReal d =
            hypot(history[a].x - history[b].x, history[a].y - history[b].y);
        if (spread < d) spread = std::move(d);
      }
    }
    BigReal point_scale = hypot(x, y);
    if (point_scale.is_zero()) point_scale = BigReal(prec, 1L);
    if (spread < ldexp2(point_scale, -20)) out.oscillatory = true;
  }

  if (out.oscillatory) {
    // Report the orbit centroid: the natural representative of a bounded
    // cycle and a stable point to chain further work from.
    BigReal sx(prec, 0L), sy(prec, 0L);
    for (const auto& h : history) {
      sx += h.x;
      sy += h.y;
    }
    x = sx / BigReal(prec, static_cast<long>(history.size()));
    y = sy / BigReal(prec, static_cast<long>(history.size()));
  }

  out.x = std::move(x);
  out.y = std::move(y);
  return out;
}

}  // namespace rpm
