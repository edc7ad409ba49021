#include "clearnet/fixpoint.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <thread>

namespace clearnet {

RegimeVector RegimeVector::from_index(int n, std::uint64_t idx) {
  RegimeVector b{std::vector<std::uint8_t>(n, 0)};
  for (int i = 0; i < n; ++i) b.bits[i] = static_cast<std::uint8_t>((idx >> i) & 1u);
  return b;
}

Vec phi_b(const FinancialNetwork& net, const RegimeVector& b, const Vec& p,
          const Vec& V, double tol) {
  const int n = net.size();
  if (b.size() != n) throw ValidationError("regime vector length mismatch");
  const Vec x = assets_x(net, p, V);
  const Vec y = assets_y(net, p, V);
  const Vec& l = net.totals();
  Vec out(n);
  for (int i = 0; i < n; ++i) {
    if (b.bits[i] == 0) {
      out(i) = std::min(y(i), l(i));
    } else {
      out(i) = x(i) < l(i) - tol ? y(i) : l(i);
    }
  }
  return out;
}

Vec eval_F(const FinancialNetwork& net, const RegimeVector& b, const Vec& p, double tol) {
  return phi_b(net, b, p, solve_Gplus(net, p, tol), tol);
}

namespace {

// A frozen regime: which banks pay the charged-assets branch and which full
// payers carry positive equity. Within a regime the clearing map is affine.
struct Regime {
  std::vector<std::uint8_t> in_default;
  std::vector<std::uint8_t> equity_active;
  bool operator==(const Regime&) const = default;
};

// Affine map w -> offset + M w on the stacked state w = (p, V).
struct Frozen {
  Vec offset;
  Mat M;
};

Regime freeze(const FinancialNetwork& net, const RegimeVector& b, const Vec& w,
              double tol) {
  const int n = net.size();
  const Vec p = w.head(n);
  const Vec V = w.tail(n);
  const Vec x = assets_x(net, p, V);
  const Vec y = assets_y(net, p, V);
  const Vec& l = net.totals();
  Regime r{std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 0)};
  for (int i = 0; i < n; ++i) {
    const bool dflt = b.bits[i] == 1 ? x(i) < l(i) - tol : y(i) < l(i) - tol;
    r.in_default[i] = dflt ? 1 : 0;
    r.equity_active[i] = (!dflt && x(i) > l(i)) ? 1 : 0;
  }
  return r;
}

Frozen build_affine(const FinancialNetwork& net, const Regime& regime) {
  const int n = net.size();
  const Mat pt = net.relative_liabilities().transpose();
  const Mat tt = net.holdings().transpose();
  Frozen f;
  f.offset = Vec::Zero(2 * n);
  f.M = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    if (regime.in_default[i]) {
      f.offset(i) = net.alpha() * net.cash()(i);
      f.M.block(i, 0, 1, n) = net.beta() * pt.row(i);
      f.M.block(i, n, 1, n) = net.gamma() * tt.row(i);
    } else {
      f.offset(i) = net.totals()(i);
    }
    if (regime.equity_active[i]) {
      f.offset(n + i) = net.cash()(i) - net.totals()(i);
      f.M.block(n + i, 0, 1, n) = pt.row(i);
      f.M.block(n + i, n, 1, n) = tt.row(i);
    }
  }
  return f;
}

// True once the state has left the frozen regime in the direction of travel.
// Only forward transitions count: the default set grows on descent and
// shrinks on ascent, the positive-equity set does the opposite.
bool crossed(const FinancialNetwork& net, const RegimeVector& b, const Regime& regime,
             const Vec& w, double tol, bool descending) {
  if (!w.allFinite()) return true;
  const int n = net.size();
  const Vec p = w.head(n);
  const Vec V = w.tail(n);
  const Vec x = assets_x(net, p, V);
  const Vec y = assets_y(net, p, V);
  const Vec& l = net.totals();
  for (int i = 0; i < n; ++i) {
    if (descending) {
      if (!regime.in_default[i]) {
        const bool violated = b.bits[i] == 1 ? x(i) < l(i) - tol : y(i) < l(i) - tol;
        if (violated) return true;
      }
      if (regime.equity_active[i] && x(i) < l(i)) return true;
    } else {
      if (regime.in_default[i]) {
        const bool recovered = b.bits[i] == 1 ? x(i) >= l(i) - tol : y(i) >= l(i) - tol;
        if (recovered) return true;
      }
      if (!regime.in_default[i] && !regime.equity_active[i] && x(i) > l(i)) return true;
    }
  }
  return false;
}

// Fast-forwards the affine iteration w <- offset + M w from w0 to the first
// step whose state leaves the frozen regime, doubling the step count via
// repeated squaring and then bisecting (component paths are monotone, so the
// crossing indicator is monotone in the step count). Sets *stalled when the
// iteration converges inside the regime instead.
Vec simulate_to_crossing(const FinancialNetwork& net, const RegimeVector& b,
                         const Regime& regime, const Frozen& frozen, const Vec& w0,
                         double tol, bool descending, bool* stalled) {
  *stalled = false;
  std::vector<Frozen> pows{frozen};

  const auto eval = [&](std::uint64_t steps) {
    Vec w = w0;
    for (int k = 0; steps != 0; ++k, steps >>= 1)
      if (steps & 1u) w = pows[k].offset + pows[k].M * w;
    return w;
  };

  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  Vec w_hi;
  Vec prev = w0;
  for (int k = 0; k < 62; ++k) {
    if (k > 0) {
      const Frozen& last = pows.back();
      Frozen next;
      next.offset = last.offset + last.M * last.offset;
      next.M = last.M * last.M;
      pows.push_back(std::move(next));
    }
    Vec wk;
    const Frozen& pk = pows[k];
    if (pk.M.allFinite() && pk.offset.allFinite()) {
      wk = pk.offset + pk.M * w0;
    } else {
      wk = Vec::Constant(w0.size(), std::numeric_limits<double>::quiet_NaN());
    }
    if (crossed(net, b, regime, wk, tol, descending)) {
      hi = std::uint64_t{1} << k;
      w_hi = std::move(wk);
      break;
    }
    if ((wk - prev).cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + wk.cwiseAbs().maxCoeff())) {
      *stalled = true;
      return wk;
    }
    prev = wk;
    lo = std::uint64_t{1} << k;
  }
  if (hi == 0)
    throw SolverError("frozen clearing segment neither crossed a regime boundary nor converged");

  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    Vec wm = eval(mid);
    if (crossed(net, b, regime, wm, tol, descending)) {
      hi = mid;
      w_hi = std::move(wm);
    } else {
      lo = mid;
    }
  }
  return w_hi;
}

ClearingPair finalize(const FinancialNetwork& net, const RegimeVector& b, const Vec& w,
                      double tol) {
  const int n = net.size();
  Vec p = w.head(n).cwiseMax(0.0).cwiseMin(net.totals());
  Vec V = solve_Gplus(net, p, tol);
  const Vec residual = p - phi_b(net, b, p, V, tol);
  if (residual.cwiseAbs().maxCoeff() > 10.0 * tol)
    throw SolverError("extremal fixpoint failed its residual check");
  return make_clearing_pair(net, std::move(p), std::move(V), tol);
}

ClearingPair extremal_fixpoint(const FinancialNetwork& net, const RegimeVector& b,
                               double tol, bool maximal) {
  const int n = net.size();
  if (b.size() != n) throw ValidationError("regime vector length mismatch");

  Vec p0 = maximal ? Vec(net.totals()) : Vec(Vec::Zero(n));
  Vec V0 = solve_Gplus(net, p0, tol);
  Vec w(2 * n);
  w << p0, V0;

  const int segment_cap = 2 * n + 10;
  for (int seg = 0; seg < segment_cap; ++seg) {
    const Regime regime = freeze(net, b, w, tol);
    const Frozen frozen = build_affine(net, regime);

    // Exact jump: solve the frozen linear system and accept its solution if
    // it is finite, moves the right way, and lands in the same regime.
    {
      const Mat system = Mat::Identity(2 * n, 2 * n) - frozen.M;
      Eigen::PartialPivLU<Mat> lu(system);
      if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() > kSingularPivot) {
        Vec w_hat = lu.solve(frozen.offset);
        if (w_hat.allFinite()) {
          const double slack = 1e-7 * (1.0 + w.cwiseAbs().maxCoeff());
          const bool monotone_ok =
              maximal ? (w_hat.array() <= w.array() + slack).all()
                      : (w_hat.array() >= w.array() - slack).all();
          if (monotone_ok && freeze(net, b, w_hat, tol) == regime)
            return finalize(net, b, w_hat, tol);
        }
      }
    }

    // The frozen system is singular, expanding, or its solution escapes the
    // regime: follow the monotone iteration to the first regime crossing.
    bool stalled = false;
    w = simulate_to_crossing(net, b, regime, frozen, w, tol, maximal, &stalled);
    if (stalled && freeze(net, b, w, tol) == regime) return finalize(net, b, w, tol);
  }
  throw SolverError("extremal fixpoint: regime sets did not stabilize");
}

}  // namespace

ClearingPair max_fixpoint(const FinancialNetwork& net, const RegimeVector& b, double tol) {
  return extremal_fixpoint(net, b, tol, /*maximal=*/true);
}

ClearingPair min_fixpoint(const FinancialNetwork& net, const RegimeVector& b, double tol) {
  return extremal_fixpoint(net, b, tol, /*maximal=*/false);
}

RegimeFixpoints regime_fixpoints(const FinancialNetwork& net, const RegimeVector& b,
                                 double tol) {
  RegimeFixpoints out;
  out.b = b;
  out.minimal = min_fixpoint(net, b, tol);
  out.maximal = max_fixpoint(net, b, tol);
  out.exists = true;
  out.unique_hint = (out.maximal.p - out.minimal.p).cwiseAbs().maxCoeff() <= tol;
  out.min_verified = verify_clearing_pair(net, out.minimal, tol).overall;
  out.max_verified = verify_clearing_pair(net, out.maximal, tol).overall;
  return out;
}

ClearingSet enumerate_clearing_set(const FinancialNetwork& net, int n_cap, double tol,
                                   int threads) {
  const int n = net.size();
  if (n > n_cap)
    throw PreconditionError("refusing to enumerate 2^" + std::to_string(n) +
                            " regimes (cap is n <= " + std::to_string(n_cap) + ")");
  const std::uint64_t count = std::uint64_t{1} << n;

  ClearingSet set;
  set.entries.resize(count);

  int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::clamp<int>(nthreads, 1, 64);
  if (count < 32) nthreads = 1;

  if (nthreads == 1) {
    for (std::uint64_t idx = 0; idx < count; ++idx)
      set.entries[idx] = regime_fixpoints(net, RegimeVector::from_index(n, idx), tol);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nthreads);
    const std::uint64_t chunk = (count + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const std::uint64_t begin = t * chunk;
      const std::uint64_t end = std::min(count, begin + chunk);
      pool.emplace_back([&, t, begin, end] {
        try {
          for (std::uint64_t idx = begin; idx < end; ++idx)
            set.entries[idx] = regime_fixpoints(net, RegimeVector::from_index(n, idx), tol);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  const double dedup_tol = 10.0 * tol;
  for (const auto& entry : set.entries) {
    for (const ClearingPair* cand : {&entry.minimal, &entry.maximal}) {
      bool seen = false;
      for (const auto& kept : set.distinct) {
        if ((kept.p - cand->p).cwiseAbs().maxCoeff() <= dedup_tol) {
          seen = true;
          break;
        }
      }
      if (!seen) set.distinct.push_back(*cand);
    }
  }

  set.global_min = set.entries.front().minimal;
  set.global_max = set.entries.back().maximal;
  return set;
}

std::pair<ClearingPair, ClearingPair> extreme_pairs(const FinancialNetwork& net,
                                                    double tol) {
  const int n = net.size();
  return {min_fixpoint(net, RegimeVector::zeros(n), tol),
          max_fixpoint(net, RegimeVector::ones(n), tol)};
}

}  // namespace clearnet
