#include "proxgrad/scalar_prox.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "proxgrad/errors.hpp"

namespace proxgrad {

namespace {

constexpr int kNewtonSteps = 50;
constexpr int kBisectionSteps = 200;
constexpr double kQ0BisectionTol = 1e-9;

double sign_of(double q) { return q < 0.0 ? -1.0 : 1.0; }

// Decide between 0 and a nonzero candidate c >= 0 for the mirrored problem
// with q >= 0. `terms` is the magnitude scale of h at c, used for the tie test.
struct Candidate {
  double u = 0.0;
  double h = kInf;
  ProxBranch branch = ProxBranch::Zero;
};

ProxResult select(double q, const Candidate& best, double terms) {
  ProxResult r;
  if (best.u == 0.0 || !std::isfinite(best.h)) return r;
  const double tol = kTieRelTol * terms;
  if (best.h < -tol) {
    r.value = sign_of(q) * best.u;
    r.objective = best.h;
    r.branch = best.branch;
  } else if (best.h <= tol) {
    r.tie = true;
  }
  return r;
}

double lp_terms(double q, double s, double p, double u) {
  return std::abs(q * u) + 0.5 * u * u + s * std::pow(u, p);
}

// Root of F(u) = u - q + s p u^{p-1} on [lo, hi] with F(lo) <= 0 < F(hi).
// F is increasing and convex there, so Newton from hi is monotone.
double lp_root(double q, double s, double p, double lo, double hi) {
  auto F = [&](double u) { return u - q + s * p * std::pow(u, p - 1.0); };
  auto dF = [&](double u) { return 1.0 - s * p * (1.0 - p) * std::pow(u, p - 2.0); };
  double u = hi;
  for (int it = 0; it < kNewtonSteps; ++it) {
    const double f = F(u);
    if (f == 0.0) return u;
    if (f > 0.0) hi = u; else lo = u;
    const double d = dF(u);
    double next = d > 0.0 ? u - f / d : 0.5 * (lo + hi);
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= kRootTol) return next;
    u = next;
  }
  for (int it = 0; it < kBisectionSteps; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= kRootTol) return mid;
    if (F(mid) > 0.0) hi = mid; else lo = mid;
  }
  throw NumericError("prox_lp: root bracketing did not converge");
}

// phi(u) = (u^2/2 + s g(u)) / u. Its infimum over (0, b] is q0 and the
// minimizing u is the sparsity gap u0.
double log_phi(double u, double s, double a) { return 0.5 * u + s * std::log1p(a * u) / u; }

double golden_min(auto&& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    if (f1 <= f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - kInvPhi * (hi - lo); f1 = f(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + kInvPhi * (hi - lo); f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

double log_gap(double s, double a, double b) {
  // h'' >= 1 - s a^2 > 0 everywhere: the prox is continuous, no gap.
  if (s * a * a <= 1.0) return 0.0;
  const double hi = std::min(b, 2.0 * s * a);
  constexpr int kScan = 2000;
  int best = 1;
  double fbest = kInf;
  for (int i = 1; i <= kScan; ++i) {
    const double u = hi * i / kScan;
    const double v = log_phi(u, s, a);
    if (v < fbest) { fbest = v; best = i; }
  }
  const double lo_u = hi * (best - 1) / kScan;
  const double hi_u = hi * std::min(best + 1, kScan) / kScan;
  if (best == kScan) return hi;
  return golden_min([&](double u) { return log_phi(u, s, a); }, std::max(lo_u, 1e-300), hi_u,
                    1e-13);
}

}  // namespace

std::string_view to_string(ProxBranch branch) {
  switch (branch) {
    case ProxBranch::Zero: return "zero";
    case ProxBranch::Interior: return "interior";
    case ProxBranch::AtBound: return "bound";
  }
  return "?";
}

double prox_objective(double q, double s, const PenaltySpec& pen, double u) {
  const double g = pen.eval(u);
  if (!std::isfinite(g)) return kInf;
  return -q * u + 0.5 * u * u + (g == 0.0 ? 0.0 : s * g);
}

ProxResult prox_l0(double q, double s, double b) {
  if (!(s >= 0.0)) throw ParameterError("prox_l0: s must be >= 0");
  const double aq = std::abs(q);
  if (aq == 0.0) return {};
  if (b == kInf) {
    const double threshold = std::sqrt(2.0 * s);
    ProxResult r;
    if (aq > threshold) {
      r.value = q;
      r.objective = s - 0.5 * q * q;
      r.branch = ProxBranch::Interior;
    } else if (aq == threshold) {
      r.tie = true;
    }
    return r;
  }
  const double c = std::min(aq, b);
  const Candidate cand{c, -aq * c + 0.5 * c * c + s,
                       c == b ? ProxBranch::AtBound : ProxBranch::Interior};
  return select(q, cand, aq * c + 0.5 * c * c + s);
}

ProxResult prox_lp(double q, double s, double p, double b) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("prox_lp: requires 0 < p < 1");
  if (!(s >= 0.0)) throw ParameterError("prox_lp: s must be >= 0");
  if (!(b > 0.0)) throw ParameterError("prox_lp: box bound must be positive");
  const double aq = std::abs(q);
  if (aq == 0.0) return {};
  auto h = [&](double u) { return -aq * u + 0.5 * u * u + s * std::pow(u, p); };
  if (s == 0.0) {
    const double c = std::min(aq, b);
    return {sign_of(q) * c, h(c), false, c == b ? ProxBranch::AtBound : ProxBranch::Interior};
  }

  const double uI = compute_uI(s, p);
  Candidate cand;
  if (b <= uI) {
    // h is concave on (0, b]: only the endpoints compete.
    cand = {b, h(b), ProxBranch::AtBound};
  } else if (aq > uI && uI - aq + s * p * std::pow(uI, p - 1.0) <= 0.0) {
    const double root = lp_root(aq, s, p, uI, aq);
    if (root < b) {
      cand = {root, h(root), ProxBranch::Interior};
    } else {
      // h is convex on [uI, inf) and still decreasing at b.
      cand = {b, h(b), ProxBranch::AtBound};
    }
  } else {
    return {};  // h increasing on (0, inf)
  }
  return select(q, cand, lp_terms(aq, s, p, cand.u));
}

ProxResult prox_log(double q, double s, double a, double b) {
  if (!(a > 0.0)) throw ParameterError("prox_log: requires slope a > 0");
  if (!(s >= 0.0)) throw ParameterError("prox_log: s must be >= 0");
  if (!(b > 0.0)) throw ParameterError("prox_log: box bound must be positive");
  const double aq = std::abs(q);
  if (aq == 0.0) return {};
  auto h = [&](double u) { return -aq * u + 0.5 * u * u + s * std::log1p(a * u); };

  std::array<Candidate, 3> cands{};
  int count = 0;
  if (b < kInf) cands[count++] = {b, h(b), ProxBranch::AtBound};
  // a u^2 + (1 - a q) u + (s a - q) = 0, stable form.
  const double A = a, B = 1.0 - a * aq, C = s * a - aq;
  const double disc = B * B - 4.0 * A * C;
  if (disc >= 0.0) {
    const double t = -0.5 * (B + std::copysign(std::sqrt(disc), B));
    for (double r : {t / A, t != 0.0 ? C / t : 0.0}) {
      if (r > 0.0 && r < b) cands[count++] = {r, h(r), ProxBranch::Interior};
    }
  }
  if (count == 0) return {};
  const Candidate* best = &cands[0];
  for (int i = 1; i < count; ++i) {
    if (cands[i].h < best->h) best = &cands[i];
  }
  const double u = best->u;
  return select(q, *best, aq * u + 0.5 * u * u + s * std::log1p(a * u));
}

ProxResult prox_integer(double q, double /*s*/, double b) {
  if (!(b > 0.0)) throw ParameterError("prox_integer: box bound must be positive");
  const double aq = std::abs(q);
  const double fl = std::floor(aq);
  const double frac = aq - fl;
  ProxResult r;
  double v = frac < 0.5 ? fl : (frac > 0.5 ? fl + 1.0 : fl);
  r.tie = frac == 0.5;
  if (b < kInf) v = std::min(v, std::floor(b));
  if (v == 0.0) return r;
  r.value = sign_of(q) * v;
  r.objective = -aq * v + 0.5 * v * v;
  r.branch = v == b ? ProxBranch::AtBound : ProxBranch::Interior;
  return r;
}

ProxResult prox_scalar(double q, double s, const PenaltySpec& pen) {
  pen.validate();
  if (!(s >= 0.0) || !std::isfinite(s)) throw ParameterError("prox_scalar: s must be finite and >= 0");
  if (!std::isfinite(q)) throw ParameterError("prox_scalar: q must be finite");
  const double b = pen.box_bound;
  switch (pen.kind) {
    case PenaltyKind::L0: return prox_l0(q, s, b);
    case PenaltyKind::LpPower: return prox_lp(q, s, pen.p, b);
    case PenaltyKind::LogPenalty: return prox_log(q, s, pen.log_slope, b);
    case PenaltyKind::IntegerIndicator: return prox_integer(q, s, b);
  }
  return {};
}

double compute_uI(double s, double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("compute_uI: requires 0 < p < 1");
  if (!(s >= 0.0)) throw ParameterError("compute_uI: s must be >= 0");
  return std::pow(s * p * (1.0 - p), 1.0 / (2.0 - p));
}

double compute_u0(double s, const PenaltySpec& pen) {
  pen.validate();
  if (!(s >= 0.0)) throw ParameterError("compute_u0: s must be >= 0");
  const double b = pen.box_bound;
  switch (pen.kind) {
    case PenaltyKind::L0: return std::min(b, std::sqrt(2.0 * s));
    case PenaltyKind::LpPower:
      return std::min(b, std::pow(2.0 * s * (1.0 - pen.p), 1.0 / (2.0 - pen.p)));
    case PenaltyKind::LogPenalty: return s == 0.0 ? 0.0 : log_gap(s, pen.log_slope, b);
    case PenaltyKind::IntegerIndicator: return b >= 1.0 ? 1.0 : kInf;
  }
  return 0.0;
}

double compute_q0(double s, const PenaltySpec& pen) {
  pen.validate();
  if (!(s >= 0.0)) throw ParameterError("compute_q0: s must be >= 0");
  const double b = pen.box_bound;
  switch (pen.kind) {
    case PenaltyKind::L0: {
      const double t = std::sqrt(2.0 * s);
      return t <= b ? t : 0.5 * b + s / b;
    }
    case PenaltyKind::LpPower: {
      if (s == 0.0) return 0.0;
      const double u = compute_u0(s, pen);
      return 0.5 * u + s * std::pow(u, pen.p - 1.0);
    }
    case PenaltyKind::LogPenalty: {
      if (s == 0.0) return 0.0;
      const double a = pen.log_slope;
      auto nonzero = [&](double q) { return prox_log(q, s, a, b).value != 0.0; };
      double lo = 0.0;
      double hi = std::min(s * a, b < kInf ? log_phi(b, s, a) : kInf);
      for (int i = 0; !nonzero(hi); ++i) {
        if (i > 200) throw NumericError("compute_q0: failed to bracket the zero threshold");
        hi = hi * (1.0 + 1e-12) + 1e-12;
      }
      while (hi - lo > kQ0BisectionTol) {
        const double mid = 0.5 * (lo + hi);
        if (nonzero(mid)) hi = mid; else lo = mid;
      }
      return 0.5 * (lo + hi);
    }
    case PenaltyKind::IntegerIndicator: return b >= 1.0 ? 0.5 : kInf;
  }
  return 0.0;
}

SparsityConstants sparsity_constants(double s, const PenaltySpec& pen) {
  SparsityConstants c;
  c.u0 = compute_u0(s, pen);
  c.q0 = compute_q0(s, pen);
  if (pen.kind == PenaltyKind::LpPower) c.uI = compute_uI(s, pen.p);
  return c;
}

double brute_force_prox(double q, double s, const PenaltySpec& pen, int grid_n, double refine_tol) {
  pen.validate();
  if (grid_n < 1000) throw ParameterError("brute_force_prox: grid_n must be >= 1000");
  const double radius = std::min(pen.box_bound, 2.0 * std::abs(q) + 1.0);
  auto h = [&](double u) { return prox_objective(q, s, pen, u); };

  double best_u = 0.0, best_h = 0.0;
  auto consider = [&](double u) {
    const double v = h(u);
    if (!std::isfinite(v)) return;
    const double terms = std::abs(q * u) + 0.5 * u * u + std::abs(s * pen.eval(u));
    const double tol = kTieRelTol * std::max(terms, std::abs(best_h));
    if (v < best_h - tol || (v <= best_h + tol && std::abs(u) < std::abs(best_u))) {
      best_u = u;
      best_h = v;
    }
  };

  if (pen.kind == PenaltyKind::IntegerIndicator) {
    const double k = std::floor(radius);
    for (double u = -k; u <= k; u += 1.0) consider(u);
    return best_u;
  }

  const double step = 2.0 * radius / (grid_n - 1);
  for (double side : {1.0, -1.0}) {
    int best_i = -1;
    double grid_best = kInf;
    for (int i = 1; i < grid_n; ++i) {
      const double u = side * std::min(radius, i * step * 0.5);
      const double v = h(u);
      if (v < grid_best) { grid_best = v; best_i = i; }
    }
    if (best_i < 0) continue;
    const double lo = std::max((best_i - 1) * step * 0.5, 0.0);
    const double hi = std::min((best_i + 1) * step * 0.5, radius);
    auto hs = [&](double t) { return h(side * t); };
    double t = golden_min(hs, lo, hi, refine_tol);
    // Polish: bisection on the sign of a central-difference slope.
    const double w = 1e-6 * (1.0 + t);
    const double delta = 1e-5 * std::max(1.0, t);
    double a = t - w, c = t + w;
    auto slope = [&](double x) { return hs(x + delta) - hs(x - delta); };
    if (a - delta > 0.0 && c + delta < radius && slope(a) < 0.0 && slope(c) > 0.0) {
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (a + c);
        if (slope(mid) > 0.0) c = mid; else a = mid;
      }
      t = 0.5 * (a + c);
    }
    consider(side * t);
    consider(side * std::min(radius, best_i * step * 0.5));
  }
  if (pen.boxed() && radius == pen.box_bound) {
    consider(radius);
    consider(-radius);
  }
  return best_u;
}

bool check_strong_conv_condition(double L, double alpha, double p) {
  if (!(L > 0.0)) throw ParameterError("check_strong_conv_condition: L must be > 0");
  if (!(alpha >= 0.0)) throw ParameterError("check_strong_conv_condition: alpha must be >= 0");
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("check_strong_conv_condition: requires 0 < p < 1");
  return L <= (2.0 / p - 1.0) * alpha;
}

}  // namespace proxgrad
