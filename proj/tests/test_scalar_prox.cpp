#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "proxgrad/errors.hpp"
#include "proxgrad/scalar_prox.hpp"

using namespace proxgrad;

namespace {

PenaltySpec lp(double p, double b = kInf) {
  PenaltySpec pen;
  pen.kind = PenaltyKind::LpPower;
  pen.p = p;
  pen.box_bound = b;
  return pen;
}

PenaltySpec of_kind(PenaltyKind kind, double b = kInf) {
  PenaltySpec pen;
  pen.kind = kind;
  pen.box_bound = b;
  return pen;
}

PenaltySpec log_pen(double a, double b = kInf) {
  PenaltySpec pen;
  pen.kind = PenaltyKind::LogPenalty;
  pen.log_slope = a;
  pen.box_bound = b;
  return pen;
}

std::vector<PenaltySpec> sample_penalties() {
  return {of_kind(PenaltyKind::L0),  of_kind(PenaltyKind::L0, 1.5), lp(0.5),      lp(0.1, 3.0),
          lp(0.9),                   lp(0.3, 0.7),                  log_pen(1.0), log_pen(4.0, 2.0),
          of_kind(PenaltyKind::IntegerIndicator), of_kind(PenaltyKind::IntegerIndicator, 2.0)};
}

}  // namespace

TEST_CASE("hard thresholding closed form") {
  CHECK(prox_l0(1.5, 0.5).value == 1.5);
  CHECK(prox_l0(-3.0, 0.5).value == -3.0);
  CHECK(prox_l0(0.99, 0.5).value == 0.0);

  const ProxResult at = prox_l0(1.0, 0.5);
  CHECK(at.value == 0.0);
  CHECK(at.tie);
  CHECK(at.branch == ProxBranch::Zero);

  // box clips the surviving value
  const ProxResult clipped = prox_l0(5.0, 0.5, 2.0);
  CHECK(clipped.value == 2.0);
  CHECK(clipped.branch == ProxBranch::AtBound);
}

TEST_CASE("q = 0 maps to 0 for every kind") {
  for (const auto& pen : sample_penalties()) {
    const ProxResult r = prox_scalar(0.0, 1.0, pen);
    CHECK(r.value == 0.0);
    CHECK(r.branch == ProxBranch::Zero);
  }
}

TEST_CASE("lp nonzero root") {
  // root of u - 2 + 0.5 u^{-1/2} = 0, high precision reference
  const ProxResult r = prox_lp(2.0, 1.0, 0.5);
  CHECK(r.value == doctest::Approx(1.605377940479596).epsilon(1e-12));
  CHECK(r.objective == doctest::Approx(1.344898383291428 - 2.0).epsilon(1e-12));
  CHECK(r.branch == ProxBranch::Interior);
  CHECK(std::abs(r.value - brute_force_prox(2.0, 1.0, lp(0.5))) < 1e-8);

  CHECK(prox_lp(0.05, 1.0, 0.5).value == 0.0);

  const ProxResult boxed = prox_lp(10.0, 0.01, 0.5, 4.0);
  CHECK(boxed.value == 4.0);
  CHECK(boxed.branch == ProxBranch::AtBound);
}

TEST_CASE("lp threshold is attained as a tie") {
  // s = 1, p = 1/2: u0 = 1 and q0 = 1/2 + 1 = 3/2
  const ProxResult r = prox_lp(1.5, 1.0, 0.5);
  CHECK(r.value == 0.0);
  CHECK(r.tie);
  CHECK(prox_lp(1.5 + 1e-9, 1.0, 0.5).value == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("log penalty roots") {
  // larger root of u^2 - 2u - 2.9 = 0
  const ProxResult r = prox_log(3.0, 0.1, 1.0);
  CHECK(r.value == doctest::Approx(2.974841765813150).epsilon(1e-12));
  CHECK(std::abs(r.value - brute_force_prox(3.0, 0.1, log_pen(1.0))) < 1e-8);
  CHECK(prox_log(1e-3, 1.0, 1.0).value == 0.0);
  CHECK(prox_log(-3.0, 0.1, 1.0).value == doctest::Approx(-2.974841765813150).epsilon(1e-12));
  CHECK(prox_log(50.0, 0.1, 1.0, 3.0).value == 3.0);
}

TEST_CASE("integer rounding and its ties") {
  CHECK(prox_integer(2.3, 1.0).value == 2.0);
  const ProxResult half = prox_integer(2.5, 1.0);
  CHECK(half.value == 2.0);
  CHECK(half.tie);
  const ProxResult neg = prox_integer(-0.5, 1.0);
  CHECK(neg.value == 0.0);
  CHECK(neg.tie);
  CHECK(prox_integer(-2.7, 0.3).value == -3.0);
  CHECK(prox_integer(7.2, 1.0, 2.0).value == 2.0);
  CHECK_FALSE(prox_integer(0.2, 1.0).tie);
}

TEST_CASE("sparsity constants") {
  CHECK(compute_u0(0.5, of_kind(PenaltyKind::L0)) == doctest::Approx(1.0));
  CHECK(compute_q0(0.5, of_kind(PenaltyKind::L0)) == doctest::Approx(1.0));

  PenaltySpec ex = lp(0.5, 4.0);
  ex.alpha = 0.01;
  ex.beta = 0.01;
  const double s = ex.beta / (ex.alpha + 0.1);
  CHECK(compute_u0(s, ex) == doctest::Approx(0.2021800082335741).epsilon(1e-12));

  CHECK(compute_u0(0.7, of_kind(PenaltyKind::IntegerIndicator)) == 1.0);
  CHECK(compute_uI(1.0, 0.5) == doctest::Approx(0.3968502629920499).epsilon(1e-12));
  CHECK(compute_uI(0.03 / 0.002, 0.9) == doctest::Approx(1.313666860075562).epsilon(1e-12));
  CHECK(compute_q0(1.0, lp(0.5)) == doctest::Approx(1.5).epsilon(1e-12));

  // log, s = 1, a = 2: q0 = min over u of u/2 + ln(1 + 2u)/u
  CHECK(compute_q0(1.0, log_pen(2.0)) == doctest::Approx(1.593521456015253).epsilon(1e-8));
  CHECK(compute_u0(1.0, log_pen(2.0)) == doctest::Approx(0.8561278589363277).epsilon(1e-6));
  // s a^2 <= 1: prox is continuous, no gap
  CHECK(compute_u0(0.5, log_pen(1.0)) == 0.0);

  // q0 shrinks with s
  double prev = kInf;
  for (double t : {1.0, 0.1, 0.01, 1e-4}) {
    const double q0 = compute_q0(t, lp(0.5));
    CHECK(q0 < prev);
    prev = q0;
  }
}

TEST_CASE("uI marks where u^2/2 + s u^p turns convex") {
  for (double p : {0.1, 0.5, 0.9}) {
    for (double s : {0.01, 1.0, 15.0}) {
      const double uI = compute_uI(s, p);
      for (int j = 0; j <= 50; ++j) {
        const double u = uI * (1.0 + 0.1 * j);
        CHECK(1.0 + s * p * (p - 1.0) * std::pow(u, p - 2.0) >= -1e-12);
      }
      const double below = 0.9 * uI;
      CHECK(1.0 + s * p * (p - 1.0) * std::pow(below, p - 2.0) < 0.0);
    }
  }
}

TEST_CASE("strong convexity step condition") {
  CHECK_FALSE(check_strong_conv_condition(0.1, 0.01, 0.5));
  CHECK_FALSE(check_strong_conv_condition(0.005, 0.001, 0.9));
  CHECK(check_strong_conv_condition(0.001, 0.002, 0.5));
  CHECK(check_strong_conv_condition(1e-4, 0.01, 0.5));
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(lp(1.0).validate(), ParameterError);
  CHECK_THROWS_AS(lp(0.0).validate(), ParameterError);
  CHECK_THROWS_AS(log_pen(0.0).validate(), ParameterError);
  CHECK_THROWS_AS(of_kind(PenaltyKind::L0, 0.0).validate(), ParameterError);
  CHECK_THROWS_AS((void)prox_lp(1.0, -1.0, 0.5), ParameterError);
  CHECK_THROWS_AS((void)prox_scalar(std::nan(""), 1.0, lp(0.5)), ParameterError);
  CHECK_THROWS_AS(parse_penalty_kind("cubic"), ParameterError);
}

TEST_CASE("properties over a (q, s) grid") {
  for (const auto& pen : sample_penalties()) {
    CAPTURE(to_string(pen.kind));
    CAPTURE(pen.box_bound);
    for (double s : {0.01, 0.1, 0.5, 1.0, 3.0}) {
      const SparsityConstants c = sparsity_constants(s, pen);
      double prev = -kInf;
      for (int i = 0; i <= 400; ++i) {
        const double q = -5.0 + 10.0 * i / 400.0;
        CAPTURE(q);
        CAPTURE(s);
        const ProxResult r = prox_scalar(q, s, pen);
        const double v = r.value;
        CHECK(v * q >= 0.0);
        CHECK(std::abs(v) <= 2.0 * std::abs(q) + 1e-12);
        CHECK(std::abs(v) <= pen.box_bound);
        CHECK((v == 0.0 || std::abs(v) >= c.u0 - 1e-10));
        CHECK(v >= prev);
        CHECK(prox_scalar(-q, s, pen).value == -v);
        CHECK(r.objective <= 0.0);
        CHECK((v != 0.0 || r.branch == ProxBranch::Zero));
        if (std::abs(q) <= c.q0 - 1e-8) CHECK(v == 0.0);
        if (std::abs(q) >= c.q0 + 1e-8) CHECK(v != 0.0);
        prev = v;
      }
    }
  }
}

TEST_CASE("oracle equivalence on random samples") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> qd(-6.0, 6.0), sd(0.0, 1.0);
  for (const auto& pen : sample_penalties()) {
    CAPTURE(to_string(pen.kind));
    for (int i = 0; i < 100; ++i) {
      const double q = qd(rng);
      const double s = 0.005 + 2.0 * sd(rng);
      CAPTURE(q);
      CAPTURE(s);
      const ProxResult r = prox_scalar(q, s, pen);
      const double ref = brute_force_prox(q, s, pen);
      // an exact tie may be resolved the same way by both, otherwise values agree
      CHECK(std::abs(r.value - ref) <= 1e-6);
    }
  }
}

TEST_CASE("s = 0 projects onto the feasible set") {
  CHECK(prox_scalar(0.3, 0.0, lp(0.5)).value == 0.3);
  CHECK(prox_scalar(7.0, 0.0, lp(0.5, 2.0)).value == 2.0);
  CHECK(prox_scalar(1.4, 0.0, of_kind(PenaltyKind::IntegerIndicator)).value == 1.0);
}
