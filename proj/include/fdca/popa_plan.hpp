// popa_plan.hpp — recursive construction and certification of the level data
// (alpha_m, p, q, j, k, ell, t) driving the corner-inclusion sequence toward a
// target parameter s > 1.  Every inequality is chosen and re-verified in exact
// rational arithmetic; the achieved parameter carries a certified bracket that
// halves at each level.

#pragma once

#include "fdca/interp_params.hpp"
#include "fdca/rational.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace fdca {

struct PlanLevel {
  int index = 0;          // m, 1-based
  Rational alpha;         // corner ratio p/q in lowest terms
  long long p = 0;        // numerator of alpha
  long long q = 0;        // denominator of alpha
  long long j = 0;        // scale factor chosen after alpha
  long long k = 0;        // full matrix size, j*q*t_prev
  long long ell = 0;      // corner size, j*p*t_prev
  long long t = 1;        // representation dimension reported for this level
};

struct ConstructionPlan {
  Rational target_s;
  long decay_p = 0;  // exponent with alpha_m < 2^-(m+decay_p) at every level
  std::vector<PlanLevel> levels;
  Enclosure achieved;  // certified bracket on the truncated parameter

  LevelSequence level_sequence() const {
    LevelSequence seq;
    for (const PlanLevel& lv : levels) seq.levels.push_back({lv.k, lv.ell});
    return seq;
  }
};

namespace detail {

/// Smallest-denominator rational strictly inside an interval, ties broken by
/// smallest numerator.  `admits(p, q)` decides membership exactly; the double
/// bounds only narrow the scan window (widened by a safety margin).
template <typename Pred>
Rational smallest_denominator_in(double approx_lo, double approx_hi,
                                 Pred admits) {
  constexpr long long kDenominatorLimit = 4'000'000;
  for (long long q = 2; q <= kDenominatorLimit; ++q) {
    long long lo = static_cast<long long>(std::floor(approx_lo * q)) - 2;
    long long hi = static_cast<long long>(std::ceil(approx_hi * q)) + 2;
    lo = std::max<long long>(lo, 1);
    hi = std::min<long long>(hi, q - 1);
    for (long long p = lo; p <= hi; ++p) {
      if (std::gcd(p, q) != 1) continue;
      if (admits(p, q)) return Rational(p, q);
    }
  }
  throw Error("no admissible rational below the denominator limit");
}

inline long long min_scale_exceeding(const Rational& threshold) {
  // Smallest j >= 1 with j^2 > threshold.
  if (threshold < 0) return 1;
  BigInt j = sqrt(rational_num(threshold) / rational_den(threshold));
  if (j < 1) j = 1;
  while (Rational(j * j) <= threshold) ++j;
  return to_int64(j, "scale factor");
}

}  // namespace detail

/// First-level corner ratio: the smallest-denominator rational with
/// s + 1/4 < 1 + (1 - 1/alpha)^2 < s + 1/2, both sides strict.
inline Rational choose_alpha_first(const Rational& s) {
  if (s <= 1) throw Error("target parameter must exceed 1");
  const Rational lo_v = s - Rational(3, 4);
  const Rational hi_v = s - Rational(1, 2);
  const double a_lo = 1.0 / (1.0 + std::sqrt(to_double(hi_v)));
  const double a_hi = 1.0 / (1.0 + std::sqrt(to_double(lo_v)));
  return detail::smallest_denominator_in(
      a_lo, a_hi, [&](long long p, long long q) {
        const Rational v = square(Rational(q - p, p));
        return lo_v < v && v < hi_v;
      });
}

/// Corner ratio for level m >= 2: the smallest-denominator rational with
/// s + 2^-(m+1) < 1 + gamma_prev*(1-alpha)^2 < s + 2^-m.  Requires the
/// previous level's certified bracket s + 2^-m < 1 + gamma_prev < s + 2^-(m-1).
inline Rational choose_alpha_next(const Rational& s, int m,
                                  const Rational& gamma_prev) {
  if (m < 2) throw Error("choose_alpha_next applies from level 2 on");
  if (!(s + pow2(-m) < 1 + gamma_prev && 1 + gamma_prev < s + pow2(-(m - 1))))
    throw Error("running product outside the previous certified bracket");
  const Rational abs_lo = s - 1 + pow2(-(m + 1));
  const Rational abs_hi = s - 1 + pow2(-m);
  const double a_lo = 1.0 - std::sqrt(to_double(abs_hi / gamma_prev));
  const double a_hi = 1.0 - std::sqrt(to_double(abs_lo / gamma_prev));
  return detail::smallest_denominator_in(
      std::max(a_lo, 0.0), std::min(a_hi, 1.0),
      [&](long long p, long long q) {
        const Rational v = gamma_prev * square(Rational(q - p, q));
        return abs_lo < v && v < abs_hi;
      });
}

struct ScaleChoice {
  long long j = 0;
  long long k = 0;
  long long ell = 0;
};

/// Minimal scale j making the completed level inequality strict:
/// level 1 adds 1/(p*j)^2, later levels add 1/(j*q*t_prev)^2.
inline ScaleChoice choose_scale(const Rational& s, int m,
                                const Rational& gamma_prev,
                                const Rational& alpha, long long t_prev) {
  if (t_prev < 1) throw Error("representation dimension must be positive");
  const long long p = to_int64(rational_num(alpha), "alpha numerator");
  const long long q = to_int64(rational_den(alpha), "alpha denominator");

  ScaleChoice out;
  if (m == 1) {
    if (t_prev != 1) throw Error("level 1 admits no prior dimension");
    const Rational gap = (s - Rational(1, 2)) - square(Rational(q - p, p));
    if (gap <= 0) throw Error("alpha_1 violates its defining inequality");
    out.j = detail::min_scale_exceeding(1 / (gap * p * p));
  } else {
    const Rational gap =
        (s - 1 + pow2(-m)) - gamma_prev * square(Rational(q - p, q));
    if (gap <= 0) throw Error("alpha_m violates its defining inequality");
    const Rational qt = Rational(BigInt(q) * t_prev);
    out.j = detail::min_scale_exceeding(gamma_prev / (gap * qt * qt));
  }
  out.ell = to_int64(BigInt(out.j) * p * t_prev, "corner size");
  out.k = to_int64(BigInt(out.j) * q * t_prev, "matrix size");
  return out;
}

/// Decay exponent from the target alone: the largest p with 2^(p+1) < s - 1,
/// shifted by -1.  Per-level bounds alpha_m < 2^-(m+decay_p) are certified by
/// verify_plan against the exponent recorded in the plan.
inline long decay_exponent(const Rational& s) {
  if (s <= 1) throw Error("target parameter must exceed 1");
  long p = static_cast<long>(std::floor(std::log2(to_double(s - 1)))) - 2;
  while (pow2(p + 2) < s - 1) ++p;
  while (!(pow2(p + 1) < s - 1)) --p;
  return p - 1;
}

using DimensionOracle = std::function<long long(int)>;

inline DimensionOracle constant_dimension_oracle(long long value) {
  if (value < 1) throw Error("dimension oracle values must be positive");
  return [value](int) { return value; };
}

/// Runs the alternating ratio/scale choices for `level_count` levels,
/// threading the running product and the oracle's dimensions.
inline ConstructionPlan build_plan(
    const Rational& s, int level_count,
    const DimensionOracle& oracle = constant_dimension_oracle(1)) {
  if (s <= 1) throw Error("target parameter must exceed 1");
  if (level_count < 1) throw Error("a plan needs at least one level");

  ConstructionPlan plan;
  plan.target_s = s;

  Rational gamma;
  long long t_prev = 1;
  for (int m = 1; m <= level_count; ++m) {
    const Rational alpha =
        m == 1 ? choose_alpha_first(s) : choose_alpha_next(s, m, gamma);
    const ScaleChoice sc = choose_scale(s, m, gamma, alpha, t_prev);
    if (m == 1) {
      gamma = square(1 / alpha - 1) + Rational(1, BigInt(sc.ell) * sc.ell);
    } else {
      gamma *= square(1 - alpha) + Rational(1, BigInt(sc.k) * sc.k);
    }
    const long long t = oracle(m);
    if (t < 1) throw Error("dimension oracle returned a non-positive value");
    plan.levels.push_back({m, alpha,
                           to_int64(rational_num(alpha), "alpha numerator"),
                           to_int64(rational_den(alpha), "alpha denominator"),
                           sc.j, sc.k, sc.ell, t});
    t_prev = t;
  }

  // The level-1 ratio is not covered by the running-product derivation that
  // bounds alpha_m for m >= 2, so the recorded exponent also respects it.
  long cap = 0;
  const Rational alpha1 = plan.levels.front().alpha;
  while (alpha1 < pow2(-(cap + 2))) ++cap;
  while (!(alpha1 < pow2(-(cap + 1)))) --cap;
  plan.decay_p = std::min(decay_exponent(s), cap);

  plan.achieved = Enclosure{s + pow2(-(level_count + 1)), s + pow2(-level_count)};
  return plan;
}

struct PlanCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct PlanVerification {
  std::vector<PlanCheck> checks;
  bool all_pass() const {
    for (const PlanCheck& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Re-derives the running product from the plan's integers and checks every
/// definition identity, both strict inequalities per level, the decay bound,
/// and the final bracket.  Failures are reported, never thrown.
inline PlanVerification verify_plan(const ConstructionPlan& plan) {
  PlanVerification out;
  auto check = [&out](const std::string& name, bool pass,
                      const std::string& detail = "") {
    out.checks.push_back({name, pass, detail});
  };

  if (plan.levels.empty()) {
    check("plan nonempty", false, "no levels");
    return out;
  }
  const Rational s = plan.target_s;
  check("target exceeds 1", s > 1, format_rational(s));
  check("decay exponent admissible", s - 1 > pow2(plan.decay_p + 1),
        "s - 1 vs 2^" + std::to_string(plan.decay_p + 1));

  Rational gamma;
  long long t_prev = 1;
  for (std::size_t idx = 0; idx < plan.levels.size(); ++idx) {
    const PlanLevel& lv = plan.levels[idx];
    const int m = static_cast<int>(idx) + 1;
    const std::string at = "level " + std::to_string(m) + ": ";

    check(at + "index", lv.index == m);
    check(at + "t positive", lv.t >= 1);
    const bool reduced = lv.p >= 1 && lv.q >= 2 && std::gcd(lv.p, lv.q) == 1 &&
                         lv.alpha == Rational(lv.p, lv.q) && lv.p < lv.q;
    check(at + "alpha reduced and in (0,1)", reduced,
          format_rational(lv.alpha));
    check(at + "ell definition", BigInt(lv.ell) == BigInt(lv.j) * lv.p * t_prev);
    check(at + "k definition", BigInt(lv.k) == BigInt(lv.j) * lv.q * t_prev);

    const Rational lo = s + pow2(-(m + 1));
    const Rational hi = s + pow2(-m);
    Rational partial;  // running value with the new ratio, before its scale term
    if (m == 1) {
      partial = 1 + square(1 / lv.alpha - 1);
      gamma = square(1 / lv.alpha - 1) + Rational(1, BigInt(lv.ell) * lv.ell);
    } else {
      partial = 1 + gamma * square(1 - lv.alpha);
      gamma *= square(1 - lv.alpha) + Rational(1, BigInt(lv.k) * lv.k);
    }
    check(at + "ratio bracket", lo < partial && partial < hi,
          format_rational(partial));
    check(at + "level bracket", lo < 1 + gamma && 1 + gamma < hi,
          format_rational(1 + gamma));
    check(at + "decay bound", lv.alpha < pow2(-(m + plan.decay_p)),
          format_rational(lv.alpha) + " vs 2^-" +
              std::to_string(m + plan.decay_p));
    t_prev = lv.t;
  }

  const int n = static_cast<int>(plan.levels.size());
  check("bracket lower endpoint", plan.achieved.lo == s + pow2(-(n + 1)),
        format_rational(plan.achieved.lo));
  check("bracket upper endpoint", plan.achieved.hi == s + pow2(-n),
        format_rational(plan.achieved.hi));

  bool inside = false;
  std::string achieved_text = "not computable";
  try {
    const Enclosure sval = factor_parameter_s(plan.level_sequence());
    achieved_text = format_rational(sval.lo);
    inside = sval.is_point() && sval.lo == 1 + gamma &&
             plan.achieved.contains_strictly(sval.lo);
  } catch (const Error&) {
  }
  check("achieved parameter inside final bracket", inside, achieved_text);
  return out;
}

}  // namespace fdca
