// interp_params.hpp — scalar parameters attached to a sequence of corner
// inclusions C ⊕ M_ell(n) ⊂ M_k(n): tail traces, the summand decomposition of
// the tensor product subalgebra, the product formula for the free entropy
// dimension, and the two interpolated free-group-factor parameters.  Infinite
// products are never evaluated: values are exact at a truncation, optionally
// wrapped in a rigorous enclosure from a decay certificate.

#pragma once

#include "fdca/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace fdca {

struct LevelSequence {
  struct Level {
    long k = 0;    // full matrix size
    long ell = 0;  // corner size, 1 <= ell <= k-1
  };
  std::vector<Level> levels;

  void validate() const {
    for (const Level& lv : levels)
      if (lv.ell < 1 || lv.ell > lv.k - 1)
        throw Error("level needs 1 <= ell <= k-1");
  }

  std::size_t size() const { return levels.size(); }

  /// Corner trace ratio alpha(n) = ell(n)/k(n); n is 1-based.
  Rational alpha(std::size_t n) const {
    if (n < 1 || n > levels.size()) throw Error("level index out of range");
    return Rational(levels[n - 1].ell, levels[n - 1].k);
  }
};

/// Product of (1 - alpha(i)) for i in [from, to], both 1-based inclusive.
inline Rational tail_trace(const LevelSequence& seq, std::size_t from,
                           std::size_t to) {
  seq.validate();
  if (from < 1 || from > to || to > seq.size())
    throw Error("tail_trace indices out of range");
  Rational product = 1;
  for (std::size_t i = from; i <= to; ++i) product *= 1 - seq.alpha(i);
  return product;
}

struct SummandData {
  BigInt dimension;       // m(F) = prod of ell(n) over F
  Rational minimal_trace; // lambda_F relative to the truncation
};

/// Matrix size and minimal-projection trace of the direct summand labelled by
/// a finite index set F (1-based).  Empty products are 1; the global weight
/// lambda is the truncated product of (1 - alpha(n)).
inline SummandData summand_data(const LevelSequence& seq,
                                const std::vector<std::size_t>& F) {
  seq.validate();
  SummandData out;
  out.dimension = 1;
  Rational denom = 1;
  std::vector<bool> seen(seq.size() + 1, false);
  for (std::size_t n : F) {
    if (n < 1 || n > seq.size()) throw Error("summand index out of range");
    if (seen[n]) throw Error("summand index repeated");
    seen[n] = true;
    out.dimension *= seq.levels[n - 1].ell;
    denom *= Rational(seq.levels[n - 1].k) * (1 - seq.alpha(n));
  }
  const Rational lambda =
      seq.size() == 0 ? Rational(1) : tail_trace(seq, 1, seq.size());
  out.minimal_trace = lambda / denom;
  return out;
}

/// The truncated product prod_n ((1-alpha(n))^2 + 1/k(n)^2).
inline Rational truncated_dimension_product(const LevelSequence& seq) {
  seq.validate();
  Rational product = 1;
  for (std::size_t n = 1; n <= seq.size(); ++n)
    product *= square(1 - seq.alpha(n)) + Rational(1, BigInt(seq.levels[n - 1].k) *
                                                          seq.levels[n - 1].k);
  return product;
}

/// Certified lower bound for the tail product beyond level N under the decay
/// certificate alpha(n) < 2^-(n+p): the tail is in (max(0, 1 - 2^(1-N-p)), 1].
inline Rational tail_product_lower_bound(std::size_t truncation, long decay_p) {
  Rational b = 1 - pow2(1 - static_cast<long>(truncation) - decay_p);
  return b < 0 ? Rational(0) : b;
}

/// Free entropy dimension 1 - prod((1-alpha)^2 + 1/k^2).  Without a decay
/// certificate the enclosure is the exact truncated value; with one it
/// rigorously contains the infinite-product value.
inline Enclosure fed_product(const LevelSequence& seq,
                             std::optional<long> tail_decay_p = {}) {
  const Rational truncated = 1 - truncated_dimension_product(seq);
  if (!tail_decay_p) return Enclosure{truncated, truncated};
  const Rational tail =
      tail_product_lower_bound(seq.size(), *tail_decay_p);
  return Enclosure{truncated, 1 - (1 - truncated) * tail};
}

/// Brute-force evaluation of 1 - sum over all F of lambda_F^2; must agree
/// exactly with fed_product's truncated value.  Refuses more than 20 levels.
inline Rational subset_sum_oracle(const LevelSequence& seq) {
  seq.validate();
  const std::size_t n = seq.size();
  if (n > 20) throw Error("subset enumeration limited to 20 levels");
  const Rational lambda = n == 0 ? Rational(1) : tail_trace(seq, 1, n);
  std::vector<Rational> factor(n);
  for (std::size_t i = 1; i <= n; ++i)
    factor[i - 1] = Rational(seq.levels[i - 1].k) * (1 - seq.alpha(i));

  Rational sum = 0;
  // Depth-first over subsets, threading the partial product.
  struct Walker {
    const std::vector<Rational>& factor;
    Rational& sum;
    void walk(std::size_t i, const Rational& lambda_f) {
      if (i == factor.size()) {
        sum += lambda_f * lambda_f;
        return;
      }
      walk(i + 1, lambda_f);
      walk(i + 1, lambda_f / factor[i]);
    }
  } walker{factor, sum};
  walker.walk(0, lambda);
  return 1 - sum;
}

/// Parameter t of the uncompressed factor: 1 + prod((1-alpha)^2 + 1/k^2).
inline Enclosure factor_parameter_t(const LevelSequence& seq,
                                    std::optional<long> tail_decay_p = {}) {
  const Rational truncated = 1 + truncated_dimension_product(seq);
  if (!tail_decay_p) return Enclosure{truncated, truncated};
  const Rational tail = tail_product_lower_bound(seq.size(), *tail_decay_p);
  return Enclosure{1 + (truncated - 1) * tail, truncated};
}

/// Parameter s of the corner: the first factor is rescaled through the
/// corner of level 1, the remaining levels enter as in factor_parameter_t.
inline Enclosure factor_parameter_s(const LevelSequence& seq,
                                    std::optional<long> tail_decay_p = {}) {
  seq.validate();
  if (seq.size() < 1) throw Error("parameter s needs at least one level");
  const Rational head =
      square(1 / seq.alpha(1) - 1) +
      Rational(1, BigInt(seq.levels[0].ell) * seq.levels[0].ell);
  Rational rest = 1;
  for (std::size_t i = 2; i <= seq.size(); ++i)
    rest *= square(1 - seq.alpha(i)) +
            Rational(1, BigInt(seq.levels[i - 1].k) * seq.levels[i - 1].k);
  const Rational truncated = 1 + head * rest;
  if (!tail_decay_p) return Enclosure{truncated, truncated};
  const Rational tail = tail_product_lower_bound(seq.size(), *tail_decay_p);
  return Enclosure{1 + head * rest * tail, truncated};
}

}  // namespace fdca
