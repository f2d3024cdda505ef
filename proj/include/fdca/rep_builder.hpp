// rep_builder.hpp — explicit finite-dimensional block representations of a
// pair of matrix algebras over a common abelian amalgam: the padding
// arithmetic, extension of partially-defined representations to the padded
// space, evaluation of alternating words, the vector-level approximation
// bound, and amplification of a corner representation to the whole algebra.

#pragma once

#include "fdca/algebra.hpp"
#include "fdca/matrix_lemmas.hpp"
#include "fdca/rational.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace fdca {

// ---------------------------------------------------------------------------
// Padding arithmetic
// ---------------------------------------------------------------------------

struct PaddingResult {
  long extra_dim = 0;             // d'
  long total_dim = 0;             // d + d'
  std::vector<long> extra_ranks;  // r'_i = t_i (d + d') - r_i
};

/// Minimal d' > 0 with d + d' divisible by both matrix sizes and
/// t_i (d + d') >= r_i for every block.
inline PaddingResult build_padding(long d, const std::vector<long>& ranks,
                                   const std::vector<Rational>& traces, long n,
                                   long nprime) {
  if (n < 1 || nprime < 1) throw Error("matrix sizes must be positive");
  if (ranks.size() != traces.size())
    throw Error("rank and trace vectors must have equal length");
  Rational mass = 0;
  long rank_sum = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (traces[i] <= 0) throw Error("traces must be positive");
    if (rational_den(Rational(n) * traces[i]) != 1 ||
        rational_den(Rational(nprime) * traces[i]) != 1)
      throw Error("n t_i and n' t_i must be integers");
    if (ranks[i] < 0) throw Error("ranks must be nonnegative");
    mass += traces[i];
    rank_sum += ranks[i];
  }
  if (mass != 1) throw Error("traces must sum to 1");
  if (rank_sum != d) throw Error("ranks must sum to the current dimension");

  const long step = std::lcm(n, nprime);
  long total = ((d / step) + 1) * step;
  for (;;) {
    bool ok = true;
    for (std::size_t i = 0; i < traces.size(); ++i)
      if (traces[i] * total < ranks[i]) ok = false;
    if (ok) break;
    total += step;
  }

  PaddingResult out;
  out.total_dim = total;
  out.extra_dim = total - d;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const Rational r = traces[i] * total - ranks[i];
    if (rational_den(r) != 1) throw Error("padding rank is not an integer");
    out.extra_ranks.push_back(to_int64(rational_num(r), "padding rank"));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Representation states
// ---------------------------------------------------------------------------

/// An abelian amalgam with its two unital embeddings, given by the block
/// ranks c_i (into M_n) and c'_i (into M_{n'}); trace compatibility
/// c_i/n = c'_i/n' is required.
struct AmalgamSpec {
  long left_n = 0;
  long right_n = 0;
  std::vector<long> left_ranks;
  std::vector<long> right_ranks;

  void validate() const {
    if (left_ranks.empty() || left_ranks.size() != right_ranks.size())
      throw Error("amalgam needs matching nonempty rank vectors");
    long ls = 0, rs = 0;
    for (std::size_t i = 0; i < left_ranks.size(); ++i) {
      if (left_ranks[i] < 1 || right_ranks[i] < 1)
        throw Error("amalgam ranks must be positive");
      if (Rational(left_ranks[i], left_n) != Rational(right_ranks[i], right_n))
        throw Error("amalgam traces are incompatible at block " +
                    std::to_string(i));
      ls += left_ranks[i];
      rs += right_ranks[i];
    }
    if (ls != left_n || rs != right_n)
      throw Error("amalgam embeddings must be unital");
  }

  std::size_t blocks() const { return left_ranks.size(); }

  std::vector<Rational> traces() const {
    validate();
    std::vector<Rational> t;
    for (long c : left_ranks) t.emplace_back(c, left_n);
    return t;
  }

  long left_row_start(std::size_t block) const {
    long r = 0;
    for (std::size_t e = 0; e < block; ++e) r += left_ranks[e];
    return r;
  }
  long right_row_start(std::size_t block) const {
    long r = 0;
    for (std::size_t e = 0; e < block; ++e) r += right_ranks[e];
    return r;
  }

  UnitalEmbedding left_embedding() const {
    return UnitalEmbedding{MultiMatrixAlgebra::abelian(blocks()),
                           MultiMatrixAlgebra::full(left_n), {left_ranks}};
  }
  UnitalEmbedding right_embedding() const {
    return UnitalEmbedding{MultiMatrixAlgebra::abelian(blocks()),
                           MultiMatrixAlgebra::full(right_n), {right_ranks}};
  }
};

/// Builds the amalgam data from a compatible pair of embeddings of an abelian
/// algebra into two full matrix algebras.
inline AmalgamSpec amalgam_from_embeddings(const UnitalEmbedding& left,
                                           const UnitalEmbedding& right) {
  if (!left.source.is_abelian())
    throw Error("only abelian amalgams are materialized; compress first");
  const TraceCompatibilityReport rep = traces_compatible(left, right);
  if (!rep.compatible)
    throw Error("amalgam requires trace-compatible embeddings");
  return AmalgamSpec{left.target.summands[0], right.target.summands[0],
                     left.multiplicities[0], right.multiplicities[0]};
}

/// A multiplicity-`copies` representation of M_n supported on explicit
/// ambient coordinates: slot(row, copy) names the coordinate carrying that
/// tensor position.  All structural identities hold exactly.
struct SlotRep {
  long matrix_size = 0;
  long copies = 0;
  std::vector<int> slots;  // copy-major: slots[copy*matrix_size + row]

  void validate() const {
    if (matrix_size < 1) throw Error("slot rep needs a positive matrix size");
    if (slots.size() != static_cast<std::size_t>(matrix_size * copies))
      throw Error("slot table size mismatch");
    std::set<int> distinct(slots.begin(), slots.end());
    if (distinct.size() != slots.size())
      throw Error("slot table must be injective");
  }

  int slot(long row, long copy) const {
    return slots[static_cast<std::size_t>(copy * matrix_size + row)];
  }

  std::vector<int> sorted_coords() const {
    std::vector<int> c(slots.begin(), slots.end());
    std::sort(c.begin(), c.end());
    return c;
  }

  Matrix apply(const Matrix& x, long ambient) const {
    if (x.rows() != matrix_size || x.cols() != matrix_size)
      throw Error("element size does not match the represented algebra");
    Matrix out = Matrix::Zero(ambient, ambient);
    for (long copy = 0; copy < copies; ++copy)
      for (long r = 0; r < matrix_size; ++r)
        for (long c = 0; c < matrix_size; ++c)
          out(slot(r, copy), slot(c, copy)) += x(r, c);
    return out;
  }
};

struct RepState {
  AmalgamSpec amalgam;
  long ambient_dim = 0;
  SlotRep alpha;  // representation of M_n (partial before extension)
  SlotRep beta;   // representation of M_{n'}
  // Stage subspaces: where the current representations are pinned to the
  // representations they extend.  Spanned by standard basis vectors.
  std::vector<int> f_coords;
  std::vector<int> g_coords;
  bool extended = false;

  void validate() const {
    amalgam.validate();
    alpha.validate();
    beta.validate();
    if (alpha.matrix_size != amalgam.left_n ||
        beta.matrix_size != amalgam.right_n)
      throw Error("representation sizes do not match the amalgam");
    std::set<int> used(alpha.slots.begin(), alpha.slots.end());
    for (int c : beta.slots)
      if (!extended && used.count(c))
        throw Error("initial alpha and beta supports must be orthogonal");
    for (int c : alpha.slots)
      if (c < 0 || c >= ambient_dim) throw Error("slot outside ambient space");
    for (int c : beta.slots)
      if (c < 0 || c >= ambient_dim) throw Error("slot outside ambient space");
  }

  /// Copy whose stage subspaces are the full supports of the current
  /// representations (for use as the finer side of an approximation pair).
  RepState with_full_agreement() const {
    RepState s = *this;
    s.f_coords = alpha.sorted_coords();
    s.g_coords = beta.sorted_coords();
    return s;
  }

  RepState with_ambient(long dim) const {
    RepState s = *this;
    for (int c : alpha.slots)
      if (c >= dim) throw Error("ambient too small for alpha support");
    for (int c : beta.slots)
      if (c >= dim) throw Error("ambient too small for beta support");
    s.ambient_dim = dim;
    return s;
  }
};

/// Initial state: `a_copies` copies of the defining representation of M_n on
/// the first coordinates, then `b_copies` copies for M_{n'}, mutually
/// orthogonal.  The ambient defaults to exactly the occupied coordinates.
inline RepState make_initial_state(const AmalgamSpec& amalgam, long a_copies,
                                   long b_copies, long ambient = -1) {
  amalgam.validate();
  if (a_copies < 0 || b_copies < 0) throw Error("copy counts are nonnegative");
  RepState st;
  st.amalgam = amalgam;
  st.alpha.matrix_size = amalgam.left_n;
  st.alpha.copies = a_copies;
  for (long i = 0; i < amalgam.left_n * a_copies; ++i)
    st.alpha.slots.push_back(static_cast<int>(i));
  st.beta.matrix_size = amalgam.right_n;
  st.beta.copies = b_copies;
  const long off = amalgam.left_n * a_copies;
  for (long i = 0; i < amalgam.right_n * b_copies; ++i)
    st.beta.slots.push_back(static_cast<int>(off + i));
  st.ambient_dim = ambient < 0 ? off + amalgam.right_n * b_copies : ambient;
  st.f_coords = st.alpha.sorted_coords();
  st.g_coords = st.beta.sorted_coords();
  st.validate();
  return st;
}

/// Sub-state of the canonical initial layout: the first `a_sub` alpha copies
/// and first `b_sub` beta copies of make_initial_state(amalgam, a0, b0),
/// placed in a common ambient.  Its representations agree with any extension
/// of the full initial state on these supports.
inline RepState make_aligned_substate(const AmalgamSpec& amalgam, long a0,
                                      long b0, long a_sub, long b_sub,
                                      long ambient) {
  if (a_sub > a0 || b_sub > b0) throw Error("sub-state exceeds base copies");
  RepState st;
  st.amalgam = amalgam;
  st.alpha.matrix_size = amalgam.left_n;
  st.alpha.copies = a_sub;
  for (long i = 0; i < amalgam.left_n * a_sub; ++i)
    st.alpha.slots.push_back(static_cast<int>(i));
  st.beta.matrix_size = amalgam.right_n;
  st.beta.copies = b_sub;
  const long off = amalgam.left_n * a0;
  for (long i = 0; i < amalgam.right_n * b_sub; ++i)
    st.beta.slots.push_back(static_cast<int>(off + i));
  st.ambient_dim = ambient;
  st.f_coords = st.alpha.sorted_coords();
  st.g_coords = st.beta.sorted_coords();
  st.validate();
  return st;
}

struct ExtensionReport {
  long current_dim = 0;  // d
  long extra_dim = 0;    // d'
  std::vector<long> ranks;        // r_i on the current space
  std::vector<long> extra_ranks;  // r'_i on the padding
  std::vector<long> image_ranks;  // rank of the image of each block unit
  bool amalgam_images_equal_exact = false;
  double alpha_hom_residual = 0.0;
  double beta_hom_residual = 0.0;
  double alpha_restriction_residual = 0.0;
  double beta_restriction_residual = 0.0;
  double invariance_residual = 0.0;

  bool pass(double tol = 1e-10) const {
    return amalgam_images_equal_exact && alpha_hom_residual < tol &&
           beta_hom_residual < tol && alpha_restriction_residual < tol &&
           beta_restriction_residual < tol && invariance_residual < tol;
  }
};

struct ExtensionResult {
  RepState state;
  ExtensionReport report;
};

namespace detail {

inline std::vector<int> block_coords(const SlotRep& rep, long row_start,
                                     long rows) {
  std::vector<int> out;
  for (long copy = 0; copy < rep.copies; ++copy)
    for (long r = row_start; r < row_start + rows; ++r)
      out.push_back(rep.slot(r, copy));
  return out;
}

inline Matrix random_element(long n, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix x(n, n);
  for (long r = 0; r < n; ++r)
    for (long c = 0; c < n; ++c) x(r, c) = std::complex<double>(g(rng), g(rng));
  return x;
}

}  // namespace detail

/// Extends the two representations to unital representations on the padded
/// space, agreeing exactly on the amalgam: the block-unit images become
/// identical 0/1 diagonal projections, the old supports are untouched, and
/// the fresh multiplicities are laid out block-by-block then copy-by-copy on
/// the padding.  Accepts either an initial state (orthogonal supports) or an
/// already-extended one (identical supports), which grows the chain of
/// invariant subspaces by one stage.
inline ExtensionResult extend_representations(const RepState& state) {
  state.validate();
  const AmalgamSpec& am = state.amalgam;
  const std::size_t m = am.blocks();
  const long n = am.left_n, np = am.right_n;
  const long a = state.alpha.copies, b = state.beta.copies;
  const std::vector<Rational> t = am.traces();

  const std::vector<int> alpha_support = state.alpha.sorted_coords();
  const std::vector<int> beta_support = state.beta.sorted_coords();
  std::vector<int> overlap;
  std::set_intersection(alpha_support.begin(), alpha_support.end(),
                        beta_support.begin(), beta_support.end(),
                        std::back_inserter(overlap));
  const bool shared = !overlap.empty();
  if (shared && alpha_support != beta_support)
    throw Error("supports must be orthogonal or identical");

  // Per-block coordinate sets on the current space and their sizes r_i.
  const std::set<int> alpha_set(alpha_support.begin(), alpha_support.end());
  std::vector<std::vector<int>> beta_only(m);
  std::vector<long> ranks(m);
  long d = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::vector<int> mine =
        detail::block_coords(state.alpha, am.left_row_start(i), am.left_ranks[i]);
    const std::vector<int> theirs = detail::block_coords(
        state.beta, am.right_row_start(i), am.right_ranks[i]);
    for (int c : theirs)
      if (!alpha_set.count(c)) beta_only[i].push_back(c);
    if (shared && !beta_only[i].empty())
      throw Error("shared supports must carry identical amalgam images");
    ranks[i] = static_cast<long>(mine.size() + beta_only[i].size());
    d += ranks[i];
  }
  const PaddingResult pad = build_padding(d, ranks, t, n, np);

  // Padding coordinates: the lowest coordinates not already in use.
  std::set<int> used(state.alpha.slots.begin(), state.alpha.slots.end());
  used.insert(state.beta.slots.begin(), state.beta.slots.end());
  std::vector<int> padding;
  for (int c = 0; static_cast<long>(padding.size()) < pad.extra_dim; ++c)
    if (!used.count(c)) padding.push_back(c);
  const long new_ambient =
      std::max(state.ambient_dim,
               padding.empty() ? 0L : static_cast<long>(padding.back()) + 1);

  // 0/1 projections on the padding, grouped by block.
  std::vector<std::vector<int>> q_coords(m);
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (long r = 0; r < pad.extra_ranks[i]; ++r)
      q_coords[i].push_back(padding[cursor++]);

  const long a_fresh = (pad.total_dim - n * a) / n;
  const long b_fresh = (pad.total_dim - np * b) / np;

  const std::set<int> beta_set(beta_support.begin(), beta_support.end());
  auto build_fresh = [&](bool left) {
    SlotRep fresh;
    fresh.matrix_size = left ? n : np;
    fresh.copies = left ? a_fresh : b_fresh;
    fresh.slots.assign(static_cast<std::size_t>(fresh.matrix_size * fresh.copies),
                       -1);
    for (std::size_t i = 0; i < m; ++i) {
      // Coordinates this block must cover: the other side's block support
      // not already carried, plus the block's padding projection.
      std::vector<int> coords;
      if (left) {
        coords = beta_only[i];
      } else {
        const std::vector<int> mine = detail::block_coords(
            state.alpha, am.left_row_start(i), am.left_ranks[i]);
        for (int c : mine)
          if (!beta_set.count(c)) coords.push_back(c);
      }
      coords.insert(coords.end(), q_coords[i].begin(), q_coords[i].end());
      std::sort(coords.begin(), coords.end());
      const long rows = left ? am.left_ranks[i] : am.right_ranks[i];
      const long start = left ? am.left_row_start(i) : am.right_row_start(i);
      if (coords.size() != static_cast<std::size_t>(rows * fresh.copies))
        throw Error("padding bookkeeping failed");
      std::size_t pos = 0;
      for (long copy = 0; copy < fresh.copies; ++copy)
        for (long r = 0; r < rows; ++r)
          fresh.slots[static_cast<std::size_t>(copy * fresh.matrix_size +
                                               start + r)] =
              coords[pos++];
    }
    return fresh;
  };

  const SlotRep alpha_fresh = build_fresh(true);
  const SlotRep beta_fresh = build_fresh(false);

  auto merge = [](const SlotRep& base, const SlotRep& fresh) {
    SlotRep rep;
    rep.matrix_size = base.matrix_size;
    rep.copies = base.copies + fresh.copies;
    rep.slots = base.slots;
    rep.slots.insert(rep.slots.end(), fresh.slots.begin(), fresh.slots.end());
    rep.validate();
    return rep;
  };

  ExtensionResult out;
  out.state.amalgam = am;
  out.state.ambient_dim = new_ambient;
  out.state.alpha = merge(state.alpha, alpha_fresh);
  out.state.beta = merge(state.beta, beta_fresh);
  out.state.f_coords = state.alpha.sorted_coords();
  out.state.g_coords = state.beta.sorted_coords();
  out.state.extended = true;

  // Report: exact block-image agreement plus numerical residuals.
  ExtensionReport& rep = out.report;
  rep.current_dim = d;
  rep.extra_dim = pad.extra_dim;
  rep.ranks = ranks;
  rep.extra_ranks = pad.extra_ranks;
  rep.amalgam_images_equal_exact = true;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<int> img_a = detail::block_coords(
        out.state.alpha, am.left_row_start(i), am.left_ranks[i]);
    std::vector<int> img_b = detail::block_coords(
        out.state.beta, am.right_row_start(i), am.right_ranks[i]);
    std::sort(img_a.begin(), img_a.end());
    std::sort(img_b.begin(), img_b.end());
    if (img_a != img_b) rep.amalgam_images_equal_exact = false;
    rep.image_ranks.push_back(static_cast<long>(img_a.size()));
  }

  std::mt19937 rng(0x5eed);
  Matrix pf = Matrix::Zero(new_ambient, new_ambient);
  for (int c : out.state.f_coords) pf(c, c) = 1.0;
  Matrix pg = Matrix::Zero(new_ambient, new_ambient);
  for (int c : out.state.g_coords) pg(c, c) = 1.0;
  const Matrix id = Matrix::Identity(new_ambient, new_ambient);
  for (int trial = 0; trial < 4; ++trial) {
    const Matrix x = detail::random_element(n, rng);
    const Matrix y = detail::random_element(n, rng);
    rep.alpha_hom_residual = std::max(
        rep.alpha_hom_residual,
        operator_norm(out.state.alpha.apply(x * y, new_ambient) -
                      out.state.alpha.apply(x, new_ambient) *
                          out.state.alpha.apply(y, new_ambient)));
    rep.alpha_restriction_residual =
        std::max(rep.alpha_restriction_residual,
                 operator_norm((out.state.alpha.apply(x, new_ambient) -
                                state.alpha.apply(x, new_ambient)) *
                               pf));
    rep.invariance_residual =
        std::max(rep.invariance_residual,
                 operator_norm((id - pf) *
                               out.state.alpha.apply(x, new_ambient) * pf));
    const Matrix u = detail::random_element(np, rng);
    const Matrix v = detail::random_element(np, rng);
    rep.beta_hom_residual = std::max(
        rep.beta_hom_residual,
        operator_norm(out.state.beta.apply(u * v, new_ambient) -
                      out.state.beta.apply(u, new_ambient) *
                          out.state.beta.apply(v, new_ambient)));
    rep.beta_restriction_residual =
        std::max(rep.beta_restriction_residual,
                 operator_norm((out.state.beta.apply(u, new_ambient) -
                                state.beta.apply(u, new_ambient)) *
                               pg));
    rep.invariance_residual =
        std::max(rep.invariance_residual,
                 operator_norm((id - pg) * out.state.beta.apply(u, new_ambient) *
                               pg));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Words and the approximation bound
// ---------------------------------------------------------------------------

enum class Side { Left, Right };

struct FreeWord {
  struct Letter {
    Side side = Side::Left;
    Matrix element;
  };
  std::vector<Letter> letters;  // application order: letters[0] acts first

  void validate(long n, long nprime) const {
    for (std::size_t i = 0; i < letters.size(); ++i) {
      const long want = letters[i].side == Side::Left ? n : nprime;
      if (letters[i].element.rows() != want ||
          letters[i].element.cols() != want)
        throw Error("letter size does not match its side");
      if (i > 0 && letters[i].side == letters[i - 1].side)
        throw Error("word letters must alternate sides");
    }
  }
};

inline Matrix evaluate_letter(const RepState& state,
                              const FreeWord::Letter& letter) {
  return letter.side == Side::Left
             ? state.alpha.apply(letter.element, state.ambient_dim)
             : state.beta.apply(letter.element, state.ambient_dim);
}

/// Product of the letter images, first letter applied first.
inline Matrix evaluate_word(const RepState& state, const FreeWord& word) {
  word.validate(state.amalgam.left_n, state.amalgam.right_n);
  Matrix out = Matrix::Identity(state.ambient_dim, state.ambient_dim);
  for (const auto& letter : word.letters) out = evaluate_letter(state, letter) * out;
  return out;
}

inline double coordinate_distance(const Vector& v,
                                  const std::vector<int>& coords) {
  Vector off = v;
  for (int c : coords) off(c) = 0.0;
  return off.norm();
}

struct ApproximationBound {
  double bound = 0.0;
  double actual = 0.0;
};

/// The chain estimate: actual deviation of the approximating representation
/// from the reference on a unit vector, against the telescoping bound
/// sum_j ||pi_k(tail)|| * 2||a_j|| * max(dist(xi_{j-1}, F_k), dist(xi_{j-1}, G_k)).
/// Throws if the computed deviation ever exceeds the bound.
inline ApproximationBound word_approximation_bound(const RepState& approx,
                                                   const RepState& reference,
                                                   const FreeWord& word,
                                                   const Vector& xi) {
  if (approx.ambient_dim != reference.ambient_dim)
    throw Error("states must share an ambient space");
  if (xi.size() != approx.ambient_dim) throw Error("vector dimension mismatch");
  if (std::abs(xi.norm() - 1.0) > 1e-9) throw Error("xi must be a unit vector");
  word.validate(approx.amalgam.left_n, approx.amalgam.right_n);

  const std::size_t len = word.letters.size();
  std::vector<Matrix> approx_letters(len), ref_letters(len);
  for (std::size_t j = 0; j < len; ++j) {
    approx_letters[j] = evaluate_letter(approx, word.letters[j]);
    ref_letters[j] = evaluate_letter(reference, word.letters[j]);
  }

  std::vector<Vector> chain(len + 1);
  chain[0] = xi;
  for (std::size_t j = 0; j < len; ++j) chain[j + 1] = ref_letters[j] * chain[j];

  std::vector<double> suffix_norm(len + 1, 1.0);
  Matrix tail = Matrix::Identity(approx.ambient_dim, approx.ambient_dim);
  for (std::size_t j = len; j-- > 0;) {
    suffix_norm[j + 1] = operator_norm(tail);  // letters after position j+1
    tail = tail * approx_letters[j];
  }

  ApproximationBound out;
  for (std::size_t j = 0; j < len; ++j) {
    const double step =
        2.0 * operator_norm(word.letters[j].element) *
        std::max(coordinate_distance(chain[j], approx.f_coords),
                 coordinate_distance(chain[j], approx.g_coords));
    out.bound += suffix_norm[j + 1] * step;
  }
  Vector ref_out = chain[len];
  Vector approx_out = xi;
  for (std::size_t j = 0; j < len; ++j) approx_out = approx_letters[j] * approx_out;
  out.actual = (ref_out - approx_out).norm();
  if (out.actual > out.bound + 1e-8)
    throw Error("approximation bound violated");
  return out;
}

// ---------------------------------------------------------------------------
// Corner amplification
// ---------------------------------------------------------------------------

/// A corner frame in M_N: a projection p, partial isometries v_i with
/// v_i* v_i <= p and sum v_i v_i* = 1 - p, and an isometry identifying the
/// corner pM_Np with M_r.
struct CornerFrame {
  long ambient = 0;
  Matrix unit;                    // p
  std::vector<Matrix> isometries; // v_1, ..., v_n
  Matrix corner_basis;            // N x r, columns spanning the range of p

  void validate(double tol = 1e-10) const {
    if (unit.rows() != ambient || unit.cols() != ambient)
      throw Error("corner unit has wrong dimensions");
    projection_rank(unit, tol);
    const Matrix id = Matrix::Identity(ambient, ambient);
    Matrix range_sum = Matrix::Zero(ambient, ambient);
    for (const Matrix& v : isometries) {
      if (operator_norm(v * v.adjoint() * v - v) > tol)
        throw Error("corner frame element is not a partial isometry");
      if (operator_norm(v.adjoint() * v - unit * v.adjoint() * v * unit) > tol)
        throw Error("partial isometry domain is not under the corner unit");
      range_sum += v * v.adjoint();
    }
    if (operator_norm(range_sum - (id - unit)) > tol)
      throw Error("partial isometry ranges must sum to the corner complement");
    if (operator_norm(corner_basis.adjoint() * corner_basis -
                      Matrix::Identity(corner_basis.cols(),
                                       corner_basis.cols())) > tol ||
        operator_norm(corner_basis * corner_basis.adjoint() - unit) > tol)
      throw Error("corner basis must be an isometry onto the corner");
  }
};

/// p on the first `rank` coordinates, the complement chained back to the
/// corner in chunks.
inline CornerFrame make_canonical_corner(long ambient, long rank) {
  if (rank < 1 || rank >= ambient) throw Error("corner rank out of range");
  CornerFrame frame;
  frame.ambient = ambient;
  frame.unit = Matrix::Zero(ambient, ambient);
  for (long i = 0; i < rank; ++i) frame.unit(i, i) = 1.0;
  frame.corner_basis = Matrix::Zero(ambient, rank);
  for (long i = 0; i < rank; ++i) frame.corner_basis(i, i) = 1.0;
  long next = rank;
  while (next < ambient) {
    const long chunk = std::min(rank, ambient - next);
    Matrix v = Matrix::Zero(ambient, ambient);
    for (long i = 0; i < chunk; ++i) v(next + i, i) = 1.0;
    frame.isometries.push_back(v);
    next += chunk;
  }
  return frame;
}

/// A unital representation of the corner M_r with multiplicity copies,
/// conjugated by a fixed unitary.
struct CornerRep {
  long corner_dim = 0;
  long multiplicity = 1;
  Matrix basis_change;  // unitary of size corner_dim*multiplicity

  long rep_dim() const { return corner_dim * multiplicity; }

  Matrix apply(const Matrix& x) const {
    if (x.rows() != corner_dim || x.cols() != corner_dim)
      throw Error("corner element has wrong size");
    Matrix big = Matrix::Zero(rep_dim(), rep_dim());
    for (long copy = 0; copy < multiplicity; ++copy)
      big.block(copy * corner_dim, copy * corner_dim, corner_dim, corner_dim) =
          x;
    return basis_change * big * basis_change.adjoint();
  }

  static CornerRep plain(long corner_dim, long multiplicity = 1) {
    CornerRep rep{corner_dim, multiplicity, {}};
    rep.basis_change =
        Matrix::Identity(rep.rep_dim(), rep.rep_dim());
    return rep;
  }
};

/// The amplified representation on the direct sum of the corner space and one
/// compressed copy per partial isometry; block (i, j) of the image of a is
/// the corner representation applied to v_i* a v_j.
struct AmplifiedRep {
  CornerFrame frame;
  CornerRep rep;
  std::vector<long> block_dims;
  std::vector<Matrix> block_bases;  // Z_i: rep_dim x block_dims[i]
  long total_dim = 0;

  Matrix apply(const Matrix& a) const {
    if (a.rows() != frame.ambient || a.cols() != frame.ambient)
      throw Error("element has wrong ambient size");
    const std::size_t blocks = block_dims.size();
    Matrix out = Matrix::Zero(total_dim, total_dim);
    long row = 0;
    for (std::size_t i = 0; i < blocks; ++i) {
      const Matrix vi =
          i == 0 ? frame.unit : frame.isometries[i - 1];
      long col = 0;
      for (std::size_t j = 0; j < blocks; ++j) {
        const Matrix vj = j == 0 ? frame.unit : frame.isometries[j - 1];
        const Matrix corner = frame.corner_basis.adjoint() *
                              (vi.adjoint() * a * vj) * frame.corner_basis;
        out.block(row, col, block_dims[i], block_dims[j]) =
            block_bases[i].adjoint() * rep.apply(corner) * block_bases[j];
        col += block_dims[j];
      }
      row += block_dims[i];
    }
    return out;
  }

  /// Restriction to the (0,0) block; inverse of the amplification on corner
  /// elements.
  Matrix corner_block(const Matrix& a) const {
    return apply(a).topLeftCorner(block_dims[0], block_dims[0]);
  }
};

inline AmplifiedRep amplify_corner_rep(const CornerFrame& frame,
                                       const CornerRep& rep,
                                       double tol = 1e-10) {
  frame.validate(tol);
  if (rep.corner_dim != frame.corner_basis.cols())
    throw Error("corner representation size mismatch");
  if (operator_norm(rep.basis_change * rep.basis_change.adjoint() -
                    Matrix::Identity(rep.rep_dim(), rep.rep_dim())) > tol)
    throw Error("corner basis change must be unitary");

  AmplifiedRep out;
  out.frame = frame;
  out.rep = rep;
  out.block_dims.push_back(rep.rep_dim());
  out.block_bases.push_back(
      Matrix::Identity(rep.rep_dim(), rep.rep_dim()));
  for (const Matrix& v : frame.isometries) {
    const Matrix dom = frame.corner_basis.adjoint() * (v.adjoint() * v) *
                       frame.corner_basis;
    const Matrix img = rep.apply(dom);
    const Matrix basis = detail::range_basis(img);
    out.block_dims.push_back(basis.cols());
    out.block_bases.push_back(basis);
  }
  out.total_dim = 0;
  for (long dim : out.block_dims) out.total_dim += dim;
  return out;
}

// ---------------------------------------------------------------------------
// Finite-dimensionality obstruction
// ---------------------------------------------------------------------------

struct ObstructionVerdict {
  bool compatible = false;
  long witness_block = -1;
  Rational left_trace;
  Rational right_trace;
  TraceCompatibilityReport report;
  std::string detail;
};

/// COMPATIBLE when the two induced traces agree (the full amalgamated free
/// product is then residually finite dimensional); otherwise OBSTRUCTED with
/// a witnessing minimal projection, implying the free product has no nonzero
/// finite-dimensional representation.
inline ObstructionVerdict rfd_obstruction_check(const UnitalEmbedding& left,
                                                const UnitalEmbedding& right) {
  ObstructionVerdict out;
  out.report = traces_compatible(left, right);
  out.compatible = out.report.compatible;
  if (out.compatible) {
    out.detail = "traces agree on the amalgam; the full amalgamated free "
                 "product is residually finite dimensional";
    return out;
  }
  // Witness: among the differing projections, the one of largest induced
  // trace (the projection a halving-style argument splits).
  Rational best = -1;
  for (std::size_t d = 0; d < out.report.trace_pairs.size(); ++d) {
    const auto& [lt, rt] = out.report.trace_pairs[d];
    if (lt == rt) continue;
    const Rational top = lt > rt ? lt : rt;
    if (top > best) {
      best = top;
      out.witness_block = static_cast<long>(d);
      out.left_trace = lt;
      out.right_trace = rt;
    }
  }
  out.detail = "minimal projection " + std::to_string(out.witness_block) +
               " has induced traces " + format_rational(out.left_trace) +
               " and " + format_rational(out.right_trace) +
               "; any finite dimensional representation of the free product "
               "must preserve both, hence is zero";
  return out;
}

}  // namespace fdca
