// algebra.hpp — finite direct sums of matrix algebras, tracial states, and
// unital embeddings given by multiplicity data.  Everything here is exact
// rational arithmetic; matrices are never materialized at this layer.

#pragma once

#include "fdca/rational.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fdca {

/// A finite direct sum of full complex matrix algebras, recorded by its
/// summand sizes.  Summand order is canonical as given and never re-sorted.
struct MultiMatrixAlgebra {
  std::vector<long> summands;

  void validate() const {
    if (summands.empty()) throw Error("algebra needs at least one summand");
    for (long n : summands)
      if (n < 1) throw Error("summand sizes must be positive");
  }

  std::size_t count() const { return summands.size(); }
  long linear_dimension() const {
    long total = 0;
    for (long n : summands) total += n * n;
    return total;
  }
  bool is_abelian() const {
    return std::all_of(summands.begin(), summands.end(),
                       [](long n) { return n == 1; });
  }

  static MultiMatrixAlgebra full(long n) { return {{n}}; }
  static MultiMatrixAlgebra abelian(std::size_t m) {
    return {std::vector<long>(m, 1)};
  }

  friend bool operator==(const MultiMatrixAlgebra& a,
                         const MultiMatrixAlgebra& b) {
    return a.summands == b.summands;
  }
};

/// A tracial state, determined by the trace of a minimal projection in each
/// summand.
struct TracialState {
  std::vector<Rational> minimal_traces;

  void validate(const MultiMatrixAlgebra& algebra) const {
    algebra.validate();
    if (minimal_traces.size() != algebra.count())
      throw Error("trace vector length does not match summand count");
    Rational mass = 0;
    for (std::size_t i = 0; i < minimal_traces.size(); ++i) {
      if (minimal_traces[i] < 0) throw Error("negative minimal trace");
      mass += Rational(algebra.summands[i]) * minimal_traces[i];
    }
    if (mass != 1) throw Error("unit must have trace 1 exactly");
  }

  bool is_faithful() const {
    return std::all_of(minimal_traces.begin(), minimal_traces.end(),
                       [](const Rational& t) { return t > 0; });
  }

  friend bool operator==(const TracialState& a, const TracialState& b) {
    return a.minimal_traces == b.minimal_traces;
  }
};

/// The normalized trace tr_n on a single full matrix algebra M_n.
inline TracialState matrix_trace(long n) {
  if (n < 1) throw Error("matrix size must be positive");
  return TracialState{{Rational(1, n)}};
}

/// A unital injective *-homomorphism between multi-matrix algebras, encoded
/// by how many times source summand d appears inside target summand a.
struct UnitalEmbedding {
  MultiMatrixAlgebra source;
  MultiMatrixAlgebra target;
  std::vector<std::vector<long>> multiplicities;  // [target][source]

  void validate() const {
    source.validate();
    target.validate();
    if (multiplicities.size() != target.count())
      throw Error("multiplicity matrix row count must match target summands");
    for (std::size_t a = 0; a < target.count(); ++a) {
      const auto& row = multiplicities[a];
      if (row.size() != source.count())
        throw Error("multiplicity matrix column count must match source");
      long used = 0;
      for (std::size_t d = 0; d < row.size(); ++d) {
        if (row[d] < 0) throw Error("negative multiplicity");
        used += row[d] * source.summands[d];
      }
      if (used != target.summands[a])
        throw Error("embedding is not unital in target summand " +
                    std::to_string(a));
    }
    for (std::size_t d = 0; d < source.count(); ++d) {
      long hits = 0;
      for (std::size_t a = 0; a < target.count(); ++a)
        hits += multiplicities[a][d];
      if (hits == 0)
        throw Error("embedding is not injective: source summand " +
                    std::to_string(d) + " unused");
    }
  }

  bool single_target() const { return target.count() == 1; }
};

inline UnitalEmbedding identity_embedding(const MultiMatrixAlgebra& algebra) {
  algebra.validate();
  std::vector<std::vector<long>> mult(algebra.count(),
                                      std::vector<long>(algebra.count(), 0));
  for (std::size_t i = 0; i < algebra.count(); ++i) mult[i][i] = 1;
  return UnitalEmbedding{algebra, algebra, mult};
}

/// The inclusion C ⊕ M_ell ⊂ M_k with the M_ell summand a corner of M_k
/// (the corner unit has trace ell/k).
inline UnitalEmbedding corner_inclusion(long k, long ell) {
  if (k < 2 || ell < 1 || ell > k - 1)
    throw Error("corner inclusion needs 1 <= ell <= k-1");
  MultiMatrixAlgebra sub{{1, ell}};
  return UnitalEmbedding{sub, MultiMatrixAlgebra::full(k), {{k - ell, 1}}};
}

/// Pulls a tracial state on the target back to the source: the trace of a
/// minimal source projection is the trace of its image.
inline TracialState induced_trace(const UnitalEmbedding& emb,
                                  const TracialState& target_trace) {
  emb.validate();
  target_trace.validate(emb.target);
  TracialState result;
  result.minimal_traces.resize(emb.source.count());
  for (std::size_t d = 0; d < emb.source.count(); ++d) {
    Rational t = 0;
    for (std::size_t a = 0; a < emb.target.count(); ++a)
      t += Rational(emb.multiplicities[a][d]) *
           target_trace.minimal_traces[a];
    result.minimal_traces[d] = t;
  }
  result.validate(emb.source);
  return result;
}

/// Outcome of the trace-compatibility test for a pair of embeddings of a
/// common subalgebra into M_n and M_{n'}.
struct TraceCompatibilityReport {
  bool compatible = false;
  long n = 0;
  long nprime = 0;
  std::vector<std::pair<Rational, Rational>> trace_pairs;  // (t_i, t'_i)
  // When compatible, the scaled traces n*t_i and n'*t_i (always integers).
  std::vector<std::pair<BigInt, BigInt>> scaled_integral;
  std::string detail;
};

/// Tests whether the normalized matrix traces restrict to the same trace on
/// the common subalgebra.  Both targets must be single matrix algebras.
inline TraceCompatibilityReport traces_compatible(const UnitalEmbedding& left,
                                                  const UnitalEmbedding& right) {
  left.validate();
  right.validate();
  if (!left.single_target() || !right.single_target())
    throw Error("trace compatibility needs single matrix algebra targets");
  if (!(left.source == right.source))
    throw Error("embeddings must share the same source algebra");

  TraceCompatibilityReport report;
  report.n = left.target.summands[0];
  report.nprime = right.target.summands[0];
  const TracialState lt = induced_trace(left, matrix_trace(report.n));
  const TracialState rt = induced_trace(right, matrix_trace(report.nprime));

  report.compatible = true;
  std::ostringstream detail;
  for (std::size_t d = 0; d < left.source.count(); ++d) {
    const Rational& a = lt.minimal_traces[d];
    const Rational& b = rt.minimal_traces[d];
    report.trace_pairs.emplace_back(a, b);
    if (a != b) {
      report.compatible = false;
      detail << "summand " << d << ": " << format_rational(a)
             << " != " << format_rational(b) << "; ";
    }
  }
  if (report.compatible) {
    for (std::size_t d = 0; d < left.source.count(); ++d) {
      const Rational sn = Rational(report.n) * lt.minimal_traces[d];
      const Rational sm = Rational(report.nprime) * lt.minimal_traces[d];
      if (rational_den(sn) != 1 || rational_den(sm) != 1)
        throw Error("scaled traces must be integers for a valid embedding");
      report.scaled_integral.emplace_back(rational_num(sn), rational_num(sm));
    }
    detail << "induced traces agree on all " << left.source.count()
           << " summands";
  }
  report.detail = detail.str();
  return report;
}

/// Free entropy dimension of (B, tau) for B with atomic type-I structure:
/// 1 - sum of squared minimal-projection traces.
inline Rational free_entropy_dimension(const MultiMatrixAlgebra& algebra,
                                       const TracialState& trace) {
  trace.validate(algebra);
  Rational s = 0;
  for (const Rational& t : trace.minimal_traces) s += t * t;
  return 1 - s;
}

/// Free entropy dimension of the compression by the sum of one minimal
/// projection per summand, with the renormalized trace.  Which minimal
/// projection is selected in a summand is immaterial: they all share the
/// summand's trace.
inline Rational compressed_entropy_dimension(const MultiMatrixAlgebra& algebra,
                                             const TracialState& trace) {
  trace.validate(algebra);
  Rational total = 0;
  for (const Rational& t : trace.minimal_traces) total += t;
  if (total == 0) throw Error("compression by a zero projection");
  Rational s = 0;
  for (const Rational& t : trace.minimal_traces) s += square(t / total);
  return 1 - s;
}

/// Result of compressing a compatible pair of embeddings by the sum of one
/// minimal projection per source summand.
struct CompressionResult {
  MultiMatrixAlgebra abelianized;  // pDp, one dimension per summand of D
  UnitalEmbedding left;            // compressed embedding into M_{left_n}
  UnitalEmbedding right;
  long left_n = 0;   // n * tau(p)
  long right_n = 0;  // n' * tau'(p)
  Rational unit_trace;  // tau(p) in the left target
};

/// Reduces to the abelian case exactly as in the corner reduction: each
/// source summand contributes one minimal projection; ranks inside the
/// compressed corner are the original multiplicities.
inline CompressionResult compress_to_abelian(const UnitalEmbedding& left,
                                             const UnitalEmbedding& right) {
  const TraceCompatibilityReport rep = traces_compatible(left, right);
  if (!rep.compatible)
    throw Error("compress_to_abelian requires trace-compatible embeddings");

  CompressionResult out;
  const std::size_t m = left.source.count();
  out.abelianized = MultiMatrixAlgebra::abelian(m);

  long nc = 0, nc_prime = 0;
  for (std::size_t d = 0; d < m; ++d) {
    nc += left.multiplicities[0][d];
    nc_prime += right.multiplicities[0][d];
  }
  if (nc < 1 || nc_prime < 1)
    throw Error("compressed size is not a positive integer");
  out.left_n = nc;
  out.right_n = nc_prime;
  out.unit_trace = Rational(nc, rep.n);

  out.left = UnitalEmbedding{out.abelianized, MultiMatrixAlgebra::full(nc),
                             {left.multiplicities[0]}};
  out.right = UnitalEmbedding{out.abelianized,
                              MultiMatrixAlgebra::full(nc_prime),
                              {right.multiplicities[0]}};
  out.left.validate();
  out.right.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Adapted partial isometries: the selection that, together with the diagonal
// of A and the copy of B, determines any homomorphism of A extending given
// ones on B and on the diagonal.
// ---------------------------------------------------------------------------

/// A minimal projection of the canonical diagonal of A: row `row` of target
/// summand `target_summand` in the lexicographic block layout.
struct DiagonalAtom {
  long target_summand = 0;
  long row = 0;
};

struct IsometryDescriptor {
  enum class Kind { CopyLink, BlockLink };
  Kind kind = Kind::CopyLink;
  long source_atom = 0;  // index into AdaptedIsometries::atoms
  long target_atom = 0;
  long b_summand = 0;    // source summand whose block the link serves
};

struct AdaptedIsometries {
  std::vector<DiagonalAtom> atoms;  // all diagonal atoms of A, global order
  // Atom indices covered by the chosen minimal projection of each B-summand.
  std::vector<std::vector<long>> q_atoms;
  std::vector<IsometryDescriptor> descriptors;
};

/// Row offset of copy `copy` of source summand `d` inside target summand `a`
/// under the lexicographic diagonal layout of an embedding.
inline long embedding_row_offset(const UnitalEmbedding& emb, std::size_t a,
                                 std::size_t d, long copy) {
  long off = 0;
  for (std::size_t e = 0; e < d; ++e)
    off += emb.multiplicities[a][e] * emb.source.summands[e];
  return off + copy * emb.source.summands[d];
}

/// Selects partial-isometry descriptors adapted to the inclusion of B into A
/// (the canonical maximal abelian subalgebra is the diagonal in each summand
/// with lexicographic block layout).  Within each ambient summand, the copies
/// of each B-block are chained to a base atom and the distinct blocks' base
/// atoms are chained to each other; B itself supplies the matrix units inside
/// each copy.
inline AdaptedIsometries adapted_partial_isometries(
    const UnitalEmbedding& inclusion) {
  inclusion.validate();
  const auto& B = inclusion.source;
  const auto& A = inclusion.target;

  AdaptedIsometries out;
  std::vector<long> summand_offset(A.count());
  long next = 0;
  for (std::size_t a = 0; a < A.count(); ++a) {
    summand_offset[a] = next;
    for (long r = 0; r < A.summands[a]; ++r)
      out.atoms.push_back({static_cast<long>(a), r});
    next += A.summands[a];
  }

  out.q_atoms.resize(B.count());
  for (std::size_t i = 0; i < B.count(); ++i)
    for (std::size_t a = 0; a < A.count(); ++a)
      for (long c = 0; c < inclusion.multiplicities[a][i]; ++c)
        out.q_atoms[i].push_back(summand_offset[a] +
                                 embedding_row_offset(inclusion, a, i, c));

  for (std::size_t a = 0; a < A.count(); ++a) {
    long first_block_base = -1;
    for (std::size_t i = 0; i < B.count(); ++i) {
      const long copies = inclusion.multiplicities[a][i];
      if (copies == 0) continue;
      const long base =
          summand_offset[a] + embedding_row_offset(inclusion, a, i, 0);
      for (long c = 1; c < copies; ++c)
        out.descriptors.push_back(
            {IsometryDescriptor::Kind::CopyLink, base,
             summand_offset[a] + embedding_row_offset(inclusion, a, i, c),
             static_cast<long>(i)});
      if (first_block_base < 0) {
        first_block_base = base;
      } else {
        out.descriptors.push_back({IsometryDescriptor::Kind::BlockLink,
                                   first_block_base, base,
                                   static_cast<long>(i)});
      }
    }
  }
  return out;
}

}  // namespace fdca
