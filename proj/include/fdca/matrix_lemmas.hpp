// matrix_lemmas.hpp — finite-matrix forms of the lifting lemmas: the
// normalized trace 2-norm, spectral projections at threshold 1/2,
// trace-constrained projection nesting, and partial-isometry completion via
// polar decomposition.

#pragma once

#include "fdca/rational.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <vector>

namespace fdca {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Trace 2-norm with normalized trace: sqrt(Tr(x*x)/N).
inline double hs_norm(const Matrix& x) {
  if (x.rows() != x.cols()) throw Error("hs_norm needs a square matrix");
  if (x.rows() == 0) return 0.0;
  return x.norm() / std::sqrt(static_cast<double>(x.rows()));
}

inline double operator_norm(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues()(0);
}

inline void require_hermitian(const Matrix& x, double tol = 1e-12) {
  if (x.rows() != x.cols()) throw Error("expected a square matrix");
  if ((x - x.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw Error("matrix is not Hermitian within tolerance");
}

/// Rank of a projection matrix, validated to be an actual projection.
inline long projection_rank(const Matrix& p, double tol = 1e-8) {
  require_hermitian(p, 1e-8);
  if (operator_norm(p * p - p) > tol)
    throw Error("matrix is not a projection within tolerance");
  const double tr = p.trace().real();
  const long rank = std::lround(tr);
  if (std::abs(tr - rank) > 1e-6) throw Error("projection has non-integer trace");
  return rank;
}

struct SpectralProjection {
  Matrix projection;
  bool threshold_warning = false;  // an eigenvalue within 1e-12 of 1/2
  double distance_hs = 0.0;        // ||p - a||_2
  double defect_hs = 0.0;          // ||a^2 - a||_2
};

/// Spectral projection of a Hermitian matrix for [1/2, inf).  The bound
/// ||p - a||_2 <= 2 ||a^2 - a||_2 is asserted on every call.
inline SpectralProjection spectral_projection_half(const Matrix& a) {
  require_hermitian(a);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  if (eig.info() != Eigen::Success) throw Error("eigendecomposition failed");

  SpectralProjection out;
  out.projection = Matrix::Zero(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double lambda = eig.eigenvalues()(i);
    if (std::abs(lambda - 0.5) < 1e-12) out.threshold_warning = true;
    if (lambda >= 0.5) {
      const Vector u = eig.eigenvectors().col(i);
      out.projection += u * u.adjoint();
    }
  }
  out.distance_hs = hs_norm(out.projection - a);
  out.defect_hs = hs_norm(a * a - a);
  if (out.distance_hs > 2.0 * out.defect_hs + 1e-10)
    throw Error("spectral projection bound violated");
  return out;
}

namespace detail {

/// Orthonormal basis of the eigenvalue-1 eigenspace of a projection, as
/// matrix columns in the solver's deterministic order.
inline Matrix range_basis(const Matrix& p) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(p);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    if (eig.eigenvalues()(i) > 0.5) keep.push_back(i);
  Matrix basis(p.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    basis.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(keep[c]);
  return basis;
}

}  // namespace detail

/// Projection P with P <= Q, rank(P) = target_rank, comparable to P_prime
/// (below it when the target rank is smaller, above it otherwise), built along
/// an eigenbasis of Q compatible with P_prime.
inline Matrix nested_projection_with_trace(const Matrix& p_prime,
                                           const Matrix& q, long target_rank) {
  const long rank_p = projection_rank(p_prime);
  const long rank_q = projection_rank(q);
  if (operator_norm(q * p_prime - p_prime) > 1e-8)
    throw Error("nested projection needs P' <= Q");
  if (target_rank < 0 || target_rank > rank_q)
    throw Error("target rank out of range");

  if (target_rank == rank_p) return p_prime;
  if (target_rank < rank_p) {
    const Matrix inside = detail::range_basis(p_prime);
    return inside.leftCols(target_rank) *
           inside.leftCols(target_rank).adjoint();
  }
  const Matrix fresh = detail::range_basis(q - p_prime);
  const long extra = target_rank - rank_p;
  return p_prime + fresh.leftCols(extra) * fresh.leftCols(extra).adjoint();
}

struct IsometryCompletion {
  Matrix v;            // partial isometry with v*v = P, vv* = Q
  Matrix w;            // the completing part on P - F
  double distance_hs = 0.0;  // ||V - B||_2
  double defect_hs = 0.0;    // ||P - F||_2, F the spectral support above 1/2
  double w_hs = 0.0;         // ||W||_2
};

/// Completes B = QBP with rank(P) = rank(Q) to a partial isometry V = UF + W:
/// U|B| the polar decomposition, F the spectral projection of |B| above 1/2,
/// and W a deterministic pairing of the remaining defect spaces.
inline IsometryCompletion complete_partial_isometry(const Matrix& b,
                                                    const Matrix& p,
                                                    const Matrix& q) {
  const long rank_p = projection_rank(p);
  const long rank_q = projection_rank(q);
  if (rank_p != rank_q) throw Error("completion needs rank(P) = rank(Q)");
  if (b.rows() != p.rows() || b.cols() != p.cols())
    throw Error("dimension mismatch");
  if (operator_norm(q * b * p - b) > 1e-8)
    throw Error("completion needs B = QBP");

  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix uf = Matrix::Zero(b.rows(), b.cols());
  Matrix f = Matrix::Zero(b.rows(), b.cols());
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) >= 0.5) {
      uf += svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
      f += svd.matrixV().col(i) * svd.matrixV().col(i).adjoint();
    }
  }

  IsometryCompletion out;
  const Matrix dom = detail::range_basis(p - f);
  const Matrix ran = detail::range_basis(q - uf * uf.adjoint());
  if (dom.cols() != ran.cols())
    throw Error("defect spaces have mismatched dimensions");
  out.w = ran * dom.adjoint();
  out.v = uf + out.w;
  out.distance_hs = hs_norm(out.v - b);
  out.defect_hs = hs_norm(p - f);
  out.w_hs = hs_norm(out.w);
  if (operator_norm(out.v.adjoint() * out.v - p) > 1e-8 ||
      operator_norm(out.v * out.v.adjoint() - q) > 1e-8)
    throw Error("completed isometry fails its defining relations");
  return out;
}

}  // namespace fdca
