#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cylcert/errors.hpp"
#include "cylcert/mpoly.hpp"

namespace cylcert {

/// Rectangular matrix of polynomials sharing one context.
template <class C>
using PolyMatrix = std::vector<std::vector<MPoly<C>>>;

template <class C>
void require_rectangular(const PolyMatrix<C>& m) {
  for (const auto& row : m)
    if (row.size() != m.front().size()) throw Error("matrix is not rectangular");
}

/// Determinant by cofactor expansion along the first row (matrices here are 2x2 or 3x3).
template <class C>
MPoly<C> det(const PolyMatrix<C>& m, const CtxPtr& ctx) {
  const std::size_t n = m.size();
  if (n == 0) return MPoly<C>::one(ctx);
  require_rectangular(m);
  if (m.front().size() != n) throw Error("determinant of a non-square matrix");
  if (n == 1) return MPoly<C>(ctx) + m[0][0];
  MPoly<C> total(ctx);
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    PolyMatrix<C> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<MPoly<C>> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    MPoly<C> term = m[0][j] * det(minor, ctx);
    if (j % 2 == 0) total += term; else total -= term;
  }
  return total;
}

template <class C>
PolyMatrix<C> matmul(const PolyMatrix<C>& a, const PolyMatrix<C>& b, const CtxPtr& ctx) {
  require_rectangular(a);
  require_rectangular(b);
  if (a.empty() || a.front().size() != b.size()) throw Error("matrix product shape mismatch");
  const std::size_t cols = b.front().size();
  PolyMatrix<C> r(a.size(), std::vector<MPoly<C>>(cols, MPoly<C>(ctx)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t k = 0; k < b.size(); ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

template <class C>
PolyMatrix<C> identity_matrix(std::size_t n, const CtxPtr& ctx) {
  PolyMatrix<C> r(n, std::vector<MPoly<C>>(n, MPoly<C>(ctx)));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = MPoly<C>::one(ctx);
  return r;
}

/// Inverse of a matrix whose determinant is a unit constant, via the adjugate.
template <class C>
PolyMatrix<C> inverse_unit_det(const PolyMatrix<C>& m, const CtxPtr& ctx) {
  const std::size_t n = m.size();
  MPoly<C> d = det(m, ctx);
  auto dinv = d.unit_inverse();
  if (!dinv || !d.is_constant())
    throw NotUnitError("matrix is not invertible over the polynomial ring: determinant is not a nonzero constant");
  PolyMatrix<C> inv(n, std::vector<MPoly<C>>(n, MPoly<C>(ctx)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      PolyMatrix<C> minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<MPoly<C>> row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != i) row.push_back(m[r][c]);
        minor.push_back(std::move(row));
      }
      MPoly<C> cof = det(minor, ctx) * *dinv;
      inv[i][j] = (i + j) % 2 == 0 ? cof : -cof;
    }
  }
  if (matmul(m, inv, ctx) != identity_matrix<C>(n, ctx))
    throw VerificationError("adjugate inverse failed to reproduce the identity");
  return inv;
}

}  // namespace cylcert
