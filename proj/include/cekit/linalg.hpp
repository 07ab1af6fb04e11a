/**
 * Exact linear algebra over Z and Z/m: Smith normal form, solving,
 * kernels and canonical lattice bases.
 *
 * Everything over Z/m is computed on integer lifts with the modulus
 * appended as extra relation columns, then reduced.
 */

#ifndef CEKIT_LINALG_HPP
#define CEKIT_LINALG_HPP

#include <optional>
#include <vector>

#include "cekit/integer.hpp"

namespace cekit {

/** S = U A V with S diagonal and d_1 | d_2 | ... */
struct SmithForm
{
    IntMatrix U, S, V;
    std::vector<Integer> diagonal;  // min(rows, cols) entries
};

/**
 * Smith normal form over the given ring.  Over Z/m the diagonal is replaced
 * by gcd(d_i, m) (zero when that gcd is m) and U is rescaled by a unit so
 * that the identity still holds modulo m.
 */
SmithForm snf(const IntMatrix& a, const Ring& ring = Ring());

/** Diagonal of the Smith form over Z, without transforms. */
std::vector<Integer> smith_diagonal(const IntMatrix& a);

/** Smith form over Z that also returns U^{-1}. */
struct SmithWithInverse
{
    IntMatrix U, Uinv;
    std::vector<Integer> diagonal;
};
SmithWithInverse snf_with_inverse(const IntMatrix& a);

/**
 * Reusable solver for A x = b over Z, built from one column echelon
 * factorization.  Solutions are the canonical back-substitution output
 * (free variables zero), so repeated runs agree bit for bit.
 */
class IntegerSolver
{
    public:
        explicit IntegerSolver(const IntMatrix& a);

        std::optional<IntVector> solve(const IntVector& b) const;

        /** Solves column by column; empty if any column is infeasible. */
        std::optional<IntMatrix> solve(const IntMatrix& b) const;

        /** Basis of ker A (columns of V past the rank). */
        IntMatrix kernel() const;

        Index rank() const { return static_cast<Index>(pivots_.size()); }
        Index rows() const { return rows_; }
        Index cols() const { return cols_; }

    private:
        Index rows_ = 0, cols_ = 0;
        IntMatrix H_, V_;
        std::vector<Index> pivots_;
};

/** Some x with A x = b over the ring, or nothing when b is not in the span. */
std::optional<IntVector> solve(const IntMatrix& a, const IntVector& b, const Ring& ring = Ring());
std::optional<IntMatrix> solve(const IntMatrix& a, const IntMatrix& b, const Ring& ring = Ring());

/** Columns generating ker A over the ring, in canonical (Hermite) form. */
IntMatrix kernel_basis(const IntMatrix& a, const Ring& ring = Ring());

/**
 * Canonical basis of the lattice spanned by the columns over Z: the nonzero
 * columns of the reduced column echelon form.
 */
IntMatrix lattice_basis(const IntMatrix& generators);

/** Rank over Z. */
Index rank(const IntMatrix& a);

/** Makes the first nonzero entry of every column positive. */
void normalize_signs(IntMatrix& columns);

/** Verifies that a square integer matrix is invertible over the ring. */
bool is_unimodular(const IntMatrix& a, const Ring& ring = Ring());

}  // namespace cekit

#endif
