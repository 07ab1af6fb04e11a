/**
 * Integer elimination kernels: column echelon (Hermite) form and Smith
 * normal form, templated on the scalar.
 *
 * The int64_t instantiation checks every operation for overflow and throws
 * OverflowError; callers retry with Integer.  Loops are written out by hand
 * rather than as Eigen expressions so that every arithmetic step goes
 * through the checked helpers.
 */

#ifndef CEKIT_SMITH_HPP
#define CEKIT_SMITH_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "cekit/integer.hpp"

namespace cekit {
namespace detail {

inline std::int64_t add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError();
    return r;
}

inline std::int64_t sub(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r))
        throw OverflowError();
    return r;
}

inline std::int64_t mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError();
    return r;
}

inline std::int64_t neg(std::int64_t a)
{
    return sub(0, a);
}

inline std::int64_t magnitude(std::int64_t a)
{
    return a < 0 ? neg(a) : a;
}

inline std::int64_t fdiv(std::int64_t a, std::int64_t b)
{
    if (b == -1)
        return neg(a);
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline bool divides(std::int64_t d, std::int64_t a)
{
    if (d == 0)
        return a == 0;
    if (d == -1 || d == 1)
        return true;
    return a % d == 0;
}

inline Integer add(const Integer& a, const Integer& b) { return a + b; }
inline Integer sub(const Integer& a, const Integer& b) { return a - b; }
inline Integer mul(const Integer& a, const Integer& b) { return a * b; }
inline Integer neg(const Integer& a) { return -a; }
inline Integer magnitude(const Integer& a) { return abs(a); }
inline Integer fdiv(const Integer& a, const Integer& b) { return floor_div(a, b); }

inline bool divides(const Integer& d, const Integer& a)
{
    if (d == 0)
        return a == 0;
    return a % d == 0;
}

/** Converts to int64 when every entry fits with headroom; false otherwise. */
inline bool narrow(const IntMatrix& a, DenseMatrix<std::int64_t>& out)
{
    static const Integer limit = Integer(1) << 40;
    out.resize(a.rows(), a.cols());
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
        {
            if (abs(a(i, j)) > limit)
                return false;
            out(i, j) = a(i, j).convert_to<std::int64_t>();
        }
    return true;
}

inline IntMatrix widen(const DenseMatrix<std::int64_t>& a)
{
    IntMatrix out(a.rows(), a.cols());
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            out(i, j) = Integer(a(i, j));
    return out;
}

inline IntMatrix widen(const IntMatrix& a)
{
    return a;
}

template <typename S>
void subtract_column(DenseMatrix<S>& m, Index target, Index source, const S& q)
{
    if (q == 0)
        return;
    for (Index i = 0; i < m.rows(); ++i)
        if (m(i, source) != 0)
            m(i, target) = sub(m(i, target), mul(q, m(i, source)));
}

template <typename S>
void subtract_row(DenseMatrix<S>& m, Index target, Index source, const S& q)
{
    if (q == 0)
        return;
    for (Index j = 0; j < m.cols(); ++j)
        if (m(source, j) != 0)
            m(target, j) = sub(m(target, j), mul(q, m(source, j)));
}

template <typename S>
void negate_column(DenseMatrix<S>& m, Index c)
{
    for (Index i = 0; i < m.rows(); ++i)
        m(i, c) = neg(m(i, c));
}

template <typename S>
void negate_row(DenseMatrix<S>& m, Index r)
{
    for (Index j = 0; j < m.cols(); ++j)
        m(r, j) = neg(m(r, j));
}

/**
 * Column echelon form H = A V with V unimodular.  Columns 0..rank-1 carry
 * positive pivots in strictly increasing rows; entries to the left of a
 * pivot are reduced into [0, pivot).  Remaining columns are zero, so the
 * matching columns of V span ker A.
 */
template <typename S>
struct ColumnEchelon
{
    DenseMatrix<S> H;
    DenseMatrix<S> V;
    std::vector<Index> pivot_rows;

    ColumnEchelon(const DenseMatrix<S>& a, bool track_v)
        : H(a)
    {
        const Index rows = a.rows(), cols = a.cols();
        if (track_v)
        {
            V = DenseMatrix<S>::Zero(cols, cols);
            for (Index i = 0; i < cols; ++i)
                V(i, i) = 1;
        }
        Index k = 0;
        for (Index i = 0; i < rows && k < cols; ++i)
        {
            bool found = false;
            for (;;)
            {
                Index best = -1;
                S best_value = 0;
                for (Index j = k; j < cols; ++j)
                    if (H(i, j) != 0 && (best < 0 || magnitude(H(i, j)) < best_value))
                    {
                        best = j;
                        best_value = magnitude(H(i, j));
                    }
                if (best < 0)
                    break;
                found = true;
                if (best != k)
                {
                    H.col(k).swap(H.col(best));
                    if (track_v)
                        V.col(k).swap(V.col(best));
                }
                bool clean = true;
                for (Index j = k + 1; j < cols; ++j)
                {
                    if (H(i, j) == 0)
                        continue;
                    S q = fdiv(H(i, j), H(i, k));
                    subtract_column(H, j, k, q);
                    if (track_v)
                        subtract_column(V, j, k, q);
                    if (H(i, j) != 0)
                        clean = false;
                }
                if (clean)
                    break;
            }
            if (!found)
                continue;
            if (H(i, k) < 0)
            {
                negate_column(H, k);
                if (track_v)
                    negate_column(V, k);
            }
            for (Index j = 0; j < k; ++j)
            {
                S q = fdiv(H(i, j), H(i, k));
                subtract_column(H, j, k, q);
                if (track_v)
                    subtract_column(V, j, k, q);
            }
            pivot_rows.push_back(i);
            ++k;
        }
    }

    Index rank() const { return static_cast<Index>(pivot_rows.size()); }
};

/**
 * Smith normal form S = U A V.  Optionally tracks U, its inverse and V.
 * Diagonal entries are nonnegative and form a divisibility chain.
 */
template <typename S>
struct SmithElimination
{
    DenseMatrix<S> A;
    DenseMatrix<S> U, Uinv, V;
    bool track_u, track_v;

    SmithElimination(const DenseMatrix<S>& a, bool want_u, bool want_v)
        : A(a), track_u(want_u), track_v(want_v)
    {
        const Index rows = a.rows(), cols = a.cols();
        if (track_u)
        {
            U = DenseMatrix<S>::Zero(rows, rows);
            Uinv = DenseMatrix<S>::Zero(rows, rows);
            for (Index i = 0; i < rows; ++i)
                U(i, i) = Uinv(i, i) = 1;
        }
        if (track_v)
        {
            V = DenseMatrix<S>::Zero(cols, cols);
            for (Index i = 0; i < cols; ++i)
                V(i, i) = 1;
        }
        const Index n = std::min(rows, cols);
        for (Index t = 0; t < n; ++t)
        {
            if (!move_smallest(t, t, t))
                break;
            for (;;)
            {
                bool dirty = false;
                for (Index i = t + 1; i < rows; ++i)
                {
                    if (A(i, t) == 0)
                        continue;
                    row_op(i, t, fdiv(A(i, t), A(t, t)));
                    if (A(i, t) != 0)
                        dirty = true;
                }
                for (Index j = t + 1; j < cols; ++j)
                {
                    if (A(t, j) == 0)
                        continue;
                    col_op(j, t, fdiv(A(t, j), A(t, t)));
                    if (A(t, j) != 0)
                        dirty = true;
                }
                if (dirty)
                {
                    move_smallest_cross(t);
                    continue;
                }
                Index bad_row = -1;
                for (Index i = t + 1; i < rows && bad_row < 0; ++i)
                    for (Index j = t + 1; j < cols; ++j)
                        if (!divides(A(t, t), A(i, j)))
                        {
                            bad_row = i;
                            break;
                        }
                if (bad_row < 0)
                    break;
                row_op(t, bad_row, S(-1));
            }
            if (A(t, t) < 0)
            {
                negate_row(A, t);
                if (track_u)
                {
                    negate_row(U, t);
                    negate_column(Uinv, t);
                }
            }
        }
    }

    /** row_target -= q * row_source, mirrored on U and U^{-1}. */
    void row_op(Index target, Index source, const S& q)
    {
        subtract_row(A, target, source, q);
        if (track_u)
        {
            subtract_row(U, target, source, q);
            subtract_column(Uinv, source, target, neg(q));
        }
    }

    void col_op(Index target, Index source, const S& q)
    {
        subtract_column(A, target, source, q);
        if (track_v)
            subtract_column(V, target, source, q);
    }

    void swap_rows(Index a, Index b)
    {
        if (a == b)
            return;
        A.row(a).swap(A.row(b));
        if (track_u)
        {
            U.row(a).swap(U.row(b));
            Uinv.col(a).swap(Uinv.col(b));
        }
    }

    void swap_cols(Index a, Index b)
    {
        if (a == b)
            return;
        A.col(a).swap(A.col(b));
        if (track_v)
            V.col(a).swap(V.col(b));
    }

    /** Moves the smallest nonzero entry of the trailing block to (t, t). */
    bool move_smallest(Index t, Index r0, Index c0)
    {
        Index bi = -1, bj = -1;
        S best = 0;
        for (Index j = c0; j < A.cols(); ++j)
            for (Index i = r0; i < A.rows(); ++i)
                if (A(i, j) != 0 && (bi < 0 || magnitude(A(i, j)) < best))
                {
                    bi = i;
                    bj = j;
                    best = magnitude(A(i, j));
                    if (best == 1)
                        break;
                }
        if (bi < 0)
            return false;
        swap_rows(t, bi);
        swap_cols(t, bj);
        return true;
    }

    /** Picks the smallest nonzero entry among row t and column t. */
    void move_smallest_cross(Index t)
    {
        Index bi = t, bj = t;
        S best = magnitude(A(t, t));
        for (Index i = t + 1; i < A.rows(); ++i)
            if (A(i, t) != 0 && magnitude(A(i, t)) < best)
            {
                bi = i;
                bj = t;
                best = magnitude(A(i, t));
            }
        for (Index j = t + 1; j < A.cols(); ++j)
            if (A(t, j) != 0 && magnitude(A(t, j)) < best)
            {
                bi = t;
                bj = j;
                best = magnitude(A(t, j));
            }
        swap_rows(t, bi);
        swap_cols(t, bj);
    }
};

/**
 * Runs an elimination on int64 first and falls back to Integer on overflow.
 * `body` is a generic lambda taking the matrix in either scalar type.
 */
template <typename Body>
auto with_fast_path(const IntMatrix& a, Body&& body)
{
    DenseMatrix<std::int64_t> small;
    if (narrow(a, small))
    {
        try
        {
            return body(small);
        }
        catch (const OverflowError&)
        {
        }
    }
    return body(a);
}

}  // namespace detail
}  // namespace cekit

#endif
