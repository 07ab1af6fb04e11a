#include "cekit/linalg.hpp"

#include "cekit/smith.hpp"

namespace cekit {

namespace {

struct RawSmith
{
    IntMatrix A, U, Uinv, V;
};

RawSmith raw_smith(const IntMatrix& a, bool want_u, bool want_v)
{
    return detail::with_fast_path(a, [&](const auto& m) {
        detail::SmithElimination elim(m, want_u, want_v);
        RawSmith out;
        out.A = detail::widen(elim.A);
        if (want_u)
        {
            out.U = detail::widen(elim.U);
            out.Uinv = detail::widen(elim.Uinv);
        }
        if (want_v)
            out.V = detail::widen(elim.V);
        return out;
    });
}

std::vector<Integer> diagonal_of(const IntMatrix& s)
{
    std::vector<Integer> d;
    const Index n = std::min(s.rows(), s.cols());
    for (Index i = 0; i < n; ++i)
        d.push_back(s(i, i));
    return d;
}

Integer inverse_mod(const Integer& u, const Integer& m)
{
    ExtendedGcd e = extended_gcd(floor_mod(u, m), m);
    if (e.g != 1)
        throw std::logic_error("inverse_mod: not a unit");
    return floor_mod(e.s, m);
}

}  // namespace

SmithForm snf(const IntMatrix& a, const Ring& ring)
{
    RawSmith raw = raw_smith(ring.is_integers() ? a : ring.reduce(a), true, true);
    SmithForm out;
    out.U = raw.U;
    out.V = raw.V;
    out.S = raw.A;
    out.diagonal = diagonal_of(raw.A);
    if (ring.is_integers())
        return out;

    const Integer& m = ring.modulus();
    for (std::size_t i = 0; i < out.diagonal.size(); ++i)
    {
        Integer d = out.diagonal[i];
        Integer g = gcd(d, m);
        if (g == m)
        {
            out.diagonal[i] = 0;
            continue;
        }
        Integer step = m / g;
        Integer u = d / g;
        while (gcd(u, m) != 1)
            u += step;
        Integer uinv = inverse_mod(u, m);
        for (Index j = 0; j < out.U.cols(); ++j)
            out.U(static_cast<Index>(i), j) *= uinv;
        out.diagonal[i] = g;
    }
    out.U = ring.reduce(out.U);
    out.V = ring.reduce(out.V);
    out.S = zero_matrix(a.rows(), a.cols());
    for (std::size_t i = 0; i < out.diagonal.size(); ++i)
        out.S(static_cast<Index>(i), static_cast<Index>(i)) = out.diagonal[i];
    return out;
}

std::vector<Integer> smith_diagonal(const IntMatrix& a)
{
    return diagonal_of(raw_smith(a, false, false).A);
}

SmithWithInverse snf_with_inverse(const IntMatrix& a)
{
    RawSmith raw = raw_smith(a, true, false);
    return {raw.U, raw.Uinv, diagonal_of(raw.A)};
}

IntegerSolver::IntegerSolver(const IntMatrix& a)
    : rows_(a.rows()), cols_(a.cols())
{
    detail::with_fast_path(a, [&](const auto& m) {
        detail::ColumnEchelon ech(m, true);
        H_ = detail::widen(ech.H);
        V_ = detail::widen(ech.V);
        pivots_ = ech.pivot_rows;
        return 0;
    });
}

std::optional<IntVector> IntegerSolver::solve(const IntVector& b) const
{
    if (b.size() != rows_)
        throw PreconditionError("solve: right-hand side has " + std::to_string(b.size()) +
                                " entries, matrix has " + std::to_string(rows_) + " rows");
    IntVector res = b;
    const Index k = rank();
    IntVector y(k);
    Index next = 0;
    for (Index i = 0; i < rows_; ++i)
    {
        if (next < k && pivots_[next] == i)
        {
            const Integer& p = H_(i, next);
            if (res(i) % p != 0)
                return std::nullopt;
            y(next) = res(i) / p;
            if (y(next) != 0)
                for (Index r = i; r < rows_; ++r)
                    if (H_(r, next) != 0)
                        res(r) -= y(next) * H_(r, next);
            ++next;
        }
        else if (res(i) != 0)
            return std::nullopt;
    }
    IntVector x(cols_);
    x.setConstant(Integer(0));
    for (Index j = 0; j < k; ++j)
    {
        if (y(j) == 0)
            continue;
        for (Index r = 0; r < cols_; ++r)
            if (V_(r, j) != 0)
                x(r) += V_(r, j) * y(j);
    }
    return x;
}

std::optional<IntMatrix> IntegerSolver::solve(const IntMatrix& b) const
{
    IntMatrix x(cols_, b.cols());
    for (Index j = 0; j < b.cols(); ++j)
    {
        auto col = solve(IntVector(b.col(j)));
        if (!col)
            return std::nullopt;
        x.col(j) = *col;
    }
    return x;
}

IntMatrix IntegerSolver::kernel() const
{
    return V_.rightCols(cols_ - rank());
}

std::optional<IntVector> solve(const IntMatrix& a, const IntVector& b, const Ring& ring)
{
    if (a.rows() != b.size())
        throw PreconditionError("solve: dimension mismatch (" + std::to_string(a.rows()) +
                                " rows vs " + std::to_string(b.size()) + " entries)");
    if (ring.is_integers())
        return IntegerSolver(a).solve(b);
    IntMatrix aug = hstack({ring.reduce(a), modulus_columns(ring, a.rows())}, a.rows());
    auto x = IntegerSolver(aug).solve(ring.reduce(b));
    if (!x)
        return std::nullopt;
    return ring.reduce(IntVector(x->head(a.cols())));
}

std::optional<IntMatrix> solve(const IntMatrix& a, const IntMatrix& b, const Ring& ring)
{
    if (a.rows() != b.rows())
        throw PreconditionError("solve: dimension mismatch (" + std::to_string(a.rows()) +
                                " rows vs " + std::to_string(b.rows()) + ")");
    IntMatrix lhs = ring.is_integers() ? a : hstack({ring.reduce(a), modulus_columns(ring, a.rows())}, a.rows());
    IntegerSolver solver(lhs);
    auto x = solver.solve(ring.reduce(b));
    if (!x)
        return std::nullopt;
    return ring.reduce(IntMatrix(x->topRows(a.cols())));
}

IntMatrix lattice_basis(const IntMatrix& generators)
{
    return detail::with_fast_path(generators, [&](const auto& m) {
        detail::ColumnEchelon ech(m, false);
        IntMatrix h = detail::widen(ech.H);
        return IntMatrix(h.leftCols(ech.rank()));
    });
}

IntMatrix kernel_basis(const IntMatrix& a, const Ring& ring)
{
    const Index n = a.cols();
    if (ring.is_integers())
    {
        IntMatrix k = lattice_basis(IntegerSolver(a).kernel());
        normalize_signs(k);
        return k;
    }
    IntMatrix aug = hstack({ring.reduce(a), modulus_columns(ring, a.rows())}, a.rows());
    IntMatrix k = IntegerSolver(aug).kernel();
    IntMatrix gens = hstack({IntMatrix(k.topRows(n)), modulus_columns(ring, n)}, n);
    IntMatrix basis = ring.reduce(lattice_basis(gens));
    std::vector<Index> keep;
    for (Index j = 0; j < basis.cols(); ++j)
        if (!is_zero(IntMatrix(basis.col(j))))
            keep.push_back(j);
    IntMatrix out(n, static_cast<Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
        out.col(static_cast<Index>(j)) = basis.col(keep[j]);
    return out;
}

Index rank(const IntMatrix& a)
{
    return detail::with_fast_path(a, [&](const auto& m) {
        return detail::ColumnEchelon(m, false).rank();
    });
}

void normalize_signs(IntMatrix& columns)
{
    for (Index j = 0; j < columns.cols(); ++j)
        for (Index i = 0; i < columns.rows(); ++i)
        {
            if (columns(i, j) == 0)
                continue;
            if (columns(i, j) < 0)
                for (Index r = 0; r < columns.rows(); ++r)
                    columns(r, j) = -columns(r, j);
            break;
        }
}

bool is_unimodular(const IntMatrix& a, const Ring& ring)
{
    if (a.rows() != a.cols())
        return false;
    auto d = smith_diagonal(ring.is_integers() ? a : ring.reduce(a));
    for (const auto& x : d)
    {
        Integer g = ring.is_integers() ? x : gcd(x, ring.modulus());
        if (g != 1)
            return false;
    }
    return true;
}

}  // namespace cekit
