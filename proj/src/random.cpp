#include "cekit/random.hpp"

namespace cekit {

int uniform(Rng& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

IntMatrix random_matrix(Rng& rng, Index rows, Index cols, int bound)
{
    IntMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            m(i, j) = uniform(rng, -bound, bound);
    return m;
}

ChainComplex random_free_complex(Rng& rng, const Ring& ring, int lowest, int length, int max_rank, int bound)
{
    std::vector<Index> ranks;
    for (int k = 0; k < length; ++k)
        ranks.push_back(uniform(rng, 0, max_rank));
    std::vector<IntMatrix> diffs;
    for (int k = 1; k < length; ++k)
    {
        IntMatrix basis = k == 1 ? identity_matrix(ranks[0]) : kernel_basis(diffs.back(), ring);
        diffs.push_back(ring.reduce(IntMatrix(basis * random_matrix(rng, basis.cols(), ranks[k], bound))));
    }
    return ChainComplex::free(ring, lowest, ranks, diffs);
}

IntVector random_hom_cycle(Rng& rng, const HomComplex& h, int n, int bound)
{
    const ChainComplex& c = h.complex;
    const IntMatrix rel = c.module(n - 1).relations;
    IntMatrix d = c.differential(n);
    IntMatrix k = kernel_basis(hstack({d, rel}, d.rows()), c.ring());
    IntMatrix cycles = k.topRows(d.cols());
    IntVector v = cycles * random_matrix(rng, cycles.cols(), 1, bound).col(0);
    return c.ring().reduce(v);
}

ChainMap random_chain_map(Rng& rng, const ChainComplex& s, const ChainComplex& t, int bound)
{
    HomComplex h = hom_complex(s, t, DegreeRange{-1, 0});
    return h.unpack_map(random_hom_cycle(rng, h, 0, bound));
}

std::vector<IntMatrix> random_degree_one(Rng& rng, const ChainComplex& s, const ChainComplex& t, int bound)
{
    std::vector<IntMatrix> out;
    for (int d = s.lowest(); d <= s.top(); ++d)
        out.push_back(random_matrix(rng, t.rank(d + 1), s.rank(d), bound));
    return out;
}

ChainMap null_homotopic(const ChainComplex& s, const ChainComplex& t, const std::vector<IntMatrix>& k)
{
    auto at = [&](int d) {
        if (d < s.lowest() || d > s.top())
            return zero_matrix(t.rank(d + 1), s.rank(d));
        return k[static_cast<std::size_t>(d - s.lowest())];
    };
    std::vector<IntMatrix> comps;
    for (int d = s.lowest(); d <= s.top(); ++d)
        comps.push_back(t.differential(d + 1) * at(d) + at(d - 1) * s.differential(d));
    return ChainMap(s, t, comps);
}

ChainMap random_split_mono(Rng& rng, const ChainComplex& q, int max_rank)
{
    const Ring& ring = q.ring();
    const int lo = q.empty() ? 0 : q.lowest();
    const int len = q.empty() ? 3 : q.top() - q.lowest() + 1;
    ChainComplex extra = random_free_complex(rng, ring, lo, len, max_rank);
    // d = [[dQ, t], [0, dQ']] with t = dQ s - s dQ', which squares to zero.
    std::vector<IntMatrix> s;
    for (int d = lo; d < lo + len; ++d)
        s.push_back(random_matrix(rng, q.rank(d), extra.rank(d), 1));
    auto sd = [&](int d) {
        if (d < lo || d >= lo + len)
            return zero_matrix(q.rank(d), extra.rank(d));
        return s[static_cast<std::size_t>(d - lo)];
    };
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs;
    std::vector<IntMatrix> incl;
    for (int d = lo; d < lo + len; ++d)
    {
        const Index a = q.rank(d), b = extra.rank(d);
        mods.emplace_back(ring, a + b);
        IntMatrix i = zero_matrix(a + b, a);
        i.topRows(a) = identity_matrix(a);
        incl.push_back(i);
        if (d == lo)
            continue;
        const Index a1 = q.rank(d - 1), b1 = extra.rank(d - 1);
        IntMatrix m = zero_matrix(a1 + b1, a + b);
        m.topLeftCorner(a1, a) = q.differential(d);
        m.topRightCorner(a1, b) = q.differential(d) * sd(d) - sd(d - 1) * extra.differential(d);
        m.bottomRightCorner(b1, b) = extra.differential(d);
        diffs.push_back(m);
    }
    ChainComplex r(ring, lo, mods, diffs);
    if (q.empty())
        return ChainMap::zero(q, r);
    return ChainMap(q, r, incl);
}

ChainComplex random_contractible(Rng& rng, const Ring& ring, int lowest, int length, int max_rank)
{
    return cone(ChainMap::identity(random_free_complex(rng, ring, lowest, length, max_rank)));
}

namespace {

ChainMap summand_map(const ChainComplex& y, const ChainComplex& c, bool project)
{
    ChainComplex sum = direct_sum(y, c);
    std::vector<IntMatrix> comps;
    const ChainComplex& src = project ? sum : y;
    for (int d = src.lowest(); d <= src.top(); ++d)
    {
        IntMatrix m = zero_matrix(y.rank(d), sum.rank(d));
        m.leftCols(y.rank(d)) = identity_matrix(y.rank(d));
        comps.push_back(project ? m : IntMatrix(m.transpose()));
    }
    if (project)
        return ChainMap(sum, y, comps);
    return ChainMap(y, sum, comps);
}

}  // namespace

ChainMap projection_off(const ChainComplex& y, const ChainComplex& c)
{
    return summand_map(y, c, true);
}

ChainMap inclusion_into(const ChainComplex& y, const ChainComplex& c)
{
    return summand_map(y, c, false);
}

ChainMap random_quasi_iso(Rng& rng, const Ring& ring, int max_rank)
{
    ChainComplex y = random_free_complex(rng, ring, 0, 3, max_rank);
    ChainComplex c = random_contractible(rng, ring, 0, 2, max_rank);
    ChainMap w = uniform(rng, 0, 1) ? projection_off(y, c) : inclusion_into(y, c);
    ChainMap perturb = null_homotopic(w.source(), w.target(), random_degree_one(rng, w.source(), w.target(), 1));
    return add(w, perturb);
}

}  // namespace cekit
