#include "cekit/complex.hpp"

#include <algorithm>

namespace cekit {

namespace {

int sign(int n)
{
    return (n % 2 == 0) ? 1 : -1;
}

// Smallest range containing both; empty inputs are ignored.
DegreeRange hull(DegreeRange a, DegreeRange b)
{
    if (a.empty())
        return b;
    if (b.empty())
        return a;
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

std::string at(int d)
{
    return " at degree " + std::to_string(d);
}

}  // namespace

ChainComplex::ChainComplex(const Ring& ring, int lowest, std::vector<PresentedModule> modules,
                           std::vector<IntMatrix> differentials)
    : ring_(ring), lowest_(lowest), modules_(std::move(modules)), zero_(ring, 0)
{
    const std::size_t len = modules_.size();
    if (differentials.size() + 1 != std::max<std::size_t>(len, 1))
        throw PreconditionError("complex: expected " + std::to_string(len ? len - 1 : 0) +
                                " differentials, got " + std::to_string(differentials.size()));
    for (const auto& m : modules_)
        if (m.ring != ring)
            throw PreconditionError("complex: module over a different ring");
    for (std::size_t k = 0; k < differentials.size(); ++k)
    {
        const IntMatrix& d = differentials[k];
        if (d.rows() != modules_[k].generators || d.cols() != modules_[k + 1].generators)
            throw PreconditionError("complex: differential" + at(lowest + static_cast<int>(k) + 1) +
                                    " has shape " + std::to_string(d.rows()) + "x" +
                                    std::to_string(d.cols()));
        diffs_.push_back(ring.reduce(d));
    }
}

ChainComplex ChainComplex::free(const Ring& ring, int lowest, const std::vector<Index>& ranks,
                                const std::vector<IntMatrix>& differentials)
{
    std::vector<PresentedModule> mods;
    for (Index r : ranks)
        mods.emplace_back(ring, r);
    return ChainComplex(ring, lowest, mods, differentials);
}

ChainComplex ChainComplex::concentrated(const PresentedModule& m, int d)
{
    return ChainComplex(m.ring, d, {m}, {});
}

const PresentedModule& ChainComplex::module(int d) const
{
    if (d < lowest_ || d > top())
        return zero_;
    return modules_[static_cast<std::size_t>(d - lowest_)];
}

IntMatrix ChainComplex::differential(int d) const
{
    if (d - 1 >= lowest_ && d <= top())
        return diffs_[static_cast<std::size_t>(d - 1 - lowest_)];
    return zero_matrix(rank(d - 1), rank(d));
}

bool ChainComplex::is_free() const
{
    for (const auto& m : modules_)
        if (!m.is_free())
            return false;
    return true;
}

std::string ChainComplex::check() const
{
    for (int d = lowest_ + 1; d <= top(); ++d)
    {
        const IntMatrix dd = differential(d);
        if (!module(d - 1).is_zero_element(dd * module(d).relations))
            return "differential not well defined" + at(d);
    }
    for (int d = lowest_ + 2; d <= top(); ++d)
    {
        IntMatrix sq = differential(d - 1) * differential(d);
        if (!module(d - 2).is_zero_element(sq))
            return "d o d != 0" + at(d) + ": " + format_matrix(ring_.reduce(sq));
    }
    return "";
}

void ChainComplex::validate() const
{
    std::string err = check();
    if (!err.empty())
        throw PreconditionError(err);
}

ChainComplex ChainComplex::truncated(int lo, int hi) const
{
    lo = std::max(lo, lowest_);
    hi = std::min(hi, top());
    if (lo > hi)
        return ChainComplex(ring_);
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs;
    for (int d = lo; d <= hi; ++d)
    {
        mods.push_back(module(d));
        if (d > lo)
            diffs.push_back(differential(d));
    }
    return ChainComplex(ring_, lo, mods, diffs);
}

bool operator==(const ChainComplex& a, const ChainComplex& b)
{
    if (a.ring_ != b.ring_ || a.modules_.size() != b.modules_.size())
        return false;
    if (a.empty())
        return true;
    if (a.lowest_ != b.lowest_)
        return false;
    for (std::size_t k = 0; k < a.modules_.size(); ++k)
        if (a.modules_[k] != b.modules_[k])
            return false;
    for (std::size_t k = 0; k < a.diffs_.size(); ++k)
        if (a.diffs_[k] != b.diffs_[k])
            return false;
    return true;
}

ChainMap::ChainMap(const ChainComplex& source, const ChainComplex& target, std::vector<IntMatrix> components)
    : source_(source), target_(target)
{
    if (source.ring() != target.ring())
        throw PreconditionError("chain map between complexes over different rings");
    const std::size_t len = source.empty() ? 0 : static_cast<std::size_t>(source.top() - source.lowest() + 1);
    if (components.size() != len)
        throw PreconditionError("chain map: expected " + std::to_string(len) + " components, got " +
                                std::to_string(components.size()));
    for (std::size_t k = 0; k < len; ++k)
    {
        int d = source.lowest() + static_cast<int>(k);
        const IntMatrix& c = components[k];
        if (c.rows() != target.rank(d) || c.cols() != source.rank(d))
            throw PreconditionError("chain map: component" + at(d) + " has shape " +
                                    std::to_string(c.rows()) + "x" + std::to_string(c.cols()));
        components_.push_back(target.ring().reduce(c));
    }
}

ChainMap ChainMap::zero(const ChainComplex& source, const ChainComplex& target)
{
    std::vector<IntMatrix> comps;
    for (int d = source.lowest(); d <= source.top(); ++d)
        comps.push_back(zero_matrix(target.rank(d), source.rank(d)));
    return ChainMap(source, target, comps);
}

ChainMap ChainMap::identity(const ChainComplex& c)
{
    std::vector<IntMatrix> comps;
    for (int d = c.lowest(); d <= c.top(); ++d)
        comps.push_back(identity_matrix(c.rank(d)));
    return ChainMap(c, c, comps);
}

IntMatrix ChainMap::component(int d) const
{
    if (source_.empty() || d < source_.lowest() || d > source_.top())
        return zero_matrix(target_.rank(d), source_.rank(d));
    return components_[static_cast<std::size_t>(d - source_.lowest())];
}

void ChainMap::set_component(int d, const IntMatrix& m)
{
    if (source_.empty() || d < source_.lowest() || d > source_.top())
        throw std::logic_error("set_component outside source range");
    components_[static_cast<std::size_t>(d - source_.lowest())] = target_.ring().reduce(m);
}

std::string ChainMap::check() const
{
    for (int d = source_.lowest(); d <= source_.top(); ++d)
    {
        if (!target_.module(d).is_zero_element(component(d) * source_.module(d).relations))
            return "chain map not well defined" + at(d);
        IntMatrix diff = target_.differential(d) * component(d) - component(d - 1) * source_.differential(d);
        if (!target_.module(d - 1).is_zero_element(diff))
            return "chain map does not commute with differentials" + at(d);
    }
    return "";
}

void ChainMap::validate() const
{
    std::string err = check();
    if (!err.empty())
        throw PreconditionError(err);
}

ChainMap compose(const ChainMap& g, const ChainMap& f)
{
    const ChainComplex& mid = f.target();
    for (int d = std::min(mid.lowest(), g.source().lowest()); d <= std::max(mid.top(), g.source().top()); ++d)
        if (mid.rank(d) != g.source().rank(d))
            throw PreconditionError("compose: middle complexes differ" + at(d));
    std::vector<IntMatrix> comps;
    for (int d = f.source().lowest(); d <= f.source().top(); ++d)
        comps.push_back(g.component(d) * f.component(d));
    return ChainMap(f.source(), g.target(), comps);
}

ChainMap add(const ChainMap& f, const ChainMap& g)
{
    std::vector<IntMatrix> comps;
    for (int d = f.source().lowest(); d <= f.source().top(); ++d)
        comps.push_back(f.component(d) + g.component(d));
    return ChainMap(f.source(), f.target(), comps);
}

ChainMap subtract(const ChainMap& f, const ChainMap& g)
{
    return add(f, scale(g, -1));
}

ChainMap scale(const ChainMap& f, const Integer& c)
{
    std::vector<IntMatrix> comps;
    for (int d = f.source().lowest(); d <= f.source().top(); ++d)
        comps.push_back(f.component(d) * c);
    return ChainMap(f.source(), f.target(), comps);
}

bool equal_maps(const ChainMap& f, const ChainMap& g)
{
    DegreeRange r = hull(f.source().range(), g.source().range());
    for (int d = r.lo; d <= r.hi; ++d)
        if (!f.target().module(d).is_zero_element(f.component(d) - g.component(d)))
            return false;
    return true;
}

Homotopy::Homotopy(const ChainMap& f, const ChainMap& g, std::vector<IntMatrix> components)
    : f_(f), g_(g)
{
    const ChainComplex& s = f.source();
    const ChainComplex& t = f.target();
    const std::size_t len = s.empty() ? 0 : static_cast<std::size_t>(s.top() - s.lowest() + 1);
    if (components.size() != len)
        throw PreconditionError("homotopy: expected " + std::to_string(len) + " components, got " +
                                std::to_string(components.size()));
    for (std::size_t k = 0; k < len; ++k)
    {
        int d = s.lowest() + static_cast<int>(k);
        const IntMatrix& c = components[k];
        if (c.rows() != t.rank(d + 1) || c.cols() != s.rank(d))
            throw PreconditionError("homotopy: component" + at(d) + " has shape " +
                                    std::to_string(c.rows()) + "x" + std::to_string(c.cols()));
        components_.push_back(t.ring().reduce(c));
    }
}

Homotopy Homotopy::zero(const ChainMap& f)
{
    std::vector<IntMatrix> comps;
    for (int d = f.source().lowest(); d <= f.source().top(); ++d)
        comps.push_back(zero_matrix(f.target().rank(d + 1), f.source().rank(d)));
    return Homotopy(f, f, comps);
}

IntMatrix Homotopy::component(int d) const
{
    const ChainComplex& s = source();
    if (s.empty() || d < s.lowest() || d > s.top())
        return zero_matrix(target().rank(d + 1), s.rank(d));
    return components_[static_cast<std::size_t>(d - s.lowest())];
}

std::string Homotopy::check() const
{
    const ChainComplex& s = source();
    const ChainComplex& t = target();
    for (int d = s.lowest(); d <= s.top(); ++d)
    {
        if (!t.module(d + 1).is_zero_element(component(d) * s.module(d).relations))
            return "homotopy not well defined" + at(d);
        IntMatrix lhs = t.differential(d + 1) * component(d) + component(d - 1) * s.differential(d);
        IntMatrix rhs = g_.component(d) - f_.component(d);
        if (!t.module(d).is_zero_element(lhs - rhs))
            return "dh + hd != g - f" + at(d);
    }
    return "";
}

void Homotopy::validate() const
{
    std::string err = check();
    if (!err.empty())
        throw PreconditionError(err);
}

Homotopy whisker(const ChainMap& post, const Homotopy& h, const ChainMap& pre)
{
    ChainMap f = compose(post, compose(h.from(), pre));
    ChainMap g = compose(post, compose(h.to(), pre));
    std::vector<IntMatrix> comps;
    for (int d = pre.source().lowest(); d <= pre.source().top(); ++d)
        comps.push_back(post.component(d + 1) * h.component(d) * pre.component(d));
    return Homotopy(f, g, comps);
}

Homotopy concatenate(const Homotopy& h, const Homotopy& k)
{
    std::vector<IntMatrix> comps;
    for (int d = h.source().lowest(); d <= h.source().top(); ++d)
        comps.push_back(h.component(d) + k.component(d));
    return Homotopy(h.from(), k.to(), comps);
}

Homotopy reverse(const Homotopy& h)
{
    std::vector<IntMatrix> comps;
    for (int d = h.source().lowest(); d <= h.source().top(); ++d)
        comps.push_back(-h.component(d));
    return Homotopy(h.to(), h.from(), comps);
}

ChainComplex shift(const ChainComplex& c, int n)
{
    if (c.empty())
        return c;
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs;
    for (int d = c.lowest(); d <= c.top(); ++d)
    {
        mods.push_back(c.module(d));
        if (d > c.lowest())
            diffs.push_back(c.differential(d) * Integer(sign(n)));
    }
    return ChainComplex(c.ring(), c.lowest() + n, mods, diffs);
}

ChainComplex cone(const ChainMap& f)
{
    const ChainComplex& s = f.source();
    const ChainComplex& t = f.target();
    DegreeRange sr = s.range();
    if (!sr.empty())
        sr = {sr.lo + 1, sr.hi + 1};
    DegreeRange r = hull(sr, t.range());
    if (r.empty())
        return ChainComplex(s.ring());
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs;
    for (int d = r.lo; d <= r.hi; ++d)
    {
        mods.push_back(direct_sum({s.module(d - 1), t.module(d)}));
        if (d == r.lo)
            continue;
        const Index a = s.rank(d - 2), b = t.rank(d - 1), c = s.rank(d - 1), e = t.rank(d);
        IntMatrix m = zero_matrix(a + b, c + e);
        m.block(0, 0, a, c) = -s.differential(d - 1);
        m.block(a, 0, b, c) = f.component(d - 1);
        m.block(a, c, b, e) = t.differential(d);
        diffs.push_back(m);
    }
    return ChainComplex(s.ring(), r.lo, mods, diffs);
}

ChainMap cone_map(const ChainMap& f, const ChainMap& f2, const ChainMap& alpha, const ChainMap& beta)
{
    ChainComplex from = cone(f), to = cone(f2);
    std::vector<IntMatrix> comps;
    for (int d = from.lowest(); d <= from.top(); ++d)
    {
        IntMatrix a = alpha.component(d - 1), b = beta.component(d);
        IntMatrix m = zero_matrix(to.rank(d), from.rank(d));
        m.topLeftCorner(a.rows(), a.cols()) = a;
        m.bottomRightCorner(b.rows(), b.cols()) = b;
        comps.push_back(m);
    }
    return ChainMap(from, to, comps);
}

ChainComplex path(const ChainMap& f)
{
    const ChainComplex& s = f.source();
    const ChainComplex& t = f.target();
    DegreeRange tr = t.range();
    if (!tr.empty())
        tr = {tr.lo - 1, tr.hi - 1};
    DegreeRange r = hull(s.range(), tr);
    if (r.empty())
        return ChainComplex(s.ring());
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs;
    for (int d = r.lo; d <= r.hi; ++d)
    {
        mods.push_back(direct_sum({s.module(d), t.module(d + 1)}));
        if (d == r.lo)
            continue;
        const Index a = s.rank(d - 1), b = t.rank(d), c = s.rank(d), e = t.rank(d + 1);
        IntMatrix m = zero_matrix(a + b, c + e);
        m.block(0, 0, a, c) = s.differential(d);
        m.block(a, 0, b, c) = f.component(d);
        m.block(a, c, b, e) = -t.differential(d + 1);
        diffs.push_back(m);
    }
    return ChainComplex(s.ring(), r.lo, mods, diffs);
}

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b)
{
    DegreeRange r = hull(a.range(), b.range());
    if (r.empty())
        return ChainComplex(a.ring());
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs;
    for (int d = r.lo; d <= r.hi; ++d)
    {
        mods.push_back(direct_sum({a.module(d), b.module(d)}));
        if (d > r.lo)
            diffs.push_back(block_diagonal({a.differential(d), b.differential(d)}));
    }
    return ChainComplex(a.ring(), r.lo, mods, diffs);
}

Cylinder cylinder(const ChainComplex& x)
{
    Cylinder out;
    if (x.empty())
    {
        out.cyl = x;
        out.i0 = out.i1 = out.p = ChainMap::identity(x);
        out.contraction = Homotopy::zero(out.i0);
        return out;
    }
    const int lo = x.lowest(), hi = x.top() + 1;
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs;
    for (int d = lo; d <= hi; ++d)
    {
        mods.push_back(direct_sum({x.module(d), x.module(d - 1), x.module(d)}));
        if (d == lo)
            continue;
        const Index r0 = x.rank(d - 1), r1 = x.rank(d - 2), c0 = x.rank(d), c1 = x.rank(d - 1);
        IntMatrix m = zero_matrix(2 * r0 + r1, 2 * c0 + c1);
        m.block(0, 0, r0, c0) = x.differential(d);
        m.block(0, c0, r0, c1) = -identity_matrix(r0);
        m.block(r0, c0, r1, c1) = -x.differential(d - 1);
        m.block(r0 + r1, c0, r0, c1) = identity_matrix(r0);
        m.block(r0 + r1, c0 + c1, r0, c0) = x.differential(d);
        diffs.push_back(m);
    }
    out.cyl = ChainComplex(x.ring(), lo, mods, diffs);

    std::vector<IntMatrix> i0, i1, p, h;
    for (int d = x.lowest(); d <= x.top(); ++d)
    {
        const Index n = x.rank(d), m = x.rank(d - 1);
        IntMatrix a = zero_matrix(2 * n + m, n), b = zero_matrix(2 * n + m, n);
        a.topRows(n) = identity_matrix(n);
        b.bottomRows(n) = identity_matrix(n);
        i0.push_back(a);
        i1.push_back(b);
    }
    for (int d = lo; d <= hi; ++d)
    {
        const Index n = x.rank(d), m = x.rank(d - 1), up = x.rank(d + 1);
        IntMatrix q = zero_matrix(n, 2 * n + m);
        q.leftCols(n) = identity_matrix(n);
        q.rightCols(n) = identity_matrix(n);
        p.push_back(q);
        // (x, y, z) -> (0, z, 0) in Cyl_{d+1} = X_{d+1} + X_d + X_{d+1}
        IntMatrix k = zero_matrix(2 * up + n, 2 * n + m);
        k.block(up, n + m, n, n) = identity_matrix(n);
        h.push_back(k);
    }
    out.i0 = ChainMap(x, out.cyl, i0);
    out.i1 = ChainMap(x, out.cyl, i1);
    out.p = ChainMap(out.cyl, x, p);
    out.contraction = Homotopy(compose(out.i0, out.p), ChainMap::identity(out.cyl), h);
    return out;
}

Index HomComplex::offset(int n, int i) const
{
    Index off = 0;
    for (int k = source.lowest(); k < i; ++k)
        off += source.rank(k) * target.rank(k + n);
    return off;
}

IntVector HomComplex::pack(int n, const std::vector<IntMatrix>& blocks) const
{
    IntVector v(complex.rank(n));
    Index at = 0;
    for (int i = source.lowest(); i <= source.top(); ++i)
    {
        const IntMatrix& b = blocks[static_cast<std::size_t>(i - source.lowest())];
        IntVector part = vec(b);
        v.segment(at, part.size()) = part;
        at += part.size();
    }
    return v;
}

std::vector<IntMatrix> HomComplex::unpack(int n, const IntVector& v) const
{
    std::vector<IntMatrix> out;
    Index at = 0;
    for (int i = source.lowest(); i <= source.top(); ++i)
    {
        const Index r = target.rank(i + n), c = source.rank(i);
        out.push_back(unvec(v.segment(at, r * c), r, c));
        at += r * c;
    }
    return out;
}

IntVector HomComplex::pack_map(const ChainMap& f) const
{
    std::vector<IntMatrix> blocks;
    for (int i = source.lowest(); i <= source.top(); ++i)
        blocks.push_back(f.component(i));
    return pack(0, blocks);
}

IntVector HomComplex::pack_homotopy(const Homotopy& h) const
{
    std::vector<IntMatrix> blocks;
    for (int i = source.lowest(); i <= source.top(); ++i)
        blocks.push_back(h.component(i));
    return pack(1, blocks);
}

ChainMap HomComplex::unpack_map(const IntVector& v) const
{
    return ChainMap(source, target, unpack(0, v));
}

std::vector<IntMatrix> HomComplex::unpack_homotopy(const IntVector& v) const
{
    return unpack(1, v);
}

HomComplex hom_complex(const ChainComplex& a, const ChainComplex& b, std::optional<DegreeRange> window)
{
    if (!a.is_free())
        throw PreconditionError("hom_complex: source must be free in every degree");
    if (a.ring() != b.ring())
        throw PreconditionError("hom_complex: complexes over different rings");
    HomComplex out;
    out.source = a;
    out.target = b;
    DegreeRange r{0, -1};
    if (!a.empty() && !b.empty())
        r = {b.lowest() - a.top(), b.top() - a.lowest()};
    if (window)
        r = *window;
    if (r.empty())
    {
        out.complex = ChainComplex(a.ring());
        return out;
    }
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs;
    for (int n = r.lo; n <= r.hi; ++n)
    {
        Index gens = 0;
        std::vector<IntMatrix> rels;
        for (int i = a.lowest(); i <= a.top(); ++i)
        {
            const PresentedModule& bm = b.module(i + n);
            gens += a.rank(i) * bm.generators;
            rels.push_back(kron(identity_matrix(a.rank(i)), bm.relations));
        }
        mods.emplace_back(a.ring(), gens, block_diagonal(rels));
        if (n == r.lo)
            continue;
        // D: Hom_n -> Hom_{n-1}
        IntMatrix dm = zero_matrix(mods[mods.size() - 2].generators, gens);
        for (int i = a.lowest(); i <= a.top(); ++i)
        {
            const Index ai = a.rank(i);
            const Index row = out.offset(n - 1, i);
            if (ai * b.rank(i + n - 1) > 0 && ai * b.rank(i + n) > 0)
                dm.block(row, out.offset(n, i), ai * b.rank(i + n - 1), ai * b.rank(i + n)) =
                    kron(identity_matrix(ai), b.differential(i + n));
            // -(-1)^n f_{i-1} d^A_i
            if (i - 1 >= a.lowest())
            {
                const Index ap = a.rank(i - 1);
                const Index bb = b.rank(i - 1 + n);
                if (ai * bb > 0 && ap * bb > 0)
                    dm.block(row, out.offset(n, i - 1), ai * bb, ap * bb) =
                        kron(IntMatrix(a.differential(i).transpose()), identity_matrix(bb)) * Integer(-sign(n));
            }
        }
        diffs.push_back(dm);
    }
    out.complex = ChainComplex(a.ring(), r.lo, mods, diffs);
    return out;
}

ChainMap postcompose(const ChainMap& w, const HomComplex& from, const HomComplex& to)
{
    const ChainComplex& a = from.source;
    std::vector<IntMatrix> comps;
    for (int n = from.complex.lowest(); n <= from.complex.top(); ++n)
    {
        std::vector<IntMatrix> blocks;
        for (int i = a.lowest(); i <= a.top(); ++i)
            blocks.push_back(kron(identity_matrix(a.rank(i)), w.component(i + n)));
        comps.push_back(block_diagonal(blocks));
    }
    return ChainMap(from.complex, to.complex, comps);
}

ChainMap precompose(const ChainMap& j, const HomComplex& from, const HomComplex& to)
{
    const ChainComplex& q = to.source;
    const ChainComplex& r = from.source;
    const ChainComplex& y = from.target;
    std::vector<IntMatrix> comps;
    for (int n = from.complex.lowest(); n <= from.complex.top(); ++n)
    {
        IntMatrix m = zero_matrix(to.complex.rank(n), from.complex.rank(n));
        for (int i = q.lowest(); i <= q.top(); ++i)
        {
            if (i < r.lowest() || i > r.top())
                continue;
            const Index yr = y.rank(i + n);
            const Index rows = q.rank(i) * yr, cols = r.rank(i) * yr;
            if (rows == 0 || cols == 0)
                continue;
            m.block(to.offset(n, i), from.offset(n, i), rows, cols) =
                kron(IntMatrix(j.component(i).transpose()), identity_matrix(yr));
        }
        comps.push_back(m);
    }
    return ChainMap(from.complex, to.complex, comps);
}

PresentedModule DoubleComplex::cell(int p, int q) const
{
    auto it = cells.find({p, q});
    if (it == cells.end())
        return PresentedModule(ring, 0);
    return it->second;
}

IntMatrix DoubleComplex::h(int p, int q) const
{
    auto it = horizontal.find({p, q});
    if (it == horizontal.end())
        return zero_matrix(cell(p - 1, q).generators, cell(p, q).generators);
    return it->second;
}

IntMatrix DoubleComplex::v(int p, int q) const
{
    auto it = vertical.find({p, q});
    if (it == vertical.end())
        return zero_matrix(cell(p, q - 1).generators, cell(p, q).generators);
    return it->second;
}

std::string DoubleComplex::check() const
{
    for (const auto& [key, mod] : cells)
    {
        auto [p, q] = key;
        std::string where = " at (" + std::to_string(p) + ", " + std::to_string(q) + ")";
        if (!cell(p - 2, q).is_zero_element(h(p - 1, q) * h(p, q)))
            return "horizontal d o d != 0" + where;
        if (!cell(p, q - 2).is_zero_element(v(p, q - 1) * v(p, q)))
            return "vertical d o d != 0" + where;
        if (!cell(p - 1, q - 1).is_zero_element(h(p, q - 1) * v(p, q) - v(p - 1, q) * h(p, q)))
            return "square does not commute" + where;
    }
    return "";
}

TotalComplex total(const DoubleComplex& dc)
{
    std::string err = dc.check();
    if (!err.empty())
        throw PreconditionError("total: " + err);
    TotalComplex out;
    if (dc.cells.empty())
    {
        out.complex = ChainComplex(dc.ring);
        return out;
    }
    int lo = 0, hi = 0;
    bool first = true;
    for (const auto& [key, mod] : dc.cells)
    {
        int n = key.first + key.second;
        if (first || n < lo)
            lo = n;
        if (first || n > hi)
            hi = n;
        first = false;
    }
    for (const auto& [key, mod] : dc.cells)
        out.layout[key.first + key.second].push_back({key, 0});
    for (auto& [n, items] : out.layout)
    {
        std::sort(items.begin(), items.end());
        Index off = 0;
        for (auto& item : items)
        {
            item.second = off;
            off += dc.cell(item.first.first, item.first.second).generators;
        }
    }
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs;
    auto summands = [&](int n) {
        auto it = out.layout.find(n);
        return it == out.layout.end() ? std::vector<std::pair<std::pair<int, int>, Index>>() : it->second;
    };
    for (int n = lo; n <= hi; ++n)
    {
        std::vector<PresentedModule> parts;
        for (const auto& item : summands(n))
            parts.push_back(dc.cell(item.first.first, item.first.second));
        mods.push_back(direct_sum(parts));
        if (n == lo)
            continue;
        const auto lower = summands(n - 1);
        IntMatrix m = zero_matrix(mods[mods.size() - 2].generators, mods.back().generators);
        auto row_of = [&](int p, int q) -> Index {
            for (const auto& item : lower)
                if (item.first == std::make_pair(p, q))
                    return item.second;
            return -1;
        };
        for (const auto& item : summands(n))
        {
            auto [p, q] = item.first;
            const Index col = item.second;
            const Index width = dc.cell(p, q).generators;
            Index r = row_of(p - 1, q);
            if (r >= 0)
            {
                IntMatrix hm = dc.h(p, q);
                m.block(r, col, hm.rows(), width) += hm;
            }
            r = row_of(p, q - 1);
            if (r >= 0)
            {
                IntMatrix vm = dc.v(p, q) * Integer(sign(p));
                m.block(r, col, vm.rows(), width) += vm;
            }
        }
        diffs.push_back(m);
    }
    out.complex = ChainComplex(dc.ring, lo, mods, diffs);
    return out;
}

Subquotient homology_data(const ChainComplex& c, int d)
{
    return Subquotient(c.ring(), c.differential(d), c.module(d - 1).relations, c.differential(d + 1),
                       c.module(d).relations);
}

PresentedModule homology(const ChainComplex& c, int d)
{
    return homology_data(c, d).module();
}

ModuleMap induced_map(const ChainMap& f, int d)
{
    Subquotient hs = homology_data(f.source(), d);
    Subquotient ht = homology_data(f.target(), d);
    IntMatrix images = f.component(d) * hs.representatives();
    return ModuleMap(hs.module(), ht.module(), ht.coordinates(images));
}

bool is_acyclic(const ChainComplex& c, std::optional<DegreeRange> window)
{
    DegreeRange r = window ? *window : c.range();
    for (int d = r.lo; d <= r.hi; ++d)
    {
        if (c.rank(d) == 0)
            continue;
        if (!homology_data(c, d).invariants().is_zero())
            return false;
    }
    return true;
}

bool is_quasi_iso(const ChainMap& f, std::optional<DegreeRange> window)
{
    DegreeRange need = hull(f.source().range(), f.target().range());
    if (!need.empty())
        need.hi += 1;
    if (window)
    {
        if (!need.empty() && (window->lo > need.lo || window->hi < need.hi))
            throw PreconditionError("is_quasi_iso: window [" + std::to_string(window->lo) + ", " +
                                    std::to_string(window->hi) + "] does not cover degrees [" +
                                    std::to_string(need.lo) + ", " + std::to_string(need.hi) + "]");
        need = *window;
    }
    return is_acyclic(cone(f), need);
}

}  // namespace cekit
