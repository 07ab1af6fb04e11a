#include "cekit/homotopy.hpp"

#include <stdexcept>

namespace cekit {

namespace {

void require(const std::string& err, const std::string& what)
{
    if (!err.empty())
        throw PreconditionError(what + ": " + err);
}

// x with a x = b modulo the column span of rel.
std::optional<IntVector> solve_modulo(const IntMatrix& a, const IntVector& b, const IntMatrix& rel,
                                      const Ring& ring)
{
    auto x = solve(hstack({a, rel}, a.rows()), b, ring);
    if (!x)
        return std::nullopt;
    return ring.reduce(IntVector(x->head(a.cols())));
}

IntVector concat(const IntVector& u, const IntVector& v)
{
    IntVector out(u.size() + v.size());
    out.head(u.size()) = u;
    out.tail(v.size()) = v;
    return out;
}

bool same_shape(const ChainComplex& a, const ChainComplex& b)
{
    if (a.ring() != b.ring())
        return false;
    DegreeRange r{std::min(a.lowest(), b.lowest()), std::max(a.top(), b.top())};
    for (int d = r.lo; d <= r.hi; ++d)
        if (a.module(d) != b.module(d))
            return false;
    return true;
}

}  // namespace

std::optional<Homotopy> find_homotopy(const ChainMap& f, const ChainMap& g, std::optional<DegreeRange> window,
                                      const HomotopyMask& mask)
{
    const ChainComplex& s = f.source();
    const ChainComplex& t = f.target();
    if (!same_shape(s, g.source()) || !same_shape(t, g.target()))
        throw PreconditionError("find_homotopy: maps have different source or target");
    if (window && !s.empty() && (window->lo > s.lowest() || window->hi < s.top()))
        throw PreconditionError("find_homotopy: window does not cover the source degrees");
    if (s.empty())
        return Homotopy(f, g, {});

    LinearSystem sys(s.ring());
    std::vector<int> block;
    for (int d = s.lowest(); d <= s.top(); ++d)
    {
        block.push_back(sys.add_unknown(t.rank(d + 1), s.rank(d)));
        if (mask)
            for (Index r = 0; r < t.rank(d + 1); ++r)
                for (Index c = 0; c < s.rank(d); ++c)
                    if (!mask(d, r, c))
                        sys.forbid(block.back(), r, c);
    }
    auto unknown = [&](int d) { return block[static_cast<std::size_t>(d - s.lowest())]; };
    for (int d = s.lowest(); d <= s.top(); ++d)
    {
        int eq = sys.add_equation(t.rank(d), s.rank(d), t.module(d).relations);
        sys.add_term(eq, t.differential(d + 1), unknown(d), identity_matrix(s.rank(d)));
        if (d > s.lowest())
            sys.add_term(eq, identity_matrix(t.rank(d)), unknown(d - 1), s.differential(d));
        sys.add_rhs(eq, g.component(d) - f.component(d));

        const IntMatrix& rel = s.module(d).relations;
        if (rel.cols() > 0 && !is_zero(rel))
        {
            int wd = sys.add_equation(t.rank(d + 1), rel.cols(), t.module(d + 1).relations);
            sys.add_term(wd, identity_matrix(t.rank(d + 1)), unknown(d), rel);
        }
    }
    auto sol = sys.solve();
    if (!sol)
        return std::nullopt;
    Homotopy h(f, g, *sol);
    std::string err = h.check();
    if (!err.empty())
        throw std::logic_error("find_homotopy produced an invalid homotopy: " + err);
    return h;
}

PresentedModule homotopy_classes(const ChainComplex& a, const ChainComplex& b)
{
    return homology(hom_complex(a, b).complex, 0);
}

IntVector elementary_lift(const ChainMap& f, const IntVector& a, const IntVector& b, int n)
{
    const ChainComplex& src = f.source();
    const ChainComplex& tgt = f.target();
    const Ring& ring = src.ring();
    if (a.size() != tgt.rank(n + 1) || b.size() != src.rank(n))
        throw PreconditionError("elementary_lift: element sizes do not match the complexes");
    if (!tgt.module(n).is_zero_element(tgt.differential(n + 1) * a - f.component(n) * b))
        throw PreconditionError("elementary_lift: da != f(b)");
    if (!src.module(n - 1).is_zero_element(src.differential(n) * b))
        throw PreconditionError("elementary_lift: db != 0");

    const IntMatrix fn = f.component(n + 1);
    const IntMatrix dn = src.differential(n + 1);
    auto c0 = solve_modulo(fn, a, tgt.module(n + 1).relations, ring);
    if (!c0)
        throw PreconditionError("elementary_lift: f is not surjective in degree " + std::to_string(n + 1));

    // h in ker f with dh = b - d c0
    IntVector r = b - dn * *c0;
    const IntMatrix& rb = src.module(n).relations;
    const IntMatrix& ra = tgt.module(n + 1).relations;
    IntMatrix sys = zero_matrix(dn.rows() + fn.rows(), dn.cols() + rb.cols() + ra.cols());
    sys.topLeftCorner(dn.rows(), dn.cols()) = dn;
    sys.bottomLeftCorner(fn.rows(), fn.cols()) = fn;
    sys.block(0, dn.cols(), rb.rows(), rb.cols()) = rb;
    sys.block(dn.rows(), dn.cols() + rb.cols(), ra.rows(), ra.cols()) = ra;
    IntVector rhs = IntVector::Zero(sys.rows());
    rhs.head(r.size()) = r;
    auto h = solve(sys, rhs, ring);
    if (!h)
        throw PreconditionError("elementary_lift: no lift exists, f is not a quasi-isomorphism");
    IntVector c = ring.reduce(IntVector(*c0 + h->head(dn.cols())));

    if (!tgt.module(n + 1).is_zero_element(fn * c - a) || !src.module(n).is_zero_element(dn * c - b))
        throw std::logic_error("elementary_lift: postcondition failed");
    return c;
}

std::optional<std::vector<IntMatrix>> degreewise_retraction(const ChainMap& j)
{
    const ChainComplex& q = j.source();
    std::vector<IntMatrix> out;
    for (int d = q.lowest(); d <= q.top(); ++d)
    {
        IntMatrix jd = j.component(d);
        auto x = solve(IntMatrix(jd.transpose()), identity_matrix(jd.cols()), q.ring());
        if (!x)
            return std::nullopt;
        out.push_back(q.ring().reduce(IntMatrix(x->transpose())));
    }
    return out;
}

Lift lift_up_to_homotopy(const ChainMap& j, const ChainMap& w, const ChainMap& phi, const ChainMap& f,
                         const Homotopy& lambda)
{
    const ChainComplex& q = j.source();
    const ChainComplex& r = j.target();
    const ChainComplex& y = w.source();
    const ChainComplex& x = w.target();
    const Ring& ring = q.ring();

    if (!q.is_free() || !r.is_free())
        throw PreconditionError("lift_up_to_homotopy: the source complexes must be free");
    require(j.check(), "lift_up_to_homotopy: j");
    require(w.check(), "lift_up_to_homotopy: w");
    require(phi.check(), "lift_up_to_homotopy: phi");
    require(f.check(), "lift_up_to_homotopy: F");
    require(lambda.check(), "lift_up_to_homotopy: lambda");
    if (!same_shape(phi.source(), q) || !same_shape(phi.target(), y) || !same_shape(f.source(), r) ||
        !same_shape(f.target(), x))
        throw PreconditionError("lift_up_to_homotopy: maps do not form a square");
    if (!equal_maps(lambda.from(), compose(w, phi)) || !equal_maps(lambda.to(), compose(f, j)))
        throw PreconditionError("lift_up_to_homotopy: lambda is not a homotopy w phi => F j");
    if (!degreewise_retraction(j))
        throw PreconditionError("lift_up_to_homotopy: j is not a degreewise split monomorphism");
    for (int d = r.lowest(); d <= r.top(); ++d)
        if (!invariant_factors(PresentedModule(ring, r.rank(d), j.component(d))).torsion.empty())
            throw PreconditionError("lift_up_to_homotopy: coker j is not free in degree " + std::to_string(d));
    if (!is_quasi_iso(w))
        throw PreconditionError("lift_up_to_homotopy: w is not a quasi-isomorphism");

    // Cones of w_* on Hom(R, -) and Hom(Q, -); only degrees 0 and 1 are used.
    const DegreeRange window{-1, 1};
    HomComplex ry = hom_complex(r, y, window), rx = hom_complex(r, x, window);
    HomComplex qy = hom_complex(q, y, window), qx = hom_complex(q, x, window);
    ChainMap wr = postcompose(w, ry, rx), wq = postcompose(w, qy, qx);
    ChainMap jstar = cone_map(wr, wq, precompose(j, ry, qy), precompose(j, rx, qx));

    IntVector a = concat(qy.pack_map(phi), qx.pack_homotopy(lambda));
    IntVector b = concat(IntVector::Zero(ry.complex.rank(-1)), rx.pack_map(f));

    IntVector c = elementary_lift(jstar, a, b, 0);
    const Index head = ry.complex.rank(0);
    ChainMap g = ry.unpack_map(c.head(head));
    Homotopy h(compose(w, g), f, rx.unpack_homotopy(c.tail(c.size() - head)));

    std::string err = g.check();
    if (err.empty())
        err = h.check();
    if (err.empty() && !equal_maps(compose(g, j), phi))
        err = "G j != phi";
    if (err.empty())
        for (int d = q.lowest(); d <= q.top() && err.empty(); ++d)
            if (!x.module(d + 1).is_zero_element(h.component(d) * j.component(d) - lambda.component(d)))
                err = "H j != lambda in degree " + std::to_string(d);
    if (!err.empty())
        throw std::logic_error("lift_up_to_homotopy: " + err);
    return {g, h};
}

Lift lift_cofibrant(const ChainComplex& m, const ChainMap& w, const ChainMap& f)
{
    if (same_shape(w.source(), w.target()) && equal_maps(w, ChainMap::identity(w.target())))
    {
        require(f.check(), "lift_cofibrant: f");
        ChainMap g(m, w.source(), [&] {
            std::vector<IntMatrix> comps;
            for (int d = m.lowest(); d <= m.top(); ++d)
                comps.push_back(f.component(d));
            return comps;
        }());
        std::vector<IntMatrix> zero;
        for (int d = m.lowest(); d <= m.top(); ++d)
            zero.push_back(zero_matrix(f.target().rank(d + 1), m.rank(d)));
        return {g, Homotopy(compose(w, g), f, zero)};
    }
    ChainComplex none(m.ring());
    ChainMap j = ChainMap::zero(none, m);
    ChainMap phi = ChainMap::zero(none, w.source());
    Homotopy lambda(compose(w, phi), compose(f, j), {});
    return lift_up_to_homotopy(j, w, phi, f, lambda);
}

HomotopyEquivalence invert_weak_equivalence(const ChainMap& w)
{
    const ChainComplex& y = w.source();
    const ChainComplex& x = w.target();
    if (!y.is_free() || !x.is_free())
        throw PreconditionError("invert_weak_equivalence: both complexes must be free");
    require(w.check(), "invert_weak_equivalence: w");
    if (!is_quasi_iso(w))
        throw PreconditionError("invert_weak_equivalence: w is not a quasi-isomorphism");

    Lift lift = lift_cofibrant(x, w, ChainMap::identity(x));
    const ChainMap& v = lift.map;
    auto h = find_homotopy(compose(v, w), ChainMap::identity(y));
    if (!h)
        throw std::logic_error("invert_weak_equivalence: v w is not homotopic to the identity");
    HomotopyEquivalence out{w, v, *h, lift.homotopy};
    std::string err = check(out);
    if (!err.empty())
        throw std::logic_error("invert_weak_equivalence: " + err);
    return out;
}

std::string check(const HomotopyEquivalence& e)
{
    const ChainComplex& y = e.w.source();
    const ChainComplex& x = e.w.target();
    for (const std::string& err : {e.w.check(), e.v.check(), e.h.check(), e.k.check()})
        if (!err.empty())
            return err;
    if (!equal_maps(e.h.from(), compose(e.v, e.w)) || !equal_maps(e.h.to(), ChainMap::identity(y)))
        return "h is not a homotopy v w => id";
    if (!equal_maps(e.k.from(), compose(e.w, e.v)) || !equal_maps(e.k.to(), ChainMap::identity(x)))
        return "k is not a homotopy w v => id";
    return "";
}

}  // namespace cekit
