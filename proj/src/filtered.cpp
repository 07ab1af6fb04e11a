#include "cekit/filtered.hpp"

#include <algorithm>
#include <stdexcept>

namespace cekit {

namespace {

IntMatrix select_columns(Index n, const std::vector<Index>& cols)
{
    IntMatrix e = zero_matrix(n, static_cast<Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k)
        e(cols[k], static_cast<Index>(k)) = 1;
    return e;
}

IntMatrix select_rows(const IntMatrix& a, const std::vector<Index>& rows)
{
    IntMatrix out(static_cast<Index>(rows.size()), a.cols());
    for (std::size_t k = 0; k < rows.size(); ++k)
        out.row(static_cast<Index>(k)) = a.row(rows[k]);
    return out;
}

DegreeRange hull(DegreeRange a, DegreeRange b)
{
    if (a.empty())
        return b;
    if (b.empty())
        return a;
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

// Positions of weight exactly p inside low(d, p).
std::vector<Index> top_positions(const FilteredComplex& x, int d, int p)
{
    std::vector<Index> out;
    std::vector<Index> lo = x.low(d, p);
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (x.weights(d)[static_cast<std::size_t>(lo[k])] == p)
            out.push_back(static_cast<Index>(k));
    return out;
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

bool same_weights(const FilteredComplex& a, const FilteredComplex& b)
{
    const ChainComplex& c = a.base();
    for (int d = c.lowest(); d <= c.top(); ++d)
        if (a.weights(d) != b.weights(d))
            return false;
    return true;
}

}  // namespace

FilteredComplex::FilteredComplex(const ChainComplex& base, std::vector<std::vector<int>> weights)
    : base_(base), weights_(std::move(weights))
{
    const std::size_t len = base.empty() ? 0 : static_cast<std::size_t>(base.top() - base.lowest() + 1);
    if (weights_.size() != len)
        throw PreconditionError("filtered complex: expected weights for " + std::to_string(len) + " degrees");
    for (std::size_t k = 0; k < len; ++k)
        if (static_cast<Index>(weights_[k].size()) != base.rank(base.lowest() + static_cast<int>(k)))
            throw PreconditionError("filtered complex: wrong number of weights in degree " +
                                    std::to_string(base.lowest() + static_cast<int>(k)));
}

FilteredComplex FilteredComplex::constant(const ChainComplex& base, int weight)
{
    std::vector<std::vector<int>> w;
    for (int d = base.lowest(); d <= base.top(); ++d)
        w.emplace_back(static_cast<std::size_t>(base.rank(d)), weight);
    return FilteredComplex(base, w);
}

const std::vector<int>& FilteredComplex::weights(int d) const
{
    if (base_.empty() || d < base_.lowest() || d > base_.top())
        return none_;
    return weights_[static_cast<std::size_t>(d - base_.lowest())];
}

DegreeRange FilteredComplex::weight_range() const
{
    DegreeRange r{0, -1};
    bool first = true;
    for (const auto& ws : weights_)
        for (int w : ws)
        {
            if (first || w < r.lo)
                r.lo = w;
            if (first || w > r.hi)
                r.hi = w;
            first = false;
        }
    return r;
}

std::vector<Index> FilteredComplex::low(int d, int p) const
{
    std::vector<Index> out;
    const auto& ws = weights(d);
    for (std::size_t i = 0; i < ws.size(); ++i)
        if (ws[i] <= p)
            out.push_back(static_cast<Index>(i));
    return out;
}

bool FilteredComplex::in_weight(int d, int p, const IntMatrix& v) const
{
    const PresentedModule& m = base_.module(d);
    std::vector<Index> high;
    const auto& ws = weights(d);
    for (std::size_t i = 0; i < ws.size(); ++i)
        if (ws[i] > p)
            high.push_back(static_cast<Index>(i));
    if (high.empty())
        return true;
    return solve(select_rows(m.relations, high), select_rows(v, high), ring()).has_value();
}

IntMatrix FilteredComplex::coordinates(int d, int p, const IntMatrix& v) const
{
    const PresentedModule& m = base_.module(d);
    std::vector<Index> lo = low(d, p), high;
    const auto& ws = weights(d);
    for (std::size_t i = 0; i < ws.size(); ++i)
        if (ws[i] > p)
            high.push_back(static_cast<Index>(i));
    IntMatrix u = v;
    if (!high.empty())
    {
        auto y = solve(select_rows(m.relations, high), select_rows(v, high), ring());
        if (!y)
            throw PreconditionError("element does not lie in W_" + std::to_string(p) + " in degree " +
                                    std::to_string(d));
        u = v - m.relations * *y;
    }
    return ring().reduce(select_rows(u, lo));
}

std::string FilteredComplex::check() const
{
    std::string err = base_.check();
    if (!err.empty())
        return err;
    for (int d = base_.lowest() + 1; d <= base_.top(); ++d)
    {
        const IntMatrix dd = base_.differential(d);
        const auto& ws = weights(d);
        for (std::size_t i = 0; i < ws.size(); ++i)
            if (!in_weight(d - 1, ws[i], dd.col(static_cast<Index>(i))))
                return "differential raises weight at degree " + std::to_string(d) + ", generator " +
                       std::to_string(i);
    }
    return "";
}

void FilteredComplex::validate() const
{
    std::string err = check();
    if (!err.empty())
        throw PreconditionError(err);
}

std::string FilteredMap::check() const
{
    std::string err = map.check();
    if (!err.empty())
        return err;
    const ChainComplex& s = source.base();
    for (int d = s.lowest(); d <= s.top(); ++d)
    {
        const IntMatrix f = map.component(d);
        const auto& ws = source.weights(d);
        for (std::size_t i = 0; i < ws.size(); ++i)
            if (!target.in_weight(d, ws[i], f.col(static_cast<Index>(i))))
                return "map raises weight at degree " + std::to_string(d) + ", generator " + std::to_string(i);
    }
    return "";
}

bool is_filtered(const FilteredComplex& s, const FilteredComplex& t, const Homotopy& h)
{
    for (int d = s.base().lowest(); d <= s.base().top(); ++d)
    {
        const IntMatrix c = h.component(d);
        const auto& ws = s.weights(d);
        for (std::size_t i = 0; i < ws.size(); ++i)
            if (!t.in_weight(d + 1, ws[i], c.col(static_cast<Index>(i))))
                return false;
    }
    return true;
}

WeightPiece w_sub(const FilteredComplex& x, int p)
{
    const ChainComplex& b = x.base();
    if (b.empty())
        return {x, ChainMap::identity(b)};
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs, incl;
    std::vector<std::vector<int>> weights;
    for (int d = b.lowest(); d <= b.top(); ++d)
    {
        std::vector<Index> lo = x.low(d, p);
        IntMatrix e = select_columns(b.rank(d), lo);
        mods.push_back(submodule(b.module(d), e).module);
        incl.push_back(e);
        std::vector<int> w;
        for (Index i : lo)
            w.push_back(x.weights(d)[static_cast<std::size_t>(i)]);
        weights.push_back(w);
        if (d > b.lowest())
            diffs.push_back(x.coordinates(d - 1, p, b.differential(d) * e));
    }
    ChainComplex c(b.ring(), b.lowest(), mods, diffs);
    return {FilteredComplex(c, weights), ChainMap(c, b, incl)};
}

ChainComplex gr(const FilteredComplex& x, int p)
{
    WeightPiece w = w_sub(x, p);
    const ChainComplex& c = w.complex.base();
    if (c.empty())
        return c;
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs;
    for (int d = c.lowest(); d <= c.top(); ++d)
    {
        std::vector<Index> top = top_positions(x, d, p);
        mods.emplace_back(c.ring(), static_cast<Index>(top.size()), select_rows(c.module(d).relations, top));
        if (d > c.lowest())
        {
            std::vector<Index> below = top_positions(x, d - 1, p);
            IntMatrix dd = c.differential(d);
            IntMatrix m(static_cast<Index>(below.size()), static_cast<Index>(top.size()));
            for (std::size_t i = 0; i < below.size(); ++i)
                for (std::size_t j = 0; j < top.size(); ++j)
                    m(static_cast<Index>(i), static_cast<Index>(j)) = dd(below[i], top[j]);
            diffs.push_back(m);
        }
    }
    return ChainComplex(c.ring(), c.lowest(), mods, diffs);
}

ChainMap w_sub(const FilteredMap& f, int p)
{
    WeightPiece s = w_sub(f.source, p), t = w_sub(f.target, p);
    const ChainComplex& sb = f.source.base();
    std::vector<IntMatrix> comps;
    for (int d = sb.lowest(); d <= sb.top(); ++d)
    {
        IntMatrix e = select_columns(sb.rank(d), f.source.low(d, p));
        comps.push_back(f.target.coordinates(d, p, f.map.component(d) * e));
    }
    return ChainMap(s.complex.base(), t.complex.base(), comps);
}

ChainMap gr(const FilteredMap& f, int p)
{
    ChainMap w = w_sub(f, p);
    ChainComplex gs = gr(f.source, p), gt = gr(f.target, p);
    std::vector<IntMatrix> comps;
    for (int d = gs.lowest(); d <= gs.top(); ++d)
    {
        std::vector<Index> cols = top_positions(f.source, d, p), rows = top_positions(f.target, d, p);
        IntMatrix c = w.component(d);
        IntMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j)
                m(static_cast<Index>(i), static_cast<Index>(j)) = c(rows[i], cols[j]);
        comps.push_back(m);
    }
    return ChainMap(gs, gt, comps);
}

ChainMap weight_inclusion(const FilteredComplex& x, int q, int p)
{
    if (q > p)
        throw PreconditionError("weight_inclusion: need q <= p");
    WeightPiece a = w_sub(x, q), b = w_sub(x, p);
    const ChainComplex& base = x.base();
    std::vector<IntMatrix> comps;
    for (int d = base.lowest(); d <= base.top(); ++d)
    {
        std::vector<Index> big = x.low(d, p), small = x.low(d, q);
        IntMatrix e = zero_matrix(static_cast<Index>(big.size()), static_cast<Index>(small.size()));
        for (std::size_t j = 0; j < small.size(); ++j)
        {
            auto it = std::find(big.begin(), big.end(), small[j]);
            e(static_cast<Index>(it - big.begin()), static_cast<Index>(j)) = 1;
        }
        comps.push_back(e);
    }
    return ChainMap(a.complex.base(), b.complex.base(), comps);
}

bool is_filtered_quasi_iso(const FilteredMap& f, std::optional<DegreeRange> window)
{
    std::string err = f.check();
    if (!err.empty())
        throw PreconditionError("is_filtered_quasi_iso: " + err);
    DegreeRange weights = hull(f.source.weight_range(), f.target.weight_range());
    bool all_w = true, all_gr = true;
    for (int p = weights.lo; p <= weights.hi; ++p)
    {
        all_w = all_w && is_quasi_iso(w_sub(f, p), window);
        all_gr = all_gr && is_quasi_iso(gr(f, p), window);
    }
    if (all_w != all_gr)
        throw std::logic_error("is_filtered_quasi_iso: W_p and Gr_p criteria disagree");
    return all_w;
}

FilteredCylinder filtered_cylinder(const FilteredComplex& x)
{
    Cylinder c = cylinder(x.base());
    FilteredCylinder out;
    const ChainComplex& cb = c.cyl;
    std::vector<std::vector<int>> w;
    for (int d = cb.lowest(); d <= cb.top(); ++d)
        w.push_back(concat(concat(x.weights(d), x.weights(d - 1)), x.weights(d)));
    out.cyl = FilteredComplex(cb, w);
    out.i0 = {x, out.cyl, c.i0};
    out.i1 = {x, out.cyl, c.i1};
    out.p = {out.cyl, x, c.p};
    out.contraction = c.contraction;
    return out;
}

FilteredComplex filtered_path(const FilteredMap& f)
{
    ChainComplex l = path(f.map);
    std::vector<std::vector<int>> w;
    for (int d = l.lowest(); d <= l.top(); ++d)
        w.push_back(concat(f.source.weights(d), f.target.weights(d + 1)));
    return FilteredComplex(l, w);
}

std::optional<Homotopy> find_filtered_homotopy(const FilteredMap& f, const FilteredMap& g,
                                               std::optional<DegreeRange> window)
{
    const FilteredComplex& s = f.source;
    const FilteredComplex& t = f.target;
    HomotopyMask mask = [&](int d, Index row, Index col) {
        return t.weights(d + 1)[static_cast<std::size_t>(row)] <= s.weights(d)[static_cast<std::size_t>(col)];
    };
    auto h = find_homotopy(f.map, g.map, window, mask);
    if (h && !is_filtered(s, t, *h))
        throw std::logic_error("find_filtered_homotopy: result is not filtered");
    return h;
}

Lift filtered_lift(const FilteredMap& w, const FilteredMap& f)
{
    const FilteredComplex& p = f.source;
    const FilteredComplex& y = w.source;
    const FilteredComplex& x = w.target;
    if (!p.is_weighted_free())
        throw PreconditionError("filtered_lift: the source must be weighted-free");
    for (const std::string& err : {p.check(), y.check(), x.check(), w.check(), f.check()})
        if (!err.empty())
            throw PreconditionError("filtered_lift: " + err);

    const ChainComplex& pb = p.base();
    if (same_weights(y, x) && y.base() == x.base() && equal_maps(w.map, ChainMap::identity(x.base())))
        return lift_cofibrant(pb, w.map, f.map);

    DegreeRange weights = p.weight_range();
    if (weights.empty())
    {
        ChainMap g = ChainMap::zero(pb, y.base());
        std::vector<IntMatrix> none;
        for (int d = pb.lowest(); d <= pb.top(); ++d)
            none.push_back(zero_matrix(x.base().rank(d + 1), 0));
        return {g, Homotopy(compose(w.map, g), f.map, none)};
    }

    ChainMap g_prev;
    std::vector<IntMatrix> h_prev;
    for (int q = weights.lo; q <= weights.hi; ++q)
    {
        WeightPiece rq = w_sub(p, q);
        ChainMap wq = w_sub(w, q);
        ChainMap fq = w_sub(f, q);
        ChainMap j = q == weights.lo ? ChainMap::zero(w_sub(p, q - 1).complex.base(), rq.complex.base())
                                     : weight_inclusion(p, q - 1, q);
        const ChainComplex& qb = j.source();
        ChainMap phi = q == weights.lo ? ChainMap::zero(qb, wq.source())
                                       : compose(weight_inclusion(y, q - 1, q), g_prev);
        ChainMap into_x = weight_inclusion(x, q - 1, q);
        std::vector<IntMatrix> lam;
        for (int d = qb.lowest(); d <= qb.top(); ++d)
            lam.push_back(q == weights.lo ? zero_matrix(wq.target().rank(d + 1), qb.rank(d))
                                          : IntMatrix(into_x.component(d + 1) *
                                                      h_prev[static_cast<std::size_t>(d - qb.lowest())]));
        Homotopy lambda(compose(wq, phi), compose(fq, j), lam);
        Lift stage = lift_up_to_homotopy(j, wq, phi, fq, lambda);
        g_prev = stage.map;
        h_prev.clear();
        for (int d = rq.complex.base().lowest(); d <= rq.complex.base().top(); ++d)
            h_prev.push_back(stage.homotopy.component(d));
    }

    // W_max P is P itself; push the last stage out to Y and X.
    std::vector<IntMatrix> gc, hc;
    for (int d = pb.lowest(); d <= pb.top(); ++d)
    {
        gc.push_back(select_columns(y.base().rank(d), y.low(d, weights.hi)) * g_prev.component(d));
        hc.push_back(select_columns(x.base().rank(d + 1), x.low(d + 1, weights.hi)) *
                     h_prev[static_cast<std::size_t>(d - pb.lowest())]);
    }
    ChainMap g(pb, y.base(), gc);
    Homotopy h(compose(w.map, g), f.map, hc);
    std::string err = g.check();
    if (err.empty())
        err = h.check();
    if (err.empty() && !FilteredMap{p, y, g}.check().empty())
        err = "lift is not filtered";
    if (err.empty() && !is_filtered(p, x, h))
        err = "homotopy is not filtered";
    if (!err.empty())
        throw std::logic_error("filtered_lift: " + err);
    return {g, h};
}

Homotopy filtered_homotopy_from_image(const FilteredMap& w, const FilteredMap& g0, const FilteredMap& g1,
                                      const Homotopy& k)
{
    const FilteredComplex& p = g0.source;
    const FilteredComplex& y = w.source;
    const FilteredComplex& x = w.target;
    if (!is_filtered(p, x, k))
        throw PreconditionError("filtered_homotopy_from_image: k is not filtered");
    if (!equal_maps(k.from(), compose(w.map, g0.map)) || !equal_maps(k.to(), compose(w.map, g1.map)))
        throw PreconditionError("filtered_homotopy_from_image: k must go from w g0 to w g1");
    std::string err = k.check();
    if (!err.empty())
        throw PreconditionError("filtered_homotopy_from_image: " + err);

    // (g1 - g0, k): P -> L(w) is a chain map since dk + kd = w (g1 - g0).
    FilteredComplex lw = filtered_path(w);
    FilteredMap id_y{y, y, ChainMap::identity(y.base())};
    FilteredComplex ly = filtered_path(id_y);
    const ChainComplex& pb = p.base();
    ChainMap g = subtract(g1.map, g0.map);
    std::vector<IntMatrix> into_lw;
    for (int d = pb.lowest(); d <= pb.top(); ++d)
        into_lw.push_back(vstack({g.component(d), k.component(d)}, pb.rank(d)));
    FilteredMap gk{p, lw, ChainMap(pb, lw.base(), into_lw)};

    // id x w: L(id_Y) -> L(w).
    std::vector<IntMatrix> comps;
    const ChainComplex& lyb = ly.base();
    for (int d = lyb.lowest(); d <= lyb.top(); ++d)
        comps.push_back(block_diagonal({identity_matrix(y.base().rank(d)), w.map.component(d + 1)}));
    FilteredMap idw{ly, lw, ChainMap(lyb, lw.base(), comps)};

    Lift lift = filtered_lift(idw, gk);
    std::vector<IntMatrix> theta;
    for (int d = pb.lowest(); d <= pb.top(); ++d)
    {
        const Index top = y.base().rank(d), next = y.base().rank(d + 1);
        IntMatrix h = lift.map.component(d).bottomRows(lift.map.component(d).rows() - top);
        IntMatrix k1 = lift.homotopy.component(d).topRows(next);
        theta.push_back(h + k1);
    }
    Homotopy out(g0.map, g1.map, theta);
    err = out.check();
    if (err.empty() && !is_filtered(p, y, out))
        err = "result is not filtered";
    if (!err.empty())
        throw std::logic_error("filtered_homotopy_from_image: " + err);
    return out;
}

namespace {

// Contractible (Z^k --id--> Z^k) in degrees e + 1, e glued onto G, with s
// sending the top generators to fixed elements of L and the bottom ones to
// their boundaries.
Resolution pad(const Resolution& r, Index k)
{
    const ChainComplex& g = r.model;
    const ChainComplex& l = r.target;
    if (l.empty())
        return r;
    const int e = g.empty() ? l.lowest() : g.lowest();
    const int top = g.empty() ? e + 1 : std::max(g.top(), e + 1);
    const Ring& ring = l.ring();
    auto extra = [&](int d) { return d == e || d == e + 1 ? k : Index(0); };
    std::vector<Index> ranks;
    std::vector<IntMatrix> diffs;
    for (int d = e; d <= top; ++d)
    {
        ranks.push_back(g.rank(d) + extra(d));
        if (d > e)
        {
            IntMatrix dd = d == e + 1 ? identity_matrix(k) : zero_matrix(extra(d - 1), extra(d));
            diffs.push_back(block_diagonal({g.differential(d), dd}));
        }
    }
    ChainComplex model = ChainComplex::free(ring, e, ranks, diffs);

    IntMatrix up = zero_matrix(l.rank(e + 1), k);
    for (Index i = 0; i < up.rows(); ++i)
        for (Index j = 0; j < k; ++j)
            up(i, j) = (i + j) % 2 == 0 ? 1 : 0;
    up = ring.reduce(up);
    std::vector<IntMatrix> s;
    for (int d = e; d <= top; ++d)
    {
        IntMatrix base = r.augmentation.component(d);
        if (d == e)
            s.push_back(hstack({base, ring.reduce(IntMatrix(l.differential(e + 1) * up))}, l.rank(d)));
        else if (d == e + 1)
            s.push_back(hstack({base, up}, l.rank(d)));
        else
            s.push_back(base);
    }
    Resolution out;
    out.target = l;
    out.model = model;
    out.augmentation = ChainMap(model, l, s);
    out.certified = r.certified;
    return out;
}

// Projection L(f) -> S onto the first summand.
ChainMap path_projection(const ChainMap& f, const ChainComplex& l)
{
    const ChainComplex& s = f.source();
    std::vector<IntMatrix> comps;
    for (int d = l.lowest(); d <= l.top(); ++d)
    {
        IntMatrix m = zero_matrix(s.rank(d), l.rank(d));
        m.leftCols(s.rank(d)) = identity_matrix(s.rank(d));
        comps.push_back(m);
    }
    return ChainMap(l, s, comps);
}

}  // namespace

std::string check(const FilteredResolution& r)
{
    if (!r.model.is_weighted_free())
        return "model is not weighted-free";
    std::string err = r.model.check();
    if (err.empty())
        err = r.augmentation.check();
    if (!err.empty())
        return err;
    DegreeRange weights = hull(r.model.weight_range(), r.target.weight_range());
    for (int p = weights.lo; p <= weights.hi; ++p)
        if (!is_acyclic(cone(w_sub(r.augmentation, p)), r.certified))
            return "cone of W_" + std::to_string(p) + " of the augmentation has homology";
    return "";
}

FilteredResolution filtered_resolution(const FilteredComplex& x, int bound, Index padding)
{
    x.validate();
    const ChainComplex& xb = x.base();
    const Ring& ring = xb.ring();
    FilteredResolution out;
    out.target = x;
    if (x.is_weighted_free())
    {
        out.model = x;
        out.augmentation = {x, x, ChainMap::identity(xb)};
        out.certified = xb.empty() ? DegreeRange{0, -1} : DegreeRange{xb.lowest(), xb.top() + 1};
        return out;
    }
    if (bound < xb.lowest())
        throw PreconditionError("filtered_resolution: bound below the lowest degree");

    DegreeRange weights = x.weight_range();
    // Stage p - 1: model P with weights and eps: P -> X in the generators of X.
    ChainComplex p_prev = ChainComplex::free(ring, xb.lowest(), std::vector<Index>(
                                                 static_cast<std::size_t>(xb.top() - xb.lowest() + 1), 0),
                                             std::vector<IntMatrix>(static_cast<std::size_t>(xb.top() - xb.lowest()),
                                                                    IntMatrix()));
    std::vector<std::vector<int>> w_prev(static_cast<std::size_t>(xb.top() - xb.lowest() + 1));
    std::vector<IntMatrix> eps_prev;
    for (int d = xb.lowest(); d <= xb.top(); ++d)
        eps_prev.push_back(zero_matrix(xb.rank(d), 0));
    int certified_hi = bound;
    bool exact = true;

    for (int p = weights.lo; p <= weights.hi; ++p)
    {
        WeightPiece wp = w_sub(x, p);
        const ChainComplex& xp = wp.complex.base();
        std::vector<IntMatrix> rho_c;
        for (int d = p_prev.lowest(); d <= p_prev.top(); ++d)
            rho_c.push_back(x.coordinates(d, p, eps_prev[static_cast<std::size_t>(d - p_prev.lowest())]));
        ChainMap rho(p_prev, xp, rho_c);
        ChainComplex l = path(rho);
        Resolution res = free_resolution_complex(l, bound - 1);
        if (padding > 0)
            res = pad(res, padding);
        exact = exact && res.certified.hi > res.model.top();
        certified_hi = std::min(certified_hi, res.certified.hi + 1);
        const ChainComplex& g = res.model;
        ChainMap xi = compose(path_projection(rho, l), res.augmentation);

        // P_d + G_{d-1} with differential [[dP, (-1)^d xi], [0, dG]].
        const int lo = std::min(p_prev.lowest(), g.empty() ? p_prev.lowest() : g.lowest() + 1);
        const int hi = std::max(p_prev.top(), g.empty() ? p_prev.top() : g.top() + 1);
        std::vector<Index> ranks;
        std::vector<IntMatrix> diffs, eps;
        std::vector<std::vector<int>> w;
        for (int d = lo; d <= hi; ++d)
        {
            const Index np = p_prev.rank(d), ng = g.rank(d - 1);
            ranks.push_back(np + ng);
            std::vector<int> wd = p_prev.empty() || d < p_prev.lowest() || d > p_prev.top()
                                      ? std::vector<int>{}
                                      : w_prev[static_cast<std::size_t>(d - p_prev.lowest())];
            wd.resize(static_cast<std::size_t>(np + ng), p);
            w.push_back(wd);
            const Integer sign = d % 2 == 0 ? 1 : -1;
            if (d > lo)
            {
                const Index np1 = p_prev.rank(d - 1), ng1 = g.rank(d - 2);
                IntMatrix m = zero_matrix(np1 + ng1, np + ng);
                m.topLeftCorner(np1, np) = p_prev.differential(d);
                m.topRightCorner(np1, ng) = sign * xi.component(d - 1);
                m.bottomRightCorner(ng1, ng) = g.differential(d - 1);
                diffs.push_back(ring.reduce(m));
            }
            IntMatrix into_x = select_columns(xb.rank(d), x.low(d, p));
            IntMatrix s2 = res.augmentation.component(d - 1).bottomRows(xp.rank(d));
            IntMatrix prev = d < p_prev.lowest() || d > p_prev.top()
                                 ? zero_matrix(xb.rank(d), np)
                                 : eps_prev[static_cast<std::size_t>(d - p_prev.lowest())];
            eps.push_back(ring.reduce(hstack({prev, IntMatrix(sign * (into_x * s2))}, xb.rank(d))));
        }
        p_prev = ChainComplex::free(ring, lo, ranks, diffs);
        w_prev = w;
        eps_prev = eps;
    }

    out.model = FilteredComplex(p_prev, w_prev);
    out.augmentation = {out.model, x, ChainMap(p_prev, xb, eps_prev)};
    const int top = std::max(p_prev.top(), xb.top()) + 1;
    out.certified = {std::min(p_prev.lowest(), xb.lowest()), exact ? top : certified_hi};
    std::string err = check(out);
    if (!err.empty())
        throw std::logic_error("filtered_resolution failed its certificate: " + err);
    return out;
}

bool filtered_models_equivalent(const FilteredResolution& a, const FilteredResolution& b)
{
    if (a.target.base() != b.target.base() || !same_weights(a.target, b.target))
        throw PreconditionError("filtered_models_equivalent: models of different targets");
    Lift ab = filtered_lift(b.augmentation, a.augmentation);
    Lift ba = filtered_lift(a.augmentation, b.augmentation);
    FilteredMap aa{a.model, a.model, compose(ba.map, ab.map)};
    FilteredMap bb{b.model, b.model, compose(ab.map, ba.map)};
    FilteredMap ida{a.model, a.model, ChainMap::identity(a.model.base())};
    FilteredMap idb{b.model, b.model, ChainMap::identity(b.model.base())};
    auto h = find_filtered_homotopy(aa, ida);
    auto k = find_filtered_homotopy(bb, idb);
    if (h && h->check() != "")
        throw std::logic_error("filtered_models_equivalent: bad witness");
    if (k && k->check() != "")
        throw std::logic_error("filtered_models_equivalent: bad witness");
    return h.has_value() && k.has_value();
}

}  // namespace cekit
