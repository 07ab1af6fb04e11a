#include "cekit/acceptance.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "cekit/cotriple.hpp"
#include "cekit/filtered.hpp"
#include "cekit/linalg.hpp"
#include "cekit/random.hpp"

namespace cekit {

namespace {

const Ring ZZ = Ring::integers();

class Tally
{
    public:
        Tally(int id, std::string title)
        {
            r_.id = id;
            r_.title = std::move(title);
            r_.pass = true;
        }

        void expect(bool ok, const std::string& what)
        {
            if (!ok && r_.pass)
            {
                r_.pass = false;
                r_.detail = what;
            }
        }

        // Runs one instance; exceptions count as failures of that instance.
        void instance(const std::string& label, const std::function<void()>& body)
        {
            ++r_.checked;
            try
            {
                body();
            }
            catch (const std::exception& e)
            {
                expect(false, label + ": " + e.what());
            }
        }

        CriterionResult result() const { return r_; }

    private:
        CriterionResult r_;
};

int count(const SuiteConfig& c, int full)
{
    return c.instances > 0 ? c.instances : full;
}

std::string at(const std::string& what, int i)
{
    return what + " #" + std::to_string(i);
}

// ------------------------------------------------------------ 1: exact algebra

// Bareiss determinant, used only for minors.
Integer det(IntMatrix a)
{
    const Index n = a.rows();
    Integer prev = 1;
    int sign = 1;
    for (Index k = 0; k < n; ++k)
    {
        if (a(k, k) == 0)
        {
            Index p = k + 1;
            while (p < n && a(p, k) == 0)
                ++p;
            if (p == n)
                return 0;
            a.row(k).swap(a.row(p));
            sign = -sign;
        }
        for (Index i = k + 1; i < n; ++i)
            for (Index j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return n == 0 ? Integer(1) : Integer(sign * a(n - 1, n - 1));
}

void choose(Index n, Index k, Index start, std::vector<Index>& cur, std::vector<std::vector<Index>>& out)
{
    if (static_cast<Index>(cur.size()) == k)
    {
        out.push_back(cur);
        return;
    }
    for (Index i = start; i < n; ++i)
    {
        cur.push_back(i);
        choose(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

// d_k / d_(k-1) where d_k is the gcd of the k x k minors.
std::vector<Integer> determinantal_factors(const IntMatrix& a)
{
    std::vector<Integer> dets{Integer(1)}, out;
    const Index n = std::min(a.rows(), a.cols());
    for (Index k = 1; k <= n; ++k)
    {
        std::vector<std::vector<Index>> rs, cs;
        std::vector<Index> cur;
        choose(a.rows(), k, 0, cur, rs);
        choose(a.cols(), k, 0, cur, cs);
        Integer g = 0;
        for (const auto& r : rs)
            for (const auto& c : cs)
            {
                IntMatrix m(k, k);
                for (Index i = 0; i < k; ++i)
                    for (Index j = 0; j < k; ++j)
                        m(i, j) = a(r[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(j)]);
                g = gcd(g, det(m));
            }
        dets.push_back(g);
        out.push_back(g == 0 ? Integer(0) : Integer(g / dets[static_cast<std::size_t>(k - 1)]));
    }
    return out;
}

// Product of random elementary operations, row swaps and sign changes.
IntMatrix random_unimodular(Rng& rng, Index n)
{
    IntMatrix u = identity_matrix(n);
    for (int s = 0; s < 3 * static_cast<int>(n); ++s)
    {
        Index i = uniform(rng, 0, static_cast<int>(n) - 1), j = uniform(rng, 0, static_cast<int>(n) - 1);
        switch (uniform(rng, 0, 3))
        {
            case 0:
                u.row(i).swap(u.row(j));
                break;
            case 1:
                u.row(i) *= Integer(-1);
                break;
            default:
                if (i != j)
                    u.row(i) += Integer(uniform(rng, -2, 2)) * u.row(j);
        }
    }
    return u;
}

CriterionResult exact_algebra(const SuiteConfig& cfg)
{
    Tally t(1, "exact-algebra oracle equivalence");
    Rng rng(cfg.seed + 1);
    for (int i = 0; i < count(cfg, 500); ++i)
        t.instance(at("matrix", i), [&] {
            Index r = uniform(rng, 1, 6), c = uniform(rng, 1, 6);
            IntMatrix a = random_matrix(rng, r, c, 9);
            SmithForm s = snf(a);
            t.expect(s.U * a * s.V == s.S, at("S = U A V", i));
            t.expect(is_unimodular(s.U) && is_unimodular(s.V), at("unimodular U, V", i));
            bool diagonal = true;
            for (Index x = 0; x < r; ++x)
                for (Index y = 0; y < c; ++y)
                    if (x != y && s.S(x, y) != 0)
                        diagonal = false;
            t.expect(diagonal, at("S diagonal", i));
            for (std::size_t k = 0; k < s.diagonal.size(); ++k)
            {
                t.expect(s.diagonal[k] >= 0 && s.S(static_cast<Index>(k), static_cast<Index>(k)) == s.diagonal[k],
                         at("diagonal entries", i));
                if (k + 1 < s.diagonal.size())
                    t.expect(s.diagonal[k] == 0 ? s.diagonal[k + 1] == 0 : s.diagonal[k + 1] % s.diagonal[k] == 0,
                             at("divisibility chain", i));
            }
            t.expect(s.diagonal == determinantal_factors(a), at("determinantal divisors", i));

            ModuleInvariants base = invariant_factors(PresentedModule(ZZ, r, a));
            for (int k = 0; k < 100; ++k)
            {
                IntMatrix b = random_unimodular(rng, r) * a * random_unimodular(rng, c);
                if (invariant_factors(PresentedModule(ZZ, r, b)) != base)
                {
                    t.expect(false, at("invariants moved under a unimodular transform", i));
                    break;
                }
            }
        });
    return t.result();
}

// ------------------------------------------------------------ 2: constructions

Ring random_ring(Rng& rng)
{
    static const int moduli[] = {0, 0, 2, 3, 4, 6};
    int m = moduli[uniform(rng, 0, 5)];
    return m == 0 ? ZZ : Ring::integers_mod(m);
}

DoubleComplex tensor_double(const ChainComplex& a, const ChainComplex& b)
{
    DoubleComplex d;
    d.ring = a.ring();
    for (int p = a.lowest(); p <= a.top(); ++p)
        for (int q = b.lowest(); q <= b.top(); ++q)
        {
            d.cells[{p, q}] = PresentedModule(a.ring(), a.rank(p) * b.rank(q));
            if (p > a.lowest())
                d.horizontal[{p, q}] = kron(a.differential(p), identity_matrix(b.rank(q)));
            if (q > b.lowest())
                d.vertical[{p, q}] = kron(identity_matrix(a.rank(p)), b.differential(q));
        }
    return d;
}

// Rank of a matrix over a prime field, by elimination mod p.
Index rank_mod(IntMatrix a, long p)
{
    Index rank = 0;
    for (Index c = 0; c < a.cols() && rank < a.rows(); ++c)
    {
        Index piv = rank;
        while (piv < a.rows() && a(piv, c) % p == 0)
            ++piv;
        if (piv == a.rows())
            continue;
        a.row(rank).swap(a.row(piv));
        Integer inv = 1;
        while ((inv * a(rank, c) - 1) % p != 0)
            ++inv;
        for (Index i = 0; i < a.rows(); ++i)
            if (i != rank)
            {
                Integer f = a(i, c) * inv;
                a.row(i) -= f * a.row(rank);
                for (Index j = 0; j < a.cols(); ++j)
                    a(i, j) %= p;
            }
        ++rank;
    }
    return rank;
}

Index betti_mod(const ChainComplex& c, int d, long p)
{
    return c.rank(d) - rank_mod(c.differential(d), p) - rank_mod(c.differential(d + 1), p);
}

CriterionResult constructions(const SuiteConfig& cfg)
{
    Tally t(2, "complex constructions");
    Rng rng(cfg.seed + 2);
    for (int i = 0; i < count(cfg, 300); ++i)
        t.instance(at("instance", i), [&] {
            Ring ring = random_ring(rng);
            int lo = uniform(rng, -1, 1);
            ChainComplex s = random_free_complex(rng, ring, lo, uniform(rng, 1, 4), 3, 4);
            ChainComplex u = random_free_complex(rng, ring, lo, uniform(rng, 1, 4), 3, 4);
            ChainMap f = random_chain_map(rng, s, u, 3);

            t.expect(cone(f).check().empty(), at("cone dd = 0", i));
            t.expect(path(f).check().empty(), at("path dd = 0", i));
            t.expect(shift(s, uniform(rng, -2, 2)).check().empty(), at("shift dd = 0", i));
            t.expect(is_acyclic(cone(ChainMap::identity(s))), at("cone(id) acyclic", i));

            Cylinder cyl = cylinder(s);
            t.expect(cyl.cyl.check().empty(), at("cylinder dd = 0", i));
            ChainMap id = ChainMap::identity(s);
            t.expect(equal_maps(compose(cyl.p, cyl.i0), id), at("p i0 = id", i));
            t.expect(equal_maps(compose(cyl.p, cyl.i1), id), at("p i1 = id", i));
            t.expect(cyl.contraction.check().empty(), at("cylinder contraction", i));

            ChainComplex a = random_free_complex(rng, ring, 0, uniform(rng, 1, 3), 2, 3);
            ChainComplex b = random_free_complex(rng, ring, 0, uniform(rng, 1, 3), 2, 3);
            TotalComplex tot = total(tensor_double(a, b));
            t.expect(tot.complex.check().empty(), at("total dd = 0", i));
            // Kunneth over a prime field: Betti numbers of Tot(A (x) B) are convolutions.
            if (!ring.is_integers() && (ring.modulus() == 2 || ring.modulus() == 3))
            {
                long p = ring.modulus().convert_to<long>();
                for (int n = 0; n <= a.top() + b.top(); ++n)
                {
                    Index expect = 0;
                    for (int q = 0; q <= n; ++q)
                        expect += betti_mod(a, q, p) * betti_mod(b, n - q, p);
                    t.expect(betti_mod(tot.complex, n, p) == expect, at("Kunneth for Tot", i));
                }
            }
        });
    return t.result();
}

// ------------------------------------------------------------ 3: homotopy classes

using Maps = std::vector<IntMatrix>;

// All families of matrices with the given shapes, entries in 0..m-1.
void enumerate(const std::vector<std::pair<Index, Index>>& shapes, long m, const std::function<void(const Maps&)>& visit)
{
    Maps cur;
    for (auto [r, c] : shapes)
        cur.push_back(zero_matrix(r, c));
    std::vector<std::pair<std::size_t, std::pair<Index, Index>>> slots;
    for (std::size_t k = 0; k < shapes.size(); ++k)
        for (Index i = 0; i < shapes[k].first; ++i)
            for (Index j = 0; j < shapes[k].second; ++j)
                slots.push_back({k, {i, j}});
    while (true)
    {
        visit(cur);
        std::size_t s = 0;
        for (; s < slots.size(); ++s)
        {
            Integer& e = cur[slots[s].first](slots[s].second.first, slots[s].second.second);
            if (e + 1 < m)
            {
                e += 1;
                break;
            }
            e = 0;
        }
        if (s == slots.size())
            return;
    }
}

std::vector<long> flatten(const Ring& ring, const Maps& maps)
{
    std::vector<long> out;
    for (const auto& a : maps)
    {
        IntMatrix r = ring.reduce(a);
        for (Index i = 0; i < r.rows(); ++i)
            for (Index j = 0; j < r.cols(); ++j)
                out.push_back(r(i, j).convert_to<long>());
    }
    return out;
}

Index entries(const std::vector<std::pair<Index, Index>>& shapes)
{
    Index n = 0;
    for (auto [r, c] : shapes)
        n += r * c;
    return n;
}

CriterionResult homotopy_class_law(const SuiteConfig& cfg)
{
    Tally t(3, "homotopy classes against enumeration");
    Rng rng(cfg.seed + 3);
    static const long moduli[] = {2, 3, 4, 6};
    for (int i = 0; i < count(cfg, 50); ++i)
        t.instance(at("instance", i), [&] {
            long m = 0;
            ChainComplex a, b;
            std::vector<std::pair<Index, Index>> maps, homs;
            // Resample until brute force stays at a few thousand candidates.
            while (true)
            {
                m = moduli[uniform(rng, 0, 3)];
                Ring ring = Ring::integers_mod(m);
                a = random_free_complex(rng, ring, 0, uniform(rng, 1, 3), 2, 3);
                b = random_free_complex(rng, ring, 0, uniform(rng, 2, 3), 2, 3);
                maps.clear();
                homs.clear();
                for (int d = a.lowest(); d <= a.top(); ++d)
                {
                    maps.push_back({b.rank(d), a.rank(d)});
                    homs.push_back({b.rank(d + 1), a.rank(d)});
                }
                double budget = 20000;
                if (std::pow(double(m), double(entries(maps))) <= budget &&
                    std::pow(double(m), double(entries(homs))) <= budget && entries(maps) > 1 && entries(homs) > 0)
                    break;
            }
            const Ring& ring = a.ring();
            const int lo = a.lowest();
            auto component = [&](const Maps& f, int d) {
                return d < lo || d > a.top() ? zero_matrix(b.rank(d), a.rank(d)) : f[static_cast<std::size_t>(d - lo)];
            };

            std::vector<Maps> cycles;
            enumerate(maps, m, [&](const Maps& f) {
                for (int d = lo; d <= a.top() + 1; ++d)
                    if (!is_zero(ring.reduce(IntMatrix(b.differential(d) * component(f, d) -
                                                       component(f, d - 1) * a.differential(d)))))
                        return;
                cycles.push_back(f);
            });
            std::set<std::vector<long>> null;
            enumerate(homs, m, [&](const Maps& h) {
                Maps dh;
                for (int d = lo; d <= a.top(); ++d)
                {
                    IntMatrix x = b.differential(d + 1) * h[static_cast<std::size_t>(d - lo)];
                    if (d > lo)
                        x += h[static_cast<std::size_t>(d - 1 - lo)] * a.differential(d);
                    dh.push_back(x);
                }
                null.insert(flatten(ring, dh));
            });

            ModuleInvariants inv = invariant_factors(homotopy_classes(a, b));
            t.expect(cycles.size() % null.size() == 0, at("null-homotopic maps form a subgroup", i));
            for (long k = 1; k <= m; ++k)
            {
                std::size_t killed = 0;
                for (const Maps& f : cycles)
                {
                    Maps kf;
                    for (const auto& x : f)
                        kf.push_back(x * Integer(k));
                    killed += null.count(flatten(ring, kf));
                }
                Integer expect = 1;
                for (Index j = 0; j < inv.free_rank; ++j)
                    expect *= std::gcd(k, m);
                for (const auto& tf : inv.torsion)
                    expect *= gcd(Integer(k), tf);
                t.expect(Integer(static_cast<long>(killed / null.size())) == expect,
                         at("order profile of [A,B] over Z/" + std::to_string(m), i));
            }
        });
    return t.result();
}

// ------------------------------------------------------------ 4: lifting

bool lift_holds(const Lift& out, const ChainMap& j, const ChainMap& w, const ChainMap& phi, const ChainMap& f,
                const Homotopy& lambda)
{
    if (!out.map.check().empty() || !out.homotopy.check().empty())
        return false;
    if (!equal_maps(out.homotopy.from(), compose(w, out.map)) || !equal_maps(out.homotopy.to(), f))
        return false;
    if (!equal_maps(compose(out.map, j), phi))
        return false;
    const ChainComplex& q = j.source();
    for (int d = q.lowest(); d <= q.top(); ++d)
    {
        // dH + Hd = F - wG, checked by hand as well.
        const ChainComplex& x = w.target();
        const ChainComplex& r = j.target();
        IntMatrix lhs = x.differential(d + 1) * out.homotopy.component(d);
        if (d > r.lowest())
            lhs += out.homotopy.component(d - 1) * r.differential(d);
        if (!x.module(d).is_zero_element(lhs - f.component(d) + w.component(d) * out.map.component(d)))
            return false;
        if (!x.module(d + 1).is_zero_element(out.homotopy.component(d) * j.component(d) - lambda.component(d)))
            return false;
    }
    return true;
}

CriterionResult lifting(const SuiteConfig& cfg)
{
    Tally t(4, "lifting up to homotopy");
    Rng rng(cfg.seed + 4);
    for (int i = 0; i < count(cfg, 200); ++i)
        t.instance(at("lift", i), [&] {
            Ring ring = i % 5 == 4 ? Ring::integers_mod(4) : ZZ;
            ChainComplex yp = random_free_complex(rng, ring, 0, 3, 2);
            ChainComplex k = random_contractible(rng, ring, 0, 2, 2);
            ChainMap w = projection_off(yp, k);
            const ChainComplex& y = w.source();
            const ChainComplex& x = w.target();

            ChainComplex q = random_free_complex(rng, ring, 0, 3, 2);
            ChainMap j = random_split_mono(rng, q, 2);
            const ChainComplex& r = j.target();
            ChainMap g0 = random_chain_map(rng, r, y);
            std::vector<IntMatrix> kk = random_degree_one(rng, r, x);
            ChainMap f = add(compose(w, g0), null_homotopic(r, x, kk));
            ChainMap phi = compose(g0, j);
            HomComplex qx = hom_complex(q, x);
            std::vector<IntMatrix> z = qx.unpack_homotopy(random_hom_cycle(rng, qx, 1));
            std::vector<IntMatrix> lam;
            for (int d = q.lowest(); d <= q.top(); ++d)
                lam.push_back(kk[static_cast<std::size_t>(d - r.lowest())] * j.component(d) +
                              z[static_cast<std::size_t>(d - q.lowest())]);
            Homotopy lambda(compose(w, phi), compose(f, j), lam);
            t.expect(lambda.check().empty(), at("generated lambda", i));
            Lift out = lift_up_to_homotopy(j, w, phi, f, lambda);
            t.expect(lift_holds(out, j, w, phi, f, lambda), at("Gj = phi, Hj = lambda, dH + Hd = F - wG", i));
        });
    return t.result();
}

// ------------------------------------------------------------ 5: Whitehead

bool homotopy_between(const Homotopy& h, const ChainMap& f, const ChainMap& g)
{
    return h.check().empty() && equal_maps(h.from(), f) && equal_maps(h.to(), g);
}

CriterionResult whitehead(const SuiteConfig& cfg)
{
    Tally t(5, "Whitehead inversion");
    Rng rng(cfg.seed + 5);
    for (int i = 0; i < count(cfg, 100); ++i)
        t.instance(at("quasi-iso", i), [&] {
            Ring ring = i % 4 == 3 ? Ring::integers_mod(uniform(rng, 2, 9)) : ZZ;
            ChainMap w = random_quasi_iso(rng, ring, 2);
            t.expect(is_quasi_iso(w), at("generated map", i));
            HomotopyEquivalence e = invert_weak_equivalence(w);
            t.expect(check(e).empty(), at("library witness check", i));
            t.expect(equal_maps(e.w, w) && e.v.check().empty(), at("v is a chain map", i));
            t.expect(e.v.source() == w.target() && e.v.target() == w.source(), at("v: X -> Y", i));
            t.expect(homotopy_between(e.h, compose(e.v, w), ChainMap::identity(w.source())), at("h: vw => id", i));
            t.expect(homotopy_between(e.k, compose(w, e.v), ChainMap::identity(w.target())), at("k: wv => id", i));
        });
    return t.result();
}

// ------------------------------------------------------------ 6: derived functors

PresentedModule cyclic(const Ring& ring, long n)
{
    IntMatrix r(1, 1);
    r(0, 0) = n;
    return PresentedModule(ring, 1, r);
}

PresentedModule random_module(Rng& rng, const Ring& ring)
{
    Index g = uniform(rng, 1, 3);
    return PresentedModule(ring, g, random_matrix(rng, g, uniform(rng, 0, 3), 6));
}

// Cyclic orders of a decomposition; 0 stands for a free summand.
std::vector<Integer> orders(const ModuleInvariants& inv, const Ring& ring)
{
    std::vector<Integer> out(static_cast<std::size_t>(inv.free_rank), ring.is_integers() ? Integer(0) : ring.modulus());
    out.insert(out.end(), inv.torsion.begin(), inv.torsion.end());
    return out;
}

// M (x) N from cyclic decompositions: Z/a (x) Z/b = Z/gcd(a, b).
ModuleInvariants tensor_oracle(const PresentedModule& m, const PresentedModule& n)
{
    std::vector<PresentedModule> parts;
    for (const auto& a : orders(invariant_factors(m), m.ring))
        for (const auto& b : orders(invariant_factors(n), m.ring))
        {
            Integer g = gcd(a, b);
            parts.push_back(g == 0 ? PresentedModule(m.ring, 1) : cyclic(m.ring, g.convert_to<long>()));
        }
    return invariant_factors(direct_sum(parts));
}

// Another presentation of M: generators changed by a unimodular matrix, one
// extra generator killed by a unit relation, one redundant relation.
PresentedModule re_present(Rng& rng, const PresentedModule& m)
{
    Index g = m.generators;
    IntMatrix u = random_unimodular(rng, g + 1);
    IntMatrix rel = zero_matrix(g + 1, m.relations.cols() + 2);
    rel.topLeftCorner(g, m.relations.cols()) = m.relations;
    rel(g, m.relations.cols()) = 1;
    rel.col(m.relations.cols() + 1) = rel.leftCols(m.relations.cols() + 1) * random_matrix(rng, m.relations.cols() + 1, 1, 2);
    // coker(u R) is isomorphic to coker(R) through u.
    return PresentedModule(m.ring, g + 1, m.ring.reduce(IntMatrix(u * rel)));
}

// Contractible Z^k --1--> Z^k added in degrees (d + 1, d).
ChainComplex pad(const ChainComplex& p, int d, Index k)
{
    ChainComplex c = ChainComplex::free(p.ring(), d, {k, k}, {identity_matrix(k)});
    return direct_sum(p, c);
}

CriterionResult derived(const SuiteConfig& cfg)
{
    Tally t(6, "derived functors");
    Rng rng(cfg.seed + 6);
    const Ring z4 = Ring::integers_mod(4);
    t.instance("fixed values", [&] {
        t.expect(invariant_factors(tor(cyclic(ZZ, 2), cyclic(ZZ, 2), 1, 4)).str() == "(0; 2)", "Tor_1(Z/2, Z/2)");
        t.expect(invariant_factors(tor(cyclic(ZZ, 2), cyclic(ZZ, 3), 1, 4)).is_zero(), "Tor_1(Z/2, Z/3)");
        for (int n = 0; n <= 6; ++n)
            t.expect(invariant_factors(tor(cyclic(z4, 2), cyclic(z4, 2), n, 7)).str() == "(0; 2)",
                     "Tor_" + std::to_string(n) + "(Z/2, Z/2) over Z/4");
    });
    for (int i = 0; i < count(cfg, 50); ++i)
        t.instance(at("Tor_0 pair", i), [&] {
            Ring ring = i % 3 == 2 ? Ring::integers_mod(uniform(rng, 2, 12)) : ZZ;
            PresentedModule m = random_module(rng, ring), n = random_module(rng, ring);
            ModuleInvariants expect = tensor_oracle(m, n);
            t.expect(invariant_factors(tor(m, n, 0, 3)) == expect, at("Tor_0 = M (x) N", i));
            t.expect(invariant_factors(tensor_product(m, n)) == expect, at("tensor_product", i));
        });
    for (int i = 0; i < count(cfg, 50); ++i)
        t.instance(at("resolution pair", i), [&] {
            Ring ring = i % 2 ? Ring::integers_mod(uniform(rng, 2, 12)) : ZZ;
            PresentedModule m = random_module(rng, ring), n = random_module(rng, ring);
            int deg = uniform(rng, 0, 3);
            Resolution r1 = free_resolution_module(m, 6);
            Resolution r2 = free_resolution_module(re_present(rng, m), 6);
            t.expect(invariant_factors(homology(r2.model, 0)) == invariant_factors(m), at("re-presentation", i));
            ChainComplex p2 = pad(r2.model, uniform(rng, 0, 3), uniform(rng, 1, 2));
            t.expect(check(r1).empty() && check(r2).empty(), at("resolutions certified", i));
            ModuleInvariants a = invariant_factors(homology(tensor(r1.model, n), deg));
            ModuleInvariants b = invariant_factors(homology(tensor(p2, n), deg));
            t.expect(a == b, at("Tor independent of the resolution", i));
            t.expect(a == invariant_factors(tor(m, n, deg, 6)), at("tor() agrees", i));
        });
    return t.result();
}

// ------------------------------------------------------------ 7: filtered

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

FilteredComplex random_two_weight(Rng& rng)
{
    ChainComplex s = random_free_complex(rng, ZZ, 0, 2, 2);
    ChainComplex u = random_free_complex(rng, ZZ, 0, 3, 2);
    ChainComplex c = cone(random_chain_map(rng, s, u));
    std::vector<std::vector<int>> w;
    for (int d = c.lowest(); d <= c.top(); ++d)
        w.push_back(concat(std::vector<int>(static_cast<std::size_t>(s.rank(d - 1)), 1),
                           std::vector<int>(static_cast<std::size_t>(u.rank(d)), 0)));
    return FilteredComplex(c, w);
}

// Relations from boundaries plus a multiple of the cycles.
FilteredComplex random_presented(Rng& rng)
{
    FilteredComplex f = random_two_weight(rng);
    const ChainComplex& b = f.base();
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs;
    std::vector<std::vector<int>> w;
    for (int d = b.lowest(); d <= b.top(); ++d)
    {
        IntMatrix rel = hstack({b.differential(d + 1), kernel_basis(b.differential(d), ZZ) * Integer(uniform(rng, 0, 3))},
                               b.rank(d));
        mods.emplace_back(ZZ, b.rank(d), rel);
        if (d > b.lowest())
            diffs.push_back(b.differential(d));
        w.push_back(f.weights(d));
    }
    return FilteredComplex(ChainComplex(ZZ, b.lowest(), mods, diffs), w);
}

FilteredComplex random_filtered_contractible(Rng& rng)
{
    ChainComplex a = random_contractible(rng, ZZ, 0, 2, 1);
    ChainComplex b = random_contractible(rng, ZZ, 0, 2, 1);
    ChainComplex c = direct_sum(a, b);
    std::vector<std::vector<int>> w;
    for (int d = c.lowest(); d <= c.top(); ++d)
        w.push_back(concat(std::vector<int>(static_cast<std::size_t>(a.rank(d)), 0),
                           std::vector<int>(static_cast<std::size_t>(b.rank(d)), 1)));
    return FilteredComplex(c, w);
}

FilteredComplex sum(const FilteredComplex& a, const FilteredComplex& b)
{
    ChainComplex c = direct_sum(a.base(), b.base());
    std::vector<std::vector<int>> w;
    for (int d = c.lowest(); d <= c.top(); ++d)
        w.push_back(concat(a.weights(d), b.weights(d)));
    return FilteredComplex(c, w);
}

std::vector<IntMatrix> filtered_degree_one(Rng& rng, const FilteredComplex& s, const FilteredComplex& u)
{
    std::vector<IntMatrix> k = random_degree_one(rng, s.base(), u.base());
    for (int d = s.base().lowest(); d <= s.base().top(); ++d)
    {
        IntMatrix& m = k[static_cast<std::size_t>(d - s.base().lowest())];
        for (Index i = 0; i < m.rows(); ++i)
            for (Index j = 0; j < m.cols(); ++j)
                if (u.weights(d + 1)[static_cast<std::size_t>(i)] > s.weights(d)[static_cast<std::size_t>(j)])
                    m(i, j) = 0;
    }
    return k;
}

bool filtered_lift_holds(const Lift& out, const FilteredMap& w, const FilteredMap& f)
{
    return out.map.check().empty() && out.homotopy.check().empty() &&
           FilteredMap{f.source, w.source, out.map}.check().empty() && is_filtered(f.source, w.target, out.homotopy) &&
           equal_maps(out.homotopy.from(), compose(w.map, out.map)) && equal_maps(out.homotopy.to(), f.map);
}

CriterionResult filtered(const SuiteConfig& cfg)
{
    Tally t(7, "filtered suite");
    Rng rng(cfg.seed + 7);
    for (int i = 0; i < count(cfg, 50); ++i)
        t.instance(at("filtered resolution", i), [&] {
            FilteredComplex x = random_presented(rng);
            FilteredResolution r = filtered_resolution(x, 8);
            t.expect(check(r).empty(), at("library check", i));
            t.expect(r.model.is_weighted_free(), at("weighted-free model", i));
            DegreeRange wr = r.model.weight_range();
            for (int p = std::min(wr.lo, 0); p <= std::max(wr.hi, 1); ++p)
            {
                t.expect(gr(r.model, p).is_free(), at("Gr_p P free", i));
                t.expect(is_acyclic(cone(w_sub(r.augmentation, p)), r.certified), at("cone of W_p(eps) acyclic", i));
            }
        });
    for (int i = 0; i < count(cfg, 50); ++i)
        t.instance(at("filtered lift", i), [&] {
            FilteredComplex p = random_two_weight(rng);
            FilteredComplex x = sum(p, random_filtered_contractible(rng));
            FilteredComplex y = sum(p, random_filtered_contractible(rng));
            const ChainComplex& pc = p.base();
            std::vector<IntMatrix> ix, oy;
            for (int d = pc.lowest(); d <= pc.top(); ++d)
            {
                IntMatrix a = zero_matrix(x.base().rank(d), pc.rank(d));
                a.topRows(pc.rank(d)) = identity_matrix(pc.rank(d));
                ix.push_back(a);
            }
            for (int d = y.base().lowest(); d <= y.base().top(); ++d)
            {
                IntMatrix a = zero_matrix(pc.rank(d), y.base().rank(d));
                a.leftCols(pc.rank(d)) = identity_matrix(pc.rank(d));
                oy.push_back(a);
            }
            ChainMap into_x(pc, x.base(), ix), off_y(y.base(), pc, oy);
            FilteredMap w{y, x, add(compose(into_x, off_y), null_homotopic(y.base(), x.base(), filtered_degree_one(rng, y, x)))};
            t.expect(w.check().empty() && is_filtered_quasi_iso(w), at("generated w", i));
            FilteredMap f{p, x, add(into_x, null_homotopic(pc, x.base(), filtered_degree_one(rng, p, x)))};

            Lift g0 = filtered_lift(w, f);
            t.expect(filtered_lift_holds(g0, w, f), at("lift exists", i));
            std::vector<IntMatrix> k2 = filtered_degree_one(rng, p, x);
            FilteredMap f2{p, x, add(f.map, null_homotopic(pc, x.base(), k2))};
            Lift g1 = filtered_lift(w, f2);
            t.expect(filtered_lift_holds(g1, w, f2), at("second lift exists", i));
            Homotopy link = concatenate(concatenate(g0.homotopy, Homotopy(f.map, f2.map, k2)), reverse(g1.homotopy));
            Homotopy theta = filtered_homotopy_from_image(w, FilteredMap{p, y, g0.map}, FilteredMap{p, y, g1.map}, link);
            t.expect(homotopy_between(theta, g0.map, g1.map) && is_filtered(p, y, theta), at("injectivity companion", i));
        });
    t.instance("stored instance", [&] {
        // Z --1--> Z with weights 1 over 0 is acyclic, but W_0 = Z[0] is not.
        IntMatrix one = identity_matrix(1);
        FilteredComplex x(ChainComplex::free(ZZ, 0, {1, 1}, {one}), {{0}, {1}});
        FilteredComplex zero = FilteredComplex::constant(ChainComplex::free(ZZ, 0, {0, 0}, {IntMatrix(0, 0)}));
        FilteredMap f{x, zero, ChainMap::zero(x.base(), zero.base())};
        t.expect(is_quasi_iso(f.map), "stored map is a quasi-isomorphism");
        t.expect(!is_filtered_quasi_iso(f), "stored map is not a filtered quasi-isomorphism");
        t.expect(!is_acyclic(w_sub(x, 0).complex.base()), "W_0 of the stored source has homology");
    });
    return t.result();
}

// ------------------------------------------------------------ 8: bar construction

CriterionResult bar_suite(const SuiteConfig& cfg)
{
    Tally t(8, "bar and cotriple suite");
    Rng rng(cfg.seed + 8);
    const FiniteCategory one = FiniteCategory::one_object(), arrow = FiniteCategory::arrow();
    const int reps = std::min(count(cfg, 3), 3);
    for (int i = 0; i < reps; ++i)
    {
        t.instance(at("one-object", i), [&] {
            ChainComplex c = random_free_complex(rng, ZZ, 0, 3, 2);
            FunctorComplex k = FunctorComplex::constant(one, c);
            ModelsCotriple g{one, {0}};
            t.expect(check_simplicial_identities(g, k, 8).empty(), at("simplicial identities, one object", i));
            t.expect(check(contraction_for_GK(g, k, 6)).empty(), at("contraction, one object", i));
            Bar b = bar(g, k, 6);
            for (int d = 0; d <= 5; ++d)
                t.expect(invariant_factors(homology(b.complex.at(0), d)) == invariant_factors(homology(c, d)),
                         at("H_d(BK) = H_d(K), one object", i));
        });
        t.instance(at("arrow", i), [&] {
            FunctorComplex k = random_functor(rng, arrow, ZZ, 2, 1);
            for (std::vector<int> models : {std::vector<int>{0}, std::vector<int>{0, 1}})
            {
                ModelsCotriple g{arrow, models};
                t.expect(check_simplicial_identities(g, k, 8).empty(), at("simplicial identities, arrow", i));
                t.expect(check(contraction_for_GK(g, k, 6)).empty(), at("contraction, arrow", i));
            }
            ModelsCotriple source{arrow, {0}};
            FunctorComplex gk = apply(source, FunctorComplex::constant(arrow, random_free_complex(rng, ZZ, 0, 2, 2)));
            CofibrancyResult r = is_g_cofibrant(source, gk, 4);
            t.expect(r.cofibrant && r.witness && check(r.bar.augmentation, *r.witness, 4, StrongClass::natural).empty(),
                     at("GK_0 cofibrant", i));
            // Constant functors carry a section of eps when the source is the model.
            FunctorComplex constant = FunctorComplex::constant(arrow, random_free_complex(rng, ZZ, 0, 2, 2));
            auto section = homotopy_inverse(counit(source, constant), constant.top() + 1, StrongClass::natural);
            t.expect(section.has_value(), at("section of eps", i));
            CofibrancyResult s = is_g_cofibrant(source, constant, 4);
            t.expect(s.cofibrant && s.witness && check(s.bar.augmentation, *s.witness, 4, StrongClass::natural).empty(),
                     at("section-bearing K cofibrant", i));
        });
    }
    return t.result();
}

// ------------------------------------------------------------ 9: acyclic models

ChainComplex point(const Ring& ring, Index rank)
{
    return ChainComplex::free(ring, 0, {rank}, {});
}

FunctorComplex on_arrow(const ChainComplex& k0, const ChainComplex& k1, const std::vector<IntMatrix>& a)
{
    return FunctorComplex(FiniteCategory::arrow(), {k0, k1},
                          {ChainMap::identity(k0), ChainMap::identity(k1), ChainMap(k0, k1, a)});
}

// [K, L] for L in degree 0 is the set of natural chain maps; enumerated literally.
std::set<std::vector<long>> natural_maps_to_degree_zero(const FunctorComplex& k, const FunctorComplex& l, long m)
{
    const FiniteCategory& c = k.category();
    const Ring& ring = k.ring();
    std::vector<std::pair<Index, Index>> shapes;
    for (int x = 0; x < c.object_count(); ++x)
        shapes.push_back({l.at(x).rank(0), k.at(x).rank(0)});
    std::set<std::vector<long>> out;
    enumerate(shapes, m, [&](const Maps& phi) {
        for (int x = 0; x < c.object_count(); ++x)
            if (!is_zero(ring.reduce(IntMatrix(phi[static_cast<std::size_t>(x)] * k.at(x).differential(1)))))
                return;
        for (int a = 0; a < c.morphism_count(); ++a)
        {
            int s = c.morphism(a).source, u = c.morphism(a).target;
            IntMatrix lhs = phi[static_cast<std::size_t>(u)] * k.map(a).component(0);
            IntMatrix rhs = l.map(a).component(0) * phi[static_cast<std::size_t>(s)];
            if (!is_zero(ring.reduce(IntMatrix(lhs - rhs))))
                return;
        }
        out.insert(flatten(ring, phi));
    });
    return out;
}

CriterionResult acyclic_models(const SuiteConfig& cfg)
{
    Tally t(9, "acyclic models");
    Rng rng(cfg.seed + 9);
    FiniteCategory arrow = FiniteCategory::arrow();
    ModelsCotriple source{arrow, {0}};
    const int reps = std::min(count(cfg, 6), 6);
    for (int i = 0; i < reps; ++i)
        t.instance(at("arrow, enumerated", i), [&] {
            long m = i % 2 ? 3 : 2;
            Ring ring = Ring::integers_mod(m);
            ChainComplex k0 = random_free_complex(rng, ring, 0, 2, 2);
            while (k0.rank(0) == 0)
                k0 = random_free_complex(rng, ring, 0, 2, 2);
            FunctorComplex k = apply(source, FunctorComplex::constant(arrow, k0));
            Index p = uniform(rng, 1, 2), q = uniform(rng, 1, 2);
            FunctorComplex l = on_arrow(point(ring, p), point(ring, q), {ring.reduce(random_matrix(rng, q, p, 2))});
            AcyclicModelsReport rep = acyclic_models_check(source, k, l, k.top() + 2);

            // Source side: natural chain maps K -> L.  Target side: maps H_0 K(0) -> L(0),
            // i.e. matrices vanishing on the image of d_1.  H_0 rho restricts to object 0.
            std::set<std::vector<long>> classes = natural_maps_to_degree_zero(k, l, m);
            std::set<std::vector<long>> target;
            enumerate({{p, k.at(0).rank(0)}}, m, [&](const Maps& psi) {
                if (is_zero(ring.reduce(IntMatrix(psi[0] * k.at(0).differential(1)))))
                    target.insert(flatten(ring, psi));
            });
            std::set<std::vector<long>> image;
            const std::size_t head = static_cast<std::size_t>(p * k.at(0).rank(0));
            for (const auto& phi : classes)
                image.insert(std::vector<long>(phi.begin(), phi.begin() + static_cast<long>(head)));
            t.expect(image.size() == classes.size(), at("H_0 rho injective by enumeration", i));
            t.expect(image == target, at("H_0 rho surjective by enumeration", i));
            Integer size = 1;
            for (Index j = 0; j < rep.direct.source.free_rank; ++j)
                size *= m;
            t.expect(rep.direct.source.torsion.empty() && size == Integer(static_cast<long>(classes.size())),
                     at("library [K, L] matches the enumeration", i));
            t.expect(rep.direct.iso && rep.bijective, at("library reports H_0 rho bijective", i));
        });
    for (int i = 0; i < reps; ++i)
        t.instance(at("arrow over Z", i), [&] {
            ChainComplex k0 = random_free_complex(rng, ZZ, 0, 2, 2);
            FunctorComplex k = apply(source, FunctorComplex::constant(arrow, k0));
            Index p = uniform(rng, 1, 2), q = uniform(rng, 1, 2);
            FunctorComplex l = on_arrow(point(ZZ, p), point(ZZ, q), {random_matrix(rng, q, p, 2)});
            AcyclicModelsReport rep = acyclic_models_check(source, k, l, k.top() + 2);
            ModuleInvariants h0 = invariant_factors(homology(k0, 0));
            t.expect(rep.direct.source.free_rank == p * h0.free_rank && rep.direct.source.torsion.empty(),
                     at("[K, L] = Hom(H_0 K_0, Z^p)", i));
            t.expect(rep.direct.target == rep.direct.source, at("both ends agree", i));
            t.expect(rep.direct.iso && rep.bijective, at("H_0 rho bijective", i));
        });

    std::vector<FiniteCategory> cats = {arrow, FiniteCategory::poset(3, {{0, 1}, {1, 2}}),
                                        FiniteCategory::poset(3, {{0, 1}, {0, 2}})};
    for (int i = 0; i < count(cfg, 20); ++i)
        t.instance(at("restriction", i), [&] {
            const FiniteCategory& c = cats[static_cast<std::size_t>(i) % cats.size()];
            std::vector<int> models;
            for (int x = 0; x < c.object_count(); ++x)
                if (uniform(rng, 0, 1))
                    models.push_back(x);
            if (models.empty())
                models.push_back(uniform(rng, 0, c.object_count() - 1));
            ModelsCotriple g{c, models};
            FunctorComplex k = apply(g, FunctorComplex::constant(c, random_free_complex(rng, ZZ, 0, 2, 1)));
            FunctorComplex l = random_functor(rng, c, ZZ, 3, 1);
            int bound = k.top() + 2;
            MapStatus r = restriction_check(g, k, l, bound);
            Subcategory sub = full_subcategory(c, models);
            ModuleInvariants whole = invariant_factors(natural_transformation_classes(k, l, bound));
            ModuleInvariants part =
                invariant_factors(natural_transformation_classes(restrict_to(k, sub), restrict_to(l, sub), bound));
            t.expect(r.source == whole && r.target == part, at("restriction ends recomputed", i));
            t.expect(whole == part, at("[K, L] and [K|M, L|M] have equal invariants", i));
            t.expect(r.well_defined && r.iso, at("restriction is an isomorphism", i));
        });
    return t.result();
}

}  // namespace

std::vector<int> library_criteria()
{
    return {1, 2, 3, 4, 5, 6, 7, 8, 9};
}

CriterionResult run_criterion(int id, const SuiteConfig& config)
{
    switch (id)
    {
        case 1: return exact_algebra(config);
        case 2: return constructions(config);
        case 3: return homotopy_class_law(config);
        case 4: return lifting(config);
        case 5: return whitehead(config);
        case 6: return derived(config);
        case 7: return filtered(config);
        case 8: return bar_suite(config);
        case 9: return acyclic_models(config);
        default: throw PreconditionError("no library suite " + std::to_string(id));
    }
}

std::string format(const CriterionResult& r)
{
    std::ostringstream os;
    os << "criterion " << r.id << " (" << r.title << "): " << (r.pass ? "PASS" : "FAIL") << ", " << r.checked
       << (r.checked == 1 ? " instance" : " instances");
    if (!r.pass)
        os << "; " << r.detail;
    return os.str();
}

}  // namespace cekit
