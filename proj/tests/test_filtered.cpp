#include <catch_amalgamated.hpp>

#include "cekit/filtered.hpp"
#include "cekit/random.hpp"

using namespace cekit;

namespace {

const Ring ZZ = Ring::integers();

IntMatrix mat(Index r, Index c, std::initializer_list<long> values)
{
    IntMatrix m(r, c);
    auto it = values.begin();
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j)
            m(i, j) = Integer(*it++);
    return m;
}

std::string inv(const PresentedModule& m)
{
    return invariant_factors(m).str();
}

// Z --id--> Z in degrees 1, 0 with weights 1 and 0.
FilteredComplex staircase()
{
    return FilteredComplex(ChainComplex::free(ZZ, 0, {1, 1}, {mat(1, 1, {1})}), {{0}, {1}});
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// cone(f: S -> T) with the S part in weight 1 and T in weight 0.
FilteredComplex random_two_weight(Rng& rng)
{
    ChainComplex s = random_free_complex(rng, ZZ, 0, 2, 2);
    ChainComplex t = random_free_complex(rng, ZZ, 0, 3, 2);
    ChainComplex c = cone(random_chain_map(rng, s, t));
    std::vector<std::vector<int>> w;
    for (int d = c.lowest(); d <= c.top(); ++d)
        w.push_back(concat(std::vector<int>(static_cast<std::size_t>(s.rank(d - 1)), 1),
                           std::vector<int>(static_cast<std::size_t>(t.rank(d)), 0)));
    return FilteredComplex(c, w);
}

// Filtered contractible: cone(id) in weight 0 plus cone(id) in weight 1.
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

// Random degree-one maps with weight-raising entries cleared.
std::vector<IntMatrix> filtered_degree_one(Rng& rng, const FilteredComplex& s, const FilteredComplex& t)
{
    std::vector<IntMatrix> k = random_degree_one(rng, s.base(), t.base());
    for (int d = s.base().lowest(); d <= s.base().top(); ++d)
    {
        IntMatrix& m = k[static_cast<std::size_t>(d - s.base().lowest())];
        for (Index i = 0; i < m.rows(); ++i)
            for (Index j = 0; j < m.cols(); ++j)
                if (t.weights(d + 1)[static_cast<std::size_t>(i)] > s.weights(d)[static_cast<std::size_t>(j)])
                    m(i, j) = 0;
    }
    return k;
}

// Presented two-weight complex: cycles and boundaries feed the relations.
FilteredComplex random_presented(Rng& rng)
{
    FilteredComplex f = random_two_weight(rng);
    const ChainComplex& b = f.base();
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs;
    for (int d = b.lowest(); d <= b.top(); ++d)
    {
        IntMatrix rel = hstack({b.differential(d + 1), kernel_basis(b.differential(d), ZZ) * Integer(uniform(rng, 0, 3))},
                               b.rank(d));
        mods.emplace_back(ZZ, b.rank(d), rel);
        if (d > b.lowest())
            diffs.push_back(b.differential(d));
    }
    std::vector<std::vector<int>> w;
    for (int d = b.lowest(); d <= b.top(); ++d)
        w.push_back(f.weights(d));
    return FilteredComplex(ChainComplex(ZZ, b.lowest(), mods, diffs), w);
}

void check_filtered_lift(const Lift& out, const FilteredMap& w, const FilteredMap& f)
{
    CHECK(out.map.check().empty());
    CHECK(out.homotopy.check().empty());
    CHECK((FilteredMap{f.source, w.source, out.map}.check().empty()));
    CHECK(is_filtered(f.source, w.target, out.homotopy));
    CHECK(equal_maps(out.homotopy.from(), compose(w.map, out.map)));
    CHECK(equal_maps(out.homotopy.to(), f.map));
}

}  // namespace

TEST_CASE("w_sub and gr on free complexes")
{
    FilteredComplex x = staircase();
    REQUIRE(x.check().empty());
    WeightPiece all = w_sub(x, 5);
    CHECK(all.complex.base() == x.base());
    WeightPiece none = w_sub(x, -1);
    CHECK(none.complex.base().rank(0) == 0);
    CHECK(none.complex.base().rank(1) == 0);

    WeightPiece w0 = w_sub(x, 0);
    CHECK(w0.complex.base().rank(0) == 1);
    CHECK(w0.complex.base().rank(1) == 0);
    CHECK(inv(homology(w0.complex.base(), 0)) == "(1; )");
    CHECK(w0.inclusion.check().empty());

    // Trivial filtration.
    FilteredComplex t = FilteredComplex::constant(x.base());
    CHECK(gr(t, 0) == x.base());
    CHECK(gr(t, 1).rank(0) == 0);

    // Weighted basis: Gr_p is free on the weight-p generators.
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial)
    {
        FilteredComplex r = random_two_weight(rng);
        REQUIRE(r.check().empty());
        for (int p = 0; p <= 1; ++p)
        {
            ChainComplex g = gr(r, p);
            CHECK(g.check().empty());
            CHECK(g.is_free());
            for (int d = g.lowest(); d <= g.top(); ++d)
            {
                Index n = 0;
                for (int v : r.weights(d))
                    n += v == p ? 1 : 0;
                CHECK(g.rank(d) == n);
            }
            WeightPiece piece = w_sub(r, p);
            CHECK(piece.complex.check().empty());
            CHECK(piece.inclusion.check().empty());
        }
        // W_0 is the T summand of the cone.
        ChainComplex w0b = w_sub(r, 0).complex.base();
        for (int d = w0b.lowest() + 1; d <= w0b.top(); ++d)
        {
            const std::vector<Index> lo = r.low(d, 0), below = r.low(d - 1, 0);
            IntMatrix expect(static_cast<Index>(below.size()), static_cast<Index>(lo.size()));
            for (std::size_t i = 0; i < below.size(); ++i)
                for (std::size_t j = 0; j < lo.size(); ++j)
                    expect(static_cast<Index>(i), static_cast<Index>(j)) = r.base().differential(d)(below[i], lo[j]);
            CHECK(w0b.differential(d) == expect);
        }
    }
}

TEST_CASE("w_sub and gr on a presented degree")
{
    // Degree 0: generators a (weight 0), b (weight 1) modulo 2a + 3b.
    // Degree 1: c (weight 1) with dc = a.
    PresentedModule m0(ZZ, 2, mat(2, 1, {2, 3}));
    ChainComplex c(ZZ, 0, {m0, PresentedModule(ZZ, 1)}, {mat(2, 1, {1, 0})});
    FilteredComplex x(c, {{0, 1}, {1}});
    REQUIRE(x.check().empty());

    ChainComplex w0 = w_sub(x, 0).complex.base();
    CHECK(inv(w0.module(0)) == "(1; )");
    CHECK(w0.rank(1) == 0);

    ChainComplex g1 = gr(x, 1);
    CHECK(g1.check().empty());
    CHECK(inv(g1.module(0)) == "(0; 3)");
    CHECK(inv(homology(g1, 0)) == "(0; 3)");
    CHECK(inv(homology(g1, 1)) == "(1; )");
    CHECK(is_zero(g1.differential(1)));

    // Multiples of a lie in W_0, b does not, and 2a + 3b is zero.
    CHECK(x.in_weight(0, 0, mat(2, 1, {5, 0})));
    CHECK(!x.in_weight(0, 0, mat(2, 1, {0, 1})));
    CHECK(x.in_weight(0, 0, mat(2, 1, {2, 3})));
    CHECK(x.coordinates(0, 0, mat(2, 1, {2, 3})) == mat(1, 1, {0}));
}

TEST_CASE("is_filtered_quasi_iso")
{
    FilteredComplex x = staircase();
    FilteredMap id{x, x, ChainMap::identity(x.base())};
    CHECK(is_filtered_quasi_iso(id));

    // Acyclic, so the zero map is a quasi-isomorphism, but W_0 X = Z[0].
    FilteredComplex zero = FilteredComplex::constant(ChainComplex::free(ZZ, 0, {0, 0}, {IntMatrix(0, 0)}));
    FilteredMap f{x, zero, ChainMap::zero(x.base(), zero.base())};
    CHECK(is_quasi_iso(f.map));
    CHECK(!is_filtered_quasi_iso(f));

    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial)
    {
        FilteredCylinder cyl = filtered_cylinder(random_two_weight(rng));
        CHECK(is_filtered_quasi_iso(cyl.p));
        CHECK(is_filtered_quasi_iso(cyl.i0));
    }
}

TEST_CASE("filtered_cylinder")
{
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial)
    {
        FilteredComplex x = random_two_weight(rng);
        FilteredCylinder c = filtered_cylinder(x);
        CHECK(c.cyl.check().empty());
        CHECK(c.i0.check().empty());
        CHECK(c.i1.check().empty());
        CHECK(c.p.check().empty());
        ChainMap id = ChainMap::identity(x.base());
        CHECK(equal_maps(compose(c.p.map, c.i0.map), id));
        CHECK(equal_maps(compose(c.p.map, c.i1.map), id));
        CHECK(c.contraction.check().empty());
        CHECK(is_filtered(c.cyl, c.cyl, c.contraction));
        CHECK(equal_maps(c.contraction.from(), compose(c.i0.map, c.p.map)));
    }
}

TEST_CASE("find_filtered_homotopy")
{
    FilteredComplex x = staircase();
    FilteredMap id{x, x, ChainMap::identity(x.base())};
    FilteredMap zero{x, x, ChainMap::zero(x.base(), x.base())};

    auto same = find_filtered_homotopy(id, id);
    REQUIRE(same);
    CHECK(is_zero(same->component(0)));

    // The only homotopy id => 0 sends the weight-0 generator to weight 1.
    CHECK(find_homotopy(id.map, zero.map));
    CHECK(!find_filtered_homotopy(id, zero));

    // Filtered cone(id) with both copies carrying the weights of X.
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial)
    {
        FilteredComplex y = random_two_weight(rng);
        ChainComplex c = cone(ChainMap::identity(y.base()));
        std::vector<std::vector<int>> w;
        for (int d = c.lowest(); d <= c.top(); ++d)
            w.push_back(concat(y.weights(d - 1), y.weights(d)));
        FilteredComplex fc(c, w);
        REQUIRE(fc.check().empty());
        auto h = find_filtered_homotopy(FilteredMap{fc, fc, ChainMap::identity(c)},
                                        FilteredMap{fc, fc, ChainMap::zero(c, c)});
        REQUIRE(h);
        CHECK(h->check().empty());
        CHECK(is_filtered(fc, fc, *h));
    }
}

TEST_CASE("filtered_lift special cases")
{
    Rng rng(13);
    FilteredComplex x = random_two_weight(rng);
    FilteredComplex p = random_two_weight(rng);
    FilteredMap f{p, x, ChainMap::zero(p.base(), x.base())};
    auto k = filtered_degree_one(rng, p, x);
    f.map = null_homotopic(p.base(), x.base(), k);
    REQUIRE(f.check().empty());
    FilteredMap id{x, x, ChainMap::identity(x.base())};
    Lift same = filtered_lift(id, f);
    CHECK(equal_maps(same.map, f.map));
    check_filtered_lift(same, id, f);

    // Trivial filtration: one stage.
    for (int trial = 0; trial < 10; ++trial)
    {
        ChainMap w = random_quasi_iso(rng, ZZ, 2);
        ChainComplex q = random_free_complex(rng, ZZ, 0, 3, 2);
        FilteredComplex pq = FilteredComplex::constant(q), ys = FilteredComplex::constant(w.source()),
                        xs = FilteredComplex::constant(w.target());
        FilteredMap fw{ys, xs, w};
        FilteredMap ff{pq, xs, random_chain_map(rng, q, w.target())};
        check_filtered_lift(filtered_lift(fw, ff), fw, ff);
    }
}

TEST_CASE("filtered_lift on two-weight instances with the injectivity companion")
{
    Rng rng(17);
    for (int trial = 0; trial < 25; ++trial)
    {
        FilteredComplex p = random_two_weight(rng);
        FilteredComplex x = sum(p, random_filtered_contractible(rng));
        FilteredComplex y = sum(p, random_filtered_contractible(rng));
        const ChainComplex& pc = p.base();

        // w = (into X) o (off Y) + D(k), f = (into X) + D(k').
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
        ChainMap into_x(pc, x.base(), ix);
        ChainMap off_y(y.base(), pc, oy);
        REQUIRE(into_x.check().empty());
        REQUIRE(off_y.check().empty());

        ChainMap wm = add(compose(into_x, off_y), null_homotopic(y.base(), x.base(), filtered_degree_one(rng, y, x)));
        FilteredMap w{y, x, wm};
        REQUIRE(w.check().empty());
        REQUIRE(is_filtered_quasi_iso(w));
        std::vector<IntMatrix> kf = filtered_degree_one(rng, p, x);
        FilteredMap f{p, x, add(into_x, null_homotopic(pc, x.base(), kf))};
        REQUIRE(f.check().empty());

        Lift g0 = filtered_lift(w, f);
        check_filtered_lift(g0, w, f);

        // A second lift of a filtered-homotopic f', then the companion.
        std::vector<IntMatrix> k2 = filtered_degree_one(rng, p, x);
        FilteredMap f2{p, x, add(f.map, null_homotopic(pc, x.base(), k2))};
        Lift g1 = filtered_lift(w, f2);
        check_filtered_lift(g1, w, f2);
        Homotopy link = concatenate(concatenate(g0.homotopy, Homotopy(f.map, f2.map, k2)), reverse(g1.homotopy));
        REQUIRE(link.check().empty());
        REQUIRE(is_filtered(p, x, link));
        FilteredMap a{p, y, g0.map}, b{p, y, g1.map};
        Homotopy theta = filtered_homotopy_from_image(w, a, b, link);
        CHECK(theta.check().empty());
        CHECK(is_filtered(p, y, theta));
        CHECK(equal_maps(theta.from(), g0.map));
        CHECK(equal_maps(theta.to(), g1.map));
    }
}

TEST_CASE("filtered_resolution")
{
    Rng rng(19);
    FilteredComplex free = random_two_weight(rng);
    FilteredResolution same = filtered_resolution(free, 6);
    CHECK(same.model.base() == free.base());
    CHECK(equal_maps(same.augmentation.map, ChainMap::identity(free.base())));

    PresentedModule z2(ZZ, 1, mat(1, 1, {2}));
    FilteredComplex x = FilteredComplex::constant(ChainComplex::concentrated(z2, 0), 3);
    FilteredResolution r = filtered_resolution(x, 6);
    CHECK(r.model.base() == ChainComplex::free(ZZ, 0, {1, 1}, {mat(1, 1, {2})}));
    CHECK(r.model.weights(0) == std::vector<int>{3});
    CHECK(r.model.weights(1) == std::vector<int>{3});
    CHECK(check(r).empty());
}

TEST_CASE("filtered_resolution on presented two-weight complexes")
{
    Rng rng(23);
    int presented = 0;
    for (int trial = 0; trial < 25; ++trial)
    {
        FilteredComplex x = random_presented(rng);
        REQUIRE(x.check().empty());
        presented += x.is_weighted_free() ? 0 : 1;
        FilteredResolution r = filtered_resolution(x, 8);
        CHECK(check(r).empty());
        CHECK(r.model.is_weighted_free());
        CHECK(r.model.check().empty());
        CHECK(is_filtered_quasi_iso(r.augmentation, r.certified));
        for (int p = 0; p <= 1; ++p)
            CHECK(gr(r.model, p).is_free());
    }    CHECK(presented >= 15);
}

TEST_CASE("filtered resolutions from different choices are equivalent")
{
    Rng rng(29);
    for (int trial = 0; trial < 8; ++trial)
    {
        FilteredComplex x = random_presented(rng);
        FilteredResolution a = filtered_resolution(x, 8);
        FilteredResolution b = filtered_resolution(x, 8, 1);
        CHECK(check(b).empty());
        CHECK(filtered_models_equivalent(a, b));
    }
}
