#include <catch_amalgamated.hpp>

#include "cekit/homotopy.hpp"
#include "cekit/random.hpp"
#include "cekit/resolution.hpp"

using namespace cekit;

namespace {

const Ring ZZ = Ring::integers();
const Ring Z4 = Ring::integers_mod(4);

IntMatrix mat(Index r, Index c, std::initializer_list<long> values)
{
    IntMatrix m(r, c);
    auto it = values.begin();
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j)
            m(i, j) = Integer(*it++);
    return m;
}

PresentedModule cyclic(const Ring& ring, long n)
{
    return PresentedModule(ring, 1, mat(1, 1, {n}));
}

std::string inv(const PresentedModule& m)
{
    return invariant_factors(m).str();
}

// Random presented module over the ring with up to three generators.
PresentedModule random_module(Rng& rng, const Ring& ring)
{
    Index g = uniform(rng, 1, 3);
    return PresentedModule(ring, g, random_matrix(rng, g, uniform(rng, 0, 3), 4));
}

}  // namespace

TEST_CASE("free_resolution_module")
{
    Resolution free = free_resolution_module(PresentedModule(ZZ, 2), 4);
    CHECK(free.model.top() == 0);
    CHECK(free.model.rank(0) == 2);
    CHECK(free.augmentation.component(0) == identity_matrix(2));

    Resolution r = free_resolution_module(cyclic(ZZ, 2), 4);
    CHECK(r.model == ChainComplex::free(ZZ, 0, {1, 1}, {mat(1, 1, {2})}));
    CHECK(check(r).empty());

    Resolution p = free_resolution_module(cyclic(Z4, 2), 5);
    CHECK(p.model.lowest() == 0);
    CHECK(p.model.top() == 5);
    for (int d = 1; d <= 5; ++d)
    {
        CHECK(p.model.rank(d) == 1);
        CHECK(p.model.differential(d) == mat(1, 1, {2}));
    }
    for (int d = 1; d <= 4; ++d)
        CHECK(invariant_factors(homology(p.model, d)).is_zero());
    CHECK(p.certified.hi == 5);
    CHECK(check(p).empty());
}

TEST_CASE("free_resolution_module on random presentations")
{
    Rng rng(41);
    for (int trial = 0; trial < 40; ++trial)
    {
        Ring ring = trial % 3 == 2 ? Ring::integers_mod(uniform(rng, 2, 12)) : ZZ;
        PresentedModule m = random_module(rng, ring);
        Resolution r = free_resolution_module(m, 4);
        CHECK(check(r).empty());
        CHECK(r.model.is_free());
        // H_0(P) recovers M.
        CHECK(invariant_factors(homology(r.model, 0)) == invariant_factors(m));
        if (ring.is_integers())
            CHECK(r.model.top() <= 1);
    }
}

TEST_CASE("free_resolution_complex")
{
    ChainComplex x = ChainComplex::free(ZZ, 0, {1, 1}, {mat(1, 1, {3})});
    Resolution same = free_resolution_complex(x, 5);
    CHECK(same.model == x);
    CHECK(equal_maps(same.augmentation, ChainMap::identity(x)));

    ChainComplex z2 = ChainComplex::concentrated(cyclic(ZZ, 2), 0);
    Resolution r = free_resolution_complex(z2, 5);
    CHECK(r.model == ChainComplex::free(ZZ, 0, {1, 1}, {mat(1, 1, {2})}));
    CHECK(is_quasi_iso(r.augmentation));

    // Z --0--> Z/2 in degrees 1, 0: H_0 = Z/2, H_1 = Z.
    PresentedModule zf(ZZ, 1);
    ChainComplex mixed(ZZ, 0, {cyclic(ZZ, 2), zf}, {mat(1, 1, {0})});
    CHECK(inv(homology(mixed, 0)) == "(0; 2)");
    CHECK(inv(homology(mixed, 1)) == "(1; )");
    Resolution rm = free_resolution_complex(mixed, 6);
    CHECK(check(rm).empty());
    CHECK(is_quasi_iso(rm.augmentation));
}

TEST_CASE("free_resolution_complex on random presented complexes")
{
    Rng rng(43);
    for (int trial = 0; trial < 30; ++trial)
    {
        Ring ring = trial % 4 == 3 ? Z4 : ZZ;
        ChainComplex f = random_free_complex(rng, ring, 0, 3, 2);
        std::vector<PresentedModule> mods;
        std::vector<IntMatrix> diffs;
        for (int d = 0; d <= 2; ++d)
        {
            // Boundaries plus a multiple of the cycles keep d well defined.
            IntMatrix rel = hstack({f.differential(d + 1), kernel_basis(f.differential(d), ring) * Integer(uniform(rng, 0, 3))},
                                   f.rank(d));
            mods.emplace_back(ring, f.rank(d), rel);
            if (d > 0)
                diffs.push_back(f.differential(d));
        }
        ChainComplex x(ring, 0, mods, diffs);
        REQUIRE(x.check().empty());
        Resolution r = free_resolution_complex(x, 6);
        CHECK(check(r).empty());
        CHECK(is_acyclic(cone(r.augmentation), r.certified));
    }
}

TEST_CASE("tor")
{
    CHECK(invariant_factors(tor(cyclic(ZZ, 2), cyclic(ZZ, 3), 1, 3)).is_zero());
    CHECK(inv(tor(cyclic(ZZ, 2), cyclic(ZZ, 2), 1, 3)) == "(0; 2)");
    for (int n = 0; n <= 4; ++n)
        CHECK(inv(tor(cyclic(Z4, 2), cyclic(Z4, 2), n, 5)) == "(0; 2)");
    CHECK_THROWS_AS(tor(cyclic(ZZ, 2), cyclic(ZZ, 2), 3, 3), PreconditionError);
}

TEST_CASE("ext")
{
    PresentedModule z(ZZ, 1);
    PresentedModule m = cyclic(ZZ, 6);
    CHECK(inv(ext(z, m, 0, 3)) == inv(m));
    CHECK(invariant_factors(ext(z, m, 1, 3)).is_zero());
    CHECK(inv(ext(cyclic(ZZ, 2), z, 1, 3)) == "(0; 2)");
    CHECK(invariant_factors(ext(cyclic(ZZ, 2), z, 0, 3)).is_zero());
    CHECK(inv(ext(cyclic(ZZ, 2), cyclic(ZZ, 2), 0, 3)) == "(0; 2)");
    CHECK_THROWS_AS(ext(z, z, 2, 2), PreconditionError);
}

TEST_CASE("degree zero agrees with direct computation")
{
    Rng rng(47);
    for (int trial = 0; trial < 40; ++trial)
    {
        Ring ring = trial % 3 == 2 ? Ring::integers_mod(uniform(rng, 2, 9)) : ZZ;
        PresentedModule m = random_module(rng, ring), n = random_module(rng, ring);
        CHECK(invariant_factors(tor(m, n, 0, 2)) == invariant_factors(tensor_product(m, n)));
        CHECK(invariant_factors(ext(m, n, 0, 2)) == invariant_factors(hom_modules(m, n)));
    }
}

TEST_CASE("resolutions compare up to homotopy")
{
    // Two presentations of Z/2 + Z/3 give different resolutions.
    PresentedModule a(ZZ, 1, mat(1, 1, {6}));
    PresentedModule b(ZZ, 2, mat(2, 2, {2, 0, 0, 3}));
    Resolution ra = free_resolution_module(a, 3), rb = free_resolution_module(b, 3);
    // Identify targets: Z/6 -> Z/2 + Z/3 sends 1 to (1, 1); inverse sends (x, y) to 3x + 4y.
    ChainComplex ta = ra.target, tb = rb.target;
    ChainMap to_b(ta, tb, {mat(2, 1, {1, 1})});
    ChainMap to_a(tb, ta, {mat(1, 2, {3, 4})});
    REQUIRE(to_b.check().empty());
    REQUIRE(to_a.check().empty());
    Lift ab = lift_cofibrant(ra.model, rb.augmentation, compose(to_b, ra.augmentation));
    Lift ba = lift_cofibrant(rb.model, ra.augmentation, compose(to_a, rb.augmentation));
    CHECK(find_homotopy(compose(ba.map, ab.map), ChainMap::identity(ra.model)));
    CHECK(find_homotopy(compose(ab.map, ba.map), ChainMap::identity(rb.model)));
    PresentedModule n = PresentedModule(ZZ, 1, mat(1, 1, {4}));
    for (int d = 0; d <= 1; ++d)
    {
        CHECK(invariant_factors(homology(tensor(ra.model, n), d)) ==
              invariant_factors(homology(tensor(rb.model, n), d)));
        CHECK(invariant_factors(homology(hom_into(ra.model, n), -d)) ==
              invariant_factors(homology(hom_into(rb.model, n), -d)));
    }
}
