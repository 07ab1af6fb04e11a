#include <catch_amalgamated.hpp>

#include <random>

#include "cekit/complex.hpp"

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

// Z --a--> Z in degrees 1, 0.
ChainComplex two_term(long a, const Ring& ring = ZZ)
{
    return ChainComplex::free(ring, 0, {1, 1}, {mat(1, 1, {a})});
}

ChainComplex point(const Ring& ring = ZZ)
{
    return ChainComplex::free(ring, 0, {1}, {});
}

std::string inv(const ChainComplex& c, int d)
{
    return invariant_factors(homology(c, d)).str();
}

IntMatrix random_matrix(std::mt19937_64& rng, Index r, Index c, int bound)
{
    std::uniform_int_distribution<int> dist(-bound, bound);
    IntMatrix m(r, c);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j)
            m(i, j) = dist(rng);
    return m;
}

// Random free complex; each differential lands in the kernel of the one below.
ChainComplex random_free_complex(std::mt19937_64& rng, int length)
{
    std::uniform_int_distribution<int> rank(0, 3);
    std::vector<Index> ranks;
    for (int k = 0; k < length; ++k)
        ranks.push_back(rank(rng));
    std::vector<IntMatrix> diffs;
    for (int k = 1; k < length; ++k)
    {
        // d_k must land in ker d_{k-1}
        IntMatrix basis = k == 1 ? identity_matrix(ranks[0]) : kernel_basis(diffs.back(), ZZ);
        IntMatrix coeff = random_matrix(rng, basis.cols(), ranks[k], 2);
        diffs.push_back(basis * coeff);
    }
    return ChainComplex::free(ZZ, 0, ranks, diffs);
}

ChainMap random_chain_map(std::mt19937_64& rng, const ChainComplex& c)
{
    // dh + hd + c id is always a chain map.
    std::vector<IntMatrix> h, f;
    for (int d = c.lowest(); d <= c.top(); ++d)
        h.push_back(random_matrix(rng, c.rank(d + 1), c.rank(d), 2));
    auto hc = [&](int d) {
        return (d < c.lowest() || d > c.top()) ? zero_matrix(c.rank(d + 1), c.rank(d))
                                                : h[static_cast<std::size_t>(d - c.lowest())];
    };
    const Integer scalar = std::uniform_int_distribution<int>(-2, 2)(rng);
    for (int d = c.lowest(); d <= c.top(); ++d)
        f.push_back(c.differential(d + 1) * hc(d) + hc(d - 1) * c.differential(d) +
                    identity_matrix(c.rank(d)) * scalar);
    return ChainMap(c, c, f);
}

}  // namespace

TEST_CASE("validate")
{
    CHECK(ChainComplex(ZZ).check().empty());
    CHECK(two_term(2).check().empty());
    ChainComplex bad = ChainComplex::free(ZZ, 0, {1, 1, 1}, {mat(1, 1, {2}), mat(1, 1, {2})});
    std::string err = bad.check();
    CHECK(err.find("at degree 2") != std::string::npos);
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
    CHECK_THROWS_AS(ChainComplex::free(ZZ, 0, {1, 2}, {mat(1, 1, {1})}), PreconditionError);
}

TEST_CASE("homology basics")
{
    ChainComplex c = two_term(2);
    CHECK(inv(c, 0) == "(0; 2)");
    CHECK(inv(c, 1) == "(0; )");
    ChainComplex z = two_term(0);
    CHECK(inv(z, 0) == "(1; )");
    CHECK(inv(z, 1) == "(1; )");
    for (int d = -2; d <= 2; ++d)
        CHECK(invariant_factors(homology(ChainComplex(ZZ), d)).is_zero());
}

TEST_CASE("homology with presented degrees")
{
    // Z/6 --2--> Z/4: the kernel is {0,2,4} in Z/6, the image {0,2} in Z/4.
    PresentedModule z6(ZZ, 1, mat(1, 1, {6})), z4(ZZ, 1, mat(1, 1, {4}));
    ChainComplex c(ZZ, 0, {z4, z6}, {mat(1, 1, {2})});
    c.validate();
    CHECK(inv(c, 0) == "(0; 2)");
    CHECK(inv(c, 1) == "(0; 3)");
}

TEST_CASE("shift")
{
    ChainComplex c = two_term(2);
    CHECK(shift(c, 0) == c);
    CHECK(shift(shift(c, 1), -1) == c);
    ChainComplex s = shift(c, 1);
    CHECK(s.lowest() == 1);
    CHECK(s.top() == 2);
    CHECK(s.differential(2) == mat(1, 1, {-2}));
}

TEST_CASE("cone")
{
    ChainComplex z = point();
    ChainComplex cid = cone(ChainMap::identity(z));
    CHECK(cid.lowest() == 0);
    CHECK(cid.top() == 1);
    CHECK(cid.differential(1) == mat(1, 1, {1}));
    CHECK(is_acyclic(cid));

    ChainComplex zero(ZZ);
    ChainComplex a = two_term(3);
    CHECK(cone(ChainMap::zero(zero, a)) == a);

    ChainComplex c2 = cone(ChainMap(z, z, {mat(1, 1, {2})}));
    CHECK(inv(c2, 0) == "(0; 2)");
    CHECK(inv(c2, 1) == "(0; )");
}

TEST_CASE("cylinder")
{
    Cylinder cz = cylinder(point());
    CHECK(cz.cyl.rank(0) == 2);
    CHECK(cz.cyl.rank(1) == 1);
    CHECK(cz.cyl.differential(1) == mat(2, 1, {-1, 1}));
    CHECK(equal_maps(compose(cz.p, cz.i0), ChainMap::identity(point())));
    CHECK(equal_maps(compose(cz.p, cz.i1), ChainMap::identity(point())));
    CHECK(cz.contraction.check().empty());

    ChainComplex c = two_term(2);
    Cylinder cc = cylinder(c);
    cc.cyl.validate();
    cc.i0.validate();
    cc.i1.validate();
    cc.p.validate();
    CHECK(cc.contraction.check().empty());
    for (int d = 0; d <= 2; ++d)
        CHECK(inv(cc.cyl, d) == inv(c, d));
    CHECK(is_quasi_iso(cc.p));
    CHECK(is_quasi_iso(cc.i0));
}

TEST_CASE("path complex")
{
    ChainComplex b = two_term(2);
    CHECK(path(ChainMap::zero(b, ChainComplex(ZZ))) == b);
    CHECK(is_acyclic(path(ChainMap::identity(point()))));

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial)
    {
        ChainComplex x = random_free_complex(rng, 4);
        ChainMap f = random_chain_map(rng, x);
        f.validate();
        ChainComplex l = path(f);
        CHECK(l.check().empty());

        // (id, 0): x -> L(f) is a chain map iff 0 is a homotopy 0 => f, i.e. f = 0.
        std::vector<IntMatrix> comps;
        for (int d = x.lowest(); d <= x.top(); ++d)
        {
            IntMatrix m = zero_matrix(l.rank(d), x.rank(d));
            m.topRows(x.rank(d)) = identity_matrix(x.rank(d));
            comps.push_back(m);
        }
        ChainMap alpha(x, l, comps);
        bool zero = true;
        for (int d = x.lowest(); d <= x.top(); ++d)
            zero = zero && is_zero(f.component(d));
        CHECK(alpha.check().empty() == zero);
        ChainMap zero_map = ChainMap::zero(x, x);
        ChainMap alpha0(x, path(zero_map), comps);
        CHECK(alpha0.check().empty());
    }
}

TEST_CASE("hom complex")
{
    HomComplex hz = hom_complex(point(), point());
    CHECK(hz.complex.lowest() == 0);
    CHECK(hz.complex.top() == 0);
    CHECK(hz.complex.rank(0) == 1);

    HomComplex h = hom_complex(point(), two_term(2));
    h.complex.validate();
    CHECK(inv(h.complex, 0) == "(0; 2)");

    // Degree-0 cycles are exactly chain maps.
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial)
    {
        ChainComplex a = random_free_complex(rng, 3);
        ChainComplex b = random_free_complex(rng, 3);
        HomComplex hom = hom_complex(a, b);
        hom.complex.validate();
        std::vector<IntMatrix> blocks;
        for (int i = a.lowest(); i <= a.top(); ++i)
            blocks.push_back(random_matrix(rng, b.rank(i), a.rank(i), 1));
        ChainMap f(a, b, blocks);
        IntVector v = hom.pack(0, blocks);
        bool cycle = is_zero(IntMatrix(hom.complex.differential(0) * v));
        CHECK(cycle == f.check().empty());
        CHECK(hom.pack_map(hom.unpack_map(v)) == v);
    }
}

TEST_CASE("hom complex differential sign")
{
    // Hom(Z --1--> Z, Z[0]) degree -1 block: f in Hom(A_1, B_0), Df = -(-1)^{-1} f d = f d.
    ChainComplex a = two_term(1);
    HomComplex h = hom_complex(a, point());
    CHECK(h.complex.lowest() == -1);
    CHECK(h.complex.top() == 0);
    // D: Hom_0 -> Hom_{-1}; Hom_0 = Hom(A_0, B_0), Hom_{-1} = Hom(A_1, B_0).
    // (Df)_1 = d_B f_1 - f_0 d_A = -f_0.
    CHECK(h.complex.differential(0) == mat(1, 1, {-1}));
}

TEST_CASE("total complex")
{
    DoubleComplex row;
    row.ring = ZZ;
    row.cells[{0, 0}] = PresentedModule(ZZ, 1);
    row.cells[{1, 0}] = PresentedModule(ZZ, 1);
    row.horizontal[{1, 0}] = mat(1, 1, {3});
    TotalComplex tr = total(row);
    CHECK(tr.complex == two_term(3));

    DoubleComplex col;
    col.ring = ZZ;
    col.cells[{0, 0}] = PresentedModule(ZZ, 1);
    col.cells[{0, 1}] = PresentedModule(ZZ, 1);
    col.vertical[{0, 1}] = mat(1, 1, {3});
    CHECK(total(col).complex == two_term(3));

    DoubleComplex sq;
    sq.ring = ZZ;
    for (int p = 0; p <= 1; ++p)
        for (int q = 0; q <= 1; ++q)
            sq.cells[{p, q}] = PresentedModule(ZZ, 1);
    sq.horizontal[{1, 0}] = sq.horizontal[{1, 1}] = mat(1, 1, {1});
    sq.vertical[{0, 1}] = sq.vertical[{1, 1}] = mat(1, 1, {1});
    TotalComplex t = total(sq);
    t.complex.validate();
    CHECK(t.complex.rank(1) == 2);
    CHECK(is_acyclic(t.complex));

    DoubleComplex broken = sq;
    broken.vertical[{1, 1}] = mat(1, 1, {2});
    CHECK_THROWS_AS(total(broken), PreconditionError);
}

TEST_CASE("quasi-isomorphisms")
{
    ChainComplex x = two_term(2);
    CHECK(is_quasi_iso(ChainMap::identity(x)));
    CHECK_FALSE(is_quasi_iso(ChainMap::zero(x, x)));

    ChainComplex c = cone(ChainMap::identity(point()));
    ChainComplex sum = direct_sum(x, c);
    std::vector<IntMatrix> proj;
    for (int d = sum.lowest(); d <= sum.top(); ++d)
    {
        IntMatrix m = zero_matrix(x.rank(d), sum.rank(d));
        m.leftCols(x.rank(d)) = identity_matrix(x.rank(d));
        proj.push_back(m);
    }
    ChainMap p(sum, x, proj);
    p.validate();
    CHECK(is_quasi_iso(p));
    CHECK_THROWS_AS(is_quasi_iso(p, DegreeRange{0, 1}), PreconditionError);
}

TEST_CASE("induced map on homology")
{
    ChainComplex x = two_term(2);
    ChainMap three = scale(ChainMap::identity(x), 3);
    ModuleMap h0 = induced_map(three, 0);
    CHECK(is_module_iso(h0).is_iso);
    ChainMap two = scale(ChainMap::identity(x), 2);
    CHECK(is_zero(Ring::integers_mod(2).reduce(induced_map(two, 0).matrix)));
    CHECK_FALSE(is_quasi_iso(two));
}

TEST_CASE("constructions preserve d o d = 0")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial)
    {
        ChainComplex x = random_free_complex(rng, 4);
        ChainMap f = random_chain_map(rng, x);
        CHECK(cone(f).check().empty());
        CHECK(path(f).check().empty());
        CHECK(cylinder(x).cyl.check().empty());
        CHECK(shift(x, 3).check().empty());
        CHECK(is_acyclic(cone(ChainMap::identity(x))));
    }
}

TEST_CASE("complexes over Z/m")
{
    Ring z4 = Ring::integers_mod(4);
    ChainComplex c = two_term(2, z4);
    CHECK(inv(c, 0) == "(0; 2)");
    CHECK(inv(c, 1) == "(0; 2)");
    CHECK(is_acyclic(cone(ChainMap::identity(c))));
}
