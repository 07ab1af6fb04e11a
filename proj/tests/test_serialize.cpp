#include <catch_amalgamated.hpp>

#include "cekit/random.hpp"
#include "cekit/serialize.hpp"

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

void round_trip(const Document& doc)
{
    std::string text = print(doc);
    Document back = parse(text);
    REQUIRE(kind(back) == kind(doc));
    REQUIRE(same_document(back, doc));
    REQUIRE(print(back) == text);
}

// Adds torsion relations to a free complex where the differentials allow it.
ChainComplex with_torsion(const ChainComplex& c, const Integer& n)
{
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs;
    for (int d = c.lowest(); d <= c.top(); ++d)
        mods.push_back(PresentedModule(c.ring(), c.rank(d),
                                       IntMatrix::Identity(c.rank(d), c.rank(d)) * n));
    for (int d = c.lowest() + 1; d <= c.top(); ++d)
        diffs.push_back(c.differential(d));
    return ChainComplex(c.ring(), c.lowest(), mods, diffs);
}

}  // namespace

TEST_CASE("module document text is stable", "[serialize]")
{
    PresentedModule m(ZZ, 2, mat(2, 1, {2, 0}));
    std::string text = print(Document{1, m});
    CHECK(text == "cekit 1\nmodule\nring Z\ngenerators 2\nrelations 2 1\n2\n0\n");
    round_trip(Document{1, m});
}

TEST_CASE("random complexes, maps and homotopies round-trip", "[serialize]")
{
    Rng rng(11);
    for (int i = 0; i < 40; ++i)
    {
        Ring ring = i % 3 == 0 ? Ring::integers_mod(uniform(rng, 2, 12)) : ZZ;
        ChainComplex s = random_free_complex(rng, ring, uniform(rng, -2, 2), uniform(rng, 1, 4), 3, 5);
        ChainComplex t = random_free_complex(rng, ring, s.lowest(), uniform(rng, 1, 4), 3, 5);
        round_trip(Document{1, s});
        round_trip(Document{1, with_torsion(s, 6)});
        ChainMap f = random_chain_map(rng, s, t, 4);
        round_trip(Document{1, f});
        auto k = random_degree_one(rng, s, t);
        ChainMap g = add(f, null_homotopic(s, t, k));
        round_trip(Document{1, Homotopy(f, g, k)});
    }
}

TEST_CASE("empty complex round-trips", "[serialize]")
{
    round_trip(Document{1, ChainComplex(ZZ)});
}

TEST_CASE("filtered complexes round-trip", "[serialize]")
{
    ChainComplex c = ChainComplex::free(ZZ, 0, {1, 2}, {mat(1, 2, {1, 0})});
    round_trip(Document{1, FilteredComplex(c, {{0}, {1, -3}})});
}

TEST_CASE("functor diagrams round-trip", "[serialize]")
{
    Rng rng(5);
    for (const FiniteCategory& c :
         {FiniteCategory::one_object(), FiniteCategory::arrow(), FiniteCategory::cyclic_group(3)})
    {
        FunctorComplex k = random_functor(rng, c, ZZ, 2, 1);
        round_trip(Document{1, FunctorDiagram{k, {}}});
        round_trip(Document{1, FunctorDiagram{k, {0}}});
    }
}

TEST_CASE("requests keep argument order and quoting", "[serialize]")
{
    Request q{"tor", {{"M", "Z/2 + Z"}, {"N", "Z/2"}, {"n", "1"}, {"note", "a \"b\" #c"}}};
    round_trip(Document{1, q});
    CHECK(print(Document{1, q}).find("\"Z/2 + Z\"") != std::string::npos);
}

TEST_CASE("parse errors carry a location", "[serialize]")
{
    auto where = [](const std::string& text) {
        try
        {
            parse(text);
        }
        catch (const ParseError& e)
        {
            return std::make_pair(e.line(), e.column());
        }
        return std::make_pair(0, 0);
    };
    CHECK(where("cekit 2\nmodule") == std::make_pair(1, 7));
    CHECK(where("cekit 1\nbogus\n") == std::make_pair(2, 1));
    CHECK(where("cekit 1\nmodule\nring Z\ngenerators 2\nrelations 2 1\n2\nx\n") == std::make_pair(7, 1));
    CHECK(where("cekit 1\nmodule\nring Z\ngenerators 2\nrelations 1 1\n2\n") == std::make_pair(5, 11));
    CHECK(where("cekit 1\nmodule\nring Z\ngenerators 1\nrelations 1 0\n extra") == std::make_pair(6, 2));
    CHECK(where("cekit 1\ncomplex\nring Z\nlowest 0\ndegrees 2\n"
                "degree 0 generators 1 relations 1 0\ndegree 1 generators 1 relations 1 0\n")
          .first == 7);
    // d^2 != 0 is reported at the start of the complex.
    CHECK(where("cekit 1\ncomplex\nring Z\nlowest 0\ndegrees 3\n"
                "degree 0 generators 1 relations 1 0\ndegree 1 generators 1 relations 1 0\n"
                "degree 2 generators 1 relations 1 0\ndifferential 1 1 1 1\ndifferential 2 1 1 1\n")
          == std::make_pair(3, 1));
}

TEST_CASE("comments and spacing are ignored", "[serialize]")
{
    Document a = parse("cekit 1 # header\nmodule ring Z/4 generators 1 relations 1 1 2");
    Document b = parse("cekit 1\nmodule\nring Z/4\ngenerators 1\nrelations 1 1\n2\n");
    CHECK(same_document(a, b));
}

TEST_CASE("module expressions", "[serialize]")
{
    CHECK(invariant_factors(parse_module_expression(ZZ, "Z/2")).str() == "(0; 2)");
    CHECK(invariant_factors(parse_module_expression(ZZ, "Z^2 + Z/6")).str() == "(2; 6)");
    CHECK(invariant_factors(parse_module_expression(ZZ, "Z/2^2 + Z/3")).str() == "(0; 2,6)");
    CHECK(parse_module_expression(ZZ, "0").generators == 0);
    CHECK_THROWS_AS(parse_module_expression(ZZ, "Q"), PreconditionError);
    CHECK_THROWS_AS(parse_module_expression(ZZ, "Z +"), PreconditionError);
    CHECK_THROWS_AS(parse_module_expression(ZZ, "Z/0"), PreconditionError);
}
