#include "cekit/cotriple.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

namespace cekit {

namespace {

Integer sign(int k) { return k % 2 == 0 ? Integer(1) : Integer(-1); }

bool same_morphism(const Morphism& a, const Morphism& b)
{
    return a.name == b.name && a.source == b.source && a.target == b.target;
}

}  // namespace

// ---------------------------------------------------------------- categories

FiniteCategory::FiniteCategory(std::vector<std::string> objects, std::vector<Morphism> morphisms,
                               std::vector<int> identities, std::vector<std::vector<int>> compose)
    : objects_(std::move(objects)), morphisms_(std::move(morphisms)), identities_(std::move(identities)),
      compose_(std::move(compose))
{
    std::string err = check();
    if (!err.empty())
        throw PreconditionError("category: " + err);
}

FiniteCategory FiniteCategory::one_object()
{
    return FiniteCategory({"*"}, {{"id", 0, 0}}, {0}, {{0}});
}

FiniteCategory FiniteCategory::arrow()
{
    return FiniteCategory({"0", "1"}, {{"id_0", 0, 0}, {"id_1", 1, 1}, {"a", 0, 1}}, {0, 1},
                          {{0, -1, -1}, {-1, 1, 2}, {2, -1, -1}});
}

FiniteCategory FiniteCategory::cyclic_group(int n)
{
    if (n < 1)
        throw PreconditionError("cyclic_group: order must be positive");
    std::vector<Morphism> ms;
    std::vector<std::vector<int>> table(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int k = 0; k < n; ++k)
    {
        ms.push_back({k == 0 ? "e" : "g^" + std::to_string(k), 0, 0});
        for (int j = 0; j < n; ++j)
            table[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = (k + j) % n;
    }
    return FiniteCategory({"*"}, ms, {0}, table);
}

FiniteCategory FiniteCategory::poset(int n, const std::vector<std::pair<int, int>>& less)
{
    if (n < 1)
        throw PreconditionError("poset: needs at least one object");
    const auto N = static_cast<std::size_t>(n);
    std::vector<std::vector<bool>> le(N, std::vector<bool>(N, false));
    for (std::size_t i = 0; i < N; ++i)
        le[i][i] = true;
    for (auto [i, j] : less)
    {
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw PreconditionError("poset: object out of range");
        le[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
    }
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                if (le[i][k] && le[k][j])
                    le[i][j] = true;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            if (i != j && le[i][j] && le[j][i])
                throw PreconditionError("poset: relation has a cycle");

    std::vector<std::string> objs;
    for (int i = 0; i < n; ++i)
        objs.push_back(std::to_string(i));
    std::vector<Morphism> ms;
    std::vector<std::vector<int>> index(N, std::vector<int>(N, -1));
    std::vector<int> ids(N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            if (le[i][j])
            {
                index[i][j] = static_cast<int>(ms.size());
                ms.push_back({i == j ? "id_" + std::to_string(i) : std::to_string(i) + "<=" + std::to_string(j),
                              static_cast<int>(i), static_cast<int>(j)});
                if (i == j)
                    ids[i] = index[i][j];
            }
    std::vector<std::vector<int>> table(ms.size(), std::vector<int>(ms.size(), -1));
    for (std::size_t g = 0; g < ms.size(); ++g)
        for (std::size_t f = 0; f < ms.size(); ++f)
            if (ms[f].target == ms[g].source)
                table[g][f] = index[static_cast<std::size_t>(ms[f].source)][static_cast<std::size_t>(ms[g].target)];
    return FiniteCategory(objs, ms, ids, table);
}

bool FiniteCategory::is_identity(int a) const
{
    return identity(morphism(a).source) == a;
}

int FiniteCategory::compose(int g, int f) const
{
    int c = compose_.at(static_cast<std::size_t>(g)).at(static_cast<std::size_t>(f));
    if (c < 0)
        throw PreconditionError("compose: " + morphism(g).name + " o " + morphism(f).name + " is undefined");
    return c;
}

std::vector<int> FiniteCategory::hom(int x, int y) const
{
    std::vector<int> out;
    for (int a = 0; a < morphism_count(); ++a)
        if (morphisms_[static_cast<std::size_t>(a)].source == x && morphisms_[static_cast<std::size_t>(a)].target == y)
            out.push_back(a);
    return out;
}

std::string FiniteCategory::check() const
{
    const int n = object_count(), m = morphism_count();
    if (n == 0)
        return "no objects";
    if (static_cast<int>(identities_.size()) != n)
        return "one identity per object required";
    if (static_cast<int>(compose_.size()) != m)
        return "composition table has the wrong size";
    for (const auto& row : compose_)
        if (static_cast<int>(row.size()) != m)
            return "composition table has the wrong size";
    for (const auto& a : morphisms_)
        if (a.source < 0 || a.source >= n || a.target < 0 || a.target >= n)
            return "morphism " + a.name + " has an endpoint out of range";
    for (int x = 0; x < n; ++x)
    {
        int i = identities_[static_cast<std::size_t>(x)];
        if (i < 0 || i >= m || morphisms_[static_cast<std::size_t>(i)].source != x
            || morphisms_[static_cast<std::size_t>(i)].target != x)
            return "identity of " + objects_[static_cast<std::size_t>(x)] + " is not an endomorphism of it";
    }
    auto at = [&](int g, int f) { return compose_[static_cast<std::size_t>(g)][static_cast<std::size_t>(f)]; };
    for (int g = 0; g < m; ++g)
        for (int f = 0; f < m; ++f)
        {
            const Morphism& mg = morphisms_[static_cast<std::size_t>(g)];
            const Morphism& mf = morphisms_[static_cast<std::size_t>(f)];
            int c = at(g, f);
            if ((mf.target == mg.source) != (c >= 0))
                return "composability of " + mg.name + " o " + mf.name + " is wrong";
            if (c >= m)
                return "composite out of range";
            if (c >= 0
                && (morphisms_[static_cast<std::size_t>(c)].source != mf.source
                    || morphisms_[static_cast<std::size_t>(c)].target != mg.target))
                return "composite " + mg.name + " o " + mf.name + " has the wrong endpoints";
        }
    for (int f = 0; f < m; ++f)
    {
        const Morphism& mf = morphisms_[static_cast<std::size_t>(f)];
        if (at(identities_[static_cast<std::size_t>(mf.target)], f) != f
            || at(f, identities_[static_cast<std::size_t>(mf.source)]) != f)
            return "unit law fails for " + mf.name;
    }
    for (int h = 0; h < m; ++h)
        for (int g = 0; g < m; ++g)
        {
            if (at(h, g) < 0)
                continue;
            for (int f = 0; f < m; ++f)
                if (at(g, f) >= 0 && at(h, at(g, f)) != at(at(h, g), f))
                    return "composition is not associative";
        }
    return {};
}

bool operator==(const FiniteCategory& a, const FiniteCategory& b)
{
    if (a.objects_ != b.objects_ || a.identities_ != b.identities_ || a.compose_ != b.compose_
        || a.morphisms_.size() != b.morphisms_.size())
        return false;
    for (std::size_t i = 0; i < a.morphisms_.size(); ++i)
        if (!same_morphism(a.morphisms_[i], b.morphisms_[i]))
            return false;
    return true;
}

Subcategory full_subcategory(const FiniteCategory& c, const std::vector<int>& objects)
{
    std::vector<int> sorted = objects;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.empty() || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw PreconditionError("full_subcategory: objects must be distinct and nonempty");
    std::map<int, int> new_object;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < objects.size(); ++i)
    {
        if (objects[i] < 0 || objects[i] >= c.object_count())
            throw PreconditionError("full_subcategory: object out of range");
        new_object[objects[i]] = static_cast<int>(i);
        names.push_back(c.object_name(objects[i]));
    }
    Subcategory s;
    s.objects = objects;
    std::map<int, int> new_morphism;
    std::vector<Morphism> ms;
    for (int a = 0; a < c.morphism_count(); ++a)
    {
        const Morphism& m = c.morphism(a);
        if (new_object.count(m.source) && new_object.count(m.target))
        {
            new_morphism[a] = static_cast<int>(ms.size());
            s.morphisms.push_back(a);
            ms.push_back({m.name, new_object[m.source], new_object[m.target]});
        }
    }
    std::vector<int> ids;
    for (int x : objects)
        ids.push_back(new_morphism.at(c.identity(x)));
    std::vector<std::vector<int>> table(ms.size(), std::vector<int>(ms.size(), -1));
    for (std::size_t g = 0; g < ms.size(); ++g)
        for (std::size_t f = 0; f < ms.size(); ++f)
            if (ms[f].target == ms[g].source)
                table[g][f] = new_morphism.at(c.compose(s.morphisms[g], s.morphisms[f]));
    s.category = FiniteCategory(names, ms, ids, table);
    return s;
}

// ---------------------------------------------------------------- functors

FunctorComplex::FunctorComplex(const FiniteCategory& category, std::vector<ChainComplex> values,
                               std::vector<ChainMap> maps)
    : category_(category)
{
    if (static_cast<int>(values.size()) != category.object_count())
        throw PreconditionError("functor: one value per object required");
    if (static_cast<int>(maps.size()) != category.morphism_count())
        throw PreconditionError("functor: one map per morphism required");
    const Ring ring = values.front().ring();
    int top = 0;
    for (const auto& v : values)
    {
        if (v.ring() != ring)
            throw PreconditionError("functor: values over different rings");
        if (!v.empty() && v.lowest() < 0)
            throw PreconditionError("functor: values must live in non-negative degrees");
        if (!v.empty())
            top = std::max(top, v.top());
    }
    for (const auto& v : values)
    {
        std::vector<PresentedModule> mods;
        std::vector<IntMatrix> diffs;
        for (int d = 0; d <= top; ++d)
        {
            mods.push_back(v.module(d));
            if (d >= 1)
                diffs.push_back(v.differential(d));
        }
        values_.emplace_back(ring, 0, std::move(mods), std::move(diffs));
    }
    for (int a = 0; a < category.morphism_count(); ++a)
    {
        const Morphism& m = category.morphism(a);
        const ChainMap& f = maps[static_cast<std::size_t>(a)];
        std::vector<IntMatrix> comps;
        for (int d = 0; d <= top; ++d)
        {
            IntMatrix c = f.component(d);
            if (c.size() == 0)
                c = zero_matrix(at(m.target).rank(d), at(m.source).rank(d));
            comps.push_back(c);
        }
        maps_.emplace_back(at(m.source), at(m.target), std::move(comps));
    }
}

FunctorComplex FunctorComplex::constant(const FiniteCategory& category, const ChainComplex& c)
{
    std::vector<ChainComplex> values(static_cast<std::size_t>(category.object_count()), c);
    std::vector<ChainMap> maps(static_cast<std::size_t>(category.morphism_count()), ChainMap::identity(c));
    return FunctorComplex(category, values, maps);
}

std::string FunctorComplex::check() const
{
    std::string err = category_.check();
    if (!err.empty())
        return err;
    for (int x = 0; x < category_.object_count(); ++x)
    {
        if (!at(x).is_free())
            return "value at " + category_.object_name(x) + " is not free";
        err = at(x).check();
        if (!err.empty())
            return "value at " + category_.object_name(x) + ": " + err;
    }
    for (int a = 0; a < category_.morphism_count(); ++a)
    {
        err = map(a).check();
        if (!err.empty())
            return "map " + category_.morphism(a).name + ": " + err;
    }
    for (int x = 0; x < category_.object_count(); ++x)
        if (!equal_maps(map(category_.identity(x)), ChainMap::identity(at(x))))
            return "identity of " + category_.object_name(x) + " is not sent to the identity";
    for (int g = 0; g < category_.morphism_count(); ++g)
        for (int f = 0; f < category_.morphism_count(); ++f)
            if (category_.morphism(f).target == category_.morphism(g).source
                && !equal_maps(map(category_.compose(g, f)), cekit::compose(map(g), map(f))))
                return "composition " + category_.morphism(g).name + " o " + category_.morphism(f).name
                       + " is not respected";
    return {};
}

void FunctorComplex::validate() const
{
    std::string err = check();
    if (!err.empty())
        throw PreconditionError("functor: " + err);
}

FunctorComplex FunctorComplex::truncated(int n) const
{
    if (n < 0)
        throw PreconditionError("truncated: negative degree");
    if (n >= top())
        return *this;
    std::vector<ChainComplex> values;
    for (const auto& v : values_)
        values.push_back(v.truncated(0, n));
    std::vector<ChainMap> maps;
    for (int a = 0; a < category_.morphism_count(); ++a)
    {
        const Morphism& m = category_.morphism(a);
        std::vector<IntMatrix> comps;
        for (int d = 0; d <= n; ++d)
            comps.push_back(map(a).component(d));
        maps.emplace_back(values[static_cast<std::size_t>(m.source)], values[static_cast<std::size_t>(m.target)],
                          comps);
    }
    return FunctorComplex(category_, values, maps);
}

bool operator==(const FunctorComplex& a, const FunctorComplex& b)
{
    if (a.category_ != b.category_ || a.values_ != b.values_)
        return false;
    for (std::size_t i = 0; i < a.maps_.size(); ++i)
        if (!equal_maps(a.maps_[i], b.maps_[i]))
            return false;
    return true;
}

FunctorComplex direct_sum(const FunctorComplex& a, const FunctorComplex& b)
{
    if (a.category() != b.category())
        throw PreconditionError("direct_sum: different categories");
    const FiniteCategory& c = a.category();
    std::vector<ChainComplex> values;
    for (int x = 0; x < c.object_count(); ++x)
        values.push_back(direct_sum(a.at(x), b.at(x)));
    const int top = std::max(a.top(), b.top());
    std::vector<ChainMap> maps;
    for (int f = 0; f < c.morphism_count(); ++f)
    {
        const Morphism& m = c.morphism(f);
        std::vector<IntMatrix> comps;
        for (int d = 0; d <= top; ++d)
            comps.push_back(block_diagonal({a.map(f).component(d), b.map(f).component(d)}));
        maps.emplace_back(values[static_cast<std::size_t>(m.source)], values[static_cast<std::size_t>(m.target)],
                          comps);
    }
    return FunctorComplex(c, values, maps);
}

FunctorComplex restrict_to(const FunctorComplex& k, const Subcategory& s)
{
    std::vector<ChainComplex> values;
    for (int x : s.objects)
        values.push_back(k.at(x));
    std::vector<ChainMap> maps;
    for (int a : s.morphisms)
        maps.push_back(k.map(a));
    return FunctorComplex(s.category, values, maps);
}

// ---------------------------------------------------------------- natural maps

NaturalMap::NaturalMap(const FunctorComplex& source, const FunctorComplex& target, std::vector<ChainMap> components)
    : source_(source), target_(target)
{
    if (source.category() != target.category())
        throw PreconditionError("natural map: functors on different categories");
    if (static_cast<int>(components.size()) != source.category().object_count())
        throw PreconditionError("natural map: one component per object required");
    for (int x = 0; x < source.category().object_count(); ++x)
    {
        std::vector<IntMatrix> comps;
        for (int d = 0; d <= source.top(); ++d)
        {
            IntMatrix c = components[static_cast<std::size_t>(x)].component(d);
            if (c.size() == 0)
                c = zero_matrix(target.at(x).rank(d), source.at(x).rank(d));
            comps.push_back(c);
        }
        components_.emplace_back(source.at(x), target.at(x), std::move(comps));
    }
}

NaturalMap NaturalMap::identity(const FunctorComplex& k)
{
    std::vector<ChainMap> comps;
    for (int x = 0; x < k.category().object_count(); ++x)
        comps.push_back(ChainMap::identity(k.at(x)));
    return NaturalMap(k, k, comps);
}

NaturalMap NaturalMap::zero(const FunctorComplex& k, const FunctorComplex& l)
{
    std::vector<ChainMap> comps;
    for (int x = 0; x < k.category().object_count(); ++x)
        comps.push_back(ChainMap::zero(k.at(x), l.at(x)));
    return NaturalMap(k, l, comps);
}

std::string NaturalMap::check() const
{
    const FiniteCategory& c = source_.category();
    for (int x = 0; x < c.object_count(); ++x)
    {
        std::string err = at(x).check();
        if (!err.empty())
            return "component at " + c.object_name(x) + ": " + err;
    }
    for (int a = 0; a < c.morphism_count(); ++a)
    {
        const Morphism& m = c.morphism(a);
        if (!equal_maps(cekit::compose(target_.map(a), at(m.source)), cekit::compose(at(m.target), source_.map(a))))
            return "naturality square for " + m.name + " does not commute";
    }
    return {};
}

NaturalMap compose(const NaturalMap& g, const NaturalMap& f)
{
    if (!(g.source() == f.target()))
        throw PreconditionError("compose: natural maps do not compose");
    std::vector<ChainMap> comps;
    for (int x = 0; x < f.source().category().object_count(); ++x)
        comps.push_back(compose(g.at(x), f.at(x)));
    return NaturalMap(f.source(), g.target(), comps);
}

bool equal_maps(const NaturalMap& f, const NaturalMap& g)
{
    if (!(f.source() == g.source()) || !(f.target() == g.target()))
        return false;
    for (int x = 0; x < f.source().category().object_count(); ++x)
        if (!equal_maps(f.at(x), g.at(x)))
            return false;
    return true;
}

NaturalMap restrict_to(const NaturalMap& f, const Subcategory& s)
{
    std::vector<ChainMap> comps;
    for (int x : s.objects)
        comps.push_back(f.at(x));
    return NaturalMap(restrict_to(f.source(), s), restrict_to(f.target(), s), comps);
}

// ---------------------------------------------------------------- the cotriple

std::vector<ModelsCotriple::Summand> ModelsCotriple::summands(int x) const
{
    std::vector<Summand> out;
    for (std::size_t m = 0; m < models.size(); ++m)
        for (int f : category.hom(models[m], x))
            out.push_back({static_cast<int>(m), f});
    return out;
}

std::string ModelsCotriple::check() const
{
    if (models.empty())
        return "no models";
    std::vector<int> sorted = models;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        return "models repeat";
    for (int m : models)
        if (m < 0 || m >= category.object_count())
            return "model out of range";
    return {};
}

namespace {

void require(const ModelsCotriple& g, const FunctorComplex& k)
{
    std::string err = g.check();
    if (!err.empty())
        throw PreconditionError("cotriple: " + err);
    if (g.category != k.category())
        throw PreconditionError("cotriple: functor lives on another category");
}

int model_object(const ModelsCotriple& g, const ModelsCotriple::Summand& s)
{
    return g.models[static_cast<std::size_t>(s.model)];
}

// Start of each summand of (GK)(x) in degree d; the last entry is the total rank.
std::vector<Index> summand_offsets(const ModelsCotriple& g, const FunctorComplex& k,
                                   const std::vector<ModelsCotriple::Summand>& sums, int d)
{
    std::vector<Index> off{0};
    for (const auto& s : sums)
        off.push_back(off.back() + k.at(model_object(g, s)).rank(d));
    return off;
}

std::size_t summand_index(const std::vector<ModelsCotriple::Summand>& sums, int model, int morphism)
{
    for (std::size_t i = 0; i < sums.size(); ++i)
        if (sums[i].model == model && sums[i].morphism == morphism)
            return i;
    throw std::logic_error("summand not found");
}

NaturalMap apply_map(const ModelsCotriple& g, const NaturalMap& f, const FunctorComplex& gs, const FunctorComplex& gt)
{
    std::vector<ChainMap> comps;
    for (int x = 0; x < g.category.object_count(); ++x)
    {
        std::vector<IntMatrix> parts;
        for (int d = 0; d <= gs.top(); ++d)
        {
            std::vector<IntMatrix> blocks;
            for (const auto& s : g.summands(x))
                blocks.push_back(f.at(model_object(g, s)).component(d));
            parts.push_back(block_diagonal(blocks));
        }
        comps.emplace_back(gs.at(x), gt.at(x), parts);
    }
    return NaturalMap(gs, gt, comps);
}

NaturalMap counit_with(const ModelsCotriple& g, const FunctorComplex& k, const FunctorComplex& gk)
{
    std::vector<ChainMap> comps;
    for (int x = 0; x < g.category.object_count(); ++x)
    {
        std::vector<IntMatrix> parts;
        for (int d = 0; d <= gk.top(); ++d)
        {
            std::vector<IntMatrix> blocks;
            for (const auto& s : g.summands(x))
                blocks.push_back(k.map(s.morphism).component(d));
            parts.push_back(hstack(blocks, k.at(x).rank(d)));
        }
        comps.emplace_back(gk.at(x), k.at(x), parts);
    }
    return NaturalMap(gk, k, comps);
}

NaturalMap comult_with(const ModelsCotriple& g, const FunctorComplex& k, const FunctorComplex& gk,
                       const FunctorComplex& ggk)
{
    std::vector<ChainMap> comps;
    for (int x = 0; x < g.category.object_count(); ++x)
    {
        const auto sums = g.summands(x);
        std::vector<IntMatrix> parts;
        for (int d = 0; d <= gk.top(); ++d)
        {
            IntMatrix m = zero_matrix(ggk.at(x).rank(d), gk.at(x).rank(d));
            std::vector<Index> inner_off = summand_offsets(g, k, sums, d);
            std::vector<Index> outer_off = summand_offsets(g, gk, sums, d);
            for (std::size_t i = 0; i < sums.size(); ++i)
            {
                int model = model_object(g, sums[i]);
                const auto inner = g.summands(model);
                std::size_t j = summand_index(inner, sums[i].model, g.category.identity(model));
                Index start = outer_off[i] + summand_offsets(g, k, inner, d)[j];
                Index n = k.at(model).rank(d);
                m.block(start, inner_off[i], n, n) = identity_matrix(n);
            }
            parts.push_back(m);
        }
        comps.emplace_back(gk.at(x), ggk.at(x), parts);
    }
    return NaturalMap(gk, ggk, comps);
}

// Powers G^j K with the faces and degeneracies between them, built on demand.
class Simplicial
{
    public:
        Simplicial(const ModelsCotriple& g, const FunctorComplex& k) : g_(g) { powers_.push_back(k); }

        const FunctorComplex& power(int j)
        {
            while (static_cast<int>(powers_.size()) <= j)
                powers_.push_back(apply(g_, powers_.back()));
            return powers_[static_cast<std::size_t>(j)];
        }

        // d_i: G^(n+1) K -> G^n K
        const NaturalMap& face(int n, int i)
        {
            auto key = std::make_pair(n, i);
            auto it = faces_.find(key);
            if (it != faces_.end())
                return it->second;
            NaturalMap m = i == 0 ? counit_with(g_, power(n), power(n + 1))
                                  : apply_map(g_, face(n - 1, i - 1), power(n + 1), power(n));
            return faces_.emplace(key, std::move(m)).first->second;
        }

        // s_i: G^(n+1) K -> G^(n+2) K
        const NaturalMap& degeneracy(int n, int i)
        {
            auto key = std::make_pair(n, i);
            auto it = degens_.find(key);
            if (it != degens_.end())
                return it->second;
            NaturalMap m = i == 0 ? comult_with(g_, power(n), power(n + 1), power(n + 2))
                                  : apply_map(g_, degeneracy(n - 1, i - 1), power(n + 1), power(n + 2));
            return degens_.emplace(key, std::move(m)).first->second;
        }

    private:
        const ModelsCotriple& g_;
        std::deque<FunctorComplex> powers_;
        std::map<std::pair<int, int>, NaturalMap> faces_, degens_;
};

// Offsets of the column-p cell inside Tot_d of the bar complex at x, p = 0..d.
std::vector<Index> bar_offsets(Simplicial& s, int x, int d, int bound)
{
    const int top = s.power(0).top();
    std::vector<Index> off{0};
    for (int p = 0; p <= std::min(d, bound); ++p)
    {
        int q = d - p;
        off.push_back(off.back() + (q <= top ? s.power(p + 1).at(x).rank(q) : 0));
    }
    return off;
}

Bar build_bar(const ModelsCotriple& g, Simplicial& s, int bound)
{
    const FunctorComplex& k = s.power(0);
    const int top = k.top();
    const FiniteCategory& c = g.category;
    std::vector<ChainComplex> values;
    for (int x = 0; x < c.object_count(); ++x)
    {
        DoubleComplex dc;
        dc.ring = k.ring();
        for (int p = 0; p <= bound; ++p)
            for (int q = 0; q <= std::min(top, bound - p); ++q)
            {
                const ChainComplex& col = s.power(p + 1).at(x);
                dc.cells[{p, q}] = col.module(q);
                if (q >= 1)
                    dc.vertical[{p, q}] = col.differential(q);
                if (p >= 1)
                {
                    IntMatrix h = zero_matrix(s.power(p).at(x).rank(q), col.rank(q));
                    for (int i = 0; i <= p; ++i)
                        h += sign(i) * s.face(p, i).at(x).component(q);
                    dc.horizontal[{p, q}] = h;
                }
            }
        values.push_back(total(dc).complex);
    }
    std::vector<ChainMap> maps;
    for (int a = 0; a < c.morphism_count(); ++a)
    {
        const Morphism& m = c.morphism(a);
        std::vector<IntMatrix> comps;
        for (int d = 0; d <= bound; ++d)
        {
            auto so = bar_offsets(s, m.source, d, bound), to = bar_offsets(s, m.target, d, bound);
            IntMatrix mat = zero_matrix(to.back(), so.back());
            for (int p = 0; p <= d; ++p)
                if (d - p <= top)
                {
                    IntMatrix blk = s.power(p + 1).map(a).component(d - p);
                    mat.block(to[static_cast<std::size_t>(p)], so[static_cast<std::size_t>(p)], blk.rows(),
                              blk.cols()) = blk;
                }
            comps.push_back(mat);
        }
        maps.emplace_back(values[static_cast<std::size_t>(m.source)], values[static_cast<std::size_t>(m.target)],
                          comps);
    }
    Bar out;
    out.bound = bound;
    out.complex = FunctorComplex(c, values, maps);
    std::vector<ChainMap> aug;
    for (int x = 0; x < c.object_count(); ++x)
    {
        std::vector<IntMatrix> comps;
        for (int d = 0; d <= bound; ++d)
        {
            IntMatrix mat = zero_matrix(k.at(x).rank(d), out.complex.at(x).rank(d));
            if (d <= top)
            {
                IntMatrix blk = s.face(0, 0).at(x).component(d);
                mat.leftCols(blk.cols()) = blk;
            }
            comps.push_back(mat);
        }
        aug.emplace_back(out.complex.at(x), k.at(x), comps);
    }
    out.augmentation = NaturalMap(out.complex, k, aug);
    return out;
}

// G^j f for j = 0..n, each between the matching powers.
std::vector<NaturalMap> iterate(const ModelsCotriple& g, const NaturalMap& f, Simplicial& s, Simplicial& t, int n)
{
    std::vector<NaturalMap> out{f};
    for (int j = 1; j <= n; ++j)
        out.push_back(apply_map(g, out.back(), s.power(j), t.power(j)));
    return out;
}

// Maps between bar complexes given the column maps G^(p+1) f.
NaturalMap bar_between(const ModelsCotriple& g, const std::vector<NaturalMap>& cols, Simplicial& s, Simplicial& t,
                       const Bar& bs, const Bar& bt, int bound)
{
    const int ts = s.power(0).top(), tt = t.power(0).top();
    std::vector<ChainMap> comps;
    for (int x = 0; x < g.category.object_count(); ++x)
    {
        std::vector<IntMatrix> parts;
        for (int d = 0; d <= bound; ++d)
        {
            auto so = bar_offsets(s, x, d, bound), to = bar_offsets(t, x, d, bound);
            IntMatrix mat = zero_matrix(to.back(), so.back());
            for (int p = 0; p <= d; ++p)
                if (d - p <= std::min(ts, tt))
                {
                    IntMatrix blk = cols[static_cast<std::size_t>(p + 1)].at(x).component(d - p);
                    mat.block(to[static_cast<std::size_t>(p)], so[static_cast<std::size_t>(p)], blk.rows(),
                              blk.cols()) = blk;
                }
            parts.push_back(mat);
        }
        comps.emplace_back(bs.complex.at(x), bt.complex.at(x), parts);
    }
    return NaturalMap(bs.complex, bt.complex, comps);
}

}  // namespace

FunctorComplex apply(const ModelsCotriple& g, const FunctorComplex& k)
{
    require(g, k);
    const FiniteCategory& c = g.category;
    const int top = k.top();
    std::vector<ChainComplex> values;
    for (int x = 0; x < c.object_count(); ++x)
    {
        const auto sums = g.summands(x);
        std::vector<Index> ranks;
        std::vector<IntMatrix> diffs;
        for (int d = 0; d <= top; ++d)
        {
            ranks.push_back(summand_offsets(g, k, sums, d).back());
            if (d >= 1)
            {
                std::vector<IntMatrix> blocks;
                for (const auto& s : sums)
                    blocks.push_back(k.at(model_object(g, s)).differential(d));
                diffs.push_back(block_diagonal(blocks));
            }
        }
        values.push_back(ChainComplex::free(k.ring(), 0, ranks, diffs));
    }
    std::vector<ChainMap> maps;
    for (int a = 0; a < c.morphism_count(); ++a)
    {
        const Morphism& m = c.morphism(a);
        const auto from = g.summands(m.source), to = g.summands(m.target);
        std::vector<IntMatrix> comps;
        for (int d = 0; d <= top; ++d)
        {
            auto fo = summand_offsets(g, k, from, d), tof = summand_offsets(g, k, to, d);
            IntMatrix mat = zero_matrix(tof.back(), fo.back());
            for (std::size_t i = 0; i < from.size(); ++i)
            {
                std::size_t j = summand_index(to, from[i].model, c.compose(a, from[i].morphism));
                Index n = fo[i + 1] - fo[i];
                mat.block(tof[j], fo[i], n, n) = identity_matrix(n);
            }
            comps.push_back(mat);
        }
        maps.emplace_back(values[static_cast<std::size_t>(m.source)], values[static_cast<std::size_t>(m.target)],
                          comps);
    }
    return FunctorComplex(c, values, maps);
}

NaturalMap apply(const ModelsCotriple& g, const NaturalMap& f)
{
    require(g, f.source());
    return apply_map(g, f, apply(g, f.source()), apply(g, f.target()));
}

NaturalMap counit(const ModelsCotriple& g, const FunctorComplex& k)
{
    require(g, k);
    return counit_with(g, k, apply(g, k));
}

NaturalMap comultiplication(const ModelsCotriple& g, const FunctorComplex& k)
{
    require(g, k);
    FunctorComplex gk = apply(g, k);
    return comult_with(g, k, gk, apply(g, gk));
}

std::string check_cotriple_laws(const ModelsCotriple& g, const FunctorComplex& k)
{
    require(g, k);
    Simplicial s(g, k);
    const NaturalMap& eps = s.face(0, 0);
    const NaturalMap& del = s.degeneracy(0, 0);
    std::string err = eps.check();
    if (!err.empty())
        return "counit: " + err;
    err = del.check();
    if (!err.empty())
        return "comultiplication: " + err;
    NaturalMap id = NaturalMap::identity(s.power(1));
    if (!equal_maps(compose(s.face(1, 0), del), id))
        return "eps_G o delta is not the identity";
    if (!equal_maps(compose(s.face(1, 1), del), id))
        return "G(eps) o delta is not the identity";
    if (!equal_maps(compose(s.degeneracy(1, 1), del), compose(s.degeneracy(1, 0), del)))
        return "delta is not coassociative";
    return {};
}

std::string check_simplicial_identities(const ModelsCotriple& g, const FunctorComplex& k, int bound)
{
    require(g, k);
    Simplicial s(g, k);
    auto tag = [](const char* what, int n, int i, int j) {
        return std::string(what) + " fails at n=" + std::to_string(n) + " i=" + std::to_string(i)
               + " j=" + std::to_string(j);
    };
    for (int n = 0; n <= bound; ++n)
    {
        for (int j = 1; j <= n; ++j)
            for (int i = 0; i < j; ++i)
                if (!equal_maps(compose(s.face(n - 1, i), s.face(n, j)), compose(s.face(n - 1, j - 1), s.face(n, i))))
                    return tag("d_i d_j = d_(j-1) d_i", n, i, j);
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= j; ++i)
                if (!equal_maps(compose(s.degeneracy(n + 1, i), s.degeneracy(n, j)),
                                compose(s.degeneracy(n + 1, j + 1), s.degeneracy(n, i))))
                    return tag("s_i s_j = s_(j+1) s_i", n, i, j);
        NaturalMap id = NaturalMap::identity(s.power(n + 1));
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n + 1; ++i)
            {
                NaturalMap lhs = compose(s.face(n + 1, i), s.degeneracy(n, j));
                bool ok = true;
                if (i < j)
                    ok = equal_maps(lhs, compose(s.degeneracy(n - 1, j - 1), s.face(n, i)));
                else if (i == j || i == j + 1)
                    ok = equal_maps(lhs, id);
                else
                    ok = equal_maps(lhs, compose(s.degeneracy(n - 1, j), s.face(n, i - 1)));
                if (!ok)
                    return tag("d_i s_j", n, i, j);
            }
    }
    return {};
}

Bar bar(const ModelsCotriple& g, const FunctorComplex& k, int bound)
{
    require(g, k);
    if (bound < 0)
        throw PreconditionError("bar: negative bound");
    Simplicial s(g, k);
    return build_bar(g, s, bound);
}

NaturalMap bar_map(const ModelsCotriple& g, const NaturalMap& f, int bound)
{
    require(g, f.source());
    if (bound < 0)
        throw PreconditionError("bar_map: negative bound");
    Simplicial s(g, f.source()), t(g, f.target());
    Bar bs = build_bar(g, s, bound), bt = build_bar(g, t, bound);
    return bar_between(g, iterate(g, f, s, t, bound + 1), s, t, bs, bt, bound);
}

BarContraction contraction_for_GK(const ModelsCotriple& g, const FunctorComplex& k, int bound)
{
    require(g, k);
    if (bound < 0)
        throw PreconditionError("contraction: negative bound");
    Simplicial base(g, k);
    Simplicial s(g, base.power(1)), t(g, base.power(2));
    BarContraction out;
    out.bound = bound;
    out.bar = build_bar(g, s, bound + 1);
    // cols[j] = G^j delta_K: G^j (GK) -> G^(j+1) (GK)
    std::vector<NaturalMap> cols = iterate(g, base.degeneracy(0, 0), s, t, bound + 1);
    const FunctorComplex& gk = s.power(0);
    const int top = gk.top();
    std::vector<ChainMap> section;
    for (int x = 0; x < g.category.object_count(); ++x)
    {
        std::vector<IntMatrix> comps;
        for (int d = 0; d <= top; ++d)
        {
            IntMatrix mat = zero_matrix(out.bar.complex.at(x).rank(d), gk.at(x).rank(d));
            if (d <= bound + 1)
            {
                IntMatrix blk = cols[0].at(x).component(d);
                mat.topRows(blk.rows()) = blk;
            }
            comps.push_back(mat);
        }
        section.emplace_back(gk.at(x), out.bar.complex.at(x), comps);

        std::vector<IntMatrix> sx;
        for (int d = 0; d <= bound; ++d)
        {
            auto from = bar_offsets(s, x, d, bound + 1), to = bar_offsets(s, x, d + 1, bound + 1);
            IntMatrix mat = zero_matrix(to.back(), from.back());
            for (int p = 0; p <= d; ++p)
                if (d - p <= top)
                {
                    IntMatrix blk = sign(p + 1) * cols[static_cast<std::size_t>(p + 1)].at(x).component(d - p);
                    mat.block(to[static_cast<std::size_t>(p + 1)], from[static_cast<std::size_t>(p)], blk.rows(),
                              blk.cols()) = blk;
                }
            sx.push_back(mat);
        }
        out.s.push_back(sx);
    }
    out.section = NaturalMap(gk, out.bar.complex, section);
    return out;
}

std::string check(const BarContraction& c)
{
    const FunctorComplex& b = c.bar.complex;
    const FunctorComplex& gk = c.bar.augmentation.target();
    std::string err = c.section.check();
    if (!err.empty())
        return "section: " + err;
    err = c.bar.augmentation.check();
    if (!err.empty())
        return "augmentation: " + err;
    if (!equal_maps(compose(c.bar.augmentation, c.section), NaturalMap::identity(gk)))
        return "eps o section is not the identity";
    const FiniteCategory& cat = b.category();
    for (int x = 0; x < cat.object_count(); ++x)
    {
        const ChainComplex& bx = b.at(x);
        const auto& sx = c.s.at(static_cast<std::size_t>(x));
        for (int d = 0; d <= c.bound; ++d)
        {
            IntMatrix lhs = bx.differential(d + 1) * sx[static_cast<std::size_t>(d)];
            if (d >= 1)
                lhs += sx[static_cast<std::size_t>(d - 1)] * bx.differential(d);
            IntMatrix rhs = identity_matrix(bx.rank(d))
                            - c.section.at(x).component(d) * c.bar.augmentation.at(x).component(d);
            if (b.ring().reduce(IntMatrix(lhs - rhs)) != zero_matrix(lhs.rows(), lhs.cols()))
                return "ds + sd != id - section eps at " + cat.object_name(x) + " degree " + std::to_string(d);
        }
    }
    for (int a = 0; a < cat.morphism_count(); ++a)
    {
        const Morphism& m = cat.morphism(a);
        for (int d = 0; d <= c.bound; ++d)
        {
            IntMatrix lhs = b.map(a).component(d + 1) * c.s[static_cast<std::size_t>(m.source)][static_cast<std::size_t>(d)];
            IntMatrix rhs = c.s[static_cast<std::size_t>(m.target)][static_cast<std::size_t>(d)] * b.map(a).component(d);
            if (b.ring().reduce(IntMatrix(lhs - rhs)) != zero_matrix(lhs.rows(), lhs.cols()))
                return "s is not natural for " + m.name + " in degree " + std::to_string(d);
        }
    }
    return {};
}

// ---------------------------------------------------------------- strong classes

namespace {

bool is_zero_mod(const Ring& ring, const IntMatrix& a)
{
    return is_zero(ring.reduce(a));
}

// Solves for psi, h, k on the given objects; naturality is imposed when asked.
std::optional<EquivalenceWitness> solve_inverse(const NaturalMap& phi, int bound, const std::vector<int>& objects,
                                                bool natural)
{
    const FunctorComplex& A = phi.source();
    const FunctorComplex& B = phi.target();
    const FiniteCategory& c = A.category();
    LinearSystem sys(A.ring());
    std::map<int, std::vector<int>> psi, h, k;
    for (int x : objects)
    {
        const ChainComplex& a = A.at(x);
        const ChainComplex& b = B.at(x);
        for (int d = 0; d <= bound; ++d)
            psi[x].push_back(sys.add_unknown(a.rank(d), b.rank(d)));
        for (int d = 0; d < bound; ++d)
        {
            h[x].push_back(sys.add_unknown(a.rank(d + 1), a.rank(d)));
            k[x].push_back(sys.add_unknown(b.rank(d + 1), b.rank(d)));
        }
    }
    auto at = [](std::map<int, std::vector<int>>& m, int x, int d) { return m[x][static_cast<std::size_t>(d)]; };
    for (int x : objects)
    {
        const ChainComplex& a = A.at(x);
        const ChainComplex& b = B.at(x);
        for (int d = 1; d <= bound; ++d)
        {
            int e = sys.add_equation(a.rank(d - 1), b.rank(d));
            sys.add_term(e, a.differential(d), at(psi, x, d), identity_matrix(b.rank(d)));
            sys.add_term(e, -identity_matrix(a.rank(d - 1)), at(psi, x, d - 1), b.differential(d));
        }
        for (int d = 0; d < bound; ++d)
        {
            int e = sys.add_equation(a.rank(d), a.rank(d));
            sys.add_term(e, identity_matrix(a.rank(d)), at(psi, x, d), phi.at(x).component(d));
            sys.add_term(e, a.differential(d + 1), at(h, x, d), identity_matrix(a.rank(d)));
            if (d >= 1)
                sys.add_term(e, identity_matrix(a.rank(d)), at(h, x, d - 1), a.differential(d));
            sys.add_rhs(e, identity_matrix(a.rank(d)));

            int f = sys.add_equation(b.rank(d), b.rank(d));
            sys.add_term(f, phi.at(x).component(d), at(psi, x, d), identity_matrix(b.rank(d)));
            sys.add_term(f, b.differential(d + 1), at(k, x, d), identity_matrix(b.rank(d)));
            if (d >= 1)
                sys.add_term(f, identity_matrix(b.rank(d)), at(k, x, d - 1), b.differential(d));
            sys.add_rhs(f, identity_matrix(b.rank(d)));
        }
    }
    if (natural)
        for (int m = 0; m < c.morphism_count(); ++m)
        {
            if (c.is_identity(m))
                continue;
            int x = c.morphism(m).source, y = c.morphism(m).target;
            for (int d = 0; d <= bound; ++d)
            {
                int e = sys.add_equation(A.at(y).rank(d), B.at(x).rank(d));
                sys.add_term(e, A.map(m).component(d), at(psi, x, d), identity_matrix(B.at(x).rank(d)));
                sys.add_term(e, -identity_matrix(A.at(y).rank(d)), at(psi, y, d), B.map(m).component(d));
            }
            for (int d = 0; d < bound; ++d)
            {
                int e = sys.add_equation(A.at(y).rank(d + 1), A.at(x).rank(d));
                sys.add_term(e, A.map(m).component(d + 1), at(h, x, d), identity_matrix(A.at(x).rank(d)));
                sys.add_term(e, -identity_matrix(A.at(y).rank(d + 1)), at(h, y, d), A.map(m).component(d));
                int f = sys.add_equation(B.at(y).rank(d + 1), B.at(x).rank(d));
                sys.add_term(f, B.map(m).component(d + 1), at(k, x, d), identity_matrix(B.at(x).rank(d)));
                sys.add_term(f, -identity_matrix(B.at(y).rank(d + 1)), at(k, y, d), B.map(m).component(d));
            }
        }
    auto sol = sys.solve();
    if (!sol)
        return std::nullopt;
    EquivalenceWitness w;
    const auto n = static_cast<std::size_t>(c.object_count());
    w.inverse.resize(n);
    w.left.resize(n);
    w.right.resize(n);
    for (int x : objects)
    {
        const auto X = static_cast<std::size_t>(x);
        for (int d = 0; d <= bound; ++d)
            w.inverse[X].push_back((*sol)[static_cast<std::size_t>(at(psi, x, d))]);
        for (int d = 0; d < bound; ++d)
        {
            w.left[X].push_back((*sol)[static_cast<std::size_t>(at(h, x, d))]);
            w.right[X].push_back((*sol)[static_cast<std::size_t>(at(k, x, d))]);
        }
    }
    return w;
}

}  // namespace

std::optional<EquivalenceWitness> homotopy_inverse(const NaturalMap& phi, int bound, StrongClass cls)
{
    if (cls == StrongClass::quasi)
        throw PreconditionError("homotopy_inverse: quasi-isomorphisms have no homotopy inverse data");
    if (bound < 0)
        throw PreconditionError("homotopy_inverse: negative bound");
    const int n = phi.source().category().object_count();
    if (cls == StrongClass::natural)
    {
        std::vector<int> all;
        for (int x = 0; x < n; ++x)
            all.push_back(x);
        return solve_inverse(phi, bound, all, true);
    }
    EquivalenceWitness w;
    w.inverse.resize(static_cast<std::size_t>(n));
    w.left.resize(static_cast<std::size_t>(n));
    w.right.resize(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x)
    {
        auto part = solve_inverse(phi, bound, {x}, false);
        if (!part)
            return std::nullopt;
        const auto X = static_cast<std::size_t>(x);
        w.inverse[X] = part->inverse[X];
        w.left[X] = part->left[X];
        w.right[X] = part->right[X];
    }
    return w;
}

std::string check(const NaturalMap& phi, const EquivalenceWitness& w, int bound, StrongClass cls)
{
    const FunctorComplex& A = phi.source();
    const FunctorComplex& B = phi.target();
    const FiniteCategory& c = A.category();
    const Ring& ring = A.ring();
    const auto n = static_cast<std::size_t>(c.object_count());
    if (w.inverse.size() != n || w.left.size() != n || w.right.size() != n)
        return "witness has the wrong number of objects";
    for (int x = 0; x < c.object_count(); ++x)
    {
        const auto X = static_cast<std::size_t>(x);
        const ChainComplex& a = A.at(x);
        const ChainComplex& b = B.at(x);
        if (w.inverse[X].size() != static_cast<std::size_t>(bound + 1)
            || w.left[X].size() != static_cast<std::size_t>(bound)
            || w.right[X].size() != static_cast<std::size_t>(bound))
            return "witness has the wrong number of degrees";
        auto psi = [&](int d) { return w.inverse[X][static_cast<std::size_t>(d)]; };
        auto h = [&](int d) { return w.left[X][static_cast<std::size_t>(d)]; };
        auto k = [&](int d) { return w.right[X][static_cast<std::size_t>(d)]; };
        for (int d = 0; d <= bound; ++d)
            if (psi(d).rows() != a.rank(d) || psi(d).cols() != b.rank(d))
                return "inverse has the wrong shape";
        for (int d = 0; d < bound; ++d)
            if (h(d).rows() != a.rank(d + 1) || h(d).cols() != a.rank(d) || k(d).rows() != b.rank(d + 1)
                || k(d).cols() != b.rank(d))
                return "homotopy has the wrong shape";
        for (int d = 1; d <= bound; ++d)
            if (!is_zero_mod(ring, a.differential(d) * psi(d) - psi(d - 1) * b.differential(d)))
                return "inverse is not a chain map at " + c.object_name(x) + " degree " + std::to_string(d);
        for (int d = 0; d < bound; ++d)
        {
            IntMatrix l = psi(d) * phi.at(x).component(d) + a.differential(d + 1) * h(d);
            if (d >= 1)
                l += h(d - 1) * a.differential(d);
            if (!is_zero_mod(ring, l - identity_matrix(a.rank(d))))
                return "h is not a homotopy psi phi => id at " + c.object_name(x) + " degree " + std::to_string(d);
            IntMatrix r = phi.at(x).component(d) * psi(d) + b.differential(d + 1) * k(d);
            if (d >= 1)
                r += k(d - 1) * b.differential(d);
            if (!is_zero_mod(ring, r - identity_matrix(b.rank(d))))
                return "k is not a homotopy phi psi => id at " + c.object_name(x) + " degree " + std::to_string(d);
        }
    }
    if (cls != StrongClass::natural)
        return {};
    for (int m = 0; m < c.morphism_count(); ++m)
    {
        const auto X = static_cast<std::size_t>(c.morphism(m).source);
        const auto Y = static_cast<std::size_t>(c.morphism(m).target);
        for (int d = 0; d <= bound; ++d)
        {
            const auto D = static_cast<std::size_t>(d);
            if (!is_zero_mod(ring, A.map(m).component(d) * w.inverse[X][D] - w.inverse[Y][D] * B.map(m).component(d)))
                return "inverse is not natural for " + c.morphism(m).name;
            if (d == bound)
                continue;
            if (!is_zero_mod(ring, A.map(m).component(d + 1) * w.left[X][D] - w.left[Y][D] * A.map(m).component(d)))
                return "h is not natural for " + c.morphism(m).name;
            if (!is_zero_mod(ring, B.map(m).component(d + 1) * w.right[X][D] - w.right[Y][D] * B.map(m).component(d)))
                return "k is not natural for " + c.morphism(m).name;
        }
    }
    return {};
}

bool is_pointwise_homotopy_equivalence(const NaturalMap& phi, int bound)
{
    return homotopy_inverse(phi, bound, StrongClass::pointwise).has_value();
}

bool is_natural_homotopy_equivalence(const NaturalMap& phi, int bound)
{
    return homotopy_inverse(phi, bound, StrongClass::natural).has_value();
}

bool in_class(const NaturalMap& phi, int bound, StrongClass cls)
{
    if (cls != StrongClass::quasi)
        return homotopy_inverse(phi, bound, cls).has_value();
    if (bound < 1)
        return true;
    for (int x = 0; x < phi.source().category().object_count(); ++x)
        if (!is_acyclic(cone(phi.at(x)), DegreeRange{0, bound - 1}))
            return false;
    return true;
}

CofibrancyResult is_g_cofibrant(const ModelsCotriple& g, const FunctorComplex& k, int bound, StrongClass cls)
{
    CofibrancyResult out;
    out.bar = bar(g, k, bound);
    if (cls == StrongClass::quasi)
        out.cofibrant = in_class(out.bar.augmentation, bound, cls);
    else
    {
        out.witness = homotopy_inverse(out.bar.augmentation, bound, cls);
        out.cofibrant = out.witness.has_value();
    }
    return out;
}

EquivalenceWitness transport_retract(const ModelsCotriple& g, const NaturalMap& i, const NaturalMap& r,
                                     const EquivalenceWitness& w, int bound)
{
    if (!equal_maps(compose(r, i), NaturalMap::identity(i.source())))
        throw PreconditionError("transport_retract: r o i is not the identity");
    NaturalMap bi = bar_map(g, i, bound), br = bar_map(g, r, bound);
    EquivalenceWitness out;
    for (int x = 0; x < g.category.object_count(); ++x)
    {
        const auto X = static_cast<std::size_t>(x);
        std::vector<IntMatrix> psi, h, k;
        for (int d = 0; d <= bound; ++d)
        {
            const auto D = static_cast<std::size_t>(d);
            psi.push_back(br.at(x).component(d) * w.inverse.at(X).at(D) * i.at(x).component(d));
            if (d == bound)
                continue;
            h.push_back(br.at(x).component(d + 1) * w.left.at(X).at(D) * bi.at(x).component(d));
            k.push_back(r.at(x).component(d + 1) * w.right.at(X).at(D) * i.at(x).component(d));
        }
        out.inverse.push_back(psi);
        out.left.push_back(h);
        out.right.push_back(k);
    }
    return out;
}

// ---------------------------------------------------------------- homotopy classes

NaturalClasses::NaturalClasses(const FunctorComplex& k, const FunctorComplex& l, int bound)
    : k_(k), l_(l), top_(k.top())
{
    if (k.category() != l.category())
        throw PreconditionError("natural classes: functors on different categories");
    if (k.ring() != l.ring())
        throw PreconditionError("natural classes: functors over different rings");
    if (top_ + 1 > bound)
        throw PreconditionError("natural classes: the source must live below the bound");
    const FiniteCategory& c = k.category();
    const Ring& ring = k.ring();
    auto rank = [](const FunctorComplex& f, int x, int d) { return f.at(x).rank(d); };

    for (int x = 0; x < c.object_count(); ++x)
    {
        std::vector<Index> off;
        for (int d = 0; d <= top_; ++d)
        {
            off.push_back(size_);
            size_ += rank(l, x, d) * rank(k, x, d);
        }
        offset_.push_back(off);
    }

    LinearSystem maps(ring);
    std::vector<std::vector<int>> phi;
    for (int x = 0; x < c.object_count(); ++x)
    {
        std::vector<int> row;
        for (int d = 0; d <= top_; ++d)
            row.push_back(maps.add_unknown(rank(l, x, d), rank(k, x, d)));
        phi.push_back(row);
    }
    for (int x = 0; x < c.object_count(); ++x)
        for (int d = 1; d <= top_; ++d)
        {
            const auto X = static_cast<std::size_t>(x);
            int e = maps.add_equation(rank(l, x, d - 1), rank(k, x, d));
            maps.add_term(e, l.at(x).differential(d), phi[X][static_cast<std::size_t>(d)], identity_matrix(rank(k, x, d)));
            maps.add_term(e, -identity_matrix(rank(l, x, d - 1)), phi[X][static_cast<std::size_t>(d - 1)],
                          k.at(x).differential(d));
        }

    LinearSystem homotopies(ring);
    std::vector<std::vector<int>> hom;
    for (int x = 0; x < c.object_count(); ++x)
    {
        std::vector<int> row;
        for (int d = 0; d <= top_; ++d)
            row.push_back(homotopies.add_unknown(rank(l, x, d + 1), rank(k, x, d)));
        hom.push_back(row);
    }
    for (int m = 0; m < c.morphism_count(); ++m)
    {
        if (c.is_identity(m))
            continue;
        const int x = c.morphism(m).source, y = c.morphism(m).target;
        const auto X = static_cast<std::size_t>(x), Y = static_cast<std::size_t>(y);
        for (int d = 0; d <= top_; ++d)
        {
            const auto D = static_cast<std::size_t>(d);
            int e = maps.add_equation(rank(l, y, d), rank(k, x, d));
            maps.add_term(e, l.map(m).component(d), phi[X][D], identity_matrix(rank(k, x, d)));
            maps.add_term(e, -identity_matrix(rank(l, y, d)), phi[Y][D], k.map(m).component(d));

            int f = homotopies.add_equation(rank(l, y, d + 1), rank(k, x, d));
            homotopies.add_term(f, l.map(m).component(d + 1), hom[X][D], identity_matrix(rank(k, x, d)));
            homotopies.add_term(f, -identity_matrix(rank(l, y, d + 1)), hom[Y][D], k.map(m).component(d));
        }
    }

    // Boundary map from homotopy entries to chain-map entries: h -> dh + hd.
    const Index nh = homotopies.unknown_count();
    IntMatrix boundary = zero_matrix(size_, nh);
    Index col = 0;
    for (int x = 0; x < c.object_count(); ++x)
        for (int d = 0; d <= top_; ++d)
        {
            const Index rows = rank(l, x, d + 1), cols = rank(k, x, d);
            for (Index j = 0; j < cols; ++j)
                for (Index i = 0; i < rows; ++i, ++col)
                {
                    IntMatrix e = zero_matrix(rows, cols);
                    e(i, j) = 1;
                    const auto X = static_cast<std::size_t>(x);
                    IntVector v = vec(IntMatrix(l.at(x).differential(d + 1) * e));
                    boundary.block(offset_[X][static_cast<std::size_t>(d)], col, v.size(), 1) += v;
                    if (d + 1 <= top_)
                    {
                        IntVector w = vec(IntMatrix(e * k.at(x).differential(d + 1)));
                        boundary.block(offset_[X][static_cast<std::size_t>(d + 1)], col, w.size(), 1) += w;
                    }
                }
        }
    IntMatrix constraints = homotopies.coefficients();
    IntMatrix natural_h = constraints.rows() == 0 ? identity_matrix(nh) : kernel_basis(constraints, ring);
    IntMatrix out = maps.coefficients();
    sq_ = std::make_shared<Subquotient>(ring, out, zero_matrix(out.rows(), 0), IntMatrix(boundary * natural_h),
                                        zero_matrix(size_, 0));
}

IntVector NaturalClasses::pack(const NaturalMap& f) const
{
    IntVector v = IntVector::Zero(size_);
    for (std::size_t x = 0; x < offset_.size(); ++x)
        for (int d = 0; d <= top_; ++d)
        {
            IntVector part = vec(f.at(static_cast<int>(x)).component(d));
            v.segment(offset_[x][static_cast<std::size_t>(d)], part.size()) = part;
        }
    return v;
}

NaturalMap NaturalClasses::unpack(const IntVector& v) const
{
    std::vector<ChainMap> comps;
    for (std::size_t x = 0; x < offset_.size(); ++x)
    {
        const int X = static_cast<int>(x);
        std::vector<IntMatrix> parts;
        for (int d = 0; d <= top_; ++d)
        {
            Index rows = l_.at(X).rank(d), cols = k_.at(X).rank(d);
            parts.push_back(unvec(v.segment(offset_[x][static_cast<std::size_t>(d)], rows * cols), rows, cols));
        }
        comps.emplace_back(k_.at(X), l_.at(X), parts);
    }
    return NaturalMap(k_, l_, comps);
}

NaturalMap NaturalClasses::representative(Index i) const
{
    return unpack(sq_->representatives().col(i));
}

IntVector NaturalClasses::coordinates(const NaturalMap& f) const
{
    IntMatrix v = pack(f);
    return sq_->coordinates(v).col(0);
}

PresentedModule natural_transformation_classes(const FunctorComplex& k, const FunctorComplex& l, int bound)
{
    return NaturalClasses(k, l, bound).module();
}

// ---------------------------------------------------------------- module functors

std::string ModuleFunctor::check() const
{
    if (static_cast<int>(values.size()) != category.object_count()
        || static_cast<int>(maps.size()) != category.morphism_count())
        return "wrong number of values or maps";
    for (int a = 0; a < category.morphism_count(); ++a)
    {
        const Morphism& m = category.morphism(a);
        ModuleMap f(values[static_cast<std::size_t>(m.source)], values[static_cast<std::size_t>(m.target)],
                    maps[static_cast<std::size_t>(a)]);
        if (!f.is_well_defined())
            return "map " + m.name + " is not well defined";
    }
    return {};
}

namespace {

IntMatrix homology_matrix(const Subquotient& from, const Subquotient& to, const IntMatrix& f)
{
    return to.coordinates(IntMatrix(f * from.representatives()));
}

}  // namespace

ModuleFunctor homology_functor(const FunctorComplex& k, int degree)
{
    const FiniteCategory& c = k.category();
    std::vector<Subquotient> h;
    ModuleFunctor out;
    out.category = c;
    for (int x = 0; x < c.object_count(); ++x)
    {
        h.push_back(homology_data(k.at(x), degree));
        out.values.push_back(h.back().module());
    }
    for (int a = 0; a < c.morphism_count(); ++a)
    {
        const Morphism& m = c.morphism(a);
        out.maps.push_back(homology_matrix(h[static_cast<std::size_t>(m.source)], h[static_cast<std::size_t>(m.target)],
                                           k.map(a).component(degree)));
    }
    return out;
}

ModuleFunctorMaps::ModuleFunctorMaps(const ModuleFunctor& a, const ModuleFunctor& b) : a_(a), b_(b)
{
    if (a.category != b.category)
        throw PreconditionError("module functor maps: different categories");
    const FiniteCategory& c = a.category;
    const Ring ring = a.values.front().ring;
    LinearSystem sys(ring);
    std::vector<int> block;
    std::vector<IntMatrix> relations;
    for (int x = 0; x < c.object_count(); ++x)
    {
        const auto X = static_cast<std::size_t>(x);
        const PresentedModule& s = a.values[X];
        const PresentedModule& t = b.values[X];
        offset_.push_back(size_);
        size_ += t.generators * s.generators;
        block.push_back(sys.add_unknown(t.generators, s.generators));
        relations.push_back(kron(identity_matrix(s.generators), t.relations));
        int e = sys.add_equation(t.generators, s.relations.cols(), t.relations);
        sys.add_term(e, identity_matrix(t.generators), block.back(), s.relations);
    }
    for (int m = 0; m < c.morphism_count(); ++m)
    {
        if (c.is_identity(m))
            continue;
        const auto X = static_cast<std::size_t>(c.morphism(m).source);
        const auto Y = static_cast<std::size_t>(c.morphism(m).target);
        const IntMatrix& fa = a.maps[static_cast<std::size_t>(m)];
        const IntMatrix& fb = b.maps[static_cast<std::size_t>(m)];
        int e = sys.add_equation(b.values[Y].generators, a.values[X].generators, b.values[Y].relations);
        sys.add_term(e, fb, block[X], identity_matrix(a.values[X].generators));
        sys.add_term(e, -identity_matrix(b.values[Y].generators), block[Y], fa);
    }
    sq_ = std::make_shared<Subquotient>(ring, sys.coefficients(), sys.modulo_span(), zero_matrix(size_, 0),
                                        block_diagonal(relations));
}

std::vector<IntMatrix> ModuleFunctorMaps::representative(Index i) const
{
    IntVector v = sq_->representatives().col(i);
    std::vector<IntMatrix> out;
    for (std::size_t x = 0; x < offset_.size(); ++x)
    {
        Index rows = b_.values[x].generators, cols = a_.values[x].generators;
        out.push_back(unvec(v.segment(offset_[x], rows * cols), rows, cols));
    }
    return out;
}

IntVector ModuleFunctorMaps::coordinates(const std::vector<IntMatrix>& maps) const
{
    IntMatrix v = zero_matrix(size_, 1);
    for (std::size_t x = 0; x < offset_.size(); ++x)
    {
        IntVector part = vec(maps.at(x));
        v.block(offset_[x], 0, part.size(), 1) = part;
    }
    return sq_->coordinates(v).col(0);
}

// ---------------------------------------------------------------- acyclic models

Augmentation zeroth_homology(const FunctorComplex& l)
{
    const FiniteCategory& c = l.category();
    std::vector<Subquotient> h;
    std::vector<ChainComplex> values;
    for (int x = 0; x < c.object_count(); ++x)
    {
        h.push_back(homology_data(l.at(x), 0));
        if (!h.back().module().is_free())
            throw PreconditionError("H_0 at " + c.object_name(x) + " is not free");
        values.push_back(ChainComplex::free(l.ring(), 0, {h.back().module().generators}, {}));
    }
    std::vector<ChainMap> maps;
    for (int a = 0; a < c.morphism_count(); ++a)
    {
        const Morphism& m = c.morphism(a);
        maps.emplace_back(values[static_cast<std::size_t>(m.source)], values[static_cast<std::size_t>(m.target)],
                          std::vector<IntMatrix>{homology_matrix(h[static_cast<std::size_t>(m.source)],
                                                                 h[static_cast<std::size_t>(m.target)],
                                                                 l.map(a).component(0))});
    }
    Augmentation out;
    out.h0 = FunctorComplex(c, values, maps);
    std::vector<ChainMap> tau;
    for (int x = 0; x < c.object_count(); ++x)
    {
        const auto X = static_cast<std::size_t>(x);
        std::vector<IntMatrix> comps;
        for (int d = 0; d <= l.top(); ++d)
            comps.push_back(d == 0 ? h[X].coordinates(identity_matrix(l.at(x).rank(0)))
                                   : zero_matrix(0, l.at(x).rank(d)));
        tau.emplace_back(l.at(x), out.h0.at(x), comps);
    }
    out.tau = NaturalMap(l, out.h0, tau);
    return out;
}

bool is_g_acyclic(const ModelsCotriple& g, const FunctorComplex& l, int bound, StrongClass cls)
{
    Augmentation a = zeroth_homology(l);
    return in_class(apply(g, a.tau), bound, cls);
}

namespace {

MapStatus status(std::string name, const PresentedModule& source, const PresentedModule& target,
                 const IntMatrix& matrix)
{
    MapStatus s;
    s.name = std::move(name);
    s.source = invariant_factors(source);
    s.target = invariant_factors(target);
    ModuleMap f(source, target, matrix);
    s.well_defined = f.is_well_defined();
    s.iso = s.well_defined && is_module_iso(f).is_iso;
    return s;
}

IntMatrix matrix_of(const NaturalClasses& from, Index target_generators,
                    const std::function<IntVector(const NaturalMap&)>& image)
{
    IntMatrix m = zero_matrix(target_generators, from.generator_count());
    for (Index i = 0; i < from.generator_count(); ++i)
        m.col(i) = image(from.representative(i));
    return m;
}

std::vector<IntMatrix> h0_on_models(const NaturalMap& f)
{
    std::vector<IntMatrix> out;
    for (int x = 0; x < f.source().category().object_count(); ++x)
        out.push_back(homology_matrix(homology_data(f.source().at(x), 0), homology_data(f.target().at(x), 0),
                                      f.at(x).component(0)));
    return out;
}

}  // namespace

MapStatus restriction_check(const ModelsCotriple& g, const FunctorComplex& k, const FunctorComplex& l, int bound,
                            StrongClass cls)
{
    require(g, k);
    if (!is_g_cofibrant(g, k, bound, cls).cofibrant)
        throw PreconditionError("restriction_check: K is not G-cofibrant in the window");
    Subcategory s = full_subcategory(g.category, g.models);
    NaturalClasses full(k, l, bound);
    NaturalClasses res(restrict_to(k, s), restrict_to(l, s), bound);
    IntMatrix m = matrix_of(full, res.generator_count(),
                            [&](const NaturalMap& f) { return res.coordinates(restrict_to(f, s)); });
    return status("restriction", full.module(), res.module(), m);
}

AcyclicModelsReport acyclic_models_check(const ModelsCotriple& g, const FunctorComplex& k, const FunctorComplex& l,
                                         int bound, StrongClass cls)
{
    require(g, k);
    if (!is_g_cofibrant(g, k, bound, cls).cofibrant)
        throw PreconditionError("acyclic_models_check: K is not G-cofibrant in the window");
    if (!is_g_acyclic(g, l, bound, cls))
        throw PreconditionError("acyclic_models_check: L is not G-acyclic in the window");
    Augmentation aug = zeroth_homology(l);
    Subcategory s = full_subcategory(g.category, g.models);
    FunctorComplex km = restrict_to(k, s);
    FunctorComplex hm = restrict_to(aug.h0, s);

    NaturalClasses kl(k, l, bound), kh(k, aug.h0, bound), kh_m(km, hm, bound);
    ModuleFunctorMaps hh(homology_functor(km, 0), homology_functor(hm, 0));
    ModuleFunctorMaps direct(homology_functor(km, 0), homology_functor(restrict_to(l, s), 0));

    AcyclicModelsReport out;
    out.factors.push_back(status("tau_L*", kl.module(), kh.module(),
                                 matrix_of(kl, kh.generator_count(),
                                           [&](const NaturalMap& f) { return kh.coordinates(compose(aug.tau, f)); })));
    out.factors.push_back(status("rho", kh.module(), kh_m.module(),
                                 matrix_of(kh, kh_m.generator_count(),
                                           [&](const NaturalMap& f) { return kh_m.coordinates(restrict_to(f, s)); })));
    out.factors.push_back(status("H_0", kh_m.module(), hh.module(),
                                 matrix_of(kh_m, hh.module().generators,
                                           [&](const NaturalMap& f) { return hh.coordinates(h0_on_models(f)); })));
    out.direct = status("H_0 rho", kl.module(), direct.module(),
                        matrix_of(kl, direct.module().generators, [&](const NaturalMap& f) {
                            return direct.coordinates(h0_on_models(restrict_to(f, s)));
                        }));
    out.bijective = out.direct.iso;
    return out;
}

FunctorComplex random_functor(Rng& rng, const FiniteCategory& c, const Ring& ring, int length, int max_rank)
{
    FunctorComplex out = FunctorComplex::constant(c, random_free_complex(rng, ring, 0, length, max_rank));
    const int parts = uniform(rng, 1, 2);
    for (int i = 0; i < parts; ++i)
    {
        std::vector<int> models;
        for (int x = 0; x < c.object_count(); ++x)
            if (uniform(rng, 0, 1) == 1)
                models.push_back(x);
        if (models.empty())
            models.push_back(uniform(rng, 0, c.object_count() - 1));
        ModelsCotriple g{c, models};
        out = direct_sum(out, apply(g, FunctorComplex::constant(c, random_free_complex(rng, ring, 0, length, max_rank))));
    }
    return out;
}

}  // namespace cekit
