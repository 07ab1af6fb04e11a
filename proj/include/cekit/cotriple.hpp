/**
 * Complex-valued functors on finite categories, the cotriple induced by a
 * set of model objects, its bar resolution, and the checks around
 * cofibrancy and acyclic models.
 *
 * Conventions:
 *   (GK)(X)   sum over pairs (M, f: M -> X), ordered by (model, morphism)
 *   faces     d_i = G^i eps G^(n-i): G^(n+1) K -> G^n K,  0 <= i <= n
 *   BK        Tot of B_n = G^(n+1) K, horizontal sum (-1)^i d_i,
 *             total differential d^h + (-1)^p d^v
 *   windows   a bound N means degrees 0..N are built and identities that
 *             need degree d + 1 are checked for d <= N - 1
 */

#ifndef CEKIT_COTRIPLE_HPP
#define CEKIT_COTRIPLE_HPP

#include <memory>
#include <string>
#include <vector>

#include "cekit/complex.hpp"
#include "cekit/random.hpp"

namespace cekit {

struct Morphism
{
    std::string name;
    int source = 0;
    int target = 0;
};

class FiniteCategory
{
    public:
        FiniteCategory() = default;

        /** compose[g][f] is the index of g o f, or -1 when f and g do not compose. */
        FiniteCategory(std::vector<std::string> objects, std::vector<Morphism> morphisms,
                       std::vector<int> identities, std::vector<std::vector<int>> compose);

        /** One object, identity only. */
        static FiniteCategory one_object();

        /** Objects 0 and 1 with a single arrow a: 0 -> 1. */
        static FiniteCategory arrow();

        /** One object whose endomorphisms form Z/n. */
        static FiniteCategory cyclic_group(int n);

        /** Poset on n objects generated by the pairs (i, j) meaning i <= j. */
        static FiniteCategory poset(int n, const std::vector<std::pair<int, int>>& less);

        int object_count() const { return static_cast<int>(objects_.size()); }
        int morphism_count() const { return static_cast<int>(morphisms_.size()); }
        const std::string& object_name(int x) const { return objects_.at(static_cast<std::size_t>(x)); }
        const Morphism& morphism(int a) const { return morphisms_.at(static_cast<std::size_t>(a)); }
        int identity(int x) const { return identities_.at(static_cast<std::size_t>(x)); }
        bool is_identity(int a) const;

        /** g o f; throws when they do not compose. */
        int compose(int g, int f) const;

        /** Morphisms x -> y in index order. */
        std::vector<int> hom(int x, int y) const;

        /** Associativity and unit laws, checked exhaustively. */
        std::string check() const;

        friend bool operator==(const FiniteCategory& a, const FiniteCategory& b);
        friend bool operator!=(const FiniteCategory& a, const FiniteCategory& b) { return !(a == b); }

    private:
        std::vector<std::string> objects_;
        std::vector<Morphism> morphisms_;
        std::vector<int> identities_;
        std::vector<std::vector<int>> compose_;
};

/** Full subcategory on some objects, with the index maps back. */
struct Subcategory
{
    FiniteCategory category;
    std::vector<int> objects;    // new object -> old object
    std::vector<int> morphisms;  // new morphism -> old morphism
};

Subcategory full_subcategory(const FiniteCategory& c, const std::vector<int>& objects);

/**
 * A functor to non-negative complexes of free modules.  Every value is
 * stored over the same degree range [0, top].
 */
class FunctorComplex
{
    public:
        FunctorComplex() = default;

        /** maps[a] is the value on morphism a; values are padded to a common range. */
        FunctorComplex(const FiniteCategory& category, std::vector<ChainComplex> values, std::vector<ChainMap> maps);

        /** Same complex everywhere, identities on every morphism. */
        static FunctorComplex constant(const FiniteCategory& category, const ChainComplex& c);

        const FiniteCategory& category() const { return category_; }
        const Ring& ring() const { return values_.front().ring(); }
        int top() const { return values_.front().top(); }
        const ChainComplex& at(int x) const { return values_.at(static_cast<std::size_t>(x)); }
        const ChainMap& map(int a) const { return maps_.at(static_cast<std::size_t>(a)); }

        /** Free values, identities preserved, composition respected. */
        std::string check() const;
        void validate() const;

        /** Degrees above n dropped. */
        FunctorComplex truncated(int n) const;

        friend bool operator==(const FunctorComplex& a, const FunctorComplex& b);

    private:
        FiniteCategory category_;
        std::vector<ChainComplex> values_;
        std::vector<ChainMap> maps_;
};

FunctorComplex direct_sum(const FunctorComplex& a, const FunctorComplex& b);
FunctorComplex restrict_to(const FunctorComplex& k, const Subcategory& s);

class NaturalMap
{
    public:
        NaturalMap() = default;
        NaturalMap(const FunctorComplex& source, const FunctorComplex& target, std::vector<ChainMap> components);

        static NaturalMap identity(const FunctorComplex& k);
        static NaturalMap zero(const FunctorComplex& k, const FunctorComplex& l);

        const FunctorComplex& source() const { return source_; }
        const FunctorComplex& target() const { return target_; }
        const ChainMap& at(int x) const { return components_.at(static_cast<std::size_t>(x)); }

        /** Chain maps at every object and commuting naturality squares. */
        std::string check() const;

    private:
        FunctorComplex source_, target_;
        std::vector<ChainMap> components_;
};

NaturalMap compose(const NaturalMap& g, const NaturalMap& f);
bool equal_maps(const NaturalMap& f, const NaturalMap& g);
NaturalMap restrict_to(const NaturalMap& f, const Subcategory& s);

struct ModelsCotriple
{
    FiniteCategory category;
    std::vector<int> models;

    struct Summand
    {
        int model;     // position in models
        int morphism;  // f: M -> X
    };

    /** Pairs (M, f: M -> X) in canonical order. */
    std::vector<Summand> summands(int x) const;

    std::string check() const;
};

FunctorComplex apply(const ModelsCotriple& g, const FunctorComplex& k);
NaturalMap apply(const ModelsCotriple& g, const NaturalMap& f);

/** eps_K: GK -> K with eps o <f> = K(f). */
NaturalMap counit(const ModelsCotriple& g, const FunctorComplex& k);

/** delta_K: GK -> G^2 K with delta o <f> = <<f>>. */
NaturalMap comultiplication(const ModelsCotriple& g, const FunctorComplex& k);

/** Counit laws, coassociativity and naturality of eps and delta on K. */
std::string check_cotriple_laws(const ModelsCotriple& g, const FunctorComplex& k);

/** Face and degeneracy identities on G^(n+1) K for n <= bound. */
std::string check_simplicial_identities(const ModelsCotriple& g, const FunctorComplex& k, int bound);

struct Bar
{
    FunctorComplex complex;   // Tot of the bar double complex in degrees 0..bound
    NaturalMap augmentation;  // BK -> K
    int bound = 0;
};

Bar bar(const ModelsCotriple& g, const FunctorComplex& k, int bound);

/** B(f): BK -> BL. */
NaturalMap bar_map(const ModelsCotriple& g, const NaturalMap& f, int bound);

/**
 * Contraction of eps_GK: B(GK) -> GK induced by delta.  The section is
 * delta_K placed in column 0 and s sends column p to column p + 1 by
 * (-1)^(p+1) G^(p+1) delta_K.
 */
struct BarContraction
{
    Bar bar;             // of GK, built to bound + 1
    NaturalMap section;  // GK -> B(GK)
    std::vector<std::vector<IntMatrix>> s;  // [object][degree] for degrees 0..bound
    int bound = 0;
};

BarContraction contraction_for_GK(const ModelsCotriple& g, const FunctorComplex& k, int bound);

/** eps o section = id, ds + sd = id - section o eps in degrees <= bound, s natural. */
std::string check(const BarContraction& c);

/** S_h (natural homotopy equivalences), S_ph (point-wise), or quasi-isomorphisms. */
enum class StrongClass { natural, pointwise, quasi };

/**
 * Homotopy inverse data for phi: K -> L in the window: psi: L -> K with
 * h: psi phi => id and k: phi psi => id, indexed [object][degree].
 */
struct EquivalenceWitness
{
    std::vector<std::vector<IntMatrix>> inverse, left, right;
};

/** One joint linear system over all objects; naturality constraints added for S_h. */
std::optional<EquivalenceWitness> homotopy_inverse(const NaturalMap& phi, int bound, StrongClass cls);

std::string check(const NaturalMap& phi, const EquivalenceWitness& w, int bound, StrongClass cls);

bool is_pointwise_homotopy_equivalence(const NaturalMap& phi, int bound);
bool is_natural_homotopy_equivalence(const NaturalMap& phi, int bound);

/** Membership of phi in the class within the window. */
bool in_class(const NaturalMap& phi, int bound, StrongClass cls);

struct CofibrancyResult
{
    bool cofibrant = false;
    Bar bar;
    std::optional<EquivalenceWitness> witness;  // for eps_K when cofibrant
};

/** Decides eps_K: BK -> K in the class within the window. */
CofibrancyResult is_g_cofibrant(const ModelsCotriple& g, const FunctorComplex& k, int bound,
                                StrongClass cls = StrongClass::natural);

/**
 * Witness for eps_K' from one for eps_K when K' is a retract of K
 * (r o i = id): psi' = B(r) psi i, h' = B(r) h B(i), k' = r k i.
 */
EquivalenceWitness transport_retract(const ModelsCotriple& g, const NaturalMap& i, const NaturalMap& r,
                                     const EquivalenceWitness& w, int bound);

/**
 * Natural chain maps K -> L modulo natural homotopies.  K must live in
 * degrees below the bound so that every homotopy is built.
 */
class NaturalClasses
{
    public:
        NaturalClasses(const FunctorComplex& k, const FunctorComplex& l, int bound);

        const PresentedModule& module() const { return sq_->module(); }
        Index generator_count() const { return module().generators; }
        NaturalMap representative(Index i) const;

        /** Class of a natural chain map in the generators of module(). */
        IntVector coordinates(const NaturalMap& f) const;

    private:
        IntVector pack(const NaturalMap& f) const;
        NaturalMap unpack(const IntVector& v) const;

        FunctorComplex k_, l_;
        int top_ = 0;
        std::vector<std::vector<Index>> offset_;  // [object][degree]
        Index size_ = 0;
        std::shared_ptr<Subquotient> sq_;
};

PresentedModule natural_transformation_classes(const FunctorComplex& k, const FunctorComplex& l, int bound);

/** A functor to presented modules, used for H_0. */
struct ModuleFunctor
{
    FiniteCategory category;
    std::vector<PresentedModule> values;
    std::vector<IntMatrix> maps;

    std::string check() const;
};

ModuleFunctor homology_functor(const FunctorComplex& k, int degree);

/** Natural module maps A -> B; the module is Hom in the functor category. */
class ModuleFunctorMaps
{
    public:
        ModuleFunctorMaps(const ModuleFunctor& a, const ModuleFunctor& b);

        const PresentedModule& module() const { return sq_->module(); }
        std::vector<IntMatrix> representative(Index i) const;
        IntVector coordinates(const std::vector<IntMatrix>& maps) const;

    private:
        ModuleFunctor a_, b_;
        std::vector<Index> offset_;
        Index size_ = 0;
        std::shared_ptr<Subquotient> sq_;
};

/** Degree-0 functor with free values H_0 L and the augmentation tau: L -> H_0 L. */
struct Augmentation
{
    FunctorComplex h0;
    NaturalMap tau;
};

/** Throws PreconditionError when some H_0 L(X) is not free. */
Augmentation zeroth_homology(const FunctorComplex& l);

/** G(tau_L) in the class within the window. */
bool is_g_acyclic(const ModelsCotriple& g, const FunctorComplex& l, int bound, StrongClass cls = StrongClass::natural);

struct MapStatus
{
    std::string name;
    ModuleInvariants source, target;
    bool well_defined = false;
    bool iso = false;
};

/** Restriction [K, L] -> [K|M, L|M] to the full subcategory on the models. */
MapStatus restriction_check(const ModelsCotriple& g, const FunctorComplex& k, const FunctorComplex& l, int bound,
                            StrongClass cls = StrongClass::natural);

struct AcyclicModelsReport
{
    std::vector<MapStatus> factors;  // tau_L*, rho, H_0
    MapStatus direct;                // H_0 rho: [K, L] -> [H_0 K|M, H_0 L|M]
    bool bijective = false;
};

AcyclicModelsReport acyclic_models_check(const ModelsCotriple& g, const FunctorComplex& k, const FunctorComplex& l,
                                         int bound, StrongClass cls = StrongClass::natural);

/** Random functor: sums of constants and of G(constant) for random model sets. */
FunctorComplex random_functor(Rng& rng, const FiniteCategory& c, const Ring& ring, int length, int max_rank);

}  // namespace cekit

#endif
