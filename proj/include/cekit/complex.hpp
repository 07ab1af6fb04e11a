/**
 * Bounded chain complexes of presented modules and the standard
 * constructions on them: shift, cone, cylinder, path complex, Hom complex,
 * total complex and homology.
 *
 * Sign conventions:
 *   shift      (C[n])_i = C_{i-n}, differential (-1)^n d
 *   cone       C(f)_d = S_{d-1} + T_d,  d(s, t) = (-ds, f s + dt)
 *   path       L(f)_d = S_d + T_{d+1},  d(s, t) = (ds, f s - dt)
 *   Hom        (Df)_i = d f_i - (-1)^n f_{i-1} d
 *   homotopy   dh + hd = g - f
 *   total      d = d^h + (-1)^p d^v on the (p, q) summand
 */

#ifndef CEKIT_COMPLEX_HPP
#define CEKIT_COMPLEX_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cekit/module.hpp"

namespace cekit {

/** Closed degree range [lo, hi]; empty when lo > hi. */
struct DegreeRange
{
    int lo = 0;
    int hi = -1;

    bool empty() const { return lo > hi; }
    bool contains(int d) const { return lo <= d && d <= hi; }
};

class ChainComplex
{
    public:
        ChainComplex() = default;
        explicit ChainComplex(const Ring& ring) : ring_(ring), zero_(ring, 0) {}

        /**
         * modules[k] sits in degree lowest + k; differentials[k] is the map
         * from degree lowest + k + 1 to lowest + k.
         */
        ChainComplex(const Ring& ring, int lowest, std::vector<PresentedModule> modules,
                     std::vector<IntMatrix> differentials);

        static ChainComplex free(const Ring& ring, int lowest, const std::vector<Index>& ranks,
                                 const std::vector<IntMatrix>& differentials);

        /** A single module placed in degree d. */
        static ChainComplex concentrated(const PresentedModule& m, int d);

        const Ring& ring() const { return ring_; }
        int lowest() const { return lowest_; }
        int top() const { return lowest_ + static_cast<int>(modules_.size()) - 1; }
        bool empty() const { return modules_.empty(); }
        DegreeRange range() const { return {lowest(), top()}; }

        const PresentedModule& module(int d) const;
        Index rank(int d) const { return module(d).generators; }

        /** The map C_d -> C_{d-1}; a correctly sized zero matrix outside the range. */
        IntMatrix differential(int d) const;

        bool is_free() const;

        /** Empty string when valid, otherwise the first violated identity. */
        std::string check() const;
        void validate() const;

        /** Same complex with degrees outside [lo, hi] dropped. */
        ChainComplex truncated(int lo, int hi) const;

        friend bool operator==(const ChainComplex& a, const ChainComplex& b);
        friend bool operator!=(const ChainComplex& a, const ChainComplex& b) { return !(a == b); }

    private:
        Ring ring_;
        int lowest_ = 0;
        std::vector<PresentedModule> modules_;
        std::vector<IntMatrix> diffs_;
        PresentedModule zero_;
};

/** Components are indexed by source degree; matrices are target x source. */
class ChainMap
{
    public:
        ChainMap() = default;
        ChainMap(const ChainComplex& source, const ChainComplex& target, std::vector<IntMatrix> components);

        static ChainMap zero(const ChainComplex& source, const ChainComplex& target);
        static ChainMap identity(const ChainComplex& c);

        const ChainComplex& source() const { return source_; }
        const ChainComplex& target() const { return target_; }

        IntMatrix component(int d) const;
        void set_component(int d, const IntMatrix& m);

        std::string check() const;
        void validate() const;

    private:
        ChainComplex source_, target_;
        std::vector<IntMatrix> components_;
};

ChainMap compose(const ChainMap& g, const ChainMap& f);
ChainMap add(const ChainMap& f, const ChainMap& g);
ChainMap subtract(const ChainMap& f, const ChainMap& g);
ChainMap scale(const ChainMap& f, const Integer& c);

/** Componentwise equality modulo target relations. */
bool equal_maps(const ChainMap& f, const ChainMap& g);

/** h: f => g with components h_d: C_d -> D_{d+1}, indexed by source degree. */
class Homotopy
{
    public:
        Homotopy() = default;
        Homotopy(const ChainMap& f, const ChainMap& g, std::vector<IntMatrix> components);

        static Homotopy zero(const ChainMap& f);

        const ChainMap& from() const { return f_; }
        const ChainMap& to() const { return g_; }
        const ChainComplex& source() const { return f_.source(); }
        const ChainComplex& target() const { return f_.target(); }

        IntMatrix component(int d) const;

        /** Checks dh + hd = g - f exactly, modulo target relations. */
        std::string check() const;
        void validate() const;

    private:
        ChainMap f_, g_;
        std::vector<IntMatrix> components_;
};

/** h' = h composed with maps on either side: post o h o pre. */
Homotopy whisker(const ChainMap& post, const Homotopy& h, const ChainMap& pre);

/** Concatenation: h: f => g and k: g => e give h + k: f => e. */
Homotopy concatenate(const Homotopy& h, const Homotopy& k);

/** Reverse: h: f => g gives -h: g => f. */
Homotopy reverse(const Homotopy& h);

ChainComplex shift(const ChainComplex& c, int n);
ChainComplex cone(const ChainMap& f);
ChainComplex path(const ChainMap& f);

/**
 * Map cone(f) -> cone(f2) induced by a commuting square
 * f2 alpha = beta f, with components diag(alpha_{d-1}, beta_d).
 */
ChainMap cone_map(const ChainMap& f, const ChainMap& f2, const ChainMap& alpha, const ChainMap& beta);
ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b);

struct Cylinder
{
    ChainComplex cyl;
    ChainMap i0, i1, p;
    Homotopy contraction;  // i0 o p => id
};

Cylinder cylinder(const ChainComplex& c);

/**
 * Hom complex with explicit block layout.  Hom_n is the sum over source
 * degrees i of Hom(A_i, B_{i+n}), each block vectorised column-major.
 */
struct HomComplex
{
    ChainComplex complex;
    ChainComplex source, target;

    Index offset(int n, int i) const;

    IntVector pack(int n, const std::vector<IntMatrix>& blocks) const;
    std::vector<IntMatrix> unpack(int n, const IntVector& v) const;

    IntVector pack_map(const ChainMap& f) const;
    IntVector pack_homotopy(const Homotopy& h) const;
    ChainMap unpack_map(const IntVector& v) const;
    std::vector<IntMatrix> unpack_homotopy(const IntVector& v) const;
};

/**
 * Requires a free source.  The target may be presented.  With a window only
 * the degrees inside it are built.
 */
HomComplex hom_complex(const ChainComplex& a, const ChainComplex& b,
                       std::optional<DegreeRange> window = std::nullopt);

/** Post-composition w_*: Hom(A, Y) -> Hom(A, X) between matching layouts. */
ChainMap postcompose(const ChainMap& w, const HomComplex& from, const HomComplex& to);

/** Pre-composition j^*: Hom(R, Y) -> Hom(Q, Y) for j: Q -> R. */
ChainMap precompose(const ChainMap& j, const HomComplex& from, const HomComplex& to);

/** Commuting squares; the sign is inserted by total(). */
struct DoubleComplex
{
    Ring ring;
    std::map<std::pair<int, int>, PresentedModule> cells;
    std::map<std::pair<int, int>, IntMatrix> horizontal;  // (p, q) -> (p - 1, q)
    std::map<std::pair<int, int>, IntMatrix> vertical;    // (p, q) -> (p, q - 1)

    PresentedModule cell(int p, int q) const;
    IntMatrix h(int p, int q) const;
    IntMatrix v(int p, int q) const;

    std::string check() const;
};

struct TotalComplex
{
    ChainComplex complex;
    /** For each total degree, the (p, q) summands in order with offsets. */
    std::map<int, std::vector<std::pair<std::pair<int, int>, Index>>> layout;
};

TotalComplex total(const DoubleComplex& d);

Subquotient homology_data(const ChainComplex& c, int d);
PresentedModule homology(const ChainComplex& c, int d);

/** Map on homology computed from representative cycles. */
ModuleMap induced_map(const ChainMap& f, int d);

/** Acyclicity of cone(f) in the window (default: all degrees of both sides, plus one). */
bool is_quasi_iso(const ChainMap& f, std::optional<DegreeRange> window = std::nullopt);

bool is_acyclic(const ChainComplex& c, std::optional<DegreeRange> window = std::nullopt);

}  // namespace cekit

#endif
