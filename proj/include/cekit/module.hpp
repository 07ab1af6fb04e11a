/**
 * Finitely presented modules over Z or Z/m, maps between them, and the
 * subquotient machinery that homology and every later module is built on.
 */

#ifndef CEKIT_MODULE_HPP
#define CEKIT_MODULE_HPP

#include <optional>
#include <string>
#include <vector>

#include "cekit/integer.hpp"
#include "cekit/linalg.hpp"

namespace cekit {

/** Cokernel of a relations matrix (generators x k, columns are relators). */
struct PresentedModule
{
    Ring ring;
    Index generators = 0;
    IntMatrix relations = IntMatrix(0, 0);

    PresentedModule() = default;
    PresentedModule(const Ring& r, Index n);
    PresentedModule(const Ring& r, Index n, const IntMatrix& rel);

    static PresentedModule free(const Ring& r, Index n) { return PresentedModule(r, n); }
    static PresentedModule zero(const Ring& r) { return PresentedModule(r, 0); }

    /** No nonzero relations: the generators form a basis. */
    bool is_free() const;

    /** Relations with the modulus columns appended over Z/m. */
    IntMatrix effective_relations() const;

    /** True when every column of `elements` is zero in the module. */
    bool is_zero_element(const IntMatrix& elements) const;

    friend bool operator==(const PresentedModule& a, const PresentedModule& b);
    friend bool operator!=(const PresentedModule& a, const PresentedModule& b) { return !(a == b); }
};

/** Map on generators; matrix is target.generators x source.generators. */
struct ModuleMap
{
    PresentedModule source, target;
    IntMatrix matrix;

    ModuleMap() = default;
    ModuleMap(const PresentedModule& s, const PresentedModule& t, const IntMatrix& m);

    static ModuleMap identity(const PresentedModule& m);

    /** Relations of the source land in the span of the target's relations. */
    bool is_well_defined() const;
};

ModuleMap compose(const ModuleMap& g, const ModuleMap& f);

/** Equality as maps, i.e. modulo the target relations. */
bool equal_maps(const ModuleMap& f, const ModuleMap& g);

PresentedModule direct_sum(const std::vector<PresentedModule>& parts);

/** Free rank and torsion factors (> 1, in divisibility order). */
struct ModuleInvariants
{
    Index free_rank = 0;
    std::vector<Integer> torsion;

    bool is_zero() const { return free_rank == 0 && torsion.empty(); }
    std::string str() const;  // "(free_rank; t1,t2,...)"

    friend bool operator==(const ModuleInvariants& a, const ModuleInvariants& b)
    {
        return a.free_rank == b.free_rank && a.torsion == b.torsion;
    }
    friend bool operator!=(const ModuleInvariants& a, const ModuleInvariants& b) { return !(a == b); }
};

ModuleInvariants invariant_factors(const PresentedModule& m);

struct IsoResult
{
    bool is_iso = false;
    std::optional<ModuleMap> inverse;
};

IsoResult is_module_iso(const ModuleMap& f);

struct Submodule
{
    PresentedModule module;
    ModuleMap inclusion;
};

/** Submodule generated by the columns of `gens`, presented on those columns. */
Submodule submodule(const PresentedModule& m, const IntMatrix& gens);

/**
 * The subquotient {x : out x in span(out_relations)} / span(in, relations)
 * of Ring^n, presented canonically by its invariant factors.
 *
 * Over Z/m the modulus is appended to both relation sets internally.
 * Unit factors are dropped; each kept generator has a representative cycle
 * whose first nonzero entry is positive.
 */
class Subquotient
{
    public:
        Subquotient(const Ring& ring, const IntMatrix& out, const IntMatrix& out_relations,
                    const IntMatrix& in, const IntMatrix& relations);

        const PresentedModule& module() const { return module_; }

        /** Ambient vectors representing the generators of module(). */
        const IntMatrix& representatives() const { return reps_; }

        /** Coordinates of cycles (columns) in the canonical generators. */
        IntMatrix coordinates(const IntMatrix& cycles) const;

        /** True if the column is a cycle. */
        bool is_cycle(const IntVector& x) const;

        ModuleInvariants invariants() const;
        const std::vector<Integer>& orders() const { return orders_; }

    private:
        Ring ring_;
        Index ambient_ = 0;
        IntMatrix cycle_basis_;
        std::optional<IntegerSolver> cycle_solver_;
        IntMatrix U_;
        std::vector<Index> keep_;
        std::vector<Integer> orders_;  // 0 means free over Z; m means free over Z/m
        std::vector<int> signs_;
        IntMatrix reps_;
        PresentedModule module_;
};

/**
 * Linear system in unknown matrices X_b.  Each equation asks
 *     sum_t L_t X_{b_t} R_t = rhs  modulo the column span of `modulo`
 * (applied to every column), over the system's ring.  Individual unknown
 * entries can be pinned to zero.
 */
class LinearSystem
{
    public:
        explicit LinearSystem(const Ring& ring) : ring_(ring) {}

        int add_unknown(Index rows, Index cols);
        void forbid(int block, Index row, Index col);

        int add_equation(Index rows, Index cols, const IntMatrix& modulo = IntMatrix(0, 0));
        void add_term(int equation, const IntMatrix& left, int block, const IntMatrix& right);
        void add_rhs(int equation, const IntMatrix& rhs);

        /** Convenience: X_b itself as a term (left, right identity). */
        void add_plain(int equation, int block, const Integer& coeff = 1);

        std::optional<std::vector<IntMatrix>> solve() const;

        Index unknown_count() const;

        /**
         * Coefficients of the homogeneous system on the allowed unknown
         * entries, blocks in order and each block column-major.  Modulo
         * spans and right-hand sides are left out.
         */
        IntMatrix coefficients() const;

        /** Span each equation is taken modulo, in the row layout of coefficients(). */
        IntMatrix modulo_span() const;

    private:
        struct Unknown
        {
            Index rows, cols;
            std::vector<bool> allowed;
        };
        struct Term
        {
            IntMatrix left;
            int block;
            IntMatrix right;
        };
        struct Equation
        {
            Index rows, cols;
            IntMatrix modulo;
            std::vector<Term> terms;
            IntMatrix rhs;
        };

        struct Assembly
        {
            IntMatrix matrix;
            IntVector rhs;
            std::vector<std::vector<Index>> column_of;
            Index unknown_columns;
        };
        Assembly assemble() const;

        Ring ring_;
        std::vector<Unknown> unknowns_;
        std::vector<Equation> equations_;
};

}  // namespace cekit

#endif
