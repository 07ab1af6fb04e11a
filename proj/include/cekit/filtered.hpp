/**
 * Increasingly filtered complexes with the filtration carried by generator
 * weights: W_p is spanned by the generators of weight <= p.
 */

#ifndef CEKIT_FILTERED_HPP
#define CEKIT_FILTERED_HPP

#include "cekit/homotopy.hpp"
#include "cekit/resolution.hpp"

namespace cekit {

class FilteredComplex
{
    public:
        FilteredComplex() = default;

        /** weights[k] lists one weight per generator of degree lowest + k. */
        FilteredComplex(const ChainComplex& base, std::vector<std::vector<int>> weights);

        /** Every generator gets the same weight. */
        static FilteredComplex constant(const ChainComplex& base, int weight = 0);

        const ChainComplex& base() const { return base_; }
        const Ring& ring() const { return base_.ring(); }

        /** Weights of degree d (empty outside the range). */
        const std::vector<int>& weights(int d) const;

        /** Smallest and largest weight; empty when there are no generators. */
        DegreeRange weight_range() const;

        /** Generators of degree d with weight <= p, in index order. */
        std::vector<Index> low(int d, int p) const;

        /** True when v (a column over degree d) lies in W_p. */
        bool in_weight(int d, int p, const IntMatrix& v) const;

        /** Coordinates of the columns of v in the generators of W_p. */
        IntMatrix coordinates(int d, int p, const IntMatrix& v) const;

        /** Differentials respect the weights. */
        std::string check() const;
        void validate() const;

        /** Weighted-free: no relations, so every Gr_p is free. */
        bool is_weighted_free() const { return base_.is_free(); }

    private:
        ChainComplex base_;
        std::vector<std::vector<int>> weights_;
        std::vector<int> none_;
};

struct FilteredMap
{
    FilteredComplex source, target;
    ChainMap map;

    /** Chain map whose generators of weight p land in W_p. */
    std::string check() const;
};

/** Checks that h_d sends weight-p generators into W_p. */
bool is_filtered(const FilteredComplex& s, const FilteredComplex& t, const Homotopy& h);

struct WeightPiece
{
    FilteredComplex complex;  // W_p X with the inherited weights
    ChainMap inclusion;       // W_p X -> X
};

WeightPiece w_sub(const FilteredComplex& x, int p);

/** W_p X / W_{p-1} X. */
ChainComplex gr(const FilteredComplex& x, int p);

/** W_p f: W_p S -> W_p T in the generators of the pieces. */
ChainMap w_sub(const FilteredMap& f, int p);
ChainMap gr(const FilteredMap& f, int p);

/** The inclusion W_q X -> W_p X for q <= p. */
ChainMap weight_inclusion(const FilteredComplex& x, int q, int p);

/**
 * True iff every W_p(f) is a quasi-isomorphism.  The Gr_p criterion is
 * evaluated as well and a disagreement throws std::logic_error.
 */
bool is_filtered_quasi_iso(const FilteredMap& f, std::optional<DegreeRange> window = std::nullopt);

struct FilteredCylinder
{
    FilteredComplex cyl;
    FilteredMap i0, i1, p;
    Homotopy contraction;  // i0 o p => id, filtered
};

FilteredCylinder filtered_cylinder(const FilteredComplex& x);

/** L(f) with weights copied from both summands. */
FilteredComplex filtered_path(const FilteredMap& f);

/** Homotopy f => g with h_d sending weight-p generators into W_p. */
std::optional<Homotopy> find_filtered_homotopy(const FilteredMap& f, const FilteredMap& g,
                                               std::optional<DegreeRange> window = std::nullopt);

/**
 * For a filtered quasi-isomorphism w: Y -> X and f: P -> X with P
 * weighted-free, returns g: P -> Y and a filtered homotopy w g => f,
 * built one weight at a time.
 */
Lift filtered_lift(const FilteredMap& w, const FilteredMap& f);

/**
 * Given g0, g1: P -> Y and a filtered homotopy k: w g0 => w g1, returns a
 * filtered homotopy g0 => g1, obtained by lifting (g1 - g0, k) through
 * L(id_Y) -> L(w).
 */
Homotopy filtered_homotopy_from_image(const FilteredMap& w, const FilteredMap& g0, const FilteredMap& g1,
                                      const Homotopy& k);

struct FilteredResolution
{
    FilteredComplex target, model;
    FilteredMap augmentation;
    DegreeRange certified;  // cone(W_p augmentation) acyclic here for every p
};

/**
 * Weighted-free model of X built one weight at a time.  At weight p the
 * previous model P is glued to a free resolution G of the path complex of
 * P -> W_p X.  A nonzero padding adds a contractible free summand to each G,
 * which changes the model but not its filtered homotopy type.
 */
FilteredResolution filtered_resolution(const FilteredComplex& x, int bound, Index padding = 0);

std::string check(const FilteredResolution& r);

/** Filtered homotopy equivalence between two models of the same target, with witnesses checked. */
bool filtered_models_equivalent(const FilteredResolution& a, const FilteredResolution& b);

}  // namespace cekit

#endif
