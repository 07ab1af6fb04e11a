/**
 * Homotopies as solutions of linear systems, homotopy classes, and lifting
 * up to homotopy through quasi-isomorphisms.
 */

#ifndef CEKIT_HOMOTOPY_HPP
#define CEKIT_HOMOTOPY_HPP

#include <functional>
#include <optional>

#include "cekit/complex.hpp"

namespace cekit {

/** Entry (row, col) of h_d may be nonzero only when this returns true. */
using HomotopyMask = std::function<bool(int degree, Index row, Index col)>;

/**
 * Some h: f => g, or nothing when none exists.  A window, if given, must
 * cover every degree of the source.
 */
std::optional<Homotopy> find_homotopy(const ChainMap& f, const ChainMap& g,
                                      std::optional<DegreeRange> window = std::nullopt,
                                      const HomotopyMask& mask = nullptr);

/** [A, B] as H_0 of the Hom complex. */
PresentedModule homotopy_classes(const ChainComplex& a, const ChainComplex& b);

/**
 * Given a chain map f: B -> A that is degreewise surjective and a
 * quasi-isomorphism, a in A_{n+1} and b in B_n with da = f(b) and db = 0,
 * returns c in B_{n+1} with f(c) = a and dc = b.
 */
IntVector elementary_lift(const ChainMap& f, const IntVector& a, const IntVector& b, int n);

struct Lift
{
    ChainMap map;        // G
    Homotopy homotopy;   // H: w G => F
};

/**
 * For j: Q -> R, w: Y -> X, phi: Q -> Y, F: R -> X and lambda: w phi => F j,
 * returns G with G j = phi and H: w G => F with H j = lambda.
 */
Lift lift_up_to_homotopy(const ChainMap& j, const ChainMap& w, const ChainMap& phi, const ChainMap& f,
                         const Homotopy& lambda);

/** g: M -> Y with a homotopy w g => f. */
Lift lift_cofibrant(const ChainComplex& m, const ChainMap& w, const ChainMap& f);

struct HomotopyEquivalence
{
    ChainMap w, v;
    Homotopy h;  // v w => id on the source of w
    Homotopy k;  // w v => id on the target of w
};

HomotopyEquivalence invert_weak_equivalence(const ChainMap& w);

/** Checks all four witness identities; empty string when they hold. */
std::string check(const HomotopyEquivalence& e);

/** Left inverses r_d with r_d j_d = 1, or nothing if j is not split. */
std::optional<std::vector<IntMatrix>> degreewise_retraction(const ChainMap& j);

}  // namespace cekit

#endif
