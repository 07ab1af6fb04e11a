/**
 * Free resolutions of modules and complexes, and Tor/Ext computed on them.
 */

#ifndef CEKIT_RESOLUTION_HPP
#define CEKIT_RESOLUTION_HPP

#include "cekit/complex.hpp"

namespace cekit {

struct Resolution
{
    ChainComplex target;
    ChainComplex model;       // free in every degree
    ChainMap augmentation;    // model -> target
    DegreeRange certified;    // cone(augmentation) is acyclic here
};

/** Empty string when the model is free and the cone is acyclic in the certified window. */
std::string check(const Resolution& r);

/** Resolution of M (in degree 0) by free modules in degrees 0..bound. */
Resolution free_resolution_module(const PresentedModule& m, int bound);

/**
 * Resolution of a complex, built degree by degree by adding one generator
 * for each homology class of the current cone.  Free inputs are returned
 * unchanged with the identity.
 */
Resolution free_resolution_complex(const ChainComplex& x, int bound);

/** P (x) N for a free complex P; degree d has rank(P_d) * N.generators generators. */
ChainComplex tensor(const ChainComplex& p, const PresentedModule& n);

/** Hom(P, N) re-indexed as a chain complex: degree -d holds Hom(P_d, N). */
ChainComplex hom_into(const ChainComplex& p, const PresentedModule& n);

PresentedModule tor(const PresentedModule& m, const PresentedModule& n, int degree, int bound);
PresentedModule ext(const PresentedModule& m, const PresentedModule& n, int degree, int bound);

/** M (x) N straight from the presentations. */
PresentedModule tensor_product(const PresentedModule& m, const PresentedModule& n);

/** Hom(M, N) straight from the presentations. */
PresentedModule hom_modules(const PresentedModule& m, const PresentedModule& n);

}  // namespace cekit

#endif
