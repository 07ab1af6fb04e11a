/**
 * Random instances for the property suites.  Everything is driven by a
 * caller-owned std::mt19937_64, so a seed fixes the whole run.
 */

#ifndef CEKIT_RANDOM_HPP
#define CEKIT_RANDOM_HPP

#include <random>

#include "cekit/complex.hpp"

namespace cekit {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi);

IntMatrix random_matrix(Rng& rng, Index rows, Index cols, int bound);

/** Free complex in degrees lowest..lowest+length-1, ranks in [0, max_rank]. */
ChainComplex random_free_complex(Rng& rng, const Ring& ring, int lowest, int length, int max_rank,
                                 int bound = 2);

/** Random element of Z_n(Hom(S, T)) packed in the layout of h. */
IntVector random_hom_cycle(Rng& rng, const HomComplex& h, int n, int bound = 2);

/** Random chain map S -> T (S free), a combination of a cycle basis of Hom_0. */
ChainMap random_chain_map(Rng& rng, const ChainComplex& s, const ChainComplex& t, int bound = 2);

/** Random degree-one maps h_d: S_d -> T_{d+1}, not a homotopy of anything in particular. */
std::vector<IntMatrix> random_degree_one(Rng& rng, const ChainComplex& s, const ChainComplex& t, int bound = 2);

/** D(k) = dk + kd for k from random_degree_one; always a null-homotopic chain map. */
ChainMap null_homotopic(const ChainComplex& s, const ChainComplex& t, const std::vector<IntMatrix>& k);

/** Inclusion j: Q -> R with R = Q + Q' and a twisted differential. */
ChainMap random_split_mono(Rng& rng, const ChainComplex& q, int max_rank);

/** cone(id) on a random free complex. */
ChainComplex random_contractible(Rng& rng, const Ring& ring, int lowest, int length, int max_rank);

/** Projection Y + C -> Y and inclusion Y -> Y + C. */
ChainMap projection_off(const ChainComplex& y, const ChainComplex& c);
ChainMap inclusion_into(const ChainComplex& y, const ChainComplex& c);

/**
 * Random quasi-isomorphism between free complexes: a projection off or an
 * inclusion into a contractible summand, perturbed by a null-homotopic map.
 */
ChainMap random_quasi_iso(Rng& rng, const Ring& ring, int max_rank);

}  // namespace cekit

#endif
