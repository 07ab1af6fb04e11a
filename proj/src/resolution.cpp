#include "cekit/resolution.hpp"

#include <stdexcept>

namespace cekit {

namespace {

// Nonzero columns of a matrix.
IntMatrix drop_zero_columns(const IntMatrix& a)
{
    std::vector<Index> keep;
    for (Index j = 0; j < a.cols(); ++j)
        if (!a.col(j).isZero())
            keep.push_back(j);
    IntMatrix out(a.rows(), static_cast<Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
        out.col(static_cast<Index>(k)) = a.col(keep[k]);
    return out;
}

void certify(Resolution& r)
{
    std::string err = check(r);
    if (!err.empty())
        throw std::logic_error("resolution failed its certificate: " + err);
}

}  // namespace

std::string check(const Resolution& r)
{
    if (!r.model.is_free())
        return "model is not free";
    std::string err = r.augmentation.check();
    if (!err.empty())
        return err;
    if (!is_acyclic(cone(r.augmentation), r.certified))
        return "cone of the augmentation has homology in the certified window";
    return "";
}

Resolution free_resolution_module(const PresentedModule& m, int bound)
{
    if (bound < 0)
        throw PreconditionError("free_resolution_module: negative bound");
    const Ring& ring = m.ring;
    std::vector<Index> ranks{m.generators};
    std::vector<IntMatrix> diffs;
    IntMatrix image = drop_zero_columns(ring.reduce(lattice_basis(m.effective_relations())));
    bool exact = false;
    for (int d = 1; d <= bound; ++d)
    {
        if (image.cols() == 0)
        {
            exact = true;
            break;
        }
        ranks.push_back(image.cols());
        diffs.push_back(image);
        image = drop_zero_columns(kernel_basis(image, ring));
    }
    if (image.cols() == 0)
        exact = true;

    Resolution out;
    out.target = ChainComplex::concentrated(m, 0);
    out.model = ChainComplex::free(ring, 0, ranks, diffs);
    std::vector<IntMatrix> eps{identity_matrix(m.generators)};
    for (std::size_t d = 1; d < ranks.size(); ++d)
        eps.push_back(zero_matrix(0, ranks[d]));
    out.augmentation = ChainMap(out.model, out.target, eps);
    const int top = out.model.top() + 1;
    out.certified = {0, exact ? top : bound};
    certify(out);
    return out;
}

Resolution free_resolution_complex(const ChainComplex& x, int bound)
{
    x.validate();
    Resolution out;
    out.target = x;
    if (x.is_free())
    {
        out.model = x;
        out.augmentation = ChainMap::identity(x);
        out.certified = x.empty() ? DegreeRange{0, -1} : DegreeRange{x.lowest(), x.top() + 1};
        return out;
    }
    const Ring& ring = x.ring();
    const int lo = x.lowest();
    if (bound < lo)
        throw PreconditionError("free_resolution_complex: bound below the lowest degree");

    std::vector<Index> ranks;
    std::vector<IntMatrix> diffs, eps;
    bool exact = false;
    for (int d = lo; d <= bound; ++d)
    {
        // Cycles (p, x) of P_{d-1} + X_d with dp = 0 and eps(p) = dx, modulo (0, dX_{d+1}) and relations.
        const Index np = d > lo ? ranks.back() : 0;
        const Index npp = d > lo + 1 ? ranks[ranks.size() - 2] : 0;
        const Index nx = x.rank(d), nx1 = x.rank(d - 1);
        IntMatrix dp = d > lo + 1 ? diffs.back() : zero_matrix(npp, np);
        IntMatrix ep = d > lo ? eps.back() : zero_matrix(nx1, 0);

        IntMatrix out_map = zero_matrix(npp + nx1, np + nx);
        out_map.topLeftCorner(npp, np) = dp;
        out_map.bottomLeftCorner(nx1, np) = ep;
        out_map.bottomRightCorner(nx1, nx) = -x.differential(d);
        IntMatrix out_rel = zero_matrix(npp + nx1, x.module(d - 1).relations.cols());
        out_rel.bottomRows(nx1) = x.module(d - 1).relations;

        IntMatrix in = zero_matrix(np + nx, x.rank(d + 1));
        in.bottomRows(nx) = x.differential(d + 1);
        IntMatrix rel = zero_matrix(np + nx, x.module(d).relations.cols());
        rel.bottomRows(nx) = x.module(d).relations;

        Subquotient sq(ring, out_map, out_rel, in, rel);
        const IntMatrix& reps = sq.representatives();
        if (reps.cols() == 0 && d > x.top())
        {
            exact = true;
            break;
        }
        ranks.push_back(reps.cols());
        if (d > lo)
            diffs.push_back(ring.reduce(IntMatrix(reps.topRows(np))));
        eps.push_back(ring.reduce(IntMatrix(reps.bottomRows(nx))));
    }
    out.model = ChainComplex::free(ring, lo, ranks, diffs);
    // The model may stop before the top of X; pad the augmentation accordingly.
    out.augmentation = ChainMap(out.model, x, eps);
    const int top = std::max(out.model.top(), x.top()) + 1;
    out.certified = {lo, exact ? top : bound};
    certify(out);
    return out;
}

ChainComplex tensor(const ChainComplex& p, const PresentedModule& n)
{
    if (!p.is_free())
        throw PreconditionError("tensor: the complex must be free");
    if (p.empty())
        return ChainComplex(p.ring());
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs;
    const IntMatrix in = identity_matrix(n.generators);
    for (int d = p.lowest(); d <= p.top(); ++d)
    {
        mods.emplace_back(p.ring(), p.rank(d) * n.generators,
                          kron(identity_matrix(p.rank(d)), n.relations));
        if (d > p.lowest())
            diffs.push_back(kron(p.differential(d), in));
    }
    return ChainComplex(p.ring(), p.lowest(), mods, diffs);
}

ChainComplex hom_into(const ChainComplex& p, const PresentedModule& n)
{
    if (!p.is_free())
        throw PreconditionError("hom_into: the complex must be free");
    if (p.empty())
        return ChainComplex(p.ring());
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs;
    const IntMatrix in = identity_matrix(n.generators);
    // Degree -d for d = top .. lowest.
    for (int d = p.top(); d >= p.lowest(); --d)
    {
        mods.emplace_back(p.ring(), p.rank(d) * n.generators,
                          kron(identity_matrix(p.rank(d)), n.relations));
        if (d < p.top())
            diffs.push_back(kron(IntMatrix(p.differential(d + 1).transpose()), in));
    }
    return ChainComplex(p.ring(), -p.top(), mods, diffs);
}

PresentedModule tor(const PresentedModule& m, const PresentedModule& n, int degree, int bound)
{
    if (m.ring != n.ring)
        throw PreconditionError("tor: modules over different rings");
    if (degree < 0 || degree >= bound)
        throw PreconditionError("tor: need 0 <= n < N");
    Resolution r = free_resolution_module(m, bound);
    return homology(tensor(r.model, n), degree);
}

PresentedModule ext(const PresentedModule& m, const PresentedModule& n, int degree, int bound)
{
    if (m.ring != n.ring)
        throw PreconditionError("ext: modules over different rings");
    if (degree < 0 || degree >= bound)
        throw PreconditionError("ext: need 0 <= n < N");
    Resolution r = free_resolution_module(m, bound);
    return homology(hom_into(r.model, n), -degree);
}

PresentedModule tensor_product(const PresentedModule& m, const PresentedModule& n)
{
    if (m.ring != n.ring)
        throw PreconditionError("tensor_product: modules over different rings");
    IntMatrix a = kron(m.relations, identity_matrix(n.generators));
    IntMatrix b = kron(identity_matrix(m.generators), n.relations);
    return PresentedModule(m.ring, m.generators * n.generators, hstack({a, b}, m.generators * n.generators));
}

PresentedModule hom_modules(const PresentedModule& m, const PresentedModule& n)
{
    if (m.ring != n.ring)
        throw PreconditionError("hom_modules: modules over different rings");
    const Index size = m.generators * n.generators;
    IntMatrix out = kron(IntMatrix(m.relations.transpose()), identity_matrix(n.generators));
    IntMatrix out_rel = kron(identity_matrix(m.relations.cols()), n.relations);
    IntMatrix rel = kron(identity_matrix(m.generators), n.relations);
    return Subquotient(m.ring, out, out_rel, IntMatrix(size, 0), rel).module();
}

}  // namespace cekit
