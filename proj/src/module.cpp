#include "cekit/module.hpp"

#include <sstream>

namespace cekit {

PresentedModule::PresentedModule(const Ring& r, Index n)
    : ring(r), generators(n), relations(zero_matrix(n, 0))
{
}

PresentedModule::PresentedModule(const Ring& r, Index n, const IntMatrix& rel)
    : ring(r), generators(n), relations(r.reduce(rel))
{
    if (rel.rows() != n)
        throw PreconditionError("relations matrix has " + std::to_string(rel.rows()) +
                                " rows for " + std::to_string(n) + " generators");
}

bool PresentedModule::is_free() const
{
    return is_zero(relations);
}

IntMatrix PresentedModule::effective_relations() const
{
    if (ring.is_integers())
        return relations;
    return hstack({relations, modulus_columns(ring, generators)}, generators);
}

bool PresentedModule::is_zero_element(const IntMatrix& elements) const
{
    if (elements.cols() == 0)
        return true;
    if (relations.cols() == 0 || is_zero(relations))
        return is_zero(ring.reduce(elements));
    return solve(relations, elements, ring).has_value();
}

bool operator==(const PresentedModule& a, const PresentedModule& b)
{
    return a.ring == b.ring && a.generators == b.generators &&
           a.relations.cols() == b.relations.cols() && a.relations == b.relations;
}

ModuleMap::ModuleMap(const PresentedModule& s, const PresentedModule& t, const IntMatrix& m)
    : source(s), target(t), matrix(t.ring.reduce(m))
{
    if (m.rows() != t.generators || m.cols() != s.generators)
        throw PreconditionError("map matrix is " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected " +
                                std::to_string(t.generators) + "x" + std::to_string(s.generators));
}

ModuleMap ModuleMap::identity(const PresentedModule& m)
{
    return ModuleMap(m, m, identity_matrix(m.generators));
}

bool ModuleMap::is_well_defined() const
{
    return target.is_zero_element(matrix * source.relations);
}

ModuleMap compose(const ModuleMap& g, const ModuleMap& f)
{
    if (f.target.generators != g.source.generators)
        throw PreconditionError("compose: incompatible maps");
    return ModuleMap(f.source, g.target, g.matrix * f.matrix);
}

bool equal_maps(const ModuleMap& f, const ModuleMap& g)
{
    return f.target.is_zero_element(f.matrix - g.matrix);
}

PresentedModule direct_sum(const std::vector<PresentedModule>& parts)
{
    Ring ring = parts.empty() ? Ring() : parts.front().ring;
    Index n = 0;
    std::vector<IntMatrix> rels;
    for (const auto& p : parts)
    {
        n += p.generators;
        rels.push_back(p.relations);
    }
    return PresentedModule(ring, n, block_diagonal(rels));
}

std::string ModuleInvariants::str() const
{
    std::ostringstream out;
    out << "(" << free_rank << "; ";
    for (std::size_t i = 0; i < torsion.size(); ++i)
    {
        if (i)
            out << ",";
        out << torsion[i].str();
    }
    out << ")";
    return out.str();
}

ModuleInvariants invariant_factors(const PresentedModule& m)
{
    ModuleInvariants out;
    IntMatrix rel = m.effective_relations();
    std::vector<Integer> d = smith_diagonal(rel);
    d.resize(static_cast<std::size_t>(m.generators), Integer(0));
    for (const auto& x : d)
    {
        if (x == 1)
            continue;
        if (x == 0 || (!m.ring.is_integers() && x == m.ring.modulus()))
            ++out.free_rank;
        else
            out.torsion.push_back(x);
    }
    return out;
}

IsoResult is_module_iso(const ModuleMap& f)
{
    if (!f.is_well_defined())
        throw PreconditionError("is_module_iso: map is not well defined");
    const PresentedModule& M = f.source;
    const PresentedModule& N = f.target;
    LinearSystem sys(M.ring);
    int g = sys.add_unknown(M.generators, N.generators);

    int e1 = sys.add_equation(M.generators, N.relations.cols(), M.relations);
    sys.add_term(e1, identity_matrix(M.generators), g, N.relations);

    int e2 = sys.add_equation(M.generators, M.generators, M.relations);
    sys.add_term(e2, identity_matrix(M.generators), g, f.matrix);
    sys.add_rhs(e2, identity_matrix(M.generators));

    int e3 = sys.add_equation(N.generators, N.generators, N.relations);
    sys.add_term(e3, f.matrix, g, identity_matrix(N.generators));
    sys.add_rhs(e3, identity_matrix(N.generators));

    auto sol = sys.solve();
    IsoResult out;
    if (!sol)
        return out;
    out.is_iso = true;
    out.inverse = ModuleMap(N, M, (*sol)[0]);
    return out;
}

Submodule submodule(const PresentedModule& m, const IntMatrix& gens)
{
    if (gens.rows() != m.generators)
        throw PreconditionError("submodule: element has " + std::to_string(gens.rows()) +
                                " coordinates, module has " + std::to_string(m.generators) +
                                " generators");
    const Ring& ring = m.ring;
    const Index s = gens.cols();
    IntMatrix g = ring.reduce(gens);
    IntMatrix aug = hstack({g, m.effective_relations()}, m.generators);
    IntMatrix k = IntegerSolver(aug).kernel();
    IntMatrix proj = hstack({IntMatrix(k.topRows(s)), modulus_columns(ring, s)}, s);
    IntMatrix basis = ring.reduce(lattice_basis(proj));
    std::vector<Index> keep;
    for (Index j = 0; j < basis.cols(); ++j)
        if (!is_zero(IntMatrix(basis.col(j))))
            keep.push_back(j);
    IntMatrix rel(s, static_cast<Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
        rel.col(static_cast<Index>(j)) = basis.col(keep[j]);
    PresentedModule sub(ring, s, rel);
    return {sub, ModuleMap(sub, m, g)};
}

Subquotient::Subquotient(const Ring& ring, const IntMatrix& out, const IntMatrix& out_relations,
                         const IntMatrix& in, const IntMatrix& relations)
    : ring_(ring), ambient_(out.cols())
{
    const Index n = out.cols();
    if (in.rows() != n || relations.rows() != n || out_relations.rows() != out.rows())
        throw std::logic_error("Subquotient: inconsistent dimensions");

    IntMatrix out_rel = hstack({ring.reduce(out_relations), modulus_columns(ring, out.rows())}, out.rows());
    IntMatrix rel = hstack({ring.reduce(in), ring.reduce(relations), modulus_columns(ring, n)}, n);

    if (out.rows() == 0)
        cycle_basis_ = identity_matrix(n);
    else
    {
        IntMatrix k = IntegerSolver(hstack({ring.reduce(out), out_rel}, out.rows())).kernel();
        cycle_basis_ = lattice_basis(IntMatrix(k.topRows(n)));
    }
    cycle_solver_.emplace(cycle_basis_);
    const Index kdim = cycle_basis_.cols();

    auto x = cycle_solver_->solve(rel);
    if (!x)
        throw std::logic_error("Subquotient: boundaries are not cycles");

    SmithWithInverse sm = snf_with_inverse(*x);
    U_ = sm.U;
    std::vector<Integer> d = sm.diagonal;
    d.resize(static_cast<std::size_t>(kdim), Integer(0));

    IntMatrix lifted = cycle_basis_ * sm.Uinv;
    for (Index i = 0; i < kdim; ++i)
    {
        if (d[static_cast<std::size_t>(i)] == 1)
            continue;
        keep_.push_back(i);
        orders_.push_back(d[static_cast<std::size_t>(i)]);
    }
    const Index kept = static_cast<Index>(keep_.size());
    reps_ = IntMatrix(n, kept);
    signs_.assign(static_cast<std::size_t>(kept), 1);
    for (Index j = 0; j < kept; ++j)
    {
        IntVector r = ring.reduce(IntVector(lifted.col(keep_[static_cast<std::size_t>(j)])));
        for (Index i = 0; i < n; ++i)
            if (r(i) != 0)
            {
                if (r(i) < 0)
                {
                    r = -r;
                    signs_[static_cast<std::size_t>(j)] = -1;
                }
                break;
            }
        reps_.col(j) = r;
    }

    std::vector<Index> rel_cols;
    for (Index j = 0; j < kept; ++j)
    {
        const Integer& o = orders_[static_cast<std::size_t>(j)];
        if (o != 0 && !(!ring.is_integers() && o == ring.modulus()))
            rel_cols.push_back(j);
    }
    IntMatrix mrel = zero_matrix(kept, static_cast<Index>(rel_cols.size()));
    for (std::size_t c = 0; c < rel_cols.size(); ++c)
        mrel(rel_cols[c], static_cast<Index>(c)) = orders_[static_cast<std::size_t>(rel_cols[c])];
    module_ = PresentedModule(ring, kept, mrel);
}

bool Subquotient::is_cycle(const IntVector& x) const
{
    return cycle_solver_->solve(ring_.reduce(x)).has_value();
}

IntMatrix Subquotient::coordinates(const IntMatrix& cycles) const
{
    if (cycles.rows() != ambient_)
        throw PreconditionError("coordinates: wrong ambient dimension");
    IntMatrix out(static_cast<Index>(keep_.size()), cycles.cols());
    for (Index c = 0; c < cycles.cols(); ++c)
    {
        auto x = cycle_solver_->solve(IntVector(ring_.reduce(IntMatrix(cycles.col(c)))));
        if (!x)
            throw PreconditionError("coordinates: vector is not a cycle");
        for (std::size_t j = 0; j < keep_.size(); ++j)
        {
            Integer y = 0;
            for (Index t = 0; t < x->size(); ++t)
                if ((*x)(t) != 0)
                    y += U_(keep_[j], t) * (*x)(t);
            y *= signs_[j];
            if (orders_[j] != 0)
                y = floor_mod(y, orders_[j]);
            out(static_cast<Index>(j), c) = y;
        }
    }
    return out;
}

ModuleInvariants Subquotient::invariants() const
{
    ModuleInvariants inv;
    for (const auto& o : orders_)
    {
        if (o == 0 || (!ring_.is_integers() && o == ring_.modulus()))
            ++inv.free_rank;
        else
            inv.torsion.push_back(o);
    }
    return inv;
}

int LinearSystem::add_unknown(Index rows, Index cols)
{
    unknowns_.push_back({rows, cols, std::vector<bool>(static_cast<std::size_t>(rows * cols), true)});
    return static_cast<int>(unknowns_.size()) - 1;
}

void LinearSystem::forbid(int block, Index row, Index col)
{
    Unknown& u = unknowns_.at(static_cast<std::size_t>(block));
    u.allowed[static_cast<std::size_t>(col * u.rows + row)] = false;
}

int LinearSystem::add_equation(Index rows, Index cols, const IntMatrix& modulo)
{
    Equation e;
    e.rows = rows;
    e.cols = cols;
    e.modulo = modulo.rows() == rows ? modulo : zero_matrix(rows, 0);
    e.rhs = zero_matrix(rows, cols);
    equations_.push_back(std::move(e));
    return static_cast<int>(equations_.size()) - 1;
}

void LinearSystem::add_term(int equation, const IntMatrix& left, int block, const IntMatrix& right)
{
    Equation& e = equations_.at(static_cast<std::size_t>(equation));
    const Unknown& u = unknowns_.at(static_cast<std::size_t>(block));
    if (left.rows() != e.rows || left.cols() != u.rows || right.rows() != u.cols || right.cols() != e.cols)
        throw std::logic_error("LinearSystem::add_term: shape mismatch");
    e.terms.push_back({left, block, right});
}

void LinearSystem::add_rhs(int equation, const IntMatrix& rhs)
{
    Equation& e = equations_.at(static_cast<std::size_t>(equation));
    if (rhs.rows() != e.rows || rhs.cols() != e.cols)
        throw std::logic_error("LinearSystem::add_rhs: shape mismatch");
    e.rhs += rhs;
}

void LinearSystem::add_plain(int equation, int block, const Integer& coeff)
{
    const Unknown& u = unknowns_.at(static_cast<std::size_t>(block));
    IntMatrix left = identity_matrix(u.rows);
    left *= coeff;
    add_term(equation, left, block, identity_matrix(u.cols));
}

Index LinearSystem::unknown_count() const
{
    Index n = 0;
    for (const auto& u : unknowns_)
        for (bool a : u.allowed)
            n += a ? 1 : 0;
    return n;
}

LinearSystem::Assembly LinearSystem::assemble() const
{
    // Column layout: allowed unknown entries, then slack for each equation.
    std::vector<std::vector<Index>> column_of(unknowns_.size());
    Index cols = 0;
    Index unknown_cols = 0;
    for (std::size_t b = 0; b < unknowns_.size(); ++b)
    {
        column_of[b].assign(unknowns_[b].allowed.size(), -1);
        for (std::size_t k = 0; k < unknowns_[b].allowed.size(); ++k)
            if (unknowns_[b].allowed[k])
                column_of[b][k] = cols++;
    }
    unknown_cols = cols;
    Index rows = 0;
    std::vector<Index> row_start, slack_start;
    for (const auto& e : equations_)
    {
        row_start.push_back(rows);
        rows += e.rows * e.cols;
        slack_start.push_back(cols);
        cols += e.modulo.cols() * e.cols;
    }

    IntMatrix A = zero_matrix(rows, cols);
    IntVector b(rows);
    for (std::size_t q = 0; q < equations_.size(); ++q)
    {
        const Equation& e = equations_[q];
        const Index r0 = row_start[q];
        for (Index l = 0; l < e.cols; ++l)
            for (Index i = 0; i < e.rows; ++i)
                b(r0 + l * e.rows + i) = e.rhs(i, l);
        for (const Term& t : e.terms)
        {
            const Unknown& u = unknowns_[static_cast<std::size_t>(t.block)];
            const auto& cmap = column_of[static_cast<std::size_t>(t.block)];
            // coefficient of X(j, k) in entry (i, l) is L(i, j) R(k, l)
            for (Index j = 0; j < u.rows; ++j)
                for (Index i = 0; i < e.rows; ++i)
                {
                    if (t.left(i, j) == 0)
                        continue;
                    for (Index k = 0; k < u.cols; ++k)
                    {
                        Index col = cmap[static_cast<std::size_t>(k * u.rows + j)];
                        if (col < 0)
                            continue;
                        for (Index l = 0; l < e.cols; ++l)
                            if (t.right(k, l) != 0)
                                A(r0 + l * e.rows + i, col) += t.left(i, j) * t.right(k, l);
                    }
                }
        }
        // slack: - T S, with S of shape (t x cols)
        const Index tcols = e.modulo.cols();
        for (Index l = 0; l < e.cols; ++l)
            for (Index s = 0; s < tcols; ++s)
                for (Index i = 0; i < e.rows; ++i)
                    if (e.modulo(i, s) != 0)
                        A(r0 + l * e.rows + i, slack_start[q] + l * tcols + s) = -e.modulo(i, s);
    }

    return {A, b, column_of, unknown_cols};
}

IntMatrix LinearSystem::coefficients() const
{
    Assembly a = assemble();
    return a.matrix.leftCols(a.unknown_columns);
}

IntMatrix LinearSystem::modulo_span() const
{
    std::vector<IntMatrix> blocks;
    for (const auto& e : equations_)
        blocks.push_back(kron(identity_matrix(e.cols), e.modulo));
    return block_diagonal(blocks);
}

std::optional<std::vector<IntMatrix>> LinearSystem::solve() const
{
    Assembly a = assemble();
    const IntMatrix& A = a.matrix;
    const IntVector& b = a.rhs;
    const Index rows = A.rows(), cols = A.cols();
    const auto& column_of = a.column_of;
    std::optional<IntVector> x;
    if (rows == 0)
        x = IntVector::Constant(cols, Integer(0));
    else
        x = cekit::solve(A, b, ring_);
    if (!x)
        return std::nullopt;

    std::vector<IntMatrix> out;
    for (std::size_t bl = 0; bl < unknowns_.size(); ++bl)
    {
        const Unknown& u = unknowns_[bl];
        IntMatrix m = zero_matrix(u.rows, u.cols);
        for (Index k = 0; k < u.cols; ++k)
            for (Index j = 0; j < u.rows; ++j)
            {
                Index col = column_of[bl][static_cast<std::size_t>(k * u.rows + j)];
                if (col >= 0)
                    m(j, k) = (*x)(col);
            }
        out.push_back(ring_.reduce(m));
    }
    return out;
}

}  // namespace cekit
