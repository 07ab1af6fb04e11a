#include "cekit/integer.hpp"

#include <cctype>
#include <sstream>

namespace cekit {

Ring Ring::integers_mod(const Integer& m)
{
    if (m < 2)
        throw PreconditionError("ring modulus must be at least 2, got " + to_string(m));
    Ring r;
    r.modulus_ = m;
    return r;
}

Integer Ring::reduce(const Integer& x) const
{
    if (modulus_ == 0)
        return x;
    return floor_mod(x, modulus_);
}

IntMatrix Ring::reduce(const IntMatrix& a) const
{
    if (modulus_ == 0)
        return a;
    IntMatrix out(a.rows(), a.cols());
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            out(i, j) = floor_mod(a(i, j), modulus_);
    return out;
}

IntVector Ring::reduce(const IntVector& v) const
{
    if (modulus_ == 0)
        return v;
    IntVector out(v.size());
    for (Index i = 0; i < v.size(); ++i)
        out(i) = floor_mod(v(i), modulus_);
    return out;
}

bool Ring::is_zero(const Integer& x) const
{
    if (modulus_ == 0)
        return x == 0;
    return floor_mod(x, modulus_) == 0;
}

std::string Ring::name() const
{
    if (modulus_ == 0)
        return "Z";
    return "Z/" + to_string(modulus_);
}

Ring Ring::parse(const std::string& text)
{
    if (text == "Z")
        return Ring();
    if (text.size() > 2 && text[0] == 'Z' && text[1] == '/')
        return integers_mod(parse_integer(text.substr(2)));
    throw PreconditionError("unknown ring '" + text + "'");
}

Integer gcd(const Integer& a, const Integer& b)
{
    Integer x = abs(a), y = abs(b);
    while (y != 0)
    {
        Integer r = x % y;
        x = y;
        y = r;
    }
    return x;
}

Integer lcm(const Integer& a, const Integer& b)
{
    if (a == 0 || b == 0)
        return 0;
    return abs(a / gcd(a, b) * b);
}

Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q = a / b;
    Integer r = a % b;
    if (r != 0 && ((r < 0) != (b < 0)))
        q -= 1;
    return q;
}

Integer floor_mod(const Integer& a, const Integer& b)
{
    Integer r = a % b;
    if (r < 0)
        r += abs(b);
    return r;
}

ExtendedGcd extended_gcd(const Integer& a, const Integer& b)
{
    Integer old_r = a, r = b;
    Integer old_s = 1, s = 0;
    Integer old_t = 0, t = 1;
    while (r != 0)
    {
        Integer q = old_r / r;
        Integer tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0)
    {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    return {old_r, old_s, old_t};
}

std::string to_string(const Integer& x)
{
    return x.str();
}

Integer parse_integer(const std::string& text)
{
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '-' || text[i] == '+'))
        ++i;
    if (i == text.size())
        throw PreconditionError("malformed integer '" + text + "'");
    for (std::size_t k = i; k < text.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(text[k])))
            throw PreconditionError("malformed integer '" + text + "'");
    return Integer(text[0] == '+' ? text.substr(1) : text);
}

IntMatrix zero_matrix(Index rows, Index cols)
{
    IntMatrix a(rows, cols);
    a.setConstant(Integer(0));
    return a;
}

IntMatrix identity_matrix(Index n)
{
    IntMatrix a = zero_matrix(n, n);
    for (Index i = 0; i < n; ++i)
        a(i, i) = 1;
    return a;
}

IntMatrix kron(const IntMatrix& a, const IntMatrix& b)
{
    IntMatrix out = zero_matrix(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
        {
            if (a(i, j) == 0)
                continue;
            for (Index k = 0; k < b.rows(); ++k)
                for (Index l = 0; l < b.cols(); ++l)
                    if (b(k, l) != 0)
                        out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
        }
    return out;
}

IntVector vec(const IntMatrix& a)
{
    IntVector v(a.size());
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            v(j * a.rows() + i) = a(i, j);
    return v;
}

IntMatrix unvec(const IntVector& v, Index rows, Index cols)
{
    if (v.size() != rows * cols)
        throw std::logic_error("unvec: size mismatch");
    IntMatrix a(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            a(i, j) = v(j * rows + i);
    return a;
}

IntMatrix hstack(const std::vector<IntMatrix>& blocks, Index rows)
{
    Index cols = 0;
    for (const auto& b : blocks)
    {
        if (b.rows() != rows)
            throw std::logic_error("hstack: row mismatch");
        cols += b.cols();
    }
    IntMatrix out(rows, cols);
    Index at = 0;
    for (const auto& b : blocks)
    {
        out.middleCols(at, b.cols()) = b;
        at += b.cols();
    }
    return out;
}

IntMatrix vstack(const std::vector<IntMatrix>& blocks, Index cols)
{
    Index rows = 0;
    for (const auto& b : blocks)
    {
        if (b.cols() != cols)
            throw std::logic_error("vstack: column mismatch");
        rows += b.rows();
    }
    IntMatrix out(rows, cols);
    Index at = 0;
    for (const auto& b : blocks)
    {
        out.middleRows(at, b.rows()) = b;
        at += b.rows();
    }
    return out;
}

IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks)
{
    Index rows = 0, cols = 0;
    for (const auto& b : blocks)
    {
        rows += b.rows();
        cols += b.cols();
    }
    IntMatrix out = zero_matrix(rows, cols);
    Index r = 0, c = 0;
    for (const auto& b : blocks)
    {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

IntMatrix modulus_columns(const Ring& ring, Index n)
{
    if (ring.is_integers())
        return zero_matrix(n, 0);
    IntMatrix m = zero_matrix(n, n);
    for (Index i = 0; i < n; ++i)
        m(i, i) = ring.modulus();
    return m;
}

bool is_zero(const IntMatrix& a)
{
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            if (a(i, j) != 0)
                return false;
    return true;
}

std::string format_matrix(const IntMatrix& a)
{
    std::ostringstream out;
    out << "[";
    for (Index i = 0; i < a.rows(); ++i)
    {
        if (i)
            out << "; ";
        for (Index j = 0; j < a.cols(); ++j)
        {
            if (j)
                out << " ";
            out << a(i, j).str();
        }
    }
    out << "]";
    return out.str();
}

}  // namespace cekit
