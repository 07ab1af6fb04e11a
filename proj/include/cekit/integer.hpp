/**
 * Exact scalars and dense matrices shared by every module.
 *
 * Integers are arbitrary precision (GMP through Boost.Multiprecision, with
 * expression templates disabled so that they compose with Eigen's own
 * expression machinery).  A Ring is either Z or Z/m; elements of Z/m are
 * always stored as canonical residues 0..m-1.
 */

#ifndef CEKIT_INTEGER_HPP
#define CEKIT_INTEGER_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/multiprecision/gmp.hpp>

namespace cekit {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

}  // namespace cekit

namespace Eigen {

template <>
struct NumTraits<cekit::Integer> : GenericNumTraits<cekit::Integer>
{
    typedef cekit::Integer Real;
    typedef cekit::Integer NonInteger;
    typedef cekit::Integer Literal;
    typedef cekit::Integer Nested;
    enum
    {
        IsInteger = 1,
        IsSigned = 1,
        IsComplex = 0,
        RequireInitialization = 1,
        ReadCost = 4,
        AddCost = 8,
        MulCost = 16
    };
    static inline Real epsilon() { return 0; }
    static inline Real dummy_precision() { return 0; }
    static inline int digits10() { return 0; }
    static inline Real highest() { return 0; }
    static inline Real lowest() { return 0; }
};

}  // namespace Eigen

namespace cekit {

using Index = Eigen::Index;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = DenseMatrix<Integer>;
using IntVector = DenseVector<Integer>;

/** Raised when an input violates an operation's precondition. */
class PreconditionError : public std::invalid_argument
{
    public:
        using std::invalid_argument::invalid_argument;
};

/** Raised by the int64 fast paths when an intermediate value overflows. */
class OverflowError : public std::overflow_error
{
    public:
        OverflowError() : std::overflow_error("int64 overflow") {}
};

/**
 * Coefficient ring: the integers (modulus 0) or Z/m with m >= 2.
 */
class Ring
{
    public:
        Ring() = default;

        static Ring integers() { return Ring(); }
        static Ring integers_mod(const Integer& m);

        bool is_integers() const { return modulus_ == 0; }
        const Integer& modulus() const { return modulus_; }

        Integer reduce(const Integer& x) const;
        IntMatrix reduce(const IntMatrix& a) const;
        IntVector reduce(const IntVector& v) const;

        /** True when x is zero in the ring. */
        bool is_zero(const Integer& x) const;

        std::string name() const;

        /** Parses "Z" or "Z/m". */
        static Ring parse(const std::string& text);

        friend bool operator==(const Ring& a, const Ring& b) { return a.modulus_ == b.modulus_; }
        friend bool operator!=(const Ring& a, const Ring& b) { return !(a == b); }

    private:
        Integer modulus_ = 0;
};

// Small helpers on integers.

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

/** Floor division and matching nonnegative remainder for b != 0. */
Integer floor_div(const Integer& a, const Integer& b);
Integer floor_mod(const Integer& a, const Integer& b);

/** Returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0. */
struct ExtendedGcd
{
    Integer g, s, t;
};
ExtendedGcd extended_gcd(const Integer& a, const Integer& b);

std::string to_string(const Integer& x);
Integer parse_integer(const std::string& text);

// Matrix helpers.

IntMatrix zero_matrix(Index rows, Index cols);
IntMatrix identity_matrix(Index n);

/** Kronecker product; vec(L X R) = kron(R^T, L) vec(X) for column-major vec. */
IntMatrix kron(const IntMatrix& a, const IntMatrix& b);

/** Column-major vectorization and its inverse. */
IntVector vec(const IntMatrix& a);
IntMatrix unvec(const IntVector& v, Index rows, Index cols);

IntMatrix hstack(const std::vector<IntMatrix>& blocks, Index rows);
IntMatrix vstack(const std::vector<IntMatrix>& blocks, Index cols);
IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks);

/** Identity-relations helper: m * I_n over Z/m, an n x 0 matrix over Z. */
IntMatrix modulus_columns(const Ring& ring, Index n);

bool is_zero(const IntMatrix& a);

std::string format_matrix(const IntMatrix& a);

}  // namespace cekit

#endif
