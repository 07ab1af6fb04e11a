/**
 * The "cekit 1" text format.  A document is a whitespace separated token
 * stream: the header "cekit 1", a payload keyword, then the payload body.
 * '#' starts a comment; values containing spaces go in double quotes.
 *
 *   cekit 1
 *   module
 *   ring Z
 *   generators 2
 *   relations 2 1
 *   2
 *   0
 *
 * Matrices are written as "rows cols" followed by the entries row by row.
 */

#ifndef CEKIT_SERIALIZE_HPP
#define CEKIT_SERIALIZE_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cekit/cotriple.hpp"
#include "cekit/filtered.hpp"

namespace cekit {

/** A functor together with the models of its cotriple (possibly none). */
struct FunctorDiagram
{
    FunctorComplex functor;
    std::vector<int> models;
};

/** A subcommand with named string arguments, in order. */
struct Request
{
    std::string command;
    std::vector<std::pair<std::string, std::string>> args;
};

using Payload = std::variant<PresentedModule, ChainComplex, FilteredComplex, ChainMap, Homotopy, FunctorDiagram, Request>;

struct Document
{
    int version = 1;
    Payload payload;
};

class ParseError : public std::runtime_error
{
    public:
        ParseError(int line, int column, const std::string& message);
        int line() const { return line_; }
        int column() const { return column_; }

    private:
        int line_, column_;
};

std::string print(const Document& doc);
Document parse(const std::string& text);

/** "module", "complex", ... */
std::string kind(const Document& doc);

/** Exact equality of payloads, entry by entry. */
bool same_document(const Document& a, const Document& b);

/**
 * Short module notation over a ring: "0" or a sum of terms "Z", "Z^n",
 * "Z/k", "Z/k^n", e.g. "Z^2 + Z/6".
 */
PresentedModule parse_module_expression(const Ring& ring, const std::string& text);

}  // namespace cekit

#endif
