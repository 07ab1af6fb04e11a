#include "cekit/serialize.hpp"

#include <cctype>
#include <functional>
#include <sstream>

namespace cekit {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line), column_(column)
{
}

namespace {

// ---------------------------------------------------------------- printing

bool plain_token(const std::string& s)
{
    if (s.empty() || s.front() == '"')
        return false;
    for (char c : s)
        if (std::isspace(static_cast<unsigned char>(c)) || c == '#')
            return false;
    return true;
}

std::string quoted(const std::string& s)
{
    if (plain_token(s))
        return s;
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "\"";
}

void put_matrix(std::ostream& os, const IntMatrix& m)
{
    os << m.rows() << ' ' << m.cols() << '\n';
    if (m.cols() == 0)
        return;
    for (Index i = 0; i < m.rows(); ++i)
    {
        for (Index j = 0; j < m.cols(); ++j)
            os << (j ? " " : "") << to_string(m(i, j));
        os << '\n';
    }
}

void put_complex(std::ostream& os, const ChainComplex& c)
{
    const int len = c.empty() ? 0 : c.top() - c.lowest() + 1;
    os << "ring " << c.ring().name() << '\n';
    os << "lowest " << (c.empty() ? 0 : c.lowest()) << '\n';
    os << "degrees " << len << '\n';
    for (int d = c.lowest(); len > 0 && d <= c.top(); ++d)
    {
        os << "degree " << d << " generators " << c.rank(d) << " relations ";
        put_matrix(os, c.module(d).relations);
    }
    for (int d = c.lowest() + 1; len > 0 && d <= c.top(); ++d)
    {
        os << "differential " << d << ' ';
        put_matrix(os, c.differential(d));
    }
}

void put_components(std::ostream& os, const ChainComplex& source, const std::function<IntMatrix(int)>& comp)
{
    for (int d = source.lowest(); !source.empty() && d <= source.top(); ++d)
    {
        os << "component " << d << ' ';
        put_matrix(os, comp(d));
    }
}

void put_map(std::ostream& os, const ChainMap& f)
{
    os << "source\n";
    put_complex(os, f.source());
    os << "target\n";
    put_complex(os, f.target());
    put_components(os, f.source(), [&](int d) { return f.component(d); });
}

// ---------------------------------------------------------------- tokens

struct Token
{
    std::string text;
    int line = 0, column = 0;
    bool quoted = false;
};

std::vector<Token> tokenize(const std::string& text)
{
    std::vector<Token> out;
    int line = 1, column = 1;
    std::size_t i = 0;
    auto advance = [&]() {
        if (text[i] == '\n')
        {
            ++line;
            column = 1;
        }
        else
            ++column;
        ++i;
    };
    while (i < text.size())
    {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)))
        {
            advance();
            continue;
        }
        if (c == '#')
        {
            while (i < text.size() && text[i] != '\n')
                advance();
            continue;
        }
        Token t;
        t.line = line;
        t.column = column;
        if (c == '"')
        {
            t.quoted = true;
            advance();
            while (true)
            {
                if (i >= text.size())
                    throw ParseError(t.line, t.column, "unterminated string");
                if (text[i] == '"')
                {
                    advance();
                    break;
                }
                if (text[i] == '\\')
                {
                    advance();
                    if (i >= text.size())
                        throw ParseError(t.line, t.column, "unterminated string");
                }
                t.text += text[i];
                advance();
            }
        }
        else
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '#')
            {
                t.text += text[i];
                advance();
            }
        out.push_back(t);
    }
    return out;
}

class Reader
{
    public:
        explicit Reader(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

        bool done() const { return pos_ >= tokens_.size(); }

        const Token& peek() const
        {
            if (done())
                fail_at_end("unexpected end of document");
            return tokens_[pos_];
        }

        const Token& next()
        {
            const Token& t = peek();
            ++pos_;
            return t;
        }

        void expect(const std::string& word)
        {
            const Token& t = next();
            if (t.quoted || t.text != word)
                fail(t, "expected '" + word + "', found '" + t.text + "'");
        }

        Integer integer()
        {
            const Token& t = next();
            try
            {
                if (t.quoted)
                    throw PreconditionError("quoted");
                return parse_integer(t.text);
            }
            catch (const std::exception&)
            {
                fail(t, "expected an integer, found '" + t.text + "'");
            }
        }

        int small(long lo = -1000000, long hi = 1000000)
        {
            const Token& t = peek();
            Integer v = integer();
            if (v < lo || v > hi)
                fail(t, "value " + to_string(v) + " out of range");
            return v.convert_to<int>();
        }

        Index count(Index hi = 100000)
        {
            const Token& t = peek();
            Integer v = integer();
            if (v < 0 || v > hi)
                fail(t, "expected a count, found " + to_string(v));
            return v.convert_to<Index>();
        }

        IntMatrix matrix()
        {
            Index r = count(), c = count();
            IntMatrix m(r, c);
            for (Index i = 0; i < r; ++i)
                for (Index j = 0; j < c; ++j)
                    m(i, j) = integer();
            return m;
        }

        IntMatrix matrix(Index rows, Index cols, const std::string& what)
        {
            const Token& t = peek();
            IntMatrix m = matrix();
            if (m.rows() != rows || m.cols() != cols)
                fail(t, what + " should be " + std::to_string(rows) + "x" + std::to_string(cols) + ", found "
                            + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
            return m;
        }

        Ring ring()
        {
            const Token& t = next();
            try
            {
                return Ring::parse(t.text);
            }
            catch (const std::exception& e)
            {
                fail(t, e.what());
            }
        }

        [[noreturn]] void fail(const Token& t, const std::string& message) const
        {
            throw ParseError(t.line, t.column, message);
        }

        [[noreturn]] void fail_at_end(const std::string& message) const
        {
            if (tokens_.empty())
                throw ParseError(1, 1, message);
            const Token& t = tokens_.back();
            throw ParseError(t.line, t.column + static_cast<int>(t.text.size()), message);
        }

    private:
        std::vector<Token> tokens_;
        std::size_t pos_ = 0;
};

// Wraps precondition failures from the constructors with the location where the object began.
template <typename F>
auto located(Reader& r, const Token& at, F build)
{
    try
    {
        return build();
    }
    catch (const ParseError&)
    {
        throw;
    }
    catch (const std::exception& e)
    {
        r.fail(at, e.what());
    }
}

ChainComplex read_complex(Reader& r)
{
    const Token at = r.peek();
    r.expect("ring");
    Ring ring = r.ring();
    r.expect("lowest");
    int lowest = r.small();
    r.expect("degrees");
    Index len = r.count(10000);
    std::vector<PresentedModule> mods;
    std::vector<IntMatrix> diffs;
    for (Index k = 0; k < len; ++k)
    {
        r.expect("degree");
        const Token& dt = r.peek();
        if (r.small() != lowest + static_cast<int>(k))
            r.fail(dt, "degrees must be listed in order");
        r.expect("generators");
        Index g = r.count();
        r.expect("relations");
        const Token& mt = r.peek();
        IntMatrix rel = r.matrix();
        if (rel.rows() != g)
            r.fail(mt, "relations need one row per generator");
        mods.push_back(located(r, mt, [&] { return PresentedModule(ring, g, rel); }));
    }
    for (Index k = 1; k < len; ++k)
    {
        r.expect("differential");
        const Token& dt = r.peek();
        if (r.small() != lowest + static_cast<int>(k))
            r.fail(dt, "differentials must be listed in order");
        diffs.push_back(r.matrix(mods[static_cast<std::size_t>(k - 1)].generators,
                                 mods[static_cast<std::size_t>(k)].generators, "differential"));
    }
    if (len == 0)
        return ChainComplex(ring);
    return located(r, at, [&] {
        ChainComplex c(ring, lowest, mods, diffs);
        c.validate();
        return c;
    });
}

std::vector<IntMatrix> read_components(Reader& r, const ChainComplex& source, int shift, const ChainComplex& target)
{
    std::vector<IntMatrix> out;
    for (int d = source.lowest(); !source.empty() && d <= source.top(); ++d)
    {
        r.expect("component");
        const Token& dt = r.peek();
        if (r.small() != d)
            r.fail(dt, "components must be listed in source degree order");
        out.push_back(r.matrix(target.rank(d + shift), source.rank(d), "component"));
    }
    return out;
}

ChainMap read_map(Reader& r)
{
    const Token at = r.peek();
    r.expect("source");
    ChainComplex s = read_complex(r);
    r.expect("target");
    ChainComplex t = read_complex(r);
    auto comps = read_components(r, s, 0, t);
    return located(r, at, [&] { return ChainMap(s, t, comps); });
}

FilteredComplex read_filtered(Reader& r)
{
    const Token at = r.peek();
    ChainComplex c = read_complex(r);
    std::vector<std::vector<int>> w;
    for (int d = c.lowest(); !c.empty() && d <= c.top(); ++d)
    {
        r.expect("weights");
        const Token& dt = r.peek();
        if (r.small() != d)
            r.fail(dt, "weights must be listed in degree order");
        std::vector<int> row;
        for (Index i = 0; i < c.rank(d); ++i)
            row.push_back(r.small());
        w.push_back(row);
    }
    return located(r, at, [&] {
        FilteredComplex f(c, w);
        f.validate();
        return f;
    });
}

Homotopy read_homotopy(Reader& r)
{
    const Token at = r.peek();
    r.expect("source");
    ChainComplex s = read_complex(r);
    r.expect("target");
    ChainComplex t = read_complex(r);
    r.expect("from");
    auto f = read_components(r, s, 0, t);
    r.expect("to");
    auto g = read_components(r, s, 0, t);
    r.expect("homotopy");
    auto h = read_components(r, s, 1, t);
    return located(r, at, [&] {
        Homotopy out(ChainMap(s, t, f), ChainMap(s, t, g), h);
        out.validate();
        return out;
    });
}

std::string read_name(Reader& r)
{
    return r.next().text;
}

FunctorDiagram read_diagram(Reader& r)
{
    const Token at = r.peek();
    r.expect("objects");
    Index n = r.count(1000);
    std::vector<std::string> objects;
    for (Index i = 0; i < n; ++i)
        objects.push_back(read_name(r));
    r.expect("morphisms");
    Index m = r.count(10000);
    std::vector<Morphism> ms;
    for (Index i = 0; i < m; ++i)
    {
        Morphism a;
        a.name = read_name(r);
        a.source = r.small(0, static_cast<long>(n) - 1);
        a.target = r.small(0, static_cast<long>(n) - 1);
        ms.push_back(a);
    }
    r.expect("identities");
    std::vector<int> ids;
    for (Index i = 0; i < n; ++i)
        ids.push_back(r.small(0, static_cast<long>(m) - 1));
    r.expect("compose");
    std::vector<std::vector<int>> table(static_cast<std::size_t>(m));
    for (Index g = 0; g < m; ++g)
        for (Index f = 0; f < m; ++f)
            table[static_cast<std::size_t>(g)].push_back(r.small(-1, static_cast<long>(m) - 1));
    FiniteCategory c = located(r, at, [&] { return FiniteCategory(objects, ms, ids, table); });

    std::vector<ChainComplex> values;
    for (Index x = 0; x < n; ++x)
    {
        r.expect("value");
        const Token& xt = r.peek();
        if (r.small() != x)
            r.fail(xt, "values must be listed in object order");
        values.push_back(read_complex(r));
    }
    std::vector<ChainMap> maps;
    for (Index a = 0; a < m; ++a)
    {
        r.expect("map");
        const Token& mt = r.peek();
        if (r.small() != a)
            r.fail(mt, "maps must be listed in morphism order");
        const ChainComplex& s = values[static_cast<std::size_t>(ms[static_cast<std::size_t>(a)].source)];
        const ChainComplex& t = values[static_cast<std::size_t>(ms[static_cast<std::size_t>(a)].target)];
        auto comps = read_components(r, s, 0, t);
        maps.push_back(located(r, mt, [&] { return ChainMap(s, t, comps); }));
    }
    r.expect("models");
    Index k = r.count(1000);
    std::vector<int> models;
    for (Index i = 0; i < k; ++i)
        models.push_back(r.small(0, static_cast<long>(n) - 1));
    return located(r, at, [&] {
        FunctorDiagram d{FunctorComplex(c, values, maps), models};
        d.functor.validate();
        if (!models.empty())
        {
            std::string err = ModelsCotriple{c, models}.check();
            if (!err.empty())
                throw PreconditionError("models: " + err);
        }
        return d;
    });
}

Request read_request(Reader& r)
{
    Request q;
    r.expect("command");
    q.command = r.next().text;
    r.expect("args");
    Index n = r.count(1000);
    for (Index i = 0; i < n; ++i)
    {
        std::string key = r.next().text;
        q.args.emplace_back(key, r.next().text);
    }
    return q;
}

bool same_complex(const ChainComplex& a, const ChainComplex& b)
{
    return a == b;
}

bool same_components(const ChainComplex& s, const std::function<IntMatrix(int)>& f,
                     const std::function<IntMatrix(int)>& g)
{
    for (int d = s.lowest(); !s.empty() && d <= s.top(); ++d)
        if (f(d) != g(d))
            return false;
    return true;
}

bool same_map(const ChainMap& a, const ChainMap& b)
{
    return same_complex(a.source(), b.source()) && same_complex(a.target(), b.target())
           && same_components(a.source(), [&](int d) { return a.component(d); },
                              [&](int d) { return b.component(d); });
}

}  // namespace

std::string print(const Document& doc)
{
    std::ostringstream os;
    os << "cekit " << doc.version << '\n' << kind(doc) << '\n';
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PresentedModule>)
            {
                os << "ring " << p.ring.name() << '\n' << "generators " << p.generators << '\n' << "relations ";
                put_matrix(os, p.relations);
            }
            else if constexpr (std::is_same_v<T, ChainComplex>)
                put_complex(os, p);
            else if constexpr (std::is_same_v<T, FilteredComplex>)
            {
                put_complex(os, p.base());
                for (int d = p.base().lowest(); !p.base().empty() && d <= p.base().top(); ++d)
                {
                    os << "weights " << d;
                    for (int w : p.weights(d))
                        os << ' ' << w;
                    os << '\n';
                }
            }
            else if constexpr (std::is_same_v<T, ChainMap>)
                put_map(os, p);
            else if constexpr (std::is_same_v<T, Homotopy>)
            {
                os << "source\n";
                put_complex(os, p.source());
                os << "target\n";
                put_complex(os, p.target());
                os << "from\n";
                put_components(os, p.source(), [&](int d) { return p.from().component(d); });
                os << "to\n";
                put_components(os, p.source(), [&](int d) { return p.to().component(d); });
                os << "homotopy\n";
                put_components(os, p.source(), [&](int d) { return p.component(d); });
            }
            else if constexpr (std::is_same_v<T, FunctorDiagram>)
            {
                const FiniteCategory& c = p.functor.category();
                os << "objects " << c.object_count();
                for (int x = 0; x < c.object_count(); ++x)
                    os << ' ' << quoted(c.object_name(x));
                os << "\nmorphisms " << c.morphism_count() << '\n';
                for (int a = 0; a < c.morphism_count(); ++a)
                    os << quoted(c.morphism(a).name) << ' ' << c.morphism(a).source << ' ' << c.morphism(a).target
                       << '\n';
                os << "identities";
                for (int x = 0; x < c.object_count(); ++x)
                    os << ' ' << c.identity(x);
                os << "\ncompose\n";
                for (int g = 0; g < c.morphism_count(); ++g)
                {
                    for (int f = 0; f < c.morphism_count(); ++f)
                    {
                        bool ok = c.morphism(f).target == c.morphism(g).source;
                        os << (f ? " " : "") << (ok ? c.compose(g, f) : -1);
                    }
                    os << '\n';
                }
                for (int x = 0; x < c.object_count(); ++x)
                {
                    os << "value " << x << '\n';
                    put_complex(os, p.functor.at(x));
                }
                for (int a = 0; a < c.morphism_count(); ++a)
                {
                    os << "map " << a << '\n';
                    put_components(os, p.functor.map(a).source(),
                                   [&](int d) { return p.functor.map(a).component(d); });
                }
                os << "models " << p.models.size();
                for (int m : p.models)
                    os << ' ' << m;
                os << '\n';
            }
            else
            {
                os << "command " << quoted(p.command) << "\nargs " << p.args.size() << '\n';
                for (const auto& [k, v] : p.args)
                    os << quoted(k) << ' ' << quoted(v) << '\n';
            }
        },
        doc.payload);
    return os.str();
}

Document parse(const std::string& text)
{
    Reader r(tokenize(text));
    r.expect("cekit");
    const Token& vt = r.peek();
    Document doc;
    doc.version = r.small();
    if (doc.version != 1)
        r.fail(vt, "unsupported format version " + std::to_string(doc.version));
    const Token& kt = r.next();
    const std::string& k = kt.text;
    if (k == "module")
    {
        const Token at = r.peek();
        r.expect("ring");
        Ring ring = r.ring();
        r.expect("generators");
        Index g = r.count();
        r.expect("relations");
        const Token& mt = r.peek();
        IntMatrix rel = r.matrix();
        if (rel.rows() != g)
            r.fail(mt, "relations need one row per generator");
        doc.payload = located(r, at, [&] { return PresentedModule(ring, g, rel); });
    }
    else if (k == "complex")
        doc.payload = read_complex(r);
    else if (k == "filtered_complex")
        doc.payload = read_filtered(r);
    else if (k == "map")
        doc.payload = read_map(r);
    else if (k == "homotopy")
        doc.payload = read_homotopy(r);
    else if (k == "functor_diagram")
        doc.payload = read_diagram(r);
    else if (k == "request")
        doc.payload = read_request(r);
    else
        r.fail(kt, "unknown document kind '" + k + "'");
    if (!r.done())
        r.fail(r.peek(), "trailing input '" + r.peek().text + "'");
    return doc;
}

std::string kind(const Document& doc)
{
    static const char* names[] = {"module", "complex", "filtered_complex", "map", "homotopy", "functor_diagram",
                                  "request"};
    return names[doc.payload.index()];
}

bool same_document(const Document& a, const Document& b)
{
    if (a.version != b.version || a.payload.index() != b.payload.index())
        return false;
    return std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            const T& q = std::get<T>(b.payload);
            if constexpr (std::is_same_v<T, PresentedModule>)
                return p == q && p.relations == q.relations;
            else if constexpr (std::is_same_v<T, ChainComplex>)
                return same_complex(p, q);
            else if constexpr (std::is_same_v<T, FilteredComplex>)
            {
                if (!same_complex(p.base(), q.base()))
                    return false;
                for (int d = p.base().lowest(); !p.base().empty() && d <= p.base().top(); ++d)
                    if (p.weights(d) != q.weights(d))
                        return false;
                return true;
            }
            else if constexpr (std::is_same_v<T, ChainMap>)
                return same_map(p, q);
            else if constexpr (std::is_same_v<T, Homotopy>)
                return same_map(p.from(), q.from()) && same_map(p.to(), q.to())
                       && same_components(p.source(), [&](int d) { return p.component(d); },
                                          [&](int d) { return q.component(d); });
            else if constexpr (std::is_same_v<T, FunctorDiagram>)
            {
                if (p.models != q.models || p.functor.category() != q.functor.category())
                    return false;
                const FiniteCategory& c = p.functor.category();
                for (int x = 0; x < c.object_count(); ++x)
                    if (!same_complex(p.functor.at(x), q.functor.at(x)))
                        return false;
                for (int f = 0; f < c.morphism_count(); ++f)
                    if (!same_map(p.functor.map(f), q.functor.map(f)))
                        return false;
                return true;
            }
            else
                return p.command == q.command && p.args == q.args;
        },
        a.payload);
}

PresentedModule parse_module_expression(const Ring& ring, const std::string& text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s += c;
    auto bad = [&](const std::string& why) { return PreconditionError("module '" + text + "': " + why); };
    if (s.empty())
        throw bad("empty");
    if (s == "0")
        return PresentedModule::zero(ring);
    std::vector<PresentedModule> parts;
    std::size_t i = 0;
    auto number = [&]() {
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
            ++j;
        if (j == i)
            throw bad("expected a number at position " + std::to_string(i + 1));
        Integer v = parse_integer(s.substr(i, j - i));
        i = j;
        return v;
    };
    while (true)
    {
        if (i >= s.size() || s[i] != 'Z')
            throw bad("expected 'Z' at position " + std::to_string(i + 1));
        ++i;
        Integer order = 0;
        if (i < s.size() && s[i] == '/')
        {
            ++i;
            order = number();
            if (order < 1)
                throw bad("cyclic order must be positive");
        }
        Integer times = 1;
        if (i < s.size() && s[i] == '^')
        {
            ++i;
            times = number();
        }
        for (Integer t = 0; t < times; ++t)
            parts.push_back(order == 0 ? PresentedModule::free(ring, 1) : PresentedModule(ring, 1, IntMatrix::Constant(1, 1, order)));
        if (i == s.size())
            break;
        if (s[i] != '+')
            throw bad("expected '+' at position " + std::to_string(i + 1));
        ++i;
    }
    return direct_sum(parts);
}

}  // namespace cekit
