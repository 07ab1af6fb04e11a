#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <set>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cekit/acceptance.hpp"
#include "cekit/serialize.hpp"

namespace cekit::cli {

namespace {

constexpr int ok = 0, negative = 1, bad_input = 2;

// Parse failure already located; carries the file name along.
struct InputError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

int default_window()
{
    const char* env = std::getenv("CEKIT_WINDOW");
    if (!env || !*env)
        return 8;
    try
    {
        std::size_t used = 0;
        int n = std::stoi(env, &used);
        if (used == std::string(env).size() && n >= 0)
            return n;
    }
    catch (const std::exception&)
    {
    }
    throw InputError(std::string("CEKIT_WINDOW must be a non-negative integer, got '") + env + "'");
}

std::string slurp(const std::string& path)
{
    if (path == "-")
    {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError(path + ": cannot read file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Document load(const std::string& path)
{
    try
    {
        return parse(slurp(path));
    }
    catch (const ParseError& e)
    {
        throw InputError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                         std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
    }
}

template <typename T>
T load_as(const std::string& path, const std::string& expected)
{
    Document d = load(path);
    if (!std::holds_alternative<T>(d.payload))
        throw InputError(path + ": expected a " + expected + " document, found " + kind(d));
    return std::get<T>(d.payload);
}

ChainComplex load_complex(const std::string& path)
{
    Document d = load(path);
    if (auto* c = std::get_if<ChainComplex>(&d.payload))
        return *c;
    if (auto* m = std::get_if<PresentedModule>(&d.payload))
        return ChainComplex::concentrated(*m, 0);
    throw InputError(path + ": expected a complex or module document, found " + kind(d));
}

void emit(const std::string& path, const Payload& p)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw InputError(path + ": cannot write file");
    f << print(Document{1, p});
}

PresentedModule module_arg(const Ring& ring, const std::string& value)
{
    if (!value.empty() && value.front() == '@')
    {
        PresentedModule m = load_as<PresentedModule>(value.substr(1), "module");
        if (m.ring != ring)
            throw InputError(value.substr(1) + ": module is over " + m.ring.name() + ", not " + ring.name());
        return m;
    }
    return parse_module_expression(ring, value);
}

std::string invariants(const PresentedModule& m)
{
    return invariant_factors(m).str();
}

std::string range(const DegreeRange& r)
{
    return r.empty() ? "none" : std::to_string(r.lo) + ".." + std::to_string(r.hi);
}

std::string ranks(const ChainComplex& c)
{
    std::string s;
    for (int d = c.lowest(); !c.empty() && d <= c.top(); ++d)
        s += (s.empty() ? "" : " ") + std::to_string(d) + ":" + std::to_string(c.rank(d));
    return s.empty() ? "none" : s;
}

void homology_lines(std::ostream& out, const ChainComplex& c, const std::string& prefix = "")
{
    if (c.empty())
    {
        out << prefix << "H_0 (0; )\n";
        return;
    }
    for (int d = c.lowest(); d <= c.top(); ++d)
        out << prefix << "H_" << d << ' ' << invariants(homology(c, d)) << '\n';
}

StrongClass class_arg(const std::string& s)
{
    if (s == "natural")
        return StrongClass::natural;
    if (s == "pointwise")
        return StrongClass::pointwise;
    return StrongClass::quasi;
}

ModelsCotriple cotriple_of(const FunctorDiagram& d, const std::string& path)
{
    if (d.models.empty())
        throw InputError(path + ": the functor diagram lists no models");
    return ModelsCotriple{d.functor.category(), d.models};
}

void status_line(std::ostream& out, const MapStatus& s)
{
    out << s.name << ": " << s.source.str() << " -> " << s.target.str() << ", "
        << (s.well_defined ? "well defined" : "not well defined") << ", " << (s.iso ? "iso" : "not iso") << '\n';
}

// Everything a subcommand needs after option parsing.
struct Options
{
    std::vector<std::string> files;
    std::string ring = "Z", m, n, emit, cls = "natural";
    std::string source, target, model, w, f;
    int degree = 0;
    int bound = -1;
    std::uint64_t seed = 7;
    int instances = 0;
};

int window(const Options& o)
{
    return o.bound >= 0 ? o.bound : default_window();
}

int run_command(const std::string& cmd, const Options& o, std::ostream& out);

int cmd_homology(const Options& o, std::ostream& out)
{
    Document d = load(o.files.at(0));
    if (auto* fc = std::get_if<FilteredComplex>(&d.payload))
        homology_lines(out, fc->base());
    else
        homology_lines(out, load_complex(o.files.at(0)));
    return ok;
}

int cmd_resolve(const Options& o, std::ostream& out)
{
    Document d = load(o.files.at(0));
    Resolution r = std::holds_alternative<PresentedModule>(d.payload)
                       ? free_resolution_module(std::get<PresentedModule>(d.payload), window(o))
                       : free_resolution_complex(load_complex(o.files.at(0)), window(o));
    std::string err = check(r);
    if (!err.empty())
        throw PreconditionError("resolution check: " + err);
    out << "model ranks " << ranks(r.model) << '\n';
    out << "certified " << range(r.certified) << '\n';
    homology_lines(out, r.model, "model ");
    if (!o.emit.empty())
        emit(o.emit, r.augmentation);
    return ok;
}

int cmd_derived(const Options& o, std::ostream& out, bool is_tor)
{
    Ring ring = Ring::parse(o.ring);
    PresentedModule m = module_arg(ring, o.m), n = module_arg(ring, o.n);
    int bound = std::max(window(o), o.degree + 1);
    out << invariants(is_tor ? tor(m, n, o.degree, bound) : ext(m, n, o.degree, bound)) << '\n';
    return ok;
}

int cmd_cone(const Options& o, std::ostream& out)
{
    out << print(Document{1, cone(load_as<ChainMap>(o.files.at(0), "map"))});
    return ok;
}

int cmd_cylinder(const Options& o, std::ostream& out)
{
    Cylinder c = cylinder(load_complex(o.files.at(0)));
    out << print(Document{1, c.cyl});
    if (!o.emit.empty())
    {
        emit(o.emit + "-i0.cekit", c.i0);
        emit(o.emit + "-i1.cekit", c.i1);
        emit(o.emit + "-p.cekit", c.p);
    }
    return ok;
}

int cmd_lift(const Options& o, std::ostream& out)
{
    ChainMap w = load_as<ChainMap>(o.w, "map");
    ChainMap f = load_as<ChainMap>(o.f, "map");
    if (!(w.target() == f.target()))
        throw InputError(o.f + ": target differs from the target of " + o.w);
    if (!is_quasi_iso(w))
    {
        out << "not a quasi-isomorphism: " << o.w << '\n';
        return negative;
    }
    Lift l = lift_cofibrant(f.source(), w, f);
    std::string err = l.homotopy.check();
    if (!err.empty())
        throw PreconditionError("lift check: " + err);
    out << "lift found\n";
    out << "homotopy w g => f verified\n";
    if (!o.emit.empty())
    {
        emit(o.emit + "-map.cekit", l.map);
        emit(o.emit + "-homotopy.cekit", l.homotopy);
    }
    return ok;
}

int cmd_invert(const Options& o, std::ostream& out)
{
    ChainMap w = load_as<ChainMap>(o.files.at(0), "map");
    if (!is_quasi_iso(w))
    {
        out << "not a quasi-isomorphism\n";
        return negative;
    }
    HomotopyEquivalence e = invert_weak_equivalence(w);
    std::string err = check(e);
    if (!err.empty())
        throw PreconditionError("inverse check: " + err);
    out << "homotopy inverse found\n";
    out << "h: v w => id verified\n";
    out << "k: w v => id verified\n";
    if (!o.emit.empty())
    {
        emit(o.emit + "-v.cekit", e.v);
        emit(o.emit + "-h.cekit", e.h);
        emit(o.emit + "-k.cekit", e.k);
    }
    return ok;
}

int cmd_filtered_resolve(const Options& o, std::ostream& out)
{
    FilteredComplex x = load_as<FilteredComplex>(o.files.at(0), "filtered_complex");
    FilteredResolution r = filtered_resolution(x, window(o));
    std::string err = check(r);
    if (!err.empty())
        throw PreconditionError("filtered resolution check: " + err);
    out << "model ranks " << ranks(r.model.base()) << '\n';
    DegreeRange wr = r.model.weight_range();
    for (int p = wr.lo; !wr.empty() && p <= wr.hi; ++p)
        out << "Gr_" << p << " ranks " << ranks(gr(r.model, p)) << '\n';
    out << "certified " << range(r.certified) << '\n';
    if (!o.emit.empty())
        emit(o.emit, r.model);
    return ok;
}

int cmd_filtered_lift(const Options& o, std::ostream& out)
{
    FilteredComplex y = load_as<FilteredComplex>(o.source, "filtered_complex");
    FilteredComplex x = load_as<FilteredComplex>(o.target, "filtered_complex");
    FilteredComplex p = load_as<FilteredComplex>(o.model, "filtered_complex");
    FilteredMap w{y, x, load_as<ChainMap>(o.w, "map")};
    FilteredMap f{p, x, load_as<ChainMap>(o.f, "map")};
    if (!(w.map.source() == y.base()) || !(w.map.target() == x.base()))
        throw InputError(o.w + ": map does not run between the given source and target");
    if (!(f.map.source() == p.base()) || !(f.map.target() == x.base()))
        throw InputError(o.f + ": map does not run from the model to the target");
    for (const FilteredMap* m : {&w, &f})
    {
        std::string err = m->check();
        if (!err.empty())
            throw PreconditionError("filtered map: " + err);
    }
    if (!is_filtered_quasi_iso(w))
    {
        out << "not a filtered quasi-isomorphism: " << o.w << '\n';
        return negative;
    }
    Lift l = filtered_lift(w, f);
    out << "filtered lift found\n";
    out << "filtered homotopy w g => f verified\n";
    if (!o.emit.empty())
    {
        emit(o.emit + "-map.cekit", l.map);
        emit(o.emit + "-homotopy.cekit", l.homotopy);
    }
    return ok;
}

int cmd_bar(const Options& o, std::ostream& out)
{
    FunctorDiagram d = load_as<FunctorDiagram>(o.files.at(0), "functor_diagram");
    ModelsCotriple g = cotriple_of(d, o.files.at(0));
    int bound = window(o);
    std::string laws = check_cotriple_laws(g, d.functor);
    if (!laws.empty())
        throw PreconditionError("cotriple laws: " + laws);
    Bar b = bar(g, d.functor, bound);
    const FiniteCategory& c = d.functor.category();
    out << "bar complex built through degree " << bound << '\n';
    for (int x = 0; x < c.object_count(); ++x)
    {
        out << "object " << c.object_name(x) << " ranks " << ranks(b.complex.at(x)) << '\n';
        for (int n = 0; n < bound; ++n)
            out << "  H_" << n << " BK " << invariants(homology(b.complex.at(x), n)) << "  K "
                << invariants(homology(d.functor.at(x), n)) << '\n';
    }
    return ok;
}

int cmd_cofibrant(const Options& o, std::ostream& out)
{
    FunctorDiagram d = load_as<FunctorDiagram>(o.files.at(0), "functor_diagram");
    ModelsCotriple g = cotriple_of(d, o.files.at(0));
    int bound = window(o);
    CofibrancyResult r = is_g_cofibrant(g, d.functor, bound, class_arg(o.cls));
    out << (r.cofibrant ? "cofibrant" : "not cofibrant") << " (" << o.cls << ", window " << bound << ")\n";
    return r.cofibrant ? ok : negative;
}

int cmd_acyclic_models(const Options& o, std::ostream& out)
{
    FunctorDiagram k = load_as<FunctorDiagram>(o.files.at(0), "functor_diagram");
    FunctorDiagram l = load_as<FunctorDiagram>(o.files.at(1), "functor_diagram");
    ModelsCotriple g = cotriple_of(k, o.files.at(0));
    if (l.functor.category() != k.functor.category())
        throw InputError(o.files.at(1) + ": category differs from " + o.files.at(0));
    int bound = std::max(window(o), k.functor.top() + 2);
    AcyclicModelsReport r = acyclic_models_check(g, k.functor, l.functor, bound, class_arg(o.cls));
    for (const auto& f : r.factors)
        status_line(out, f);
    status_line(out, r.direct);
    out << (r.bijective ? "H_0 rho bijective" : "H_0 rho not bijective") << '\n';
    return r.bijective ? ok : negative;
}

int cmd_check_all(const Options& o, std::ostream& out)
{
    SuiteConfig cfg;
    cfg.seed = o.seed;
    cfg.instances = o.instances;
    bool all = true;
    for (int id : library_criteria())
    {
        CriterionResult r = run_criterion(id, cfg);
        out << format(r) << '\n';
        all = all && r.pass;
    }
    out << (all ? "all suites passed" : "some suites failed") << '\n';
    return all ? ok : negative;
}

// Validates a document; a request document is executed.
int cmd_check_file(const Options& o, std::ostream& out)
{
    const std::string& path = o.files.at(0);
    Document d = load(path);
    std::string text = print(d);
    if (!same_document(parse(text), d) || print(parse(text)) != text)
        throw std::logic_error(path + ": print/parse round trip differs");
    if (auto* q = std::get_if<Request>(&d.payload))
    {
        // Document arguments are relative to the request's directory.
        std::filesystem::path dir = std::filesystem::path(path).parent_path();
        auto resolve = [&](const std::string& v) {
            if (v.empty() || std::filesystem::path(v).is_absolute())
                return v;
            return (dir / v).lexically_normal().string();
        };
        static const std::set<std::string> paths = {"-", "w", "f", "source", "target", "model"};
        std::vector<std::string> args{q->command};
        for (const auto& [key, value] : q->args)
        {
            std::string v = value;
            if (paths.count(key))
                v = resolve(v);
            else if ((key == "M" || key == "N") && !v.empty() && v.front() == '@')
                v = "@" + resolve(v.substr(1));
            if (key == "-")
                args.push_back(v);
            else
            {
                args.push_back("--" + key);
                args.push_back(v);
            }
        }
        if (q->command == "check")
            throw InputError(path + ": a request cannot run check");
        std::ostringstream err;
        int code = run(args, out, err);
        if (code == bad_input)
            throw InputError(path + ": " + err.str());
        return code;
    }
    out << "ok " << kind(d) << '\n';
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"cekit: exact chain-complex algebra, resolutions and acyclic models"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    Options o;

    auto file = [&](CLI::App* sub, const std::string& what) {
        sub->add_option("file", o.files, what)->required()->expected(1);
    };
    auto bound = [&](CLI::App* sub) {
        sub->add_option("--bound", o.bound, "degree bound (default $CEKIT_WINDOW or 8)")->check(CLI::NonNegativeNumber);
    };
    auto emit_opt = [&](CLI::App* sub, const std::string& what) { sub->add_option("--emit", o.emit, what); };

    CLI::App* homology = app.add_subcommand("homology", "homology of a complex or module");
    file(homology, "complex document");
    CLI::App* resolve = app.add_subcommand("resolve", "free resolution of a module or complex");
    file(resolve, "module or complex document");
    bound(resolve);
    emit_opt(resolve, "write the augmentation as a map document");
    for (const char* name : {"tor", "ext"})
    {
        CLI::App* sub = app.add_subcommand(name, std::string(name) + "_n(M, N)");
        sub->add_option("--ring", o.ring, "Z or Z/m")->capture_default_str();
        sub->add_option("--M", o.m, "module expression, or @file")->required();
        sub->add_option("--N", o.n, "module expression, or @file")->required();
        sub->add_option("--n", o.degree, "degree")->required()->check(CLI::NonNegativeNumber);
        bound(sub);
    }
    CLI::App* cone_cmd = app.add_subcommand("cone", "mapping cone of a map");
    file(cone_cmd, "map document");
    CLI::App* cyl = app.add_subcommand("cylinder", "cylinder of a complex");
    file(cyl, "complex document");
    emit_opt(cyl, "prefix for the i0, i1 and p map documents");
    CLI::App* lift = app.add_subcommand("lift", "lift f through a quasi-isomorphism w up to homotopy");
    lift->add_option("--w", o.w, "map document w: Y -> X")->required();
    lift->add_option("--f", o.f, "map document f: P -> X, P free")->required();
    emit_opt(lift, "prefix for the map and homotopy documents");
    CLI::App* invert = app.add_subcommand("invert", "homotopy inverse of a quasi-isomorphism of free complexes");
    file(invert, "map document");
    emit_opt(invert, "prefix for the v, h and k documents");
    CLI::App* fres = app.add_subcommand("filtered-resolve", "weighted-free model of a filtered complex");
    file(fres, "filtered_complex document");
    bound(fres);
    emit_opt(fres, "write the model as a filtered_complex document");
    CLI::App* flift = app.add_subcommand("filtered-lift", "lift through a filtered quasi-isomorphism");
    flift->add_option("--source", o.source, "filtered_complex Y")->required();
    flift->add_option("--target", o.target, "filtered_complex X")->required();
    flift->add_option("--model", o.model, "weighted-free filtered_complex P")->required();
    flift->add_option("--w", o.w, "map document w: Y -> X")->required();
    flift->add_option("--f", o.f, "map document f: P -> X")->required();
    emit_opt(flift, "prefix for the map and homotopy documents");
    CLI::App* bar_cmd = app.add_subcommand("bar", "bar resolution of a functor");
    file(bar_cmd, "functor_diagram document with models");
    bound(bar_cmd);
    CLI::App* cof = app.add_subcommand("cofibrant", "G-cofibrancy of a functor");
    file(cof, "functor_diagram document with models");
    bound(cof);
    cof->add_option("--class", o.cls, "natural, pointwise or quasi")
        ->check(CLI::IsMember({"natural", "pointwise", "quasi"}))
        ->capture_default_str();
    CLI::App* am = app.add_subcommand("acyclic-models", "H_0 rho for K (with models) and L");
    am->add_option("files", o.files, "functor_diagram documents K and L")->required()->expected(2);
    bound(am);
    am->add_option("--class", o.cls, "natural or pointwise")
        ->check(CLI::IsMember({"natural", "pointwise"}))
        ->capture_default_str();
    CLI::App* chk = app.add_subcommand("check", "validate a document, run a request, or 'all' for the suites");
    chk->add_option("target", o.files, "document path or 'all'")->required()->expected(1);
    chk->add_option("--seed", o.seed, "seed for the suites")->capture_default_str();
    chk->add_option("--instances", o.instances, "instances per randomized suite (0: full counts)")
        ->check(CLI::NonNegativeNumber);

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp& e)
    {
        out << app.help();
        return ok;
    }
    catch (const CLI::CallForAllHelp& e)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << '\n';
        return bad_input;
    }

    std::string cmd = app.get_subcommands().front()->get_name();
    try
    {
        return run_command(cmd, o, out);
    }
    catch (const InputError& e)
    {
        err << "error: " << e.what() << '\n';
    }
    catch (const PreconditionError& e)
    {
        err << "error: precondition failed: " << e.what() << '\n';
    }
    catch (const std::invalid_argument& e)
    {
        err << "error: invalid input: " << e.what() << '\n';
    }
    catch (const std::exception& e)
    {
        err << "internal error: " << e.what() << '\n';
    }
    return bad_input;
}

namespace {

int run_command(const std::string& cmd, const Options& o, std::ostream& out)
{
    if (cmd == "homology")
        return cmd_homology(o, out);
    if (cmd == "resolve")
        return cmd_resolve(o, out);
    if (cmd == "tor" || cmd == "ext")
        return cmd_derived(o, out, cmd == "tor");
    if (cmd == "cone")
        return cmd_cone(o, out);
    if (cmd == "cylinder")
        return cmd_cylinder(o, out);
    if (cmd == "lift")
        return cmd_lift(o, out);
    if (cmd == "invert")
        return cmd_invert(o, out);
    if (cmd == "filtered-resolve")
        return cmd_filtered_resolve(o, out);
    if (cmd == "filtered-lift")
        return cmd_filtered_lift(o, out);
    if (cmd == "bar")
        return cmd_bar(o, out);
    if (cmd == "cofibrant")
        return cmd_cofibrant(o, out);
    if (cmd == "acyclic-models")
        return cmd_acyclic_models(o, out);
    if (o.files.at(0) == "all")
        return cmd_check_all(o, out);
    return cmd_check_file(o, out);
}

}  // namespace

}  // namespace cekit::cli
