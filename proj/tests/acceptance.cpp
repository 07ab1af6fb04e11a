// Runs every acceptance criterion at full size and prints one line each.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cekit/acceptance.hpp"
#include "cekit/serialize.hpp"
#include "cli.hpp"

using namespace cekit;

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Run
{
    int code;
    std::string out, err;
};

Run cli_run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

CriterionResult cli_criterion(const std::filesystem::path& corpus)
{
    CriterionResult r;
    r.id = 10;
    r.title = "command line";
    r.pass = true;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok && r.pass)
        {
            r.pass = false;
            r.detail = what;
        }
    };

    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(corpus))
        if (e.path().extension() == ".cekit")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    expect(!files.empty(), "empty corpus");

    for (const auto& f : files)
    {
        ++r.checked;
        const std::string name = f.filename().string();
        try
        {
            Document d = parse(slurp(f));
            std::string text = print(d);
            Document back = parse(text);
            expect(same_document(back, d) && print(back) == text, "round trip of " + name);
        }
        catch (const std::exception& e)
        {
            expect(false, name + ": " + e.what());
        }
        Run a = cli_run({"check", f.string()}), b = cli_run({"check", f.string()});
        expect(a.code != 2, "check " + name + ": " + a.err);
        expect(a.code == b.code && a.out == b.out && a.err == b.err, "check " + name + " differs between runs");
    }

    ++r.checked;
    const std::vector<std::string> all = {"check", "all", "--seed", "7", "--instances", "50"};
    Run first = cli_run(all), second = cli_run(all);
    expect(first.code == 0, "check all exit " + std::to_string(first.code) + ": " + first.out + first.err);
    expect(first.out.find("all suites passed") != std::string::npos, "check all report");
    expect(first.out == second.out && first.code == second.code, "check all reports differ between runs");
    return r;
}

}  // namespace

int main()
{
    bool all = true;
    SuiteConfig cfg;
    for (int id : library_criteria())
    {
        CriterionResult r = run_criterion(id, cfg);
        std::cout << format(r) << std::endl;
        all = all && r.pass;
    }
    CriterionResult cli = cli_criterion(CEKIT_CORPUS_DIR);
    std::cout << format(cli) << std::endl;
    all = all && cli.pass;
    return all ? 0 : 1;
}
