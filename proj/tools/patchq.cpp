// patchq: patchability scores for RTL designs.
//
// Exit status: 0 success, 1 usage error or unreadable file, 2 design error
// (lex, parse, unsupported construct, elaboration), 3 configuration error.

#include "patchq/patchq.h"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum Exit { kOk = 0, kUsage = 1, kDesign = 2, kConfig = 3 };

int exit_code(patchq_status s) {
    switch (s) {
    case PATCHQ_OK: return kOk;
    case PATCHQ_ERR_ARGUMENT: return kUsage;
    case PATCHQ_ERR_CONFIG:
    case PATCHQ_ERR_LIMIT: return kConfig;
    default: return kDesign;
    }
}

struct Failure {
    int code;
};

void check(patchq_status s) {
    if (s != PATCHQ_OK) {
        std::cerr << patchq_last_error() << '\n';
        throw Failure{exit_code(s)};
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << path << ": error: cannot open file\n";
        throw Failure{kUsage};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CString {
    char* p = nullptr;
    ~CString() { patchq_string_free(p); }
};

struct DesignDeleter {
    void operator()(patchq_design* d) const { patchq_design_free(d); }
};
struct OptionsDeleter {
    void operator()(patchq_options* o) const { patchq_options_free(o); }
};
struct CwesDeleter {
    void operator()(patchq_cwes* c) const { patchq_cwes_free(c); }
};

struct Args {
    std::string design;
    std::string top;
    std::string options;
    std::string cwe;
    std::string format = "text";
    std::string out;
    std::int64_t budget = 0;
    std::string strategy = "greedy";
    std::vector<std::string> candidates;
    std::size_t limit = 10;
};

patchq_format format_of(const std::string& f) {
    if (f == "csv")
        return PATCHQ_FORMAT_CSV;
    if (f == "json")
        return PATCHQ_FORMAT_JSON;
    return PATCHQ_FORMAT_TEXT;
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f || !(f << text)) {
        std::cerr << out << ": error: cannot write file\n";
        throw Failure{kUsage};
    }
}

int run(const std::string& command, const Args& a) {
    const std::string source = read_file(a.design);
    patchq_design* raw = nullptr;
    check(patchq_design_from_source(source.c_str(), a.design.c_str(), a.top.empty() ? nullptr : a.top.c_str(), &raw));
    std::unique_ptr<patchq_design, DesignDeleter> design(raw);

    CString diags;
    check(patchq_design_diagnostics(design.get(), &diags.p));
    std::cerr << diags.p;

    CString report;
    if (command == "dump-graph") {
        check(patchq_design_dump_graph(design.get(), &report.p));
        emit(report.p, a.out);
        return kOk;
    }

    std::unique_ptr<patchq_cwes, CwesDeleter> cwes;
    if (!a.cwe.empty()) {
        const std::string text = read_file(a.cwe);
        patchq_cwes* c = nullptr;
        check(patchq_cwes_from_json(design.get(), text.c_str(), a.cwe.c_str(), &c));
        cwes.reset(c);
    }

    const patchq_format fmt = format_of(a.format);
    if (command == "suggest") {
        std::vector<const char*> names;
        for (const auto& c : a.candidates)
            names.push_back(c.c_str());
        const auto strategy = a.strategy == "exhaustive" ? PATCHQ_STRATEGY_EXHAUSTIVE : PATCHQ_STRATEGY_GREEDY;
        check(patchq_suggest(design.get(), names.empty() ? nullptr : names.data(), names.size(), a.budget, strategy,
                             a.limit, cwes.get(), fmt, &report.p));
        emit(report.p, a.out);
        return kOk;
    }

    const std::string text = read_file(a.options);
    patchq_options* o = nullptr;
    check(patchq_options_from_json(design.get(), text.c_str(), a.options.c_str(), &o));
    std::unique_ptr<patchq_options, OptionsDeleter> options(o);

    if (command == "score")
        check(patchq_score(design.get(), options.get(), cwes.get(), fmt, &report.p));
    else if (command == "compare")
        check(patchq_compare(design.get(), options.get(), cwes.get(), fmt, &report.p));
    else
        check(patchq_cwe_check(design.get(), options.get(), cwes.get(), fmt, &report.p));
    emit(report.p, a.out);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Patchability scoring for RTL designs"};
    app.set_version_flag("--version", std::string(patchq_version()));
    app.require_subcommand(1, 1);

    Args a;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--design", a.design, "SystemVerilog source file")->required();
        sub->add_option("--top", a.top, "Top module name (defaults to the only module)");
        sub->add_option("--format", a.format, "Report format")
            ->check(CLI::IsMember({"text", "csv", "json"}))
            ->capture_default_str();
        sub->add_option("--out", a.out, "Write the report to this file instead of stdout");
    };

    auto* score = app.add_subcommand("score", "Per-signal controllability for each option");
    auto* compare = app.add_subcommand("compare", "Side-by-side comparison of all options");
    auto* cwe = app.add_subcommand("cwe", "Which weaknesses each option can patch");
    auto* suggest = app.add_subcommand("suggest", "Search for patch sets within a bit budget");
    auto* dump = app.add_subcommand("dump-graph", "Print the elaborated dataflow model as JSON");

    for (auto* sub : {score, compare, cwe}) {
        common(sub);
        sub->add_option("--options", a.options, "Patch options JSON file")->required();
    }
    score->add_option("--cwe", a.cwe, "Weakness requirements JSON file");
    compare->add_option("--cwe", a.cwe, "Weakness requirements JSON file");
    cwe->add_option("--cwe", a.cwe, "Weakness requirements JSON file")->required();

    common(suggest);
    suggest->add_option("--budget", a.budget, "Maximum patched bits")->required();
    suggest->add_option("--strategy", a.strategy, "Search strategy")
        ->check(CLI::IsMember({"greedy", "exhaustive"}))
        ->capture_default_str();
    suggest->add_option("--candidates", a.candidates, "Signals to choose from (default: all)")->delimiter(',');
    suggest->add_option("--limit", a.limit, "Number of ranked sets kept by exhaustive search (0 keeps all)")
        ->capture_default_str();
    suggest->add_option("--cwe", a.cwe, "Weakness requirements JSON file");

    common(dump);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        return run(app.get_subcommands().front()->get_name(), a);
    } catch (const Failure& f) {
        return f.code;
    }
}
