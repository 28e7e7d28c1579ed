// Exercises the shared library through its C header only.

#include "doctest.h"

#include "patchq/patchq.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

std::string slurp(const std::string& file) {
    std::ifstream in(std::string(PATCHQ_FIXTURE_DIR) + "/" + file);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Owned {
    char* p = nullptr;
    ~Owned() { patchq_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

struct Fixture {
    patchq_design* design = nullptr;
    patchq_options* options = nullptr;
    patchq_cwes* cwes = nullptr;

    Fixture() {
        REQUIRE(patchq_design_from_source(slurp("reglk_wrapper.sv").c_str(), "reglk_wrapper.sv", "reglk_wrapper",
                                          &design) == PATCHQ_OK);
        REQUIRE(patchq_options_from_json(design, slurp("options_table2.json").c_str(), "options.json", &options) ==
                PATCHQ_OK);
        REQUIRE(patchq_cwes_from_json(design, slurp("cwe_fixture.json").c_str(), "cwe.json", &cwes) == PATCHQ_OK);
    }
    ~Fixture() {
        patchq_cwes_free(cwes);
        patchq_options_free(options);
        patchq_design_free(design);
    }
};

std::string pc(const Fixture& f, size_t option, const char* signal) {
    Owned out;
    REQUIRE(patchq_signal_pc(f.design, f.options, option, signal, &out.p) == PATCHQ_OK);
    return out.str();
}

} // namespace

TEST_CASE("version") { CHECK(std::string(patchq_version()) == "1.0.0"); }

TEST_CASE("load the fixture") {
    Fixture f;
    CHECK(patchq_design_signal_count(f.design) == 19);
    CHECK(patchq_options_count(f.options) == 6);
    CHECK(std::string(patchq_last_error()).empty());
    Owned diags;
    REQUIRE(patchq_design_diagnostics(f.design, &diags.p) == PATCHQ_OK);
    CHECK(diags.str().empty());
}

TEST_CASE("per-signal values") {
    Fixture f;
    CHECK(pc(f, 3, "reglk_mem[0]") == "24");
    CHECK(pc(f, 2, "rdata") == "11.8125");
    CHECK(pc(f, 2, "reglk_mem[5]") == "15.75");
    CHECK(pc(f, 1, "en") == "0.5");
    Owned out;
    CHECK(patchq_signal_pc(f.design, f.options, 9, "en", &out.p) == PATCHQ_ERR_ARGUMENT);
    CHECK(patchq_signal_pc(f.design, f.options, 0, "foo", &out.p) == PATCHQ_ERR_CONFIG);
    CHECK(std::string(patchq_last_error()).find("foo") != std::string::npos);
}

TEST_CASE("reports") {
    Fixture f;
    for (auto fmt : {PATCHQ_FORMAT_TEXT, PATCHQ_FORMAT_CSV, PATCHQ_FORMAT_JSON}) {
        Owned a, b, c;
        CHECK(patchq_score(f.design, f.options, nullptr, fmt, &a.p) == PATCHQ_OK);
        CHECK(patchq_compare(f.design, f.options, f.cwes, fmt, &b.p) == PATCHQ_OK);
        CHECK(patchq_cwe_check(f.design, f.options, f.cwes, fmt, &c.p) == PATCHQ_OK);
        CHECK_FALSE(a.str().empty());
        CHECK_FALSE(b.str().empty());
        CHECK_FALSE(c.str().empty());
    }
    Owned csv;
    REQUIRE(patchq_compare(f.design, f.options, f.cwes, PATCHQ_FORMAT_CSV, &csv.p) == PATCHQ_OK);
    CHECK(csv.str().find(",463,3.5,253.8125,393,312,407") != std::string::npos);
    Owned none;
    CHECK(patchq_cwe_check(f.design, f.options, nullptr, PATCHQ_FORMAT_TEXT, &none.p) == PATCHQ_ERR_ARGUMENT);
    CHECK(patchq_compare(f.design, f.options, f.cwes, static_cast<patchq_format>(7), &none.p) == PATCHQ_ERR_ARGUMENT);
}

TEST_CASE("suggestions") {
    Fixture f;
    const char* inputs[] = {"rst_ni", "jtag_unlock", "rst_9", "we", "address", "wdata", "reglk_ctrl_i", "en_acct",
                            "acct_ctrl_i"};
    Owned out;
    REQUIRE(patchq_suggest(f.design, inputs, 9, 110, PATCHQ_STRATEGY_EXHAUSTIVE, 3, f.cwes, PATCHQ_FORMAT_CSV,
                           &out.p) == PATCHQ_OK);
    CHECK(out.str().find("110") != std::string::npos);
    Owned bad;
    CHECK(patchq_suggest(f.design, nullptr, 0, -1, PATCHQ_STRATEGY_GREEDY, 0, nullptr, PATCHQ_FORMAT_TEXT, &bad.p) ==
          PATCHQ_ERR_CONFIG);
    std::string wide_src = "module wide(";
    for (int i = 0; i < 21; ++i)
        wide_src += "input logic i" + std::to_string(i) + ", ";
    wide_src += "output logic y);\n  assign y = i0;\nendmodule\n";
    patchq_design* wide = nullptr;
    REQUIRE(patchq_design_from_source(wide_src.c_str(), "wide.sv", nullptr, &wide) == PATCHQ_OK);
    CHECK(patchq_suggest(wide, nullptr, 0, 10, PATCHQ_STRATEGY_EXHAUSTIVE, 0, nullptr, PATCHQ_FORMAT_TEXT, &bad.p) ==
          PATCHQ_ERR_LIMIT);
    patchq_design_free(wide);
    CHECK(patchq_suggest(f.design, nullptr, 3, 10, PATCHQ_STRATEGY_GREEDY, 0, nullptr, PATCHQ_FORMAT_TEXT, &bad.p) ==
          PATCHQ_ERR_ARGUMENT);
}

TEST_CASE("graph dump") {
    Fixture f;
    Owned out;
    REQUIRE(patchq_design_dump_graph(f.design, &out.p) == PATCHQ_OK);
    CHECK(out.str().find("\"reglk_ctrl_o\"") != std::string::npos);
}

TEST_CASE("error statuses") {
    patchq_design* d = nullptr;
    CHECK(patchq_design_from_source("module m(input logic a, output logic b);\n  assign b = a $;\nendmodule\n",
                                    "bad.sv", nullptr, &d) == PATCHQ_ERR_LEX);
    CHECK(d == nullptr);
    CHECK(std::string(patchq_last_error()).rfind("bad.sv:2:", 0) == 0);
    CHECK(patchq_design_from_source("module m(input logic a, output logic b); assign b = ; endmodule", "p.sv",
                                    nullptr, &d) == PATCHQ_ERR_PARSE);
    CHECK(patchq_design_from_source("module m(inout logic a); endmodule", "u.sv", nullptr, &d) ==
          PATCHQ_ERR_UNSUPPORTED);
    CHECK(patchq_design_from_source("module m(input logic a, output logic b); assign b = c; endmodule", "e.sv",
                                    nullptr, &d) == PATCHQ_ERR_ELAB);
    CHECK(patchq_design_from_source(nullptr, nullptr, nullptr, &d) == PATCHQ_ERR_ARGUMENT);
    CHECK(patchq_design_from_source("module m(); endmodule", nullptr, nullptr, nullptr) == PATCHQ_ERR_ARGUMENT);

    Fixture f;
    patchq_options* o = nullptr;
    CHECK(patchq_options_from_json(f.design, R"({"options":[{"name":"x","patched":["foo"]}]})", "o.json", &o) ==
          PATCHQ_ERR_CONFIG);
    CHECK(o == nullptr);
    CHECK(std::string(patchq_last_error()).find("foo") != std::string::npos);

    // a success clears the thread's error
    CHECK(patchq_options_from_json(f.design, R"({"options":[{"name":"x","patched":["we"]}]})", "o.json", &o) ==
          PATCHQ_OK);
    CHECK(std::string(patchq_last_error()).empty());
    patchq_options_free(o);

    patchq_design_free(nullptr);
    patchq_options_free(nullptr);
    patchq_cwes_free(nullptr);
    patchq_string_free(nullptr);
}

TEST_CASE("errors are per thread") {
    patchq_design* d = nullptr;
    REQUIRE(patchq_design_from_source("module", "main.sv", nullptr, &d) != PATCHQ_OK);
    std::string other;
    std::thread t([&] { other = patchq_last_error(); });
    t.join();
    CHECK(other.empty());
    CHECK_FALSE(std::string(patchq_last_error()).empty());
}

TEST_CASE("concurrent reports are identical") {
    Fixture f;
    std::vector<std::string> results(8);
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < results.size(); ++i)
        threads.emplace_back([&, i] {
            Owned out;
            if (patchq_compare(f.design, f.options, f.cwes, PATCHQ_FORMAT_JSON, &out.p) == PATCHQ_OK)
                results[i] = out.str();
        });
    for (auto& t : threads)
        t.join();
    for (const auto& r : results)
        CHECK(r == results[0]);
    CHECK_FALSE(results[0].empty());
}
