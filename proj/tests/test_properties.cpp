#include "doctest.h"

#include "fixture.hpp"
#include "generators.hpp"
#include "reference.hpp"

#include "patchq/evaluator.hpp"
#include "patchq/report.hpp"
#include "patchq/score.hpp"

#include <algorithm>

using namespace patchq;

namespace {

// Random score in quarters of the width, so exact comparisons stay cheap.
Rational random_score(gen::Rng& rng, std::uint32_t width) { return Rational(gen::pick(rng, 5), 4) * width; }

PatchConfig grown(gen::Rng& rng, const DataflowModel& m, PatchConfig c) {
    for (std::size_t i : m.scored())
        if (gen::coin(rng, 0.3)) {
            c.patched.insert(m.info(i).name);
            if (gen::coin(rng, 0.3))
                c.observed.insert(m.info(i).name);
        }
    return c;
}

} // namespace

TEST_CASE("bounds on random models") {
    gen::Rng rng(1001);
    for (int n = 0; n < 1000; ++n) {
        CAPTURE(n);
        const DataflowModel m = gen::model(rng);
        const PatchConfig c = gen::config(rng, m, 0.4, 0.2);
        const auto pc = compute_pc(m, c);
        const auto po = compute_po(m, c);
        REQUIRE(pc.size() == m.scored_count());
        for (std::size_t i : m.scored()) {
            const auto& s = m.info(i);
            CHECK(pc.at(s.name) >= 0);
            CHECK(pc.at(s.name) <= s.width);
            CHECK(po.at(s.name) >= 0);
            CHECK(po.at(s.name) <= s.width);
            if (c.patched.count(s.name))
                CHECK(pc.at(s.name) == s.width);
            if (c.observed.count(s.name))
                CHECK(po.at(s.name) == s.width);
        }
    }
}

TEST_CASE("monotone in the patched set") {
    gen::Rng rng(2002);
    for (int n = 0; n < 200; ++n) {
        CAPTURE(n);
        const DataflowModel m = gen::model(rng);
        const PatchConfig small = gen::config(rng, m, 0.3);
        const PatchConfig large = grown(rng, m, small);
        const auto a = compute_pc(m, small);
        const auto b = compute_pc(m, large);
        for (const auto& [name, s] : a) {
            CAPTURE(name);
            CHECK(s <= b.at(name));
        }
    }
}

TEST_CASE("rename invariance") {
    gen::Rng rng(3003);
    const auto rename = [](const std::string& s) { return "zz_" + std::string(s.rbegin(), s.rend()); };
    for (int n = 0; n < 200; ++n) {
        CAPTURE(n);
        const DataflowModel m = gen::model(rng);
        const DataflowModel r = gen::renamed(m, rename);
        const PatchConfig c = gen::config(rng, m, 0.4, 0.3);
        PatchConfig rc{c.name, {}, {}};
        for (const auto& s : c.patched)
            rc.patched.insert(rename(s));
        for (const auto& s : c.observed)
            rc.observed.insert(rename(s));
        const auto a = compute_pc(m, c), b = compute_pc(r, rc);
        const auto pa = compute_po(m, c), pb = compute_po(r, rc);
        for (const auto& [name, s] : a) {
            CHECK(s == b.at(rename(name)));
            CHECK(pa.at(name) == pb.at(rename(name)));
        }
        CHECK(evaluate_option(m, c, {}).normalized == evaluate_option(r, rc, {}).normalized);
    }
}

TEST_CASE("engine matches the reference on random drive trees") {
    gen::Rng rng(4004);
    gen::ModelShape shape;
    shape.min_driven = shape.max_driven = 0;
    shape.min_inputs = 3;
    for (int n = 0; n < 1000; ++n) {
        CAPTURE(n);
        const DataflowModel m = gen::model(rng, shape);
        ScoreMap scores;
        ref::Reference oracle(m, {});
        for (const auto& s : m.signals()) {
            scores[s.name] = random_score(rng, s.width);
            oracle.set(s.name, scores[s.name]);
        }
        const DrivePtr t = gen::tree(rng, m.signals(), 1 + static_cast<int>(gen::pick(rng, 6)), gen::coin(rng));
        const std::uint32_t width = 1u << gen::pick(rng, 5);
        CAPTURE(to_string(*t));
        CHECK(score_tree(*t, width, ScoreEnv{m, scores}) == oracle.tree(*t, width, false, {}));
    }
}

TEST_CASE("engine matches the reference on random models") {
    gen::Rng rng(5005);
    for (int n = 0; n < 300; ++n) {
        CAPTURE(n);
        const DataflowModel m = gen::model(rng);
        const PatchConfig c = gen::config(rng, m, 0.4, 0.3);
        ref::Reference oracle(m, c.patched, c.observed);
        const auto pc = compute_pc(m, c);
        const auto po = compute_po(m, c);
        for (std::size_t i : m.scored()) {
            const std::string& name = m.info(i).name;
            CAPTURE(name);
            CHECK(pc.at(name) == oracle.pc(name));
            CHECK(po.at(name) == oracle.po(name));
        }
    }
}

TEST_CASE("reference reproduces the fixture cells") {
    for (const auto& opt : fx::options()) {
        CAPTURE(opt.name);
        ref::Reference oracle(fx::model(), opt.patched, opt.observed);
        const auto pc = compute_pc(fx::model(), opt);
        for (const auto& [name, s] : pc)
            CHECK(s == oracle.pc(name));
    }
    PatchConfig c = fx::option("V3");
    c.observed = {"rdata"};
    ref::Reference oracle(fx::model(), c.patched, c.observed);
    const auto po = compute_po(fx::model(), c);
    for (const auto& [name, s] : po)
        CHECK(s == oracle.po(name));
}

TEST_CASE("observability properties") {
    gen::Rng rng(6006);
    for (int n = 0; n < 300; ++n) {
        CAPTURE(n);
        const DataflowModel m = gen::model(rng);
        PatchConfig c = gen::config(rng, m, 0.4, 0.0);
        for (const auto& [name, s] : compute_po(m, c))
            CHECK(s == 0);
        c.observed = gen::config(rng, m, 0.3).patched;
        PatchConfig more = c;
        for (std::size_t i : m.scored())
            if (gen::coin(rng, 0.3))
                more.observed.insert(m.info(i).name);
        const auto a = compute_po(m, c), b = compute_po(m, more);
        for (const auto& [name, s] : a) {
            CAPTURE(name);
            CHECK(s <= b.at(name));
            if (c.observed.count(name))
                CHECK(s == m.info(name)->width);
        }
    }
}

TEST_CASE("determinism") {
    gen::Rng a(7007), b(7007);
    for (int n = 0; n < 50; ++n) {
        const DataflowModel m1 = gen::model(a), m2 = gen::model(b);
        REQUIRE(equal(m1, m2));
        const PatchConfig c1 = gen::config(a, m1, 0.5, 0.2), c2 = gen::config(b, m2, 0.5, 0.2);
        CHECK(compute_pc(m1, c1) == compute_pc(m2, c2));
        CHECK(compute_po(m1, c1) == compute_po(m2, c2));
    }
    const DataflowModel again = fx::elaborate_text(fx::read("reglk_wrapper.sv"));
    CHECK(equal(again, fx::model()));
    CHECK(dump_graph(again) == dump_graph(fx::model()));
}

TEST_CASE("graph dump round trip on random models") {
    gen::Rng rng(8008);
    for (int n = 0; n < 200; ++n) {
        const DataflowModel m = gen::model(rng);
        const DataflowModel back = model_from_json(dump_graph(m));
        CHECK(equal(m, back));
        const PatchConfig c = gen::config(rng, m, 0.5);
        CHECK(compute_pc(m, c) == compute_pc(back, c));
    }
}

TEST_CASE("array element expansion") {
    gen::Rng rng(9009);
    for (int n = 0; n < 50; ++n) {
        const std::size_t length = 1 + gen::pick(rng, 12);
        const std::uint32_t width = 1 + static_cast<std::uint32_t>(gen::pick(rng, 40));
        const bool descending = gen::coin(rng);
        const std::string range = descending ? "[" + std::to_string(length - 1) + ":0]" : "[0:" + std::to_string(length - 1) + "]";
        std::string src = "module m(input logic clk, input logic [" + std::to_string(width - 1) +
                          ":0] d, output logic [" + std::to_string(width - 1) + ":0] q);\n";
        src += "  logic [" + std::to_string(width - 1) + ":0] mem " + range + ";\n  integer i;\n";
        src += "  always @(posedge clk) for (i = 0; i < " + std::to_string(length) + "; i = i + 1) mem[i] <= d;\n";
        src += "  assign q = mem[0];\nendmodule\n";
        CAPTURE(src);
        const DataflowModel m = fx::elaborate_text(src);
        const auto elems = m.expand("mem");
        REQUIRE(elems.size() == length);
        for (const auto& e : elems) {
            CHECK(m.info(e)->width == width);
            CHECK(m.info(e)->base == "mem");
        }
        CHECK(m.scored_count() == length + 2);
    }
}

TEST_CASE("evaluator invariants on the fixture") {
    const auto& m = fx::model();
    gen::Rng rng(10010);
    std::vector<std::string> names;
    for (std::size_t i : m.scored())
        names.push_back(m.info(i).name);
    for (int n = 0; n < 100; ++n) {
        CAPTURE(n);
        const PatchConfig small = gen::config(rng, m, 0.25);
        const PatchConfig large = grown(rng, m, small);
        const OptionReport a = evaluate_option(m, small, fx::cwes());
        const OptionReport b = evaluate_option(m, large, fx::cwes());
        Rational sum_out = 0, sum_in = 0;
        for (const auto& row : a.rows) {
            sum_out += row.out_bits;
            sum_in += row.in_bits;
        }
        CHECK(sum_out == a.output_score);
        CHECK(sum_in == a.investment);
        CHECK(a.investment <= a.output_score);
        CHECK(a.normalized >= 0);
        CHECK(a.normalized <= 1);
        CHECK(a.normalized <= b.normalized);
        for (const auto& id : a.patchable_cwes)
            CHECK(std::count(b.patchable_cwes.begin(), b.patchable_cwes.end(), id) == 1);
    }
    PatchConfig all{"all", {names.begin(), names.end()}, {}};
    CHECK(evaluate_option(m, all, fx::cwes()).normalized == 1);
    CHECK(evaluate_option(m, all, fx::cwes()).output_score == 463);
    CHECK(evaluate_option(m, PatchConfig{"none", {}, {}}, fx::cwes()).normalized < Rational(1, 100));
}

TEST_CASE("random models survive the full report path") {
    gen::Rng rng(11011);
    for (int n = 0; n < 50; ++n) {
        const DataflowModel m = gen::model(rng);
        std::vector<PatchConfig> configs;
        for (int k = 0; k < 3; ++k) {
            configs.push_back(gen::config(rng, m, 0.4, 0.2));
            configs.back().name = "o" + std::to_string(k);
        }
        const ComparisonTable t = compare_options(m, configs, {});
        CHECK(render_comparison(t, Format::Json) == render_comparison(compare_options(m, configs, {}), Format::Json));
        for (std::size_t k = 0; k < configs.size(); ++k)
            CHECK(t.options[k].normalized == evaluate_option(m, configs[k], {}).normalized);
    }
}
