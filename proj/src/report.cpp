#include "patchq/report.hpp"

#include "patchq/frontend.hpp"

#include "json.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace patchq {

using nlohmann::json;

namespace {

// -- shared helpers ---------------------------------------------------------

std::string text_value(const Rational& r) { return to_rounded(r, 1); }
std::string csv_value(const Rational& r) { return to_decimal(r); }

json int_json(const BigInt& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
        return json(static_cast<std::int64_t>(v));
    return json(v.str());
}

json rational_json(const Rational& r) {
    return json{{"num", int_json(boost::multiprecision::numerator(r))},
                {"den", int_json(boost::multiprecision::denominator(r))},
                {"decimal", to_decimal(r)}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += sep;
        out += parts[i];
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            out += ',';
        out += csv_field(cells[i]);
    }
    return out + "\n";
}

// First column left-aligned, the rest right-aligned, dashed rule under the header.
std::string text_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (width.size() <= c)
                width.push_back(0);
            width[c] = std::max(width[c], r[c].size());
        }
    std::ostringstream os;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::string line;
        for (std::size_t c = 0; c < rows[i].size(); ++c) {
            const std::string& cell = rows[i][c];
            if (c == 0)
                line += cell + std::string(width[c] - cell.size(), ' ');
            else
                line += "  " + std::string(width[c] - cell.size(), ' ') + cell;
        }
        while (!line.empty() && line.back() == ' ')
            line.pop_back();
        os << line << '\n';
        if (i == 0) {
            std::size_t total = 0;
            for (std::size_t c = 0; c < width.size(); ++c)
                total += width[c] + (c ? 2 : 0);
            os << std::string(total, '-') << '\n';
        }
    }
    return os.str();
}

std::string cwe_cell(const std::vector<std::string>& ids) { return ids.empty() ? "-" : join(ids, ", "); }

bool any_observed(const ComparisonTable& t) {
    return std::any_of(t.options.begin(), t.options.end(),
                       [](const OptionReport& o) { return !o.config.observed.empty(); });
}

// -- table CSV / JSON (shared by score and compare) -------------------------

std::string table_csv(const ComparisonTable& t) {
    std::string out;
    std::vector<std::string> header{"section", "name", "width"};
    for (const auto& o : t.options)
        header.push_back(o.config.name);
    out += csv_line(header);
    if (t.options.empty())
        return out;
    const auto& rows = t.options.front().rows;
    auto section = [&](const char* name, Rational SignalRow::*field) {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            std::vector<std::string> line{name, rows[r].name, std::to_string(rows[r].width)};
            for (const auto& o : t.options)
                line.push_back(csv_value(o.rows[r].*field));
            out += csv_line(line);
        }
    };
    section("in", &SignalRow::in_bits);
    section("out", &SignalRow::out_bits);
    if (any_observed(t))
        section("po", &SignalRow::observed_bits);
    auto aggregate = [&](const char* name, Rational OptionReport::*field) {
        std::vector<std::string> line{"aggregate", name, ""};
        for (const auto& o : t.options)
            line.push_back(csv_value(o.*field));
        out += csv_line(line);
    };
    aggregate("investment", &OptionReport::investment);
    aggregate("output_score", &OptionReport::output_score);
    aggregate("normalized", &OptionReport::normalized);
    if (!t.cwes.empty()) {
        std::vector<std::string> line{"aggregate", "patchable_cwes", ""};
        for (const auto& o : t.options)
            line.push_back(join(o.patchable_cwes, " "));
        out += csv_line(line);
    }
    return out;
}

json option_json(const OptionReport& o, bool with_po, bool with_cwes) {
    json signals = json::array();
    for (const auto& r : o.rows) {
        json s{{"name", r.name},
               {"width", r.width},
               {"in", rational_json(r.in_bits)},
               {"out", rational_json(r.out_bits)}};
        if (with_po)
            s["po"] = rational_json(r.observed_bits);
        signals.push_back(std::move(s));
    }
    json j{{"name", o.config.name},
           {"patched", std::vector<std::string>(o.config.patched.begin(), o.config.patched.end())},
           {"observed", std::vector<std::string>(o.config.observed.begin(), o.config.observed.end())},
           {"investment", rational_json(o.investment)},
           {"output_score", rational_json(o.output_score)},
           {"normalized", rational_json(o.normalized)},
           {"signals", std::move(signals)}};
    if (with_cwes)
        j["patchable_cwes"] = o.patchable_cwes;
    return j;
}

std::string table_json(const ComparisonTable& t) {
    json options = json::array();
    for (const auto& o : t.options)
        options.push_back(option_json(o, any_observed(t), !t.cwes.empty()));
    return dump(json{{"options", std::move(options)}});
}

std::vector<std::vector<std::string>> aggregate_rows(const ComparisonTable& t) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{""};
    for (const auto& o : t.options)
        header.push_back(o.config.name);
    rows.push_back(header);
    auto row = [&](const char* label, auto value) {
        std::vector<std::string> r{label};
        for (const auto& o : t.options)
            r.push_back(value(o));
        rows.push_back(std::move(r));
    };
    row("Investment (bits)", [](const OptionReport& o) { return text_value(o.investment); });
    row("Output Score (bits)", [](const OptionReport& o) { return text_value(o.output_score); });
    row("Normalized Score", [](const OptionReport& o) { return text_value(o.normalized); });
    if (!t.cwes.empty())
        row("Patchable CWEs", [](const OptionReport& o) { return cwe_cell(o.patchable_cwes); });
    return rows;
}

// -- graph JSON -------------------------------------------------------------

json expr_json(const Expr& e) {
    return std::visit(
        [&](const auto& x) -> json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Const>) {
                return json{{"op", "const"},
                            {"value", x.value},
                            {"width", x.width},
                            {"sized", x.sized},
                            {"base", std::string(1, x.base)},
                            {"based", x.based}};
            } else if constexpr (std::is_same_v<T, SignalRef>) {
                return json{{"op", "ref"}, {"name", x.name}};
            } else if constexpr (std::is_same_v<T, BitSelect>) {
                return json{{"op", "bit"}, {"base", expr_json(*x.base)}, {"index", expr_json(*x.index)}};
            } else if constexpr (std::is_same_v<T, PartSelect>) {
                return json{{"op", "part"}, {"base", expr_json(*x.base)}, {"msb", x.msb}, {"lsb", x.lsb}};
            } else if constexpr (std::is_same_v<T, Unary>) {
                return json{{"op", to_string(x.op)}, {"operand", expr_json(*x.operand)}};
            } else if constexpr (std::is_same_v<T, Binary>) {
                return json{{"op", to_string(x.op)}, {"lhs", expr_json(*x.lhs)}, {"rhs", expr_json(*x.rhs)}};
            } else if constexpr (std::is_same_v<T, Ternary>) {
                return json{{"op", "?:"},
                            {"select", expr_json(*x.select)},
                            {"then", expr_json(*x.then_expr)},
                            {"else", expr_json(*x.else_expr)}};
            } else {
                json parts = json::array();
                for (const auto& p : x.parts)
                    parts.push_back(expr_json(*p));
                return json{{"op", "concat"}, {"parts", std::move(parts)}};
            }
        },
        e.node);
}

json tree_json(const DriveNode& t) {
    if (auto x = t.as<Leaf>())
        return json{{"node", "leaf"}, {"expr", expr_json(*x->value)}, {"text", to_source(*x->value)}};
    if (auto x = t.as<Cond>())
        return json{{"node", "cond"},
                    {"select", expr_json(*x->select)},
                    {"then", tree_json(*x->then_tree)},
                    {"else", tree_json(*x->else_tree)}};
    if (auto x = t.as<CaseK>()) {
        json branches = json::array();
        for (const auto& b : x->branches)
            branches.push_back(tree_json(*b));
        return json{{"node", "case"}, {"select", expr_json(*x->select)}, {"branches", std::move(branches)}};
    }
    return json{{"node", "hold"}};
}

[[noreturn]] void bad_graph(const std::string& what) { throw ConfigError("graph: " + what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        bad_graph(std::string("missing \"") + key + "\"");
    return j.at(key);
}

template <class T>
T get(const json& j, const char* key) {
    try {
        return field(j, key).get<T>();
    } catch (const json::type_error&) {
        bad_graph(std::string("wrong type for \"") + key + "\"");
    }
}

ExprPtr expr_from(const json& j) {
    const std::string op = get<std::string>(j, "op");
    if (op == "const") {
        Const c;
        c.value = get<std::uint64_t>(j, "value");
        c.width = get<std::uint32_t>(j, "width");
        c.sized = get<bool>(j, "sized");
        const std::string base = get<std::string>(j, "base");
        if (base.size() != 1 || std::string_view("bodh").find(base[0]) == std::string_view::npos)
            bad_graph("bad literal base '" + base + "'");
        c.base = base[0];
        c.based = get<bool>(j, "based");
        return std::make_shared<const Expr>(Expr{c, {}});
    }
    if (op == "ref")
        return make_ref(get<std::string>(j, "name"));
    if (op == "bit")
        return make_bit(expr_from(field(j, "base")), expr_from(field(j, "index")));
    if (op == "part")
        return make_part(expr_from(field(j, "base")), get<std::int64_t>(j, "msb"), get<std::int64_t>(j, "lsb"));
    if (op == "?:")
        return make_ternary(expr_from(field(j, "select")), expr_from(field(j, "then")), expr_from(field(j, "else")));
    if (op == "concat") {
        const json& parts = field(j, "parts");
        if (!parts.is_array() || parts.empty())
            bad_graph("concat needs a non-empty \"parts\" array");
        std::vector<ExprPtr> out;
        for (const auto& p : parts)
            out.push_back(expr_from(p));
        return make_concat(std::move(out));
    }
    for (UnaryOp u : {UnaryOp::LogicalNot, UnaryOp::BitNot})
        if (op == to_string(u))
            return make_unary(u, expr_from(field(j, "operand")));
    for (int k = 0; k <= static_cast<int>(BinaryOp::Sub); ++k) {
        const auto b = static_cast<BinaryOp>(k);
        if (op == to_string(b))
            return make_binary(b, expr_from(field(j, "lhs")), expr_from(field(j, "rhs")));
    }
    bad_graph("unknown operator '" + op + "'");
}

DrivePtr tree_from(const json& j) {
    const std::string node = get<std::string>(j, "node");
    if (node == "leaf")
        return make_leaf(expr_from(field(j, "expr")));
    if (node == "cond")
        return make_cond(expr_from(field(j, "select")), tree_from(field(j, "then")), tree_from(field(j, "else")));
    if (node == "case") {
        const json& branches = field(j, "branches");
        if (!branches.is_array() || branches.empty())
            bad_graph("case needs a non-empty \"branches\" array");
        std::vector<DrivePtr> out;
        for (const auto& b : branches)
            out.push_back(tree_from(b));
        return make_case(expr_from(field(j, "select")), std::move(out));
    }
    if (node == "hold")
        return make_hold();
    bad_graph("unknown node kind '" + node + "'");
}

SignalKind kind_from(const std::string& s) {
    for (SignalKind k : {SignalKind::Input, SignalKind::Output, SignalKind::Internal})
        if (s == to_string(k))
            return k;
    bad_graph("unknown signal kind '" + s + "'");
}

} // namespace

std::optional<Format> parse_format(std::string_view name) {
    if (name == "text")
        return Format::Text;
    if (name == "csv")
        return Format::Csv;
    if (name == "json")
        return Format::Json;
    return std::nullopt;
}

std::optional<Strategy> parse_strategy(std::string_view name) {
    if (name == "greedy")
        return Strategy::Greedy;
    if (name == "exhaustive")
        return Strategy::Exhaustive;
    return std::nullopt;
}

std::string render_score(const ComparisonTable& t, Format format) {
    if (format == Format::Csv)
        return table_csv(t);
    if (format == Format::Json)
        return table_json(t);
    std::string out;
    for (std::size_t i = 0; i < t.options.size(); ++i) {
        const OptionReport& o = t.options[i];
        const bool po = !o.config.observed.empty();
        if (i)
            out += '\n';
        out += "Option " + o.config.name + "\n\n";
        std::vector<std::vector<std::string>> rows;
        rows.push_back({"Signal", "Width", "In", "Out"});
        if (po)
            rows.back().push_back("PO");
        for (const auto& r : o.rows) {
            rows.push_back({r.name, std::to_string(r.width), text_value(r.in_bits), text_value(r.out_bits)});
            if (po)
                rows.back().push_back(text_value(r.observed_bits));
        }
        out += text_table(rows);
        out += '\n';
        std::vector<std::vector<std::string>> totals{{"", o.config.name},
                                                     {"Investment (bits)", text_value(o.investment)},
                                                     {"Output Score (bits)", text_value(o.output_score)},
                                                     {"Normalized Score", text_value(o.normalized)}};
        if (!t.cwes.empty())
            totals.push_back({"Patchable CWEs", cwe_cell(o.patchable_cwes)});
        // Drop the header line; a single column needs no caption.
        const std::string block = text_table(totals);
        out += block.substr(block.find('\n', block.find('\n') + 1) + 1);
    }
    return out;
}

std::string render_comparison(const ComparisonTable& t, Format format) {
    if (format == Format::Csv)
        return table_csv(t);
    if (format == Format::Json)
        return table_json(t);
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"Signal", "Width"};
    for (const auto& o : t.options) {
        header.push_back(o.config.name + " In");
        header.push_back(o.config.name + " Out");
    }
    rows.push_back(header);
    if (!t.options.empty()) {
        const auto& first = t.options.front().rows;
        for (std::size_t r = 0; r < first.size(); ++r) {
            std::vector<std::string> line{first[r].name, std::to_string(first[r].width)};
            for (const auto& o : t.options) {
                line.push_back(text_value(o.rows[r].in_bits));
                line.push_back(text_value(o.rows[r].out_bits));
            }
            rows.push_back(std::move(line));
        }
    }
    return text_table(rows) + "\n" + text_table(aggregate_rows(t));
}

std::string render_cwe(const ComparisonTable& t, Format format) {
    if (format == Format::Json) {
        json cwes = json::array();
        for (const auto& c : t.cwes) {
            json verdicts = json::array();
            for (const auto& o : t.options) {
                const bool ok = std::find(o.patchable_cwes.begin(), o.patchable_cwes.end(), c.id) !=
                                o.patchable_cwes.end();
                verdicts.push_back(json{{"option", o.config.name}, {"patchable", ok}});
            }
            cwes.push_back(json{{"id", c.id}, {"alternatives", c.alternatives}, {"verdicts", std::move(verdicts)}});
        }
        return dump(json{{"cwes", std::move(cwes)}});
    }
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"CWE"};
    for (const auto& o : t.options)
        header.push_back(o.config.name);
    rows.push_back(header);
    for (const auto& c : t.cwes) {
        std::vector<std::string> line{c.id};
        for (const auto& o : t.options) {
            const bool ok =
                std::find(o.patchable_cwes.begin(), o.patchable_cwes.end(), c.id) != o.patchable_cwes.end();
            line.push_back(ok ? "yes" : "no");
        }
        rows.push_back(std::move(line));
    }
    if (format == Format::Csv) {
        std::string out;
        for (const auto& r : rows)
            out += csv_line(r);
        return out;
    }
    return text_table(rows);
}

std::string render_suggestions(const std::vector<Suggestion>& ranked, Strategy strategy, std::int64_t budget,
                               Format format) {
    if (format == Format::Json) {
        json list = json::array();
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            const auto& s = ranked[i];
            list.push_back(json{{"rank", i + 1},
                                {"patched", s.patched},
                                {"investment", rational_json(s.investment)},
                                {"output_score", rational_json(s.output_score)},
                                {"normalized", rational_json(s.normalized)},
                                {"patchable_cwes", s.patchable_cwes}});
        }
        return dump(json{{"strategy", to_string(strategy)}, {"budget", budget}, {"suggestions", std::move(list)}});
    }
    if (format == Format::Csv) {
        std::string out = csv_line({"rank", "investment", "output_score", "normalized", "patched", "patchable_cwes"});
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            const auto& s = ranked[i];
            out += csv_line({std::to_string(i + 1), csv_value(s.investment), csv_value(s.output_score),
                             csv_value(s.normalized), join(s.patched, " "), join(s.patchable_cwes, " ")});
        }
        return out;
    }
    std::vector<std::vector<std::string>> rows{
        {"Rank", "Investment", "Output", "Normalized", "Patchable CWEs", "Patched"}};
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const auto& s = ranked[i];
        rows.push_back({std::to_string(i + 1), text_value(s.investment), text_value(s.output_score),
                        to_rounded(s.normalized, 3), cwe_cell(s.patchable_cwes),
                        s.patched.empty() ? "-" : join(s.patched, " ")});
    }
    return "Strategy " + std::string(to_string(strategy)) + ", budget " + std::to_string(budget) + " bits\n\n" +
           text_table(rows);
}

std::string dump_graph(const DataflowModel& model) {
    json signals = json::array();
    json drives = json::object();
    json feedback = json::object();
    for (std::size_t i = 0; i < model.signals().size(); ++i) {
        const SignalInfo& s = model.info(i);
        signals.push_back(json{{"name", s.name},
                               {"base", s.base},
                               {"width", s.width},
                               {"kind", to_string(s.kind)},
                               {"state", s.is_state},
                               {"excluded", s.excluded}});
        if (auto d = model.drive(i))
            drives[s.name] = tree_json(*d);
        if (!model.feedback_reads(i).empty())
            feedback[s.name] = std::vector<std::string>(model.feedback_reads(i).begin(), model.feedback_reads(i).end());
    }
    json order = json::array();
    for (std::size_t i : model.order())
        order.push_back(model.info(i).name);
    return dump(json{{"signals", std::move(signals)},
                     {"drives", std::move(drives)},
                     {"order", std::move(order)},
                     {"feedback", std::move(feedback)}});
}

DataflowModel model_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        bad_graph(std::string("invalid JSON: ") + e.what());
    }
    const json& list = field(doc, "signals");
    if (!list.is_array())
        bad_graph("\"signals\" must be an array");
    std::vector<SignalInfo> signals;
    for (const auto& s : list) {
        SignalInfo info;
        info.name = get<std::string>(s, "name");
        info.base = s.contains("base") ? get<std::string>(s, "base") : info.name;
        info.width = get<std::uint32_t>(s, "width");
        if (info.width == 0)
            bad_graph("signal '" + info.name + "' has width 0");
        info.kind = kind_from(get<std::string>(s, "kind"));
        info.is_state = get<bool>(s, "state");
        info.excluded = s.contains("excluded") && get<bool>(s, "excluded");
        signals.push_back(std::move(info));
    }
    std::map<std::string, DrivePtr> drives;
    const json& d = field(doc, "drives");
    if (!d.is_object())
        bad_graph("\"drives\" must be an object");
    for (const auto& [name, tree] : d.items())
        drives[name] = tree_from(tree);
    return build_model(std::move(signals), std::move(drives));
}

} // namespace patchq
