#include "patchq/frontend.hpp"

#include <sstream>

namespace patchq {

namespace {

std::string literal(const Const& c) {
    if (!c.based)
        return std::to_string(c.value);
    std::string digits;
    const unsigned radix = c.base == 'b' ? 2 : c.base == 'o' ? 8 : c.base == 'h' ? 16 : 10;
    std::uint64_t v = c.value;
    do {
        const unsigned d = static_cast<unsigned>(v % radix);
        digits.insert(digits.begin(), static_cast<char>(d < 10 ? '0' + d : 'a' + d - 10));
        v /= radix;
    } while (v);
    std::string out = c.sized ? std::to_string(c.width) : std::string();
    out += '\'';
    out += c.base;
    return out + digits;
}

bool atomic(const Expr& e) {
    return e.is<Const>() || e.is<SignalRef>() || e.is<BitSelect>() || e.is<PartSelect>() || e.is<Concat>();
}

void print(std::ostream& os, const Expr& e);

void print_operand(std::ostream& os, const Expr& e) {
    if (atomic(e)) {
        print(os, e);
    } else {
        os << '(';
        print(os, e);
        os << ')';
    }
}

void print(std::ostream& os, const Expr& e) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Const>) {
                os << literal(x);
            } else if constexpr (std::is_same_v<T, SignalRef>) {
                os << x.name;
                if (x.index) {
                    os << '[';
                    print(os, *x.index);
                    os << ']';
                }
            } else if constexpr (std::is_same_v<T, BitSelect>) {
                print_operand(os, *x.base);
                os << '[';
                print(os, *x.index);
                os << ']';
            } else if constexpr (std::is_same_v<T, PartSelect>) {
                print_operand(os, *x.base);
                os << '[' << x.msb << ':' << x.lsb << ']';
            } else if constexpr (std::is_same_v<T, Unary>) {
                os << to_string(x.op);
                print_operand(os, *x.operand);
            } else if constexpr (std::is_same_v<T, Binary>) {
                print_operand(os, *x.lhs);
                os << ' ' << to_string(x.op) << ' ';
                print_operand(os, *x.rhs);
            } else if constexpr (std::is_same_v<T, Ternary>) {
                print_operand(os, *x.select);
                os << " ? ";
                print_operand(os, *x.then_expr);
                os << " : ";
                print_operand(os, *x.else_expr);
            } else {
                os << '{';
                for (std::size_t i = 0; i < x.parts.size(); ++i) {
                    if (i)
                        os << ", ";
                    print(os, *x.parts[i]);
                }
                os << '}';
            }
        },
        e.node);
}

void indent(std::ostream& os, int depth) {
    for (int i = 0; i < depth; ++i)
        os << "  ";
}

void print_lvalue(std::ostream& os, const LValue& lv) {
    os << lv.name;
    if (lv.index) {
        os << '[';
        print(os, *lv.index);
        os << ']';
    }
}

void print_block(std::ostream& os, const StmtList& body, int depth);

void print_stmt(std::ostream& os, const Stmt& s, int depth) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Assign>) {
                indent(os, depth);
                print_lvalue(os, x.target);
                os << (x.blocking ? " = " : " <= ");
                print(os, *x.value);
                os << ";\n";
            } else if constexpr (std::is_same_v<T, IfChain>) {
                for (std::size_t i = 0; i < x.arms.size(); ++i) {
                    if (i == 0) {
                        indent(os, depth);
                        os << "if (";
                    } else {
                        os << " else if (";
                    }
                    print(os, *x.arms[i].cond);
                    os << ") ";
                    print_block(os, x.arms[i].body, depth);
                }
                if (x.else_body) {
                    os << " else ";
                    print_block(os, *x.else_body, depth);
                }
                os << "\n";
            } else if constexpr (std::is_same_v<T, CaseStmt>) {
                indent(os, depth);
                os << "case (";
                print(os, *x.select);
                os << ")\n";
                for (const auto& item : x.items) {
                    indent(os, depth + 1);
                    if (item.is_default) {
                        os << "default";
                    } else {
                        for (std::size_t k = 0; k < item.labels.size(); ++k) {
                            if (k)
                                os << ", ";
                            print(os, *item.labels[k]);
                        }
                    }
                    os << ": ";
                    print_block(os, item.body, depth + 1);
                    os << "\n";
                }
                indent(os, depth);
                os << "endcase\n";
            } else {
                indent(os, depth);
                os << "for (" << x.var << " = ";
                print(os, *x.init);
                os << "; " << x.var << " < ";
                print_operand(os, *x.bound);
                os << "; " << x.var << " = " << x.var << " + ";
                print_operand(os, *x.step);
                os << ") ";
                print_block(os, x.body, depth);
                os << "\n";
            }
        },
        s.node);
}

// Always emits begin/end so nested if chains are never merged on re-parse.
void print_block(std::ostream& os, const StmtList& body, int depth) {
    os << "begin\n";
    for (const auto& s : body)
        print_stmt(os, s, depth + 1);
    indent(os, depth);
    os << "end";
}

void print_range(std::ostream& os, bool packed, std::int64_t msb, std::int64_t lsb) {
    if (packed)
        os << '[' << msb << ':' << lsb << "] ";
}

} // namespace

std::string to_source(const Expr& e) {
    std::ostringstream os;
    print(os, e);
    return os.str();
}

std::string to_source(const SourceModule& m) {
    std::ostringstream os;
    os << "module " << m.name << " (";
    for (std::size_t i = 0; i < m.ports.size(); ++i) {
        const auto& p = m.ports[i];
        os << (i ? ",\n  " : "\n  ") << (p.direction == Direction::Input ? "input " : "output ")
           << to_string(p.kind) << ' ';
        print_range(os, p.packed, p.msb, p.lsb);
        os << p.name;
    }
    os << (m.ports.empty() ? ");\n" : "\n);\n");
    for (const auto& n : m.nets) {
        os << "  " << to_string(n.kind) << ' ';
        if (n.kind != NetKind::Integer)
            print_range(os, n.packed, n.msb, n.lsb);
        os << n.name;
        if (n.array) {
            if (n.array_sized)
                os << " [" << n.array_length << ']';
            else
                os << " [" << n.array_first << ':' << n.array_last << ']';
        }
        os << ";\n";
    }
    for (const auto& item : m.items) {
        if (auto a = std::get_if<ContinuousAssign>(&item.node)) {
            os << "  assign ";
            print_lvalue(os, a->target);
            os << " = ";
            print(os, *a->value);
            os << ";\n";
        } else {
            const auto& b = std::get<AlwaysBlock>(item.node);
            os << "  " << b.keyword;
            if (b.keyword != "always_comb") {
                if (b.edges.empty()) {
                    os << " @(*)";
                } else {
                    os << " @(";
                    for (std::size_t k = 0; k < b.edges.size(); ++k) {
                        if (k)
                            os << " or ";
                        os << (b.edges[k].edge == Edge::Pos ? "posedge " : "negedge ") << b.edges[k].signal;
                    }
                    os << ')';
                }
            }
            os << ' ';
            print_block(os, b.body, 1);
            os << "\n";
        }
    }
    os << "endmodule\n";
    return os.str();
}

} // namespace patchq
