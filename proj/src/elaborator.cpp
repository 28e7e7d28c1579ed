#include "patchq/elaborator.hpp"

#include "patchq/frontend.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace patchq {

namespace {

std::string element_name(const std::string& base, std::uint64_t index) {
    return base + "[" + std::to_string(index) + "]";
}

// -- loop unrolling ---------------------------------------------------------

ExprPtr substitute(const ExprPtr& e, const std::string& var, std::uint64_t value) {
    if (!e)
        return e;
    return std::visit(
        [&](const auto& x) -> ExprPtr {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Const>) {
                return e;
            } else if constexpr (std::is_same_v<T, SignalRef>) {
                if (x.name == var && !x.index)
                    return make_const(value, kUnsizedWidth, false, e->pos);
                if (x.index)
                    return make_ref(x.name, substitute(x.index, var, value), e->pos);
                return e;
            } else if constexpr (std::is_same_v<T, BitSelect>) {
                return make_bit(substitute(x.base, var, value), substitute(x.index, var, value), e->pos);
            } else if constexpr (std::is_same_v<T, PartSelect>) {
                return make_part(substitute(x.base, var, value), x.msb, x.lsb, e->pos);
            } else if constexpr (std::is_same_v<T, Unary>) {
                return make_unary(x.op, substitute(x.operand, var, value), e->pos);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return make_binary(x.op, substitute(x.lhs, var, value), substitute(x.rhs, var, value), e->pos);
            } else if constexpr (std::is_same_v<T, Ternary>) {
                return make_ternary(substitute(x.select, var, value), substitute(x.then_expr, var, value),
                                    substitute(x.else_expr, var, value), e->pos);
            } else {
                std::vector<ExprPtr> parts;
                for (const auto& p : x.parts)
                    parts.push_back(substitute(p, var, value));
                return make_concat(std::move(parts), e->pos);
            }
        },
        e->node);
}

StmtList substitute(const StmtList& body, const std::string& var, std::uint64_t value) {
    StmtList out;
    out.reserve(body.size());
    for (const auto& s : body) {
        Stmt copy{s.node, s.pos};
        std::visit(
            [&](auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, Assign>) {
                    if (x.target.name == var)
                        throw ElabError("loop variable '" + var + "' is assigned inside its loop", x.target.pos);
                    x.target.index = substitute(x.target.index, var, value);
                    x.value = substitute(x.value, var, value);
                } else if constexpr (std::is_same_v<T, IfChain>) {
                    for (auto& arm : x.arms) {
                        arm.cond = substitute(arm.cond, var, value);
                        arm.body = substitute(arm.body, var, value);
                    }
                    if (x.else_body)
                        x.else_body = substitute(*x.else_body, var, value);
                } else if constexpr (std::is_same_v<T, CaseStmt>) {
                    x.select = substitute(x.select, var, value);
                    for (auto& item : x.items) {
                        for (auto& l : item.labels)
                            l = substitute(l, var, value);
                        item.body = substitute(item.body, var, value);
                    }
                } else {
                    if (x.var == var)
                        throw ElabError("nested loops reuse variable '" + var + "'", s.pos);
                    x.init = substitute(x.init, var, value);
                    x.bound = substitute(x.bound, var, value);
                    x.step = substitute(x.step, var, value);
                    x.body = substitute(x.body, var, value);
                }
            },
            copy.node);
        out.push_back(std::move(copy));
    }
    return out;
}

StmtList unroll(const StmtList& body) {
    StmtList out;
    for (const auto& s : body) {
        if (auto loop = s.as<ForLoop>()) {
            auto init = const_value(*loop->init);
            auto bound = const_value(*loop->bound);
            auto step = const_value(*loop->step);
            if (!init || !bound || !step)
                throw ElabError("for loop over '" + loop->var + "' needs constant bounds and step", s.pos);
            if (*step == 0)
                throw ElabError("for loop over '" + loop->var + "' has a zero step", s.pos);
            const std::uint64_t count = *bound > *init ? (*bound - *init + *step - 1) / *step : 0;
            if (count > kMaxLoopIterations)
                throw ElabError("for loop over '" + loop->var + "' runs " + std::to_string(count) +
                                    " iterations (limit " + std::to_string(kMaxLoopIterations) + ")",
                                s.pos);
            for (std::uint64_t k = 0; k < count; ++k) {
                StmtList copy = unroll(substitute(loop->body, loop->var, *init + k * *step));
                std::move(copy.begin(), copy.end(), std::back_inserter(out));
            }
            continue;
        }
        Stmt copy{s.node, s.pos};
        if (auto* chain = std::get_if<IfChain>(&copy.node)) {
            for (auto& arm : chain->arms)
                arm.body = unroll(arm.body);
            if (chain->else_body)
                chain->else_body = unroll(*chain->else_body);
        } else if (auto* c = std::get_if<CaseStmt>(&copy.node)) {
            for (auto& item : c->items)
                item.body = unroll(item.body);
        }
        out.push_back(std::move(copy));
    }
    return out;
}

void collect_loop_vars(const StmtList& body, std::set<std::string>& out) {
    for (const auto& s : body) {
        if (auto loop = s.as<ForLoop>()) {
            out.insert(loop->var);
            collect_loop_vars(loop->body, out);
        } else if (auto chain = s.as<IfChain>()) {
            for (const auto& arm : chain->arms)
                collect_loop_vars(arm.body, out);
            if (chain->else_body)
                collect_loop_vars(*chain->else_body, out);
        } else if (auto c = s.as<CaseStmt>()) {
            for (const auto& item : c->items)
                collect_loop_vars(item.body, out);
        }
    }
}

// -- lowering ---------------------------------------------------------------

// Array element references become plain references to `name[index]`.
ExprPtr lower(const ExprPtr& e) {
    return std::visit(
        [&](const auto& x) -> ExprPtr {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Const>) {
                return e;
            } else if constexpr (std::is_same_v<T, SignalRef>) {
                if (!x.index)
                    return e;
                auto idx = const_value(*x.index);
                if (!idx)
                    throw ElabError("array '" + x.name + "' is indexed by a non-constant expression", e->pos);
                return make_ref(element_name(x.name, *idx), nullptr, e->pos);
            } else if constexpr (std::is_same_v<T, BitSelect>) {
                return make_bit(lower(x.base), lower(x.index), e->pos);
            } else if constexpr (std::is_same_v<T, PartSelect>) {
                return make_part(lower(x.base), x.msb, x.lsb, e->pos);
            } else if constexpr (std::is_same_v<T, Unary>) {
                return make_unary(x.op, lower(x.operand), e->pos);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return make_binary(x.op, lower(x.lhs), lower(x.rhs), e->pos);
            } else if constexpr (std::is_same_v<T, Ternary>) {
                return make_ternary(lower(x.select), lower(x.then_expr), lower(x.else_expr), e->pos);
            } else {
                std::vector<ExprPtr> parts;
                for (const auto& p : x.parts)
                    parts.push_back(lower(p));
                return make_concat(std::move(parts), e->pos);
            }
        },
        e->node);
}

std::string target_name(const LValue& lv) {
    if (!lv.index)
        return lv.name;
    auto idx = const_value(*lv.index);
    if (!idx)
        throw ElabError("assignment to '" + lv.name + "' uses a non-constant index", lv.pos);
    return element_name(lv.name, *idx);
}

// -- rewriting --------------------------------------------------------------

class Rewriter {
public:
    Rewriter(std::string target, bool sequential) : target_(std::move(target)), sequential_(sequential) {}

    DrivePtr run(const StmtList& body) { return stmts(body, make_hold()); }

private:
    std::string target_;
    bool sequential_;

    bool assigns(const StmtList& body) const {
        return std::any_of(body.begin(), body.end(), [&](const Stmt& s) { return assigns(s); });
    }

    bool assigns(const Stmt& s) const {
        if (auto a = s.as<Assign>())
            return target_name(a->target) == target_;
        if (auto chain = s.as<IfChain>()) {
            for (const auto& arm : chain->arms)
                if (assigns(arm.body))
                    return true;
            return chain->else_body && assigns(*chain->else_body);
        }
        if (auto c = s.as<CaseStmt>()) {
            for (const auto& item : c->items)
                if (assigns(item.body))
                    return true;
        }
        return false;
    }

    DrivePtr stmts(const StmtList& body, DrivePtr current) {
        for (const auto& s : body)
            current = stmt(s, std::move(current));
        return current;
    }

    DrivePtr stmt(const Stmt& s, DrivePtr current) {
        if (auto a = s.as<Assign>()) {
            if (target_name(a->target) != target_)
                return current;
            return make_leaf(lower(a->value));
        }
        if (auto chain = s.as<IfChain>())
            return if_chain(*chain, std::move(current));
        if (auto c = s.as<CaseStmt>())
            return case_stmt(*c, std::move(current), s.pos);
        throw ElabError("for loop left after unrolling", s.pos);
    }

    static DrivePtr cond(ExprPtr select, DrivePtr then_tree, DrivePtr else_tree) {
        if (then_tree == else_tree)
            return then_tree;
        return make_cond(std::move(select), std::move(then_tree), std::move(else_tree));
    }

    DrivePtr if_chain(const IfChain& chain, DrivePtr current) {
        if (!assigns(Stmt{chain, {}}))
            return current;
        DrivePtr rest = chain.else_body ? stmts(*chain.else_body, current) : current;
        for (auto arm = chain.arms.rbegin(); arm != chain.arms.rend(); ++arm) {
            if (auto c = sole_partial_case(arm->body)) {
                rest = case_chain(*c, current, lower(arm->cond), rest);
            } else {
                rest = cond(lower(arm->cond), stmts(arm->body, current), rest);
            }
        }
        return rest;
    }

    bool item_assigns(const CaseItem& item) const { return assigns(item.body); }

    // True when some but not all labeled items assign the target.
    bool partial(const CaseStmt& c) const {
        bool any = false, all = true;
        for (const auto& item : c.items) {
            if (item.is_default)
                continue;
            if (item_assigns(item))
                any = true;
            else
                all = false;
        }
        return any && !all;
    }

    const CaseItem* default_item(const CaseStmt& c) const {
        for (const auto& item : c.items)
            if (item.is_default)
                return &item;
        return nullptr;
    }

    // The body is exactly one case statement that assigns the target in a
    // strict subset of its labels and not in its default branch.
    const CaseStmt* sole_partial_case(const StmtList& body) const {
        if (body.size() != 1)
            return nullptr;
        auto c = body.front().as<CaseStmt>();
        if (!c || !partial(*c))
            return nullptr;
        if (auto d = default_item(*c); d && item_assigns(*d))
            return nullptr;
        return c;
    }

    void check_labels(const CaseStmt& c, SourcePos pos) const {
        std::set<std::uint64_t> seen;
        for (const auto& item : c.items) {
            for (const auto& l : item.labels) {
                auto v = const_value(*l);
                if (!v)
                    throw ElabError("case label is not a constant", l->pos.valid() ? l->pos : pos);
                if (!seen.insert(*v).second)
                    throw ElabError("duplicate case label " + std::to_string(*v), l->pos.valid() ? l->pos : pos);
            }
        }
    }

    DrivePtr case_stmt(const CaseStmt& c, DrivePtr current, SourcePos pos) {
        check_labels(c, pos);
        if (!assigns(Stmt{c, {}}))
            return current;
        const CaseItem* def = default_item(c);
        const bool def_assigns = def && item_assigns(*def);
        if (!partial(c) && std::any_of(c.items.begin(), c.items.end(),
                                       [&](const CaseItem& i) { return !i.is_default && item_assigns(i); })) {
            std::vector<DrivePtr> branches;
            for (const auto& item : c.items) {
                if (item.is_default)
                    continue;
                DrivePtr b = stmts(item.body, current);
                for (std::size_t k = 0; k < item.labels.size(); ++k)
                    branches.push_back(b);
            }
            if (def_assigns)
                branches.push_back(stmts(def->body, current));
            return make_case(lower(c.select), std::move(branches));
        }
        DrivePtr fallthrough = def_assigns ? stmts(def->body, current) : current;
        return case_chain(c, current, nullptr, std::move(fallthrough));
    }

    DrivePtr case_chain(const CaseStmt& c, const DrivePtr& current, const ExprPtr& guard, DrivePtr rest) {
        check_labels(c, {});
        const ExprPtr select = lower(c.select);
        for (auto item = c.items.rbegin(); item != c.items.rend(); ++item) {
            if (item->is_default || !item_assigns(*item))
                continue;
            DrivePtr value = stmts(item->body, current);
            for (auto label = item->labels.rbegin(); label != item->labels.rend(); ++label) {
                ExprPtr g = make_binary(BinaryOp::Eq, select, lower(*label), (*label)->pos);
                if (guard)
                    g = make_binary(BinaryOp::LogicalAnd, guard, g, guard->pos);
                rest = make_cond(std::move(g), value, rest);
            }
        }
        return rest;
    }
};

bool tree_has_hold(const DriveNode& t) {
    if (t.is<Hold>())
        return true;
    if (auto c = t.as<Cond>())
        return tree_has_hold(*c->then_tree) || tree_has_hold(*c->else_tree);
    if (auto k = t.as<CaseK>())
        return std::any_of(k->branches.begin(), k->branches.end(),
                           [](const DrivePtr& b) { return tree_has_hold(*b); });
    return false;
}

void collect_targets(const StmtList& body, std::vector<std::string>& out) {
    for (const auto& s : body) {
        if (auto a = s.as<Assign>()) {
            std::string name = target_name(a->target);
            if (std::find(out.begin(), out.end(), name) == out.end())
                out.push_back(std::move(name));
        } else if (auto chain = s.as<IfChain>()) {
            for (const auto& arm : chain->arms)
                collect_targets(arm.body, out);
            if (chain->else_body)
                collect_targets(*chain->else_body, out);
        } else if (auto c = s.as<CaseStmt>()) {
            for (const auto& item : c->items)
                collect_targets(item.body, out);
        } else if (s.as<ForLoop>()) {
            throw ElabError("block must be unrolled before collecting targets", s.pos);
        }
    }
}

void check_assign_kinds(const StmtList& body, bool sequential) {
    for (const auto& s : body) {
        if (auto a = s.as<Assign>()) {
            if (sequential && a->blocking)
                throw ElabError("blocking assignment to '" + a->target.name + "' in an edge-triggered block",
                                s.pos);
            if (!sequential && !a->blocking)
                throw ElabError("nonblocking assignment to '" + a->target.name + "' in a combinational block",
                                s.pos);
        } else if (auto chain = s.as<IfChain>()) {
            for (const auto& arm : chain->arms)
                check_assign_kinds(arm.body, sequential);
            if (chain->else_body)
                check_assign_kinds(*chain->else_body, sequential);
        } else if (auto c = s.as<CaseStmt>()) {
            for (const auto& item : c->items)
                check_assign_kinds(item.body, sequential);
        } else if (auto loop = s.as<ForLoop>()) {
            check_assign_kinds(loop->body, sequential);
        }
    }
}

// Declared range of a base name, for select bounds checks.
struct DeclRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    bool array = false;
};

void validate_expr(const Expr& e, const std::map<std::string, DeclRange>& decls,
                   const std::map<std::string, std::string>& element_base) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, SignalRef>) {
                if (element_base.count(x.name))
                    return;
                auto it = decls.find(x.name);
                if (it != decls.end() && it->second.array)
                    throw ElabError("array '" + x.name + "' is used without an index", e.pos);
                if (it == decls.end()) {
                    auto bracket = x.name.find('[');
                    if (bracket != std::string::npos && decls.count(x.name.substr(0, bracket)))
                        throw ElabError("index out of range in '" + x.name + "'", e.pos);
                    throw ElabError("undeclared identifier '" + x.name + "'", e.pos);
                }
            } else if constexpr (std::is_same_v<T, BitSelect>) {
                validate_expr(*x.base, decls, element_base);
                validate_expr(*x.index, decls, element_base);
                auto ref = x.base->template as<SignalRef>();
                auto idx = const_value(*x.index);
                if (ref && idx) {
                    auto base = element_base.count(ref->name) ? element_base.at(ref->name) : ref->name;
                    const auto& r = decls.at(base);
                    if (static_cast<std::int64_t>(*idx) < r.lo || static_cast<std::int64_t>(*idx) > r.hi)
                        throw ElabError("bit-select " + std::to_string(*idx) + " is outside '" + ref->name + "'",
                                        e.pos);
                }
            } else if constexpr (std::is_same_v<T, PartSelect>) {
                validate_expr(*x.base, decls, element_base);
                if (auto ref = x.base->template as<SignalRef>()) {
                    auto base = element_base.count(ref->name) ? element_base.at(ref->name) : ref->name;
                    const auto& r = decls.at(base);
                    if (std::min(x.msb, x.lsb) < r.lo || std::max(x.msb, x.lsb) > r.hi)
                        throw ElabError("part-select [" + std::to_string(x.msb) + ":" + std::to_string(x.lsb) +
                                            "] is outside '" + ref->name + "'",
                                        e.pos);
                }
            } else if constexpr (std::is_same_v<T, Unary>) {
                validate_expr(*x.operand, decls, element_base);
            } else if constexpr (std::is_same_v<T, Binary>) {
                validate_expr(*x.lhs, decls, element_base);
                validate_expr(*x.rhs, decls, element_base);
            } else if constexpr (std::is_same_v<T, Ternary>) {
                validate_expr(*x.select, decls, element_base);
                validate_expr(*x.then_expr, decls, element_base);
                validate_expr(*x.else_expr, decls, element_base);
            } else if constexpr (std::is_same_v<T, Concat>) {
                for (const auto& p : x.parts)
                    validate_expr(*p, decls, element_base);
            }
        },
        e.node);
}

void validate_tree(const DriveNode& t, const std::map<std::string, DeclRange>& decls,
                   const std::map<std::string, std::string>& element_base) {
    if (auto x = t.as<Leaf>()) {
        validate_expr(*x->value, decls, element_base);
    } else if (auto x = t.as<Cond>()) {
        validate_expr(*x->select, decls, element_base);
        validate_tree(*x->then_tree, decls, element_base);
        validate_tree(*x->else_tree, decls, element_base);
    } else if (auto x = t.as<CaseK>()) {
        validate_expr(*x->select, decls, element_base);
        for (const auto& b : x->branches)
            validate_tree(*b, decls, element_base);
    }
}

void warn_arithmetic(const Expr& e, std::vector<Diagnostic>& out) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Binary>) {
                if (is_arithmetic(x.op))
                    out.push_back({e.pos, std::string("arithmetic operator '") + to_string(x.op) +
                                              "' is scored with the two-input averaging rule"});
                warn_arithmetic(*x.lhs, out);
                warn_arithmetic(*x.rhs, out);
            } else if constexpr (std::is_same_v<T, BitSelect>) {
                warn_arithmetic(*x.base, out);
            } else if constexpr (std::is_same_v<T, PartSelect>) {
                warn_arithmetic(*x.base, out);
            } else if constexpr (std::is_same_v<T, Unary>) {
                warn_arithmetic(*x.operand, out);
            } else if constexpr (std::is_same_v<T, Ternary>) {
                warn_arithmetic(*x.select, out);
                warn_arithmetic(*x.then_expr, out);
                warn_arithmetic(*x.else_expr, out);
            } else if constexpr (std::is_same_v<T, Concat>) {
                for (const auto& p : x.parts)
                    warn_arithmetic(*p, out);
            }
        },
        e.node);
}

void warn_arithmetic(const DriveNode& t, std::vector<Diagnostic>& out) {
    if (auto x = t.as<Leaf>()) {
        warn_arithmetic(*x->value, out);
    } else if (auto x = t.as<Cond>()) {
        warn_arithmetic(*x->select, out);
        warn_arithmetic(*x->then_tree, out);
        warn_arithmetic(*x->else_tree, out);
    } else if (auto x = t.as<CaseK>()) {
        warn_arithmetic(*x->select, out);
        for (const auto& b : x->branches)
            warn_arithmetic(*b, out);
    }
}

} // namespace

AlwaysBlock unroll_loops(const AlwaysBlock& block) {
    AlwaysBlock out = block;
    out.body = unroll(block.body);
    return out;
}

std::set<std::string> loop_variables(const AlwaysBlock& block) {
    std::set<std::string> vars;
    collect_loop_vars(block.body, vars);
    return vars;
}

std::vector<std::string> assigned_targets(const AlwaysBlock& block) {
    std::vector<std::string> out;
    collect_targets(block.body, out);
    return out;
}

DrivePtr rewrite_sequential(const AlwaysBlock& block, std::string_view target) {
    if (block.kind != BlockKind::Sequential)
        throw ElabError("rewrite_sequential needs an edge-triggered block", block.pos);
    return Rewriter(std::string(target), true).run(unroll(block.body));
}

DrivePtr rewrite_combinational(const AlwaysBlock& block, std::string_view target) {
    if (block.kind != BlockKind::Combinational)
        throw ElabError("rewrite_combinational needs a combinational block", block.pos);
    DrivePtr tree = Rewriter(std::string(target), false).run(unroll(block.body));
    if (tree_has_hold(*tree))
        throw ElabError("'" + std::string(target) +
                            "' is not assigned on every path of a combinational block (latch inferred)",
                        block.pos);
    return tree;
}

DataflowModel elaborate(const SourceModule& module) {
    std::map<std::string, DeclRange> decls;
    std::map<std::string, std::string> element_base;
    std::set<std::string> loop_vars;
    std::set<std::string> clocks;

    for (const auto& p : module.ports) {
        decls[p.name] = DeclRange{std::min(p.msb, p.lsb), std::max(p.msb, p.lsb), false};
        if (p.is_clock)
            clocks.insert(p.name);
    }
    for (const auto& n : module.nets)
        decls[n.name] = DeclRange{std::min(n.msb, n.lsb), std::max(n.msb, n.lsb), n.array};

    for (const auto& item : module.items)
        if (auto b = std::get_if<AlwaysBlock>(&item.node)) {
            auto vars = loop_variables(*b);
            loop_vars.insert(vars.begin(), vars.end());
        }
    for (const auto& v : loop_vars)
        if (!decls.count(v))
            throw ElabError("loop variable '" + v + "' is not declared");

    // Signal table: inputs, internal nets, outputs, each in declaration order.
    std::vector<SignalInfo> signals;
    for (const auto& p : module.ports)
        if (p.direction == Direction::Input)
            signals.push_back({p.name, p.name, p.width, SignalKind::Input, false, clocks.count(p.name) > 0});
    for (const auto& n : module.nets) {
        const bool excluded = loop_vars.count(n.name) > 0;
        if (!n.array) {
            signals.push_back({n.name, n.name, n.width, SignalKind::Internal, false, excluded});
            continue;
        }
        if (excluded)
            throw ElabError("array '" + n.name + "' is used as a loop variable", n.pos);
        const std::int64_t lo = std::min(n.array_first, n.array_last);
        const std::int64_t hi = std::max(n.array_first, n.array_last);
        for (std::int64_t i = lo; i <= hi; ++i) {
            std::string name = element_name(n.name, static_cast<std::uint64_t>(i));
            element_base[name] = n.name;
            signals.push_back({name, n.name, n.width, SignalKind::Internal, false, false});
        }
    }
    for (const auto& p : module.ports)
        if (p.direction == Direction::Output)
            signals.push_back({p.name, p.name, p.width, SignalKind::Output, false, false});

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < signals.size(); ++i)
        index[signals[i].name] = i;

    std::map<std::string, DrivePtr> drives;
    std::map<std::string, SourcePos> driven_at;
    auto claim = [&](const std::string& name, SourcePos pos) {
        auto it = index.find(name);
        if (it == index.end()) {
            if (decls.count(name) && decls.at(name).array)
                throw ElabError("assignment to array '" + name + "' needs an element index", pos);
            throw ElabError("assignment to undeclared signal '" + name + "'", pos);
        }
        const auto& s = signals[it->second];
        if (s.kind == SignalKind::Input)
            throw ElabError("assignment to input '" + name + "'", pos);
        if (s.excluded)
            throw ElabError("assignment to loop variable '" + name + "' outside its loop", pos);
        if (auto prev = driven_at.find(name); prev != driven_at.end()) {
            std::string where = prev->second.valid() ? " (first driven at " + std::to_string(prev->second.line) +
                                                           ":" + std::to_string(prev->second.column) + ")"
                                                     : "";
            throw ElabError("multiple drivers for '" + name + "'" + where, pos);
        }
        driven_at[name] = pos;
        return it->second;
    };

    for (const auto& item : module.items) {
        if (auto a = std::get_if<ContinuousAssign>(&item.node)) {
            const std::string name = target_name(a->target);
            claim(name, a->pos.valid() ? a->pos : a->target.pos);
            drives[name] = make_leaf(lower(a->value));
            continue;
        }
        const auto& block = std::get<AlwaysBlock>(item.node);
        const bool sequential = block.kind == BlockKind::Sequential;
        check_assign_kinds(block.body, sequential);
        const AlwaysBlock unrolled = unroll_loops(block);
        for (const auto& name : assigned_targets(unrolled)) {
            const std::size_t i = claim(name, block.pos);
            signals[i].is_state = sequential;
            drives[name] = sequential ? Rewriter(name, true).run(unrolled.body)
                                      : rewrite_combinational(unrolled, name);
        }
    }

    std::vector<Diagnostic> diagnostics;
    for (const auto& s : signals) {
        auto it = drives.find(s.name);
        if (it == drives.end())
            continue;
        validate_tree(*it->second, decls, element_base);
        warn_arithmetic(*it->second, diagnostics);
    }
    std::sort(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.pos.line, a.pos.column, a.message) < std::tie(b.pos.line, b.pos.column, b.message);
    });
    diagnostics.erase(std::unique(diagnostics.begin(), diagnostics.end(),
                                  [](const Diagnostic& a, const Diagnostic& b) {
                                      return a.pos == b.pos && a.message == b.message;
                                  }),
                      diagnostics.end());

    return build_model(std::move(signals), std::move(drives), std::move(diagnostics));
}

} // namespace patchq
