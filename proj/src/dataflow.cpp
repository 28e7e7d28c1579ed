#include "patchq/dataflow.hpp"

#include "patchq/frontend.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>

namespace patchq {

const char* to_string(SignalKind kind) {
    switch (kind) {
    case SignalKind::Input: return "input";
    case SignalKind::Output: return "output";
    case SignalKind::Internal: return "internal";
    }
    return "internal";
}

DrivePtr make_leaf(ExprPtr value) {
    return std::make_shared<const DriveNode>(DriveNode{Leaf{std::move(value)}});
}

DrivePtr make_cond(ExprPtr select, DrivePtr then_tree, DrivePtr else_tree) {
    return std::make_shared<const DriveNode>(
        DriveNode{Cond{std::move(select), std::move(then_tree), std::move(else_tree)}});
}

DrivePtr make_case(ExprPtr select, std::vector<DrivePtr> branches) {
    return std::make_shared<const DriveNode>(DriveNode{CaseK{std::move(select), std::move(branches)}});
}

DrivePtr make_hold() {
    static const DrivePtr hold = std::make_shared<const DriveNode>(DriveNode{Hold{}});
    return hold;
}

bool equal(const DrivePtr& a, const DrivePtr& b) {
    if (!a || !b)
        return !a && !b;
    return equal(*a, *b);
}

bool equal(const DriveNode& a, const DriveNode& b) {
    if (a.node.index() != b.node.index())
        return false;
    if (auto x = a.as<Leaf>())
        return equal(x->value, b.as<Leaf>()->value);
    if (auto x = a.as<Cond>()) {
        auto y = b.as<Cond>();
        return equal(x->select, y->select) && equal(x->then_tree, y->then_tree) &&
               equal(x->else_tree, y->else_tree);
    }
    if (auto x = a.as<CaseK>()) {
        auto y = b.as<CaseK>();
        if (!equal(x->select, y->select) || x->branches.size() != y->branches.size())
            return false;
        for (std::size_t i = 0; i < x->branches.size(); ++i)
            if (!equal(x->branches[i], y->branches[i]))
                return false;
        return true;
    }
    return true;
}

std::string to_string(const DriveNode& tree) {
    std::ostringstream os;
    std::function<void(const DriveNode&)> print = [&](const DriveNode& t) {
        if (auto x = t.as<Leaf>()) {
            os << to_source(*x->value);
        } else if (auto x = t.as<Cond>()) {
            os << "cond(" << to_source(*x->select) << ", ";
            print(*x->then_tree);
            os << ", ";
            print(*x->else_tree);
            os << ')';
        } else if (auto x = t.as<CaseK>()) {
            os << "case(" << to_source(*x->select) << "; ";
            for (std::size_t i = 0; i < x->branches.size(); ++i) {
                if (i)
                    os << "; ";
                print(*x->branches[i]);
            }
            os << ')';
        } else {
            os << "hold";
        }
    };
    print(tree);
    return os.str();
}

void collect_refs(const Expr& e, std::set<std::string>& out) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, SignalRef>) {
                out.insert(x.name);
                if (x.index)
                    collect_refs(*x.index, out);
            } else if constexpr (std::is_same_v<T, BitSelect>) {
                collect_refs(*x.base, out);
                collect_refs(*x.index, out);
            } else if constexpr (std::is_same_v<T, PartSelect>) {
                collect_refs(*x.base, out);
            } else if constexpr (std::is_same_v<T, Unary>) {
                collect_refs(*x.operand, out);
            } else if constexpr (std::is_same_v<T, Binary>) {
                collect_refs(*x.lhs, out);
                collect_refs(*x.rhs, out);
            } else if constexpr (std::is_same_v<T, Ternary>) {
                collect_refs(*x.select, out);
                collect_refs(*x.then_expr, out);
                collect_refs(*x.else_expr, out);
            } else if constexpr (std::is_same_v<T, Concat>) {
                for (const auto& p : x.parts)
                    collect_refs(*p, out);
            }
        },
        e.node);
}

void collect_refs(const DriveNode& tree, std::set<std::string>& out) {
    if (auto x = tree.as<Leaf>()) {
        collect_refs(*x->value, out);
    } else if (auto x = tree.as<Cond>()) {
        collect_refs(*x->select, out);
        collect_refs(*x->then_tree, out);
        collect_refs(*x->else_tree, out);
    } else if (auto x = tree.as<CaseK>()) {
        collect_refs(*x->select, out);
        for (const auto& b : x->branches)
            collect_refs(*b, out);
    }
}

namespace {

bool contains_hold(const DriveNode& tree) {
    if (tree.is<Hold>())
        return true;
    if (auto x = tree.as<Cond>())
        return contains_hold(*x->then_tree) || contains_hold(*x->else_tree);
    if (auto x = tree.as<CaseK>())
        return std::any_of(x->branches.begin(), x->branches.end(),
                           [](const DrivePtr& b) { return contains_hold(*b); });
    return false;
}

void check_shape(const DriveNode& tree, const std::string& target) {
    if (auto x = tree.as<Leaf>()) {
        if (!x->value)
            throw ElabError("empty leaf in drive tree of '" + target + "'");
    } else if (auto x = tree.as<Cond>()) {
        if (!x->select || !x->then_tree || !x->else_tree)
            throw ElabError("incomplete conditional in drive tree of '" + target + "'");
        check_shape(*x->then_tree, target);
        check_shape(*x->else_tree, target);
    } else if (auto x = tree.as<CaseK>()) {
        if (!x->select || x->branches.empty())
            throw ElabError("case node without branches in drive tree of '" + target + "'");
        for (const auto& b : x->branches) {
            if (!b)
                throw ElabError("empty case branch in drive tree of '" + target + "'");
            check_shape(*b, target);
        }
    }
}

} // namespace

DataflowModel build_model(std::vector<SignalInfo> signals, std::map<std::string, DrivePtr> drives,
                          std::vector<Diagnostic> diagnostics) {
    DataflowModel m;
    m.signals_ = std::move(signals);
    m.diagnostics_ = std::move(diagnostics);
    const std::size_t n = m.signals_.size();
    m.drives_.assign(n, nullptr);
    m.feedback_.assign(n, {});

    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = m.signals_[i];
        if (s.name.empty())
            throw ElabError("signal with empty name");
        if (s.width == 0)
            throw ElabError("signal '" + s.name + "' has zero width");
        if (!m.index_.emplace(s.name, i).second)
            throw ElabError("duplicate signal '" + s.name + "'");
        if (!s.excluded)
            m.scored_.push_back(i);
    }

    for (auto& [name, tree] : drives) {
        auto it = m.index_.find(name);
        if (it == m.index_.end())
            throw ElabError("drive for undeclared signal '" + name + "'");
        const auto& s = m.signals_[it->second];
        if (s.kind == SignalKind::Input)
            throw ElabError("input '" + name + "' cannot be driven inside the module");
        if (s.excluded)
            throw ElabError("excluded signal '" + name + "' cannot carry a drive");
        if (!tree)
            throw ElabError("null drive for '" + name + "'");
        check_shape(*tree, name);
        if (!s.is_state && contains_hold(*tree))
            throw ElabError("'" + name + "' is not a register but its drive can keep its previous value (latch)");
        m.drives_[it->second] = std::move(tree);
    }

    // Dependencies: edges[u] holds the signals whose drive reads u.
    std::vector<std::set<std::size_t>> readers(n), reads(n);
    for (std::size_t i : m.scored_) {
        const auto& s = m.signals_[i];
        if (s.kind == SignalKind::Input)
            continue;
        if (!m.drives_[i])
            throw ElabError("signal '" + s.name + "' has no driver");
        std::set<std::string> refs;
        collect_refs(*m.drives_[i], refs);
        for (const auto& r : refs) {
            auto it = m.index_.find(r);
            if (it == m.index_.end())
                throw ElabError("drive of '" + s.name + "' reads undeclared signal '" + r + "'");
            const auto& src = m.signals_[it->second];
            if (src.excluded)
                throw ElabError("drive of '" + s.name + "' reads excluded signal '" + r + "'");
            if (s.is_state && src.is_state)
                continue;
            if (it->second == i)
                throw ElabError("combinational cycle: '" + s.name + "' depends on itself");
            readers[it->second].insert(i);
            reads[i].insert(it->second);
        }
    }

    // Kahn's algorithm, lowest declaration index first.
    std::vector<std::size_t> indegree(n, 0);
    std::vector<bool> done(n, false);
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i : m.scored_) {
        indegree[i] = reads[i].size();
        if (indegree[i] == 0)
            ready.push(i);
    }

    auto reachable_from = [&](std::size_t start) {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> stack{start};
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v : readers[u]) {
                if (!done[v] && !seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
            }
        }
        return seen;
    };

    while (m.order_.size() < m.scored_.size()) {
        if (ready.empty()) {
            // Stuck: every remaining node sits on or behind a cycle.
            std::vector<std::size_t> remaining;
            for (std::size_t i : m.scored_)
                if (!done[i])
                    remaining.push_back(i);

            // A cycle made of combinational edges only is an error.
            std::vector<int> color(n, 0);
            std::vector<std::size_t> path;
            std::function<bool(std::size_t)> dfs = [&](std::size_t u) -> bool {
                color[u] = 1;
                path.push_back(u);
                for (std::size_t v : readers[u]) {
                    if (done[v] || m.signals_[v].is_state)
                        continue;
                    if (color[v] == 1) {
                        auto from = std::find(path.begin(), path.end(), v);
                        std::string names;
                        for (auto it = from; it != path.end(); ++it)
                            names += "'" + m.signals_[*it].name + "' -> ";
                        names += "'" + m.signals_[v].name + "'";
                        throw ElabError("combinational cycle: " + names);
                    }
                    if (color[v] == 0 && dfs(v))
                        return true;
                }
                color[u] = 2;
                path.pop_back();
                return false;
            };
            for (std::size_t u : remaining)
                if (color[u] == 0)
                    dfs(u);

            // Otherwise cut the loop at the first register on a cycle.
            bool cut = false;
            for (std::size_t s : remaining) {
                if (!m.signals_[s].is_state)
                    continue;
                auto seen = reachable_from(s);
                if (!seen[s])
                    continue;
                for (auto it = reads[s].begin(); it != reads[s].end();) {
                    std::size_t u = *it;
                    if (!done[u] && seen[u]) {
                        m.feedback_[s].insert(m.signals_[u].name);
                        readers[u].erase(s);
                        it = reads[s].erase(it);
                        --indegree[s];
                    } else {
                        ++it;
                    }
                }
                if (indegree[s] == 0)
                    ready.push(s);
                cut = true;
                break;
            }
            if (!cut)
                throw ElabError("dependency cycle could not be resolved");
            continue;
        }
        std::size_t u = ready.top();
        ready.pop();
        if (done[u])
            continue;
        done[u] = true;
        m.order_.push_back(u);
        for (std::size_t v : readers[u])
            if (--indegree[v] == 0)
                ready.push(v);
    }

    return m;
}

std::optional<std::size_t> DataflowModel::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

const SignalInfo* DataflowModel::info(std::string_view name) const {
    auto i = find(name);
    return i ? &signals_[*i] : nullptr;
}

DrivePtr DataflowModel::drive(std::string_view name) const {
    auto i = find(name);
    return i ? drives_[*i] : nullptr;
}

std::vector<std::string> DataflowModel::expand(std::string_view name) const {
    std::vector<std::string> out;
    if (auto i = find(name)) {
        if (!signals_[*i].excluded)
            out.push_back(signals_[*i].name);
        return out;
    }
    for (std::size_t i : scored_)
        if (signals_[i].base == name && signals_[i].name != name)
            out.push_back(signals_[i].name);
    return out;
}

bool equal(const DataflowModel& a, const DataflowModel& b) {
    if (a.signals() != b.signals())
        return false;
    for (std::size_t i = 0; i < a.signals().size(); ++i)
        if (!equal(a.drive(i), b.drive(i)))
            return false;
    return a.order() == b.order();
}

std::uint32_t expr_width(const Expr& e, const DataflowModel& model) {
    return std::visit(
        [&](const auto& x) -> std::uint32_t {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Const>) {
                return x.width;
            } else if constexpr (std::is_same_v<T, SignalRef>) {
                auto info = model.info(x.name);
                if (!info)
                    throw EvalError("unresolved signal '" + x.name + "'");
                return info->width;
            } else if constexpr (std::is_same_v<T, BitSelect>) {
                return 1;
            } else if constexpr (std::is_same_v<T, PartSelect>) {
                return static_cast<std::uint32_t>((x.msb > x.lsb ? x.msb - x.lsb : x.lsb - x.msb) + 1);
            } else if constexpr (std::is_same_v<T, Unary>) {
                return x.op == UnaryOp::LogicalNot ? 1 : expr_width(*x.operand, model);
            } else if constexpr (std::is_same_v<T, Binary>) {
                if (is_logical(x.op) || is_comparison(x.op))
                    return 1;
                if (is_shift(x.op))
                    return expr_width(*x.lhs, model);
                return std::max(expr_width(*x.lhs, model), expr_width(*x.rhs, model));
            } else if constexpr (std::is_same_v<T, Ternary>) {
                return std::max(expr_width(*x.then_expr, model), expr_width(*x.else_expr, model));
            } else {
                std::uint32_t w = 0;
                for (const auto& p : x.parts)
                    w += expr_width(*p, model);
                return w;
            }
        },
        e.node);
}

} // namespace patchq
