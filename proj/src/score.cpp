#include "patchq/score.hpp"

#include <algorithm>

namespace patchq {

namespace {

Rational adjusted(const Branch& b, const Rational& sigma, std::size_t distinct) {
    if (sigma == 1 && b.constant && distinct > 0)
        return Rational(std::min<std::uint64_t>(floor_log2(distinct), b.width));
    return b.score;
}

bool is_constant(const Expr& e) { return const_value(e).has_value(); }

void chain_constants(const Expr& e, std::set<std::uint64_t>& out) {
    if (auto t = e.as<Ternary>()) {
        chain_constants(*t->then_expr, out);
        chain_constants(*t->else_expr, out);
    } else if (auto v = const_value(e)) {
        out.insert(*v);
    }
}

void tree_constants(const DriveNode& t, std::set<std::uint64_t>& out) {
    if (auto l = t.as<Leaf>()) {
        if (auto v = const_value(*l->value))
            out.insert(*v);
    } else if (auto c = t.as<Cond>()) {
        tree_constants(*c->then_tree, out);
        tree_constants(*c->else_tree, out);
    } else if (auto k = t.as<CaseK>()) {
        for (const auto& b : k->branches)
            tree_constants(*b, out);
    }
}

Rational cap(const Rational& s, std::uint32_t width) { return std::min(s, Rational(width)); }

bool reads_zero(const std::string& name, const ScoreEnv& env) {
    if (env.feedback && env.feedback->count(name))
        return true;
    if (env.context == Context::Sequential) {
        const SignalInfo* info = env.model.info(name);
        return info && info->is_state;
    }
    return false;
}

class ExprScorer {
public:
    explicit ExprScorer(const ScoreEnv& env) : env_(env) {}

    Scored operator()(const Expr& e, std::optional<std::size_t> chain = std::nullopt) const {
        return std::visit([&](const auto& x) { return score(e, x, chain); }, e.node);
    }

private:
    const ScoreEnv& env_;

    Scored score(const Expr&, const Const& c, std::optional<std::size_t>) const { return {Rational(0), c.width}; }

    Scored score(const Expr& e, const SignalRef& r, std::optional<std::size_t>) const {
        const SignalInfo* info = env_.model.info(r.name);
        if (!info || r.index)
            throw EvalError("unresolved reference '" + r.name + "'", e.pos);
        if (reads_zero(r.name, env_))
            return {Rational(0), info->width};
        auto it = env_.scores.find(r.name);
        if (it == env_.scores.end())
            throw EvalError("no score for '" + r.name + "'", e.pos);
        return {it->second, info->width};
    }

    Scored score(const Expr&, const BitSelect& b, std::optional<std::size_t>) const {
        return {(*this)(*b.base).sigma(), 1};
    }

    Scored score(const Expr&, const PartSelect& p, std::optional<std::size_t>) const {
        const auto m = static_cast<std::uint32_t>((p.msb > p.lsb ? p.msb - p.lsb : p.lsb - p.msb) + 1);
        return {(*this)(*p.base).sigma() * m, m};
    }

    Scored score(const Expr&, const Unary& u, std::optional<std::size_t>) const {
        Scored a = (*this)(*u.operand);
        if (u.op == UnaryOp::LogicalNot)
            return {a.sigma(), 1};
        return a;
    }

    Scored score(const Expr&, const Binary& b, std::optional<std::size_t>) const {
        Scored l = (*this)(*b.lhs);
        Scored r = (*this)(*b.rhs);
        if (is_logical(b.op))
            return {(l.sigma() + r.sigma()) / 2, 1};
        if (is_comparison(b.op)) {
            const bool lc = is_constant(*b.lhs), rc = is_constant(*b.rhs);
            if (lc && rc)
                return {Rational(0), 1};
            if (rc)
                return {l.sigma(), 1};
            if (lc)
                return {r.sigma(), 1};
            return {(l.sigma() + r.sigma()) / 2, 1};
        }
        if (is_shift(b.op))
            return {l.score * (l.width - 1) / l.width, l.width};
        return {(l.score + r.score) / 2, std::max(l.width, r.width)};
    }

    Scored score(const Expr& e, const Ternary& t, std::optional<std::size_t> chain) const {
        const std::size_t distinct = chain ? *chain : distinct_constants(e);
        const Rational sigma = (*this)(*t.select).sigma();
        Scored a = (*this)(*t.then_expr, distinct);
        Scored b = (*this)(*t.else_expr, distinct);
        const std::uint32_t width = std::max(a.width, b.width);
        return {score_cond(sigma, {a.score, width, is_constant(*t.then_expr)},
                           {b.score, width, is_constant(*t.else_expr)}, distinct),
                width};
    }

    Scored score(const Expr&, const Concat& c, std::optional<std::size_t>) const {
        Scored out{Rational(0), 0};
        for (const auto& p : c.parts) {
            Scored s = (*this)(*p);
            out.score += s.score;
            out.width += s.width;
        }
        return out;
    }
};

Rational tree_score(const DriveNode& t, std::uint32_t width, const ScoreEnv& env, std::size_t distinct) {
    if (auto l = t.as<Leaf>())
        return cap(score_expr(*l->value, env).score, width);
    if (t.is<Hold>())
        return Rational(0);
    auto arm = [&](const DrivePtr& sub) {
        const auto* leaf = sub->as<Leaf>();
        return Branch{tree_score(*sub, width, env, distinct), width, leaf && is_constant(*leaf->value)};
    };
    if (auto c = t.as<Cond>())
        return score_cond(score_expr(*c->select, env).sigma(), arm(c->then_tree), arm(c->else_tree), distinct);
    const auto& k = *t.as<CaseK>();
    std::vector<Branch> arms;
    arms.reserve(k.branches.size());
    for (const auto& b : k.branches)
        arms.push_back(arm(b));
    return score_case(score_expr(*k.select, env).sigma(), arms, distinct);
}

// -- observability ------------------------------------------------------------

class Observer {
public:
    Observer(const ScoreEnv& pc_env, std::vector<Rational>& acc) : pc_(pc_env), acc_(acc) {}

    void tree(const DriveNode& t, std::uint32_t width, const Rational& o) {
        if (o == 0)
            return;
        if (auto l = t.as<Leaf>()) {
            const std::uint32_t w = expr_width(*l->value, pc_.model);
            expr(*l->value, o * std::min(width, w) / w);
        } else if (auto c = t.as<Cond>()) {
            const Rational p = score_expr(*c->select, pc_).sigma();
            expr(*c->select, o / 2);
            const Rational arm = p * o + (1 - p) * o / 2;
            tree(*c->then_tree, width, arm);
            tree(*c->else_tree, width, arm);
        } else if (auto k = t.as<CaseK>()) {
            const Rational p = score_expr(*k->select, pc_).sigma();
            expr(*k->select, o / 2);
            const Rational arm = p * o + (1 - p) * o / static_cast<unsigned>(k->branches.size());
            for (const auto& b : k->branches)
                tree(*b, width, arm);
        }
    }

    void expr(const Expr& e, const Rational& o) {
        if (o == 0)
            return;
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, SignalRef>) {
                    if (reads_zero(x.name, pc_))
                        return;
                    auto idx = pc_.model.find(x.name);
                    if (!idx)
                        throw EvalError("unresolved reference '" + x.name + "'", e.pos);
                    acc_[*idx] = std::max(acc_[*idx], o);
                } else if constexpr (std::is_same_v<T, BitSelect>) {
                    expr(*x.base, o / expr_width(*x.base, pc_.model));
                } else if constexpr (std::is_same_v<T, PartSelect>) {
                    const auto m = (x.msb > x.lsb ? x.msb - x.lsb : x.lsb - x.msb) + 1;
                    expr(*x.base, o * m / expr_width(*x.base, pc_.model));
                } else if constexpr (std::is_same_v<T, Unary>) {
                    expr(*x.operand, o);
                } else if constexpr (std::is_same_v<T, Binary>) {
                    if (is_shift(x.op)) {
                        const std::uint32_t n = expr_width(*x.lhs, pc_.model);
                        expr(*x.lhs, o * (n - 1) / n);
                    } else if (is_comparison(x.op) && is_constant(*x.rhs)) {
                        expr(*x.lhs, o);
                    } else if (is_comparison(x.op) && is_constant(*x.lhs)) {
                        expr(*x.rhs, o);
                    } else {
                        expr(*x.lhs, o / 2);
                        expr(*x.rhs, o / 2);
                    }
                } else if constexpr (std::is_same_v<T, Ternary>) {
                    const Rational p = score_expr(*x.select, pc_).sigma();
                    expr(*x.select, o / 2);
                    const Rational arm = p * o + (1 - p) * o / 2;
                    expr(*x.then_expr, arm);
                    expr(*x.else_expr, arm);
                } else if constexpr (std::is_same_v<T, Concat>) {
                    for (const auto& part : x.parts)
                        expr(*part, o);
                }
            },
            e.node);
    }

private:
    const ScoreEnv& pc_;
    std::vector<Rational>& acc_;
};

Context context_of(const SignalInfo& s) { return s.is_state ? Context::Sequential : Context::Combinational; }

} // namespace

Scored score_expr(const Expr& e, const ScoreEnv& env) { return ExprScorer(env)(e); }

Rational score_cond(const Rational& sigma, const Branch& then_arm, const Branch& else_arm, std::size_t distinct) {
    const Rational c = adjusted(then_arm, sigma, distinct);
    const Rational d = adjusted(else_arm, sigma, distinct);
    return sigma * std::max(c, d) + (1 - sigma) * (c + d) / 2;
}

Rational score_case(const Rational& sigma, const std::vector<Branch>& arms, std::size_t distinct) {
    if (arms.empty())
        throw EvalError("case with no branches");
    Rational best(0), sum(0);
    for (const auto& a : arms) {
        const Rational s = adjusted(a, sigma, distinct);
        best = std::max(best, s);
        sum += s;
    }
    return sigma * best + (1 - sigma) * sum / static_cast<unsigned>(arms.size());
}

std::size_t distinct_constants(const DriveNode& tree) {
    std::set<std::uint64_t> values;
    tree_constants(tree, values);
    return values.size();
}

std::size_t distinct_constants(const Expr& e) {
    std::set<std::uint64_t> values;
    chain_constants(e, values);
    return values.size();
}

Rational score_tree(const DriveNode& tree, std::uint32_t width, const ScoreEnv& env) {
    return tree_score(tree, width, env, distinct_constants(tree));
}

void validate_config(const DataflowModel& model, const PatchConfig& config) {
    auto check = [&](const std::string& name, const char* role) {
        const SignalInfo* info = model.info(name);
        if (!info)
            throw ConfigError(std::string(role) + " signal '" + name + "' is not in the design" +
                              (config.name.empty() ? "" : " (option '" + config.name + "')"));
        if (info->excluded)
            throw ConfigError(std::string(role) + " signal '" + name + "' is excluded from scoring" +
                              (config.name.empty() ? "" : " (option '" + config.name + "')"));
    };
    for (const auto& n : config.patched)
        check(n, "patched");
    for (const auto& n : config.observed)
        check(n, "observed");
}

ScoreMap compute_pc(const DataflowModel& model, const PatchConfig& config) {
    validate_config(model, config);
    ScoreMap scores;
    for (std::size_t i : model.order()) {
        const SignalInfo& s = model.info(i);
        Rational value(0);
        if (config.patched.count(s.name)) {
            value = s.width;
        } else if (auto tree = model.drive(i)) {
            ScoreEnv env{model, scores, context_of(s), &model.feedback_reads(i)};
            value = cap(score_tree(*tree, s.width, env), s.width);
        }
        scores.emplace(s.name, std::move(value));
    }
    return scores;
}

ScoreMap compute_po(const DataflowModel& model, const PatchConfig& config) {
    validate_config(model, config);
    const ScoreMap pc = compute_pc(model, config);
    std::vector<Rational> acc(model.signals().size(), Rational(0));
    const auto& order = model.order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const SignalInfo& s = model.info(*it);
        if (config.observed.count(s.name))
            acc[*it] = 1;
        auto tree = model.drive(*it);
        if (!tree)
            continue;
        ScoreEnv env{model, pc, context_of(s), &model.feedback_reads(*it)};
        Observer(env, acc).tree(*tree, s.width, acc[*it]);
    }
    ScoreMap out;
    for (std::size_t i : model.scored()) {
        const SignalInfo& s = model.info(i);
        out.emplace(s.name, config.observed.count(s.name) ? Rational(s.width) : acc[i] * s.width);
    }
    return out;
}

} // namespace patchq
