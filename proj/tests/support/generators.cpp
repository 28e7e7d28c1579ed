#include "generators.hpp"

namespace gen {

using namespace patchq;

namespace {

const BinaryOp kOps[] = {BinaryOp::LogicalAnd, BinaryOp::LogicalOr, BinaryOp::BitAnd, BinaryOp::BitOr,
                         BinaryOp::BitXor,     BinaryOp::BitXnor,   BinaryOp::Eq,     BinaryOp::Ne,
                         BinaryOp::Lt,         BinaryOp::Gt,        BinaryOp::Le,     BinaryOp::Ge,
                         BinaryOp::Shl,        BinaryOp::Shr,       BinaryOp::Add,    BinaryOp::Sub};

ExprPtr constant(Rng& rng) {
    const std::uint32_t width = 1u << pick(rng, 4);
    const std::uint64_t value = pick(rng, std::size_t{1} << std::min<std::uint32_t>(width, 3));
    return make_const(value, width, true);
}

ExprPtr leaf(Rng& rng, const std::vector<SignalInfo>& readable) {
    if (readable.empty() || coin(rng, 0.2))
        return constant(rng);
    const SignalInfo& s = readable[pick(rng, readable.size())];
    ExprPtr ref = make_ref(s.name);
    if (s.width > 1 && coin(rng, 0.25)) {
        if (coin(rng))
            return make_bit(ref, make_const(pick(rng, s.width), kUnsizedWidth, false));
        const auto lsb = static_cast<std::int64_t>(pick(rng, s.width));
        const auto msb = lsb + static_cast<std::int64_t>(pick(rng, s.width - lsb));
        return make_part(ref, msb, lsb);
    }
    return ref;
}

} // namespace

ExprPtr expr(Rng& rng, const std::vector<SignalInfo>& readable, int depth) {
    if (depth <= 0 || coin(rng, 0.3))
        return leaf(rng, readable);
    switch (pick(rng, 5)) {
    case 0:
        return make_unary(coin(rng) ? UnaryOp::LogicalNot : UnaryOp::BitNot, expr(rng, readable, depth - 1));
    case 1:
    case 2:
        return make_binary(kOps[pick(rng, std::size(kOps))], expr(rng, readable, depth - 1),
                           expr(rng, readable, depth - 1));
    case 3:
        return make_ternary(expr(rng, readable, depth - 1), expr(rng, readable, depth - 1),
                            expr(rng, readable, depth - 1));
    default: {
        std::vector<ExprPtr> parts;
        const std::size_t n = 2 + pick(rng, 2);
        for (std::size_t i = 0; i < n; ++i)
            parts.push_back(expr(rng, readable, depth - 1));
        return make_concat(std::move(parts));
    }
    }
}

DrivePtr tree(Rng& rng, const std::vector<SignalInfo>& readable, int depth, bool state) {
    if (depth <= 1 || coin(rng, 0.25)) {
        if (state && coin(rng, 0.2))
            return make_hold();
        if (coin(rng, 0.3))
            return make_leaf(constant(rng));
        return make_leaf(expr(rng, readable, 2));
    }
    if (coin(rng, 0.7))
        return make_cond(expr(rng, readable, 2), tree(rng, readable, depth - 1, state),
                         tree(rng, readable, depth - 1, state));
    std::vector<DrivePtr> branches;
    const std::size_t k = 1 + pick(rng, 4);
    for (std::size_t i = 0; i < k; ++i)
        branches.push_back(tree(rng, readable, depth - 1, state));
    return make_case(expr(rng, readable, 1), std::move(branches));
}

DataflowModel model(Rng& rng, const ModelShape& shape) {
    static const std::uint32_t widths[] = {1, 1, 1, 2, 4, 8, 16};
    std::vector<SignalInfo> signals;
    const std::size_t inputs = shape.min_inputs + pick(rng, shape.max_inputs - shape.min_inputs + 1);
    const std::size_t driven = shape.min_driven + pick(rng, shape.max_driven - shape.min_driven + 1);
    for (std::size_t i = 0; i < inputs; ++i) {
        const std::string name = "in" + std::to_string(i);
        signals.push_back({name, name, widths[pick(rng, std::size(widths))], SignalKind::Input, false, false});
    }
    for (std::size_t i = 0; i < driven; ++i) {
        const std::string name = "s" + std::to_string(i);
        const bool output = i + 1 == driven || coin(rng, 0.2);
        signals.push_back({name, name, widths[pick(rng, std::size(widths))],
                           output ? SignalKind::Output : SignalKind::Internal, coin(rng, 0.35), false});
    }
    std::map<std::string, DrivePtr> drives;
    for (std::size_t i = inputs; i < signals.size(); ++i) {
        const SignalInfo& s = signals[i];
        std::vector<SignalInfo> readable;
        if (s.is_state)
            readable = signals;
        else
            readable.assign(signals.begin(), signals.begin() + static_cast<std::ptrdiff_t>(i));
        drives[s.name] = tree(rng, readable, shape.depth, s.is_state);
    }
    return build_model(std::move(signals), std::move(drives));
}

PatchConfig config(Rng& rng, const DataflowModel& m, double p, double observe) {
    PatchConfig c;
    c.name = "random";
    for (std::size_t i : m.scored()) {
        if (coin(rng, p))
            c.patched.insert(m.info(i).name);
        if (observe > 0 && coin(rng, observe))
            c.observed.insert(m.info(i).name);
    }
    return c;
}

ExprPtr rename_expr(const ExprPtr& e, const std::function<std::string(const std::string&)>& rename) {
    return std::visit(
        [&](const auto& x) -> ExprPtr {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Const>) {
                return e;
            } else if constexpr (std::is_same_v<T, SignalRef>) {
                return make_ref(rename(x.name));
            } else if constexpr (std::is_same_v<T, BitSelect>) {
                return make_bit(rename_expr(x.base, rename), rename_expr(x.index, rename));
            } else if constexpr (std::is_same_v<T, PartSelect>) {
                return make_part(rename_expr(x.base, rename), x.msb, x.lsb);
            } else if constexpr (std::is_same_v<T, Unary>) {
                return make_unary(x.op, rename_expr(x.operand, rename));
            } else if constexpr (std::is_same_v<T, Binary>) {
                return make_binary(x.op, rename_expr(x.lhs, rename), rename_expr(x.rhs, rename));
            } else if constexpr (std::is_same_v<T, Ternary>) {
                return make_ternary(rename_expr(x.select, rename), rename_expr(x.then_expr, rename),
                                    rename_expr(x.else_expr, rename));
            } else {
                std::vector<ExprPtr> parts;
                for (const auto& p : x.parts)
                    parts.push_back(rename_expr(p, rename));
                return make_concat(std::move(parts));
            }
        },
        e->node);
}

namespace {

DrivePtr rename_tree(const DrivePtr& t, const std::function<std::string(const std::string&)>& rename) {
    if (auto l = t->as<Leaf>())
        return make_leaf(rename_expr(l->value, rename));
    if (auto c = t->as<Cond>())
        return make_cond(rename_expr(c->select, rename), rename_tree(c->then_tree, rename),
                         rename_tree(c->else_tree, rename));
    if (auto k = t->as<CaseK>()) {
        std::vector<DrivePtr> branches;
        for (const auto& b : k->branches)
            branches.push_back(rename_tree(b, rename));
        return make_case(rename_expr(k->select, rename), std::move(branches));
    }
    return t;
}

} // namespace

DataflowModel renamed(const DataflowModel& m, const std::function<std::string(const std::string&)>& rename) {
    std::vector<SignalInfo> signals;
    std::map<std::string, DrivePtr> drives;
    for (std::size_t i = 0; i < m.signals().size(); ++i) {
        SignalInfo s = m.info(i);
        s.name = rename(s.name);
        s.base = s.name;
        if (auto d = m.drive(i))
            drives[s.name] = rename_tree(d, rename);
        signals.push_back(std::move(s));
    }
    return build_model(std::move(signals), std::move(drives));
}

} // namespace gen
