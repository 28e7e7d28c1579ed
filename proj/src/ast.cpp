#include "patchq/ast.hpp"

namespace patchq {

const char* to_string(UnaryOp op) {
    return op == UnaryOp::LogicalNot ? "!" : "~";
}

const char* to_string(BinaryOp op) {
    switch (op) {
    case BinaryOp::LogicalAnd: return "&&";
    case BinaryOp::LogicalOr: return "||";
    case BinaryOp::BitAnd: return "&";
    case BinaryOp::BitOr: return "|";
    case BinaryOp::BitXor: return "^";
    case BinaryOp::BitXnor: return "~^";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Shl: return "<<";
    case BinaryOp::Shr: return ">>";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    }
    return "?";
}

bool is_comparison(BinaryOp op) {
    switch (op) {
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Gt:
    case BinaryOp::Le:
    case BinaryOp::Ge: return true;
    default: return false;
    }
}

bool is_logical(BinaryOp op) {
    return op == BinaryOp::LogicalAnd || op == BinaryOp::LogicalOr;
}

bool is_shift(BinaryOp op) {
    return op == BinaryOp::Shl || op == BinaryOp::Shr;
}

bool is_arithmetic(BinaryOp op) {
    return op == BinaryOp::Add || op == BinaryOp::Sub;
}

const char* to_string(NetKind kind) {
    switch (kind) {
    case NetKind::Wire: return "wire";
    case NetKind::Reg: return "reg";
    case NetKind::Logic: return "logic";
    case NetKind::Integer: return "integer";
    }
    return "wire";
}

namespace {

ExprPtr wrap(Expr::Node node, SourcePos pos) {
    return std::make_shared<const Expr>(Expr{std::move(node), pos});
}

} // namespace

ExprPtr make_const(std::uint64_t value, std::uint32_t width, bool sized, SourcePos pos) {
    return wrap(Const{value, width, sized, 'd', sized}, pos);
}
ExprPtr make_ref(std::string name, ExprPtr index, SourcePos pos) {
    return wrap(SignalRef{std::move(name), std::move(index)}, pos);
}
ExprPtr make_bit(ExprPtr base, ExprPtr index, SourcePos pos) {
    return wrap(BitSelect{std::move(base), std::move(index)}, pos);
}
ExprPtr make_part(ExprPtr base, std::int64_t msb, std::int64_t lsb, SourcePos pos) {
    return wrap(PartSelect{std::move(base), msb, lsb}, pos);
}
ExprPtr make_unary(UnaryOp op, ExprPtr operand, SourcePos pos) {
    return wrap(Unary{op, std::move(operand)}, pos);
}
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
    return wrap(Binary{op, std::move(lhs), std::move(rhs)}, pos);
}
ExprPtr make_ternary(ExprPtr select, ExprPtr then_expr, ExprPtr else_expr, SourcePos pos) {
    return wrap(Ternary{std::move(select), std::move(then_expr), std::move(else_expr)}, pos);
}
ExprPtr make_concat(std::vector<ExprPtr> parts, SourcePos pos) {
    return wrap(Concat{std::move(parts)}, pos);
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b)
        return !a && !b;
    return equal(*a, *b);
}

bool equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index())
        return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const T& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Const>) {
                return x.value == y.value && x.width == y.width && x.sized == y.sized;
            } else if constexpr (std::is_same_v<T, SignalRef>) {
                return x.name == y.name && equal(x.index, y.index);
            } else if constexpr (std::is_same_v<T, BitSelect>) {
                return equal(x.base, y.base) && equal(x.index, y.index);
            } else if constexpr (std::is_same_v<T, PartSelect>) {
                return x.msb == y.msb && x.lsb == y.lsb && equal(x.base, y.base);
            } else if constexpr (std::is_same_v<T, Unary>) {
                return x.op == y.op && equal(x.operand, y.operand);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
            } else if constexpr (std::is_same_v<T, Ternary>) {
                return equal(x.select, y.select) && equal(x.then_expr, y.then_expr) &&
                       equal(x.else_expr, y.else_expr);
            } else {
                if (x.parts.size() != y.parts.size())
                    return false;
                for (std::size_t i = 0; i < x.parts.size(); ++i)
                    if (!equal(x.parts[i], y.parts[i]))
                        return false;
                return true;
            }
        },
        a.node);
}

std::optional<std::uint64_t> const_value(const Expr& e) {
    if (auto c = e.as<Const>())
        return c->value;
    auto b = e.as<Binary>();
    if (!b)
        return std::nullopt;
    auto l = const_value(*b->lhs);
    auto r = const_value(*b->rhs);
    if (!l || !r)
        return std::nullopt;
    switch (b->op) {
    case BinaryOp::Add: return *l + *r;
    case BinaryOp::Sub: return *l - *r;
    case BinaryOp::Shl: return *r >= 64 ? 0 : *l << *r;
    case BinaryOp::Shr: return *r >= 64 ? 0 : *l >> *r;
    case BinaryOp::BitAnd: return *l & *r;
    case BinaryOp::BitOr: return *l | *r;
    case BinaryOp::BitXor: return *l ^ *r;
    default: return std::nullopt;
    }
}

namespace {

bool equal(const LValue& a, const LValue& b) {
    return a.name == b.name && equal(a.index, b.index);
}

bool equal(const Stmt& a, const Stmt& b) {
    if (a.node.index() != b.node.index())
        return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const T& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Assign>) {
                return x.blocking == y.blocking && equal(x.target, y.target) && equal(x.value, y.value);
            } else if constexpr (std::is_same_v<T, IfChain>) {
                if (x.arms.size() != y.arms.size() || x.else_body.has_value() != y.else_body.has_value())
                    return false;
                for (std::size_t i = 0; i < x.arms.size(); ++i)
                    if (!equal(x.arms[i].cond, y.arms[i].cond) || !equal(x.arms[i].body, y.arms[i].body))
                        return false;
                return !x.else_body || equal(*x.else_body, *y.else_body);
            } else if constexpr (std::is_same_v<T, CaseStmt>) {
                if (!equal(x.select, y.select) || x.items.size() != y.items.size())
                    return false;
                for (std::size_t i = 0; i < x.items.size(); ++i) {
                    const auto& p = x.items[i];
                    const auto& q = y.items[i];
                    if (p.is_default != q.is_default || p.labels.size() != q.labels.size() ||
                        !equal(p.body, q.body))
                        return false;
                    for (std::size_t k = 0; k < p.labels.size(); ++k)
                        if (!equal(p.labels[k], q.labels[k]))
                            return false;
                }
                return true;
            } else {
                return x.var == y.var && equal(x.init, y.init) && equal(x.bound, y.bound) &&
                       equal(x.step, y.step) && equal(x.body, y.body);
            }
        },
        a.node);
}

} // namespace

bool equal(const StmtList& a, const StmtList& b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!equal(a[i], b[i]))
            return false;
    return true;
}

const PortDecl* SourceModule::find_port(std::string_view n) const {
    for (const auto& p : ports)
        if (p.name == n)
            return &p;
    return nullptr;
}

const NetDecl* SourceModule::find_net(std::string_view n) const {
    for (const auto& d : nets)
        if (d.name == n)
            return &d;
    return nullptr;
}

bool equal(const SourceModule& a, const SourceModule& b) {
    if (a.name != b.name || a.ports.size() != b.ports.size() || a.nets.size() != b.nets.size() ||
        a.items.size() != b.items.size())
        return false;
    for (std::size_t i = 0; i < a.ports.size(); ++i) {
        const auto& p = a.ports[i];
        const auto& q = b.ports[i];
        if (p.name != q.name || p.direction != q.direction || p.kind != q.kind || p.width != q.width ||
            p.msb != q.msb || p.lsb != q.lsb || p.is_clock != q.is_clock)
            return false;
    }
    for (std::size_t i = 0; i < a.nets.size(); ++i) {
        const auto& p = a.nets[i];
        const auto& q = b.nets[i];
        if (p.name != q.name || p.kind != q.kind || p.width != q.width || p.msb != q.msb ||
            p.lsb != q.lsb || p.array_length != q.array_length || p.array_first != q.array_first ||
            p.array_last != q.array_last)
            return false;
    }
    for (std::size_t i = 0; i < a.items.size(); ++i) {
        const auto& x = a.items[i].node;
        const auto& y = b.items[i].node;
        if (x.index() != y.index())
            return false;
        if (auto ca = std::get_if<ContinuousAssign>(&x)) {
            const auto& cb = std::get<ContinuousAssign>(y);
            if (ca->target.name != cb.target.name || !equal(ca->target.index, cb.target.index) ||
                !equal(ca->value, cb.value))
                return false;
        } else {
            const auto& ba = std::get<AlwaysBlock>(x);
            const auto& bb = std::get<AlwaysBlock>(y);
            if (ba.kind != bb.kind || ba.clock != bb.clock || ba.edges.size() != bb.edges.size() ||
                !equal(ba.body, bb.body))
                return false;
            for (std::size_t k = 0; k < ba.edges.size(); ++k)
                if (ba.edges[k].edge != bb.edges[k].edge || ba.edges[k].signal != bb.edges[k].signal)
                    return false;
        }
    }
    return true;
}

} // namespace patchq
