#include <nestad/eval.hpp>

#include <algorithm>
#include <type_traits>

namespace nestad {

namespace {

template <DifferentialScalar S>
struct Env {
    // names reference strings owned by the AST or the Bindings, both of
    // which outlive any evaluation pass
    std::vector<std::pair<std::string_view, S>> vars;

    const S* find(std::string_view name) const {
        for (const auto& [n, v] : vars)
            if (n == name) return &v;
        return nullptr;
    }
};

// the same scope with all derivative information stripped
template <DifferentialScalar S>
Env<Real> innermost(const Env<S>& env) {
    Env<Real> flat;
    flat.vars.reserve(env.vars.size());
    for (const auto& [n, v] : env.vars) flat.vars.emplace_back(n, innermost_value(v));
    return flat;
}

[[noreturn]] void fail_unbound(const std::string& message) {
    throw EvalError(EvalError::Kind::unbound_variable, message);
}

template <DifferentialScalar S>
S apply_unary(UnaryFn fn, const S& a) {
    switch (fn) {
        case UnaryFn::neg: return -a;
        case UnaryFn::exp: return exp(a);
        case UnaryFn::log: return log(a);
        case UnaryFn::sin: return sin(a);
        case UnaryFn::cos: return cos(a);
        case UnaryFn::tan: return tan(a);
        case UnaryFn::sqrt: return sqrt(a);
    }
    throw std::logic_error("unhandled unary function");
}

template <DifferentialScalar S>
S apply_binary(BinaryOp op, const S& a, const S& b) {
    switch (op) {
        case BinaryOp::add: return a + b;
        case BinaryOp::sub: return a - b;
        case BinaryOp::mul: return a * b;
        case BinaryOp::div: return a / b;
    }
    throw std::logic_error("unhandled binary operator");
}

template <DifferentialScalar S, int Budget>
S eval_node(const Expr& e, const Env<S>& env) {
    return std::visit(
        [&](const auto& node) -> S {
            using N = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<N, Number>) {
                return lift<S>(node.value);
            } else if constexpr (std::is_same_v<N, Var>) {
                if (const S* v = env.find(node.name)) return *v;
                fail_unbound("unbound variable '" + node.name + "'");
            } else if constexpr (std::is_same_v<N, Unary>) {
                return apply_unary(node.fn, eval_node<S, Budget>(*node.child, env));
            } else if constexpr (std::is_same_v<N, Binary>) {
                const S a = eval_node<S, Budget>(*node.left, env);
                const S b = eval_node<S, Budget>(*node.right, env);
                return apply_binary(node.op, a, b);
            } else if constexpr (std::is_same_v<N, Pow>) {
                const S base = eval_node<S, Budget>(*node.base, env);
                // the exponent is a real constant: no derivative information
                // flows through it, so it is evaluated derivative-free
                const Real k = eval_node<Real, Budget>(*node.exponent, innermost(env));
                return pow(base, k);
            } else {  // Deriv
                if constexpr (Budget <= 0) {
                    throw EvalError(EvalError::Kind::nesting_too_deep,
                                    "D nesting exceeds the supported depth of " +
                                        std::to_string(max_deriv_nesting));
                } else {
                    S point;
                    if (node.at) {
                        point = eval_node<S, Budget>(*node.at, env);
                    } else if (const S* v = env.find(node.var)) {
                        point = *v;
                    } else {
                        fail_unbound("cannot differentiate with respect to '" + node.var +
                                     "': variable is not in scope");
                    }
                    // the differentiation variable enters pushed; every other
                    // in-scope quantity crosses as an inner constant
                    Env<Dual<S>> inner;
                    inner.vars.reserve(env.vars.size() + 1);
                    for (const auto& [n, v] : env.vars)
                        if (n != node.var) inner.vars.emplace_back(n, inner_lift(v));
                    inner.vars.emplace_back(node.var, push(point));
                    return pop_derivative(eval_node<Dual<S>, Budget - 1>(*node.body, inner));
                }
            }
        },
        e.node);
}

void check_nesting(const Expr& e) {
    const int depth = deriv_nesting(e);
    if (depth > max_deriv_nesting)
        throw EvalError(EvalError::Kind::nesting_too_deep,
                        "expression nests D " + std::to_string(depth) +
                            " levels deep; the supported maximum is " +
                            std::to_string(max_deriv_nesting));
}

template <DifferentialScalar S>
Env<S> bind_all(const Bindings& b, std::string_view seeded, const S& seeded_value) {
    Env<S> env;
    env.vars.reserve(b.entries().size());
    for (const auto& [n, v] : b.entries())
        env.vars.emplace_back(n, n == seeded ? seeded_value : lift<S>(v));
    return env;
}

}  // namespace

EvalError::EvalError(Kind kind_, const std::string& what_)
    : std::runtime_error(what_), kind(kind_) {}

void Bindings::define(std::string name, Real value) {
    if (find(name)) throw std::invalid_argument("duplicate binding for '" + name + "'");
    entries_.emplace_back(std::move(name), value);
}

const Real* Bindings::find(std::string_view name) const {
    for (const auto& [n, v] : entries_)
        if (n == name) return &v;
    return nullptr;
}

int deriv_nesting(const Expr& e) {
    return std::visit(
        [](const auto& node) -> int {
            using N = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<N, Number> || std::is_same_v<N, Var>) {
                return 0;
            } else if constexpr (std::is_same_v<N, Unary>) {
                return deriv_nesting(*node.child);
            } else if constexpr (std::is_same_v<N, Binary>) {
                return std::max(deriv_nesting(*node.left), deriv_nesting(*node.right));
            } else if constexpr (std::is_same_v<N, Pow>) {
                return std::max(deriv_nesting(*node.base), deriv_nesting(*node.exponent));
            } else {
                // the point expression evaluates outside the nested level
                return std::max(1 + deriv_nesting(*node.body),
                                node.at ? deriv_nesting(*node.at) : 0);
            }
        },
        e.node);
}

Evaluation evaluate(const Expr& e, const Bindings& b, std::optional<std::string_view> wrt) {
    check_nesting(e);
    if (!wrt) {
        const Env<Real> env = bind_all<Real>(b, {}, {});
        return {eval_node<Real, max_deriv_nesting>(e, env), std::nullopt};
    }
    const Real* x0 = b.find(*wrt);
    if (!x0) fail_unbound("unbound variable '" + std::string(*wrt) + "' (differentiation target)");
    const Env<Dual<Real>> env = bind_all<Dual<Real>>(b, *wrt, seed(*x0));
    const Dual<Real> y = eval_node<Dual<Real>, max_deriv_nesting>(e, env);
    return {y.value, y.derivative};
}

SecondOrder evaluate_second(const Expr& e, const Bindings& b, std::string_view wrt) {
    check_nesting(e);
    const Real* x0 = b.find(wrt);
    if (!x0) fail_unbound("unbound variable '" + std::string(wrt) + "' (differentiation target)");
    const auto f = [&](const auto& x) {
        using S = std::decay_t<decltype(x)>;
        const Env<S> env = bind_all<S>(b, wrt, x);
        return eval_node<S, max_deriv_nesting>(e, env);
    };
    return second_derivative(f, *x0);
}

}  // namespace nestad
