#pragma once

#include <nestad/dual.hpp>

namespace nestad {

// Open a nested differentiation level: wrap x one level up, with the wrapped
// quantity as the inner variable of differentiation (inner derivative one).
template <DifferentialScalar S>
constexpr Dual<S> push(const S& x) {
    return {x, S(1.0)};
}

// Carry any other in-scope quantity into a nested level as an inner constant
// (inner derivative zero). Its own outer tangent stays intact in the value
// lane; lifting instead of re-pushing is what keeps outer and inner
// differentiation variables from mixing.
template <DifferentialScalar S>
constexpr Dual<S> inner_lift(const S& x) {
    return {x, S(0.0)};
}

// Close a level, keeping the primal result.
template <DifferentialScalar S>
constexpr S pop_value(const Dual<S>& x) {
    return x.value;
}

// Close a level, keeping the derivative with respect to the pushed variable.
template <DifferentialScalar S>
constexpr S pop_derivative(const Dual<S>& x) {
    return x.derivative;
}

// d/du g(u) at a scalar w that itself carries derivative information.
// Result: value g'(w.value), derivative g''(w.value) * w.derivative — the
// derivative of g taken inside the computation, with w's own tangent still
// flowing through the outer chain rule.
template <class G, DifferentialScalar S>
S nested_derivative(G&& g, const S& w) {
    return pop_derivative(g(push(w)));
}

// The four leaves of a depth-two scalar, named. For Y = g(push(Dual(v, d)))
// they hold (g(v), g'(v)*d, g'(v), g''(v)*d). A convenience read-out; the
// nested Dual itself stays the source of truth.
struct NestedReport {
    Real value_value;
    Real value_derivative;
    Real derivative_value;
    Real derivative_derivative;
};

constexpr NestedReport nested_report(const Dual<Dual<Real>>& x) {
    return {x.value.value, x.value.derivative, x.derivative.value, x.derivative.derivative};
}

// Value, first and second derivative of f at x0 from one depth-two pass.
struct SecondOrder {
    Real value;
    Real first;
    Real second;
};

template <class F>
SecondOrder second_derivative(F&& f, Real x0) {
    const Dual<Dual<Real>> y = f(push(seed(x0)));
    return {y.value.value, y.value.derivative, y.derivative.derivative};
}

}  // namespace nestad
