#pragma once

#include <cmath>
#include <concepts>
#include <ostream>
#include <type_traits>

namespace nestad {

using Real = double;

// Make the real-valued elementary functions visible to unqualified calls, so
// the same spelling works for Real operands and for Dual operands (via ADL).
using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using std::tan;

constexpr Real value_of(Real x) { return x; }
constexpr Real derivative_of(Real) { return 0.0; }
constexpr Real innermost_value(Real x) { return x; }

template <class S>
struct Dual;

template <class T>
inline constexpr bool is_dual_v = false;
template <class S>
inline constexpr bool is_dual_v<Dual<S>> = true;

// Real is depth 0, Dual<Real> depth 1, Dual<Dual<Real>> depth 2, ...
template <class T>
inline constexpr int scalar_depth_v = 0;
template <class S>
inline constexpr int scalar_depth_v<Dual<S>> = scalar_depth_v<S> + 1;

// A (value, derivative) pair; the derivative lane tracks the seeded variable
// through every operation. S may itself be a Dual, which is what gives
// structurally nested derivatives: each wrapping adds one differentiation
// level, and the levels cannot mix because they have different types.
template <class S>
struct Dual {
    using value_type = S;

    S value{};
    S derivative{};

    constexpr Dual() = default;
    constexpr Dual(const S& v, const S& d) : value(v), derivative(d) {}

    // a real constant embeds with zero derivative at every level
    constexpr Dual(Real c) : value(c), derivative(0.0) {}

    friend constexpr Dual operator+(const Dual& a, const Dual& b) {
        return {a.value + b.value, a.derivative + b.derivative};
    }
    friend constexpr Dual operator-(const Dual& a, const Dual& b) {
        return {a.value - b.value, a.derivative - b.derivative};
    }
    // product rule, (ab)' = a'b + ab'
    friend constexpr Dual operator*(const Dual& a, const Dual& b) {
        return {a.value * b.value, a.derivative * b.value + a.value * b.derivative};
    }
    // quotient rule, (a/b)' = (a'b - ab') / b^2
    friend constexpr Dual operator/(const Dual& a, const Dual& b) {
        return {a.value / b.value,
                (a.derivative * b.value - a.value * b.derivative) / (b.value * b.value)};
    }
    friend constexpr Dual operator-(const Dual& a) { return {-a.value, -a.derivative}; }
    friend constexpr Dual operator+(const Dual& a) { return a; }

    friend constexpr bool operator==(const Dual&, const Dual&) = default;

    friend Dual exp(const Dual& a) {
        const S t = exp(a.value);
        return {t, t * a.derivative};
    }
    friend Dual log(const Dual& a) { return {log(a.value), a.derivative / a.value}; }
    friend Dual sin(const Dual& a) { return {sin(a.value), cos(a.value) * a.derivative}; }
    friend Dual cos(const Dual& a) { return {cos(a.value), (-sin(a.value)) * a.derivative}; }
    friend Dual tan(const Dual& a) {
        const S t = tan(a.value);
        return {t, (S(1.0) + t * t) * a.derivative};
    }
    friend Dual sqrt(const Dual& a) {
        const S r = sqrt(a.value);
        return {r, a.derivative / (S(2.0) * r)};
    }
    // power with a real, derivative-free exponent: (a^k)' = k a^(k-1) a'
    friend Dual pow(const Dual& a, Real k) {
        return {pow(a.value, k), S(k) * pow(a.value, k - 1.0) * a.derivative};
    }

    friend std::ostream& operator<<(std::ostream& os, const Dual& a) {
        return os << '(' << a.value << ", " << a.derivative << ')';
    }
};

template <class S>
constexpr Dual<S> make_dual(const S& v, const S& d) {
    return {v, d};
}

template <class S>
constexpr S value_of(const Dual<S>& x) {
    return x.value;
}

template <class S>
constexpr S derivative_of(const Dual<S>& x) {
    return x.derivative;
}

template <class S>
constexpr Real innermost_value(const Dual<S>& x) {
    return innermost_value(x.value);
}

// mark x as the variable of differentiation for a forward pass
constexpr Dual<Real> seed(Real x) { return {x, 1.0}; }

// embed a real constant at any scalar depth with zero derivative throughout
template <class S>
constexpr S lift(Real c) {
    return S(c);
}

// The contract generic differentiable code is written against: arithmetic,
// negation, the elementary set, embedding of real constants, and component
// access. Real satisfies it, and Dual<S> satisfies it whenever S does, so one
// function body serves every nesting depth.
template <class S>
concept DifferentialScalar = requires(const S a, const S b, const Real c) {
    { a + b } -> std::same_as<S>;
    { a - b } -> std::same_as<S>;
    { a * b } -> std::same_as<S>;
    { a / b } -> std::same_as<S>;
    { -a } -> std::same_as<S>;
    { exp(a) } -> std::same_as<S>;
    { log(a) } -> std::same_as<S>;
    { sin(a) } -> std::same_as<S>;
    { cos(a) } -> std::same_as<S>;
    { tan(a) } -> std::same_as<S>;
    { sqrt(a) } -> std::same_as<S>;
    { pow(a, c) } -> std::same_as<S>;
    requires std::constructible_from<S, Real>;
    { value_of(a) };
    { derivative_of(a) };
};

}  // namespace nestad
