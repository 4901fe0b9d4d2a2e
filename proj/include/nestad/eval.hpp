#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nestad/expr.hpp>
#include <nestad/nesting.hpp>

namespace nestad {

// Evaluation failure: a variable used (or differentiated) without a binding,
// or an expression whose lexical D-nesting exceeds the supported depth.
struct EvalError : std::runtime_error {
    enum class Kind { unbound_variable, nesting_too_deep };
    Kind kind;
    EvalError(Kind kind_, const std::string& what_);
};

// Ordered name -> value map. Names are unique; looking up an unbound name is
// reported at the use site, never defaulted.
class Bindings {
public:
    void define(std::string name, Real value);  // throws std::invalid_argument on duplicate
    const Real* find(std::string_view name) const;
    const std::vector<std::pair<std::string, Real>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, Real>> entries_;
};

struct Evaluation {
    Real value{};
    std::optional<Real> derivative;
};

// Evaluator depth budget: an expression may nest D lexically at most this
// many levels; each level evaluates one step higher up the scalar tower.
inline constexpr int max_deriv_nesting = 3;

// Largest count of lexically nested D nodes in e (0 for D-free); the point
// expression of D_at sits outside its D's nested level and does not add to it.
int deriv_nesting(const Expr& e);

// e at b; with wrt also d(e)/d(wrt). Each D node pushes its variable one
// nesting level (inner derivative one) and carries every other in-scope
// quantity across as an inner constant, then takes pop_derivative.
Evaluation evaluate(const Expr& e, const Bindings& b,
                    std::optional<std::string_view> wrt = std::nullopt);

// Value, first and second derivative of e with respect to wrt at b, computed
// by second_derivative over the generic evaluator (one depth-two pass).
SecondOrder evaluate_second(const Expr& e, const Bindings& b, std::string_view wrt);

}  // namespace nestad
