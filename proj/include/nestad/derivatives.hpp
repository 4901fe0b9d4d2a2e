#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <nestad/dual.hpp>

namespace nestad {

// f(x0) and f'(x0) in one forward pass: seed x0, evaluate, read both lanes.
template <class F>
std::pair<Real, Real> differentiate(F&& f, Real x0) {
    const Dual<Real> y = f(seed(x0));
    return {y.value, y.derivative};
}

// f(x0) and all n partials, one forward pass per partial: pass i seeds
// coordinate i with derivative 1 and lifts every other coordinate with 0.
template <class F>
std::pair<Real, std::vector<Real>> gradient(F&& f, std::span<const Real> x0) {
    assert(!x0.empty());
    std::vector<Dual<Real>> x(x0.size());
    std::vector<Real> partials(x0.size());
    Real value = 0.0;
    for (std::size_t i = 0; i < x0.size(); ++i) {
        for (std::size_t j = 0; j < x0.size(); ++j)
            x[j] = (i == j) ? seed(x0[j]) : lift<Dual<Real>>(x0[j]);
        const Dual<Real> y = f(std::span<const Dual<Real>>(x));
        if (i == 0) value = y.value;
        partials[i] = y.derivative;
    }
    return {value, std::move(partials)};
}

}  // namespace nestad
