// Acceptance gate: every check prints one PASS/FAIL line; the exit code is
// the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nestad/cli.hpp>
#include <nestad/derivatives.hpp>
#include <nestad/eval.hpp>
#include <nestad/expr.hpp>
#include <nestad/nesting.hpp>

#include "support/ast_gen.hpp"
#include "support/checks.hpp"
#include "support/finite_difference.hpp"

using namespace nestad;
using testsupport::central1;
using testsupport::close;
using testsupport::same_bits;

namespace {

constexpr Real pi = std::numbers::pi;
const Real e = std::exp(1.0);

int criterion = 0;
int failures = 0;
std::string detail;

void report(bool ok, const char* name) {
    std::printf("%s  %d. %s\n", ok ? "PASS" : "FAIL", ++criterion, name);
    if (!ok) {
        ++failures;
        if (!detail.empty()) std::printf("      %s\n", detail.c_str());
    }
    detail.clear();
}

bool expect_close(Real got, Real want, Real tol, const char* label) {
    if (close(got, want, tol)) return true;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: got %.17g, want %.17g (tol %g)", label, got, want, tol);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    return false;
}

void note(const std::string& text) {
    if (!detail.empty()) detail += "; ";
    detail += text;
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// 1. one forward pass recovers value and derivative of x^2*cos(x) at pi
bool forward_pass() {
    const auto [v, d] = differentiate([](const auto& x) { return pow(x, 2.0) * cos(x); }, pi);
    bool ok = expect_close(v, -(pi * pi), 1e-12, "value");
    ok &= expect_close(d, -2.0 * pi, 1e-12, "derivative");
    return ok;
}

// 2. gradient of x1*x2 + sin(x1) at (pi, 2)
bool gradient_at_pi_2() {
    const std::vector<Real> x0{pi, 2.0};
    const auto [value, partials] =
        gradient([](std::span<const Dual<Real>> x) { return x[0] * x[1] + sin(x[0]); }, x0);
    bool ok = expect_close(value, 2.0 * pi, 1e-12, "value");
    ok &= expect_close(partials[0], 1.0, 1e-12, "d/dx1");
    ok &= expect_close(partials[1], pi, 1e-12, "d/dx2");
    return ok;
}

// 3. push leaf layout is (4, 10, 1, 0) bit for bit; pop returns the halves
bool push_pop_layout() {
    const auto x = push(make_dual(4.0, 10.0));
    bool ok = same_bits(x.value.value, 4.0) && same_bits(x.value.derivative, 10.0) &&
              same_bits(x.derivative.value, 1.0) && same_bits(x.derivative.derivative, 0.0);
    ok = ok && pop_value(x) == make_dual(4.0, 10.0);
    ok = ok && pop_derivative(x) == make_dual(1.0, 0.0);
    if (!ok) note("leaf layout or pop round-trip mismatch");
    return ok;
}

// 4. leaves of g(push(Dual(v,d))) are (g(v), g'(v)d, g'(v), g''(v)d)
bool analytic_catalog() {
    struct Entry {
        const char* name;
        Dual<Dual<Real>> (*apply)(const Dual<Dual<Real>>&);
        Real (*g0)(Real);
        Real (*g1)(Real);
        Real (*g2)(Real);
        Real lo, hi;
    };
    const Entry catalog[] = {
        {"u^2", [](const Dual<Dual<Real>>& u) { return u * u; },
         [](Real v) { return v * v; },
         [](Real v) { return 2.0 * v; },
         [](Real) { return 2.0; }, -3.0, 3.0},
        {"u^3", [](const Dual<Dual<Real>>& u) { return u * u * u; },
         [](Real v) { return v * v * v; },
         [](Real v) { return 3.0 * v * v; },
         [](Real v) { return 6.0 * v; }, -3.0, 3.0},
        {"exp(u^2)", [](const Dual<Dual<Real>>& u) { return exp(u * u); },
         [](Real v) { return std::exp(v * v); },
         [](Real v) { return 2.0 * v * std::exp(v * v); },
         [](Real v) { return (2.0 + 4.0 * v * v) * std::exp(v * v); }, -2.0, 2.0},
        {"sin(u)*u", [](const Dual<Dual<Real>>& u) { return sin(u) * u; },
         [](Real v) { return std::sin(v) * v; },
         [](Real v) { return std::sin(v) + v * std::cos(v); },
         [](Real v) { return 2.0 * std::cos(v) - v * std::sin(v); }, -3.0, 3.0},
        {"1/(1+u^2)",
         [](const Dual<Dual<Real>>& u) {
             return lift<Dual<Dual<Real>>>(1.0) / (lift<Dual<Dual<Real>>>(1.0) + u * u);
         },
         [](Real v) { return 1.0 / (1.0 + v * v); },
         [](Real v) {
             const Real w = 1.0 + v * v;
             return -2.0 * v / (w * w);
         },
         [](Real v) {
             const Real w = 1.0 + v * v;
             return (6.0 * v * v - 2.0) / (w * w * w);
         }, -3.0, 3.0},
    };

    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<Real> tangent(-3.0, 3.0);
    int bad = 0;
    for (const Entry& entry : catalog) {
        std::uniform_real_distribution<Real> point(entry.lo, entry.hi);
        for (int i = 0; i < 100; ++i) {
            const Real v = point(rng);
            const Real d = tangent(rng);
            const auto y = entry.apply(push(make_dual(v, d)));
            const bool ok = close(y.value.value, entry.g0(v), 1e-9) &&
                            close(y.value.derivative, entry.g1(v) * d, 1e-9) &&
                            close(y.derivative.value, entry.g1(v), 1e-9) &&
                            close(y.derivative.derivative, entry.g2(v) * d, 1e-9);
            if (!ok && ++bad == 1)
                note(std::string(entry.name) + " first mismatch at v=" + format_real(v) +
                     ", d=" + format_real(d));
        }
    }
    if (bad > 0) note(std::to_string(bad) + " of 500 samples out of tolerance");
    return bad == 0;
}

// 5. x^2 + d/du[exp(u^2)] at u=x^3: exact at x=1 via library and CLI;
//    overflow to Infinity at x=3
bool nested_pipeline() {
    const auto f = [](Real x0) {
        const Dual<Real> x = seed(x0);
        const Dual<Real> w2 = x * x * x;
        const Dual<Real> gdot =
            nested_derivative([](const auto& u) { return exp(u * u); }, w2);
        return x * x + gdot;
    };

    const Dual<Real> lib = f(1.0);
    bool ok = expect_close(lib.value, 1.0 + 2.0 * e, 1e-12, "library value");
    ok &= expect_close(lib.derivative, 2.0 + 18.0 * e, 1e-12, "library derivative");

    const CliResult cli_run =
        run_cli({"eval", "x^2 + D_at(exp(t^2), t, x^3)", "--at", "x=1", "--wrt", "x"});
    if (cli_run.code != 0) {
        note("cli exited " + std::to_string(cli_run.code));
        ok = false;
    }
    Real cv = 0.0;
    Real cd = 0.0;
    if (std::sscanf(cli_run.out.c_str(), "value = %lf\nd/dx = %lf", &cv, &cd) == 2) {
        ok &= expect_close(cv, 1.0 + 2.0 * e, 1e-12, "cli value");
        ok &= expect_close(cd, 2.0 + 18.0 * e, 1e-12, "cli derivative");
    } else {
        note("cli output not in the expected two-line shape");
        ok = false;
    }

    const Dual<Real> over = f(3.0);
    if (!std::isinf(over.value) || !std::isinf(over.derivative)) {
        note("x=3 did not overflow to Infinity");
        ok = false;
    }
    return ok;
}

// 6. AD vs central differences for every rule-table operation
bool finite_difference_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(401);
    int bad = 0;
    const auto agree = [&](auto&& dual_fn, auto&& real_fn, Real x) {
        const auto [v, d] = differentiate(dual_fn, x);
        (void)v;
        const Real fd = central1(real_fn, x);
        if (std::abs(d - fd) > 1e-6 * std::max(1.0, std::abs(fd))) ++bad;
    };

    std::uniform_real_distribution<Real> any(-3.0, 3.0);
    std::uniform_real_distribution<Real> positive(0.1, 3.0);
    std::uniform_real_distribution<Real> tan_dom(-1.4, 1.4);
    std::uniform_real_distribution<Real> expo(-2.0, 3.0);

    for (int i = 0; i < 1000; ++i) {
        // unary: neg, exp, log, sin, cos, tan, sqrt
        agree([](const auto& x) { return -x; }, [](Real x) { return -x; }, any(rng));
        agree([](const auto& x) { return exp(x); }, [](Real x) { return std::exp(x); },
              any(rng));
        agree([](const auto& x) { return log(x); }, [](Real x) { return std::log(x); },
              positive(rng));
        agree([](const auto& x) { return sin(x); }, [](Real x) { return std::sin(x); },
              any(rng));
        agree([](const auto& x) { return cos(x); }, [](Real x) { return std::cos(x); },
              any(rng));
        agree([](const auto& x) { return tan(x); }, [](Real x) { return std::tan(x); },
              tan_dom(rng));
        agree([](const auto& x) { return sqrt(x); }, [](Real x) { return std::sqrt(x); },
              positive(rng));

        // binary: +, -, *, / with the variable on each side, and both-active
        const Real c = any(rng);
        const Real sign = (i % 2 == 0) ? 1.0 : -1.0;
        const Real nz = sign * positive(rng);  // safely away from zero
        agree([c](const auto& x) { return x + c; }, [c](Real x) { return x + c; }, any(rng));
        agree([c](const auto& x) { return c + x; }, [c](Real x) { return c + x; }, any(rng));
        agree([c](const auto& x) { return x - c; }, [c](Real x) { return x - c; }, any(rng));
        agree([c](const auto& x) { return c - x; }, [c](Real x) { return c - x; }, any(rng));
        agree([c](const auto& x) { return x * c; }, [c](Real x) { return x * c; }, any(rng));
        agree([c](const auto& x) { return c * x; }, [c](Real x) { return c * x; }, any(rng));
        agree([](const auto& x) { return x * x; }, [](Real x) { return x * x; }, any(rng));
        agree([nz](const auto& x) { return x / nz; }, [nz](Real x) { return x / nz; },
              any(rng));
        agree([c](const auto& x) { return c / x; }, [c](Real x) { return c / x; }, nz);
        agree([](const auto& x) { return x / (x * x + 4.0); },
              [](Real x) { return x / (x * x + 4.0); }, any(rng));

        // pow with a real exponent over a positive base
        const Real k = expo(rng);
        agree([k](const auto& x) { return pow(x, k); }, [k](Real x) { return std::pow(x, k); },
              positive(rng));
    }

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (bad > 0) note(std::to_string(bad) + " samples out of tolerance");
    if (seconds >= 1.0) note("suite took " + std::to_string(seconds) + "s");
    return bad == 0 && seconds < 1.0;
}

// 7. x * D(x + y, y) differentiated w.r.t. x is exactly 1, not 2
bool no_perturbation_confusion() {
    const auto via_text =
        [] {
            Bindings b;
            b.define("x", 1.0);
            b.define("y", 7.0);
            return evaluate(parse("x * D(x + y, y)"), b, "x");
        }();
    bool ok = expect_close(*via_text.derivative, 1.0, 1e-12, "expression derivative");

    const Dual<Real> x = seed(1.0);
    const Dual<Real> y = lift<Dual<Real>>(7.0);
    const Dual<Real> inner =
        nested_derivative([&](const auto& u) { return inner_lift(x) + u; }, y);
    ok &= expect_close((x * inner).derivative, 1.0, 1e-12, "library derivative");
    return ok;
}

// 8. second derivative of sin at pi/2; third derivative of x^3 three levels up
bool higher_order() {
    const auto s = second_derivative([](const auto& x) { return sin(x); }, pi / 2.0);
    bool ok = expect_close(s.value, 1.0, 1e-12, "value");
    ok &= expect_close(s.first, 0.0, 1e-12, "first");
    ok &= expect_close(s.second, -1.0, 1e-12, "second");

    std::mt19937_64 rng(20240818);
    std::uniform_real_distribution<Real> dist(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) {
        const auto y = [](const auto& u) { return u * u * u; }(push(push(seed(dist(rng)))));
        if (!close(y.derivative.derivative.derivative, 6.0, 1e-9)) {
            note("third derivative drifted from 6");
            ok = false;
            break;
        }
    }
    return ok;
}

// 9. the four CLI goldens, byte for byte; parse inverts format on 500 trees
bool cli_goldens_and_round_trip() {
    bool ok = true;

    const auto expect_golden = [&](const std::vector<std::string>& args, int code,
                                   const std::string& out, const std::string& err,
                                   const char* label) {
        const CliResult r = run_cli(args);
        if (r.code != code || r.out != out || r.err != err) {
            note(std::string(label) + " diverged (exit " + std::to_string(r.code) + ")");
            ok = false;
        }
    };

    expect_golden({"eval", "x^2*cos(x)", "--at", "x=3.141592653589793", "--wrt", "x"}, 0,
                  "value = -9.869604401089358\nd/dx = -6.283185307179587\n", "", "golden 1");
    expect_golden({"eval", "x1*x2+sin(x1)", "--at", "x1=3.141592653589793", "--at", "x2=2",
                   "--grad", "x1,x2", "--json"},
                  0,
                  "{\"value\":6.283185307179586,\"derivatives\":"
                  "{\"x1\":1.0,\"x2\":3.141592653589793}}\n",
                  "", "golden 2");
    expect_golden({"eval", "x^2 + D_at(exp(t^2), t, x^3)", "--at", "x=1", "--wrt", "x"}, 0,
                  "value = 6.43656365691809\nd/dx = 50.92907291226281\n", "", "golden 3");
    expect_golden({"eval", "x +", "--at", "x=1"}, 2, "",
                  "nestad: syntax error at offset 3: expected an operand\n", "golden 4");

    std::mt19937_64 rng(599);
    int bad = 0;
    for (int i = 0; i < 500; ++i) {
        const Expr tree = testsupport::gen_expr(rng, 6);
        if (!structurally_equal(tree, parse(format(tree)))) ++bad;
    }
    if (bad > 0) {
        note(std::to_string(bad) + " of 500 trees failed the round trip");
        ok = false;
    }
    return ok;
}

}  // namespace

int main() {
    report(forward_pass(), "forward pass: value and derivative of x^2*cos(x) at pi");
    report(gradient_at_pi_2(), "gradient of x1*x2 + sin(x1) at (pi, 2)");
    report(push_pop_layout(), "push/pop leaf layout and round-trip");
    report(analytic_catalog(), "nested leaf semantics across the analytic catalog (100 samples per function)");
    report(nested_pipeline(), "nested-derivative pipeline at x=1, library and CLI; Infinity at x=3");
    report(finite_difference_suite(), "finite differences agree across the rule table (1000 samples per operation, under 1s)");
    report(no_perturbation_confusion(), "no perturbation confusion in x * D(x + y, y)");
    report(higher_order(), "second derivative of sin at pi/2; third derivative of x^3");
    report(cli_goldens_and_round_trip(), "CLI goldens byte-exact; parse inverts format on 500 generated trees");

    std::printf("\n%d of %d checks passed\n", criterion - failures, criterion);
    return failures;
}
