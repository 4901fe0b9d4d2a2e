#include <nestad/cli.hpp>

#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <nestad/eval.hpp>
#include <nestad/expr.hpp>

namespace nestad::cli {

namespace {

// finite numbers stay numbers; NaN and infinities become JSON strings
nlohmann::ordered_json json_number(Real x) {
    if (std::isfinite(x)) return x;
    return format_real(x);
}

std::optional<Real> parse_real(std::string_view text) {
    Real v{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last) return std::nullopt;
    return v;
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t at = text.find(sep, start);
        if (at == std::string_view::npos) {
            parts.emplace_back(text.substr(start));
            return parts;
        }
        parts.emplace_back(text.substr(start, at - start));
        start = at + 1;
    }
}

int usage_error(std::ostream& err, const std::string& message) {
    err << "nestad: " << message << '\n';
    return 2;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"evaluate expressions and their derivatives", "nestad"};
    app.require_subcommand(1);

    std::string expr_text;
    std::vector<std::string> at;
    std::string wrt;
    std::string grad;
    bool second = false;
    bool json_out = false;

    CLI::App* eval_cmd =
        app.add_subcommand("eval", "evaluate an expression, optionally with derivatives");
    eval_cmd->add_option("expr", expr_text, "expression to evaluate")->required();
    eval_cmd->add_option("--at", at, "bind a variable, name=value (repeatable)")
        ->type_size(1)
        ->allow_extra_args(false);
    eval_cmd->add_option("--wrt", wrt, "differentiate with respect to this variable");
    eval_cmd->add_option("--grad", grad, "comma-separated variable list for a gradient");
    eval_cmd->add_flag("--second", second, "also report the second derivative (requires --wrt)");
    eval_cmd->add_flag("--json", json_out, "emit one JSON object instead of text lines");

    try {
        // CLI11 takes the argument vector reversed and without the program name
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    if (!wrt.empty() && !grad.empty())
        return usage_error(err, "--wrt and --grad are mutually exclusive");
    if (second && wrt.empty()) return usage_error(err, "--second requires --wrt");

    Bindings bindings;
    for (const std::string& item : at) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            return usage_error(err, "--at expects name=value, got '" + item + "'");
        std::string name = item.substr(0, eq);
        const std::string value_text = item.substr(eq + 1);
        const std::optional<Real> value = parse_real(value_text);
        if (!value)
            return usage_error(err, "--at value for '" + name + "' is not a number: '" +
                                        value_text + "'");
        if (bindings.find(name))
            return usage_error(err, "duplicate --at binding for '" + name + "'");
        bindings.define(std::move(name), *value);
    }

    std::vector<std::string> grad_vars;
    if (!grad.empty()) {
        grad_vars = split(grad, ',');
        for (const std::string& v : grad_vars) {
            if (v.empty()) return usage_error(err, "--grad contains an empty variable name");
            if (std::count(grad_vars.begin(), grad_vars.end(), v) > 1)
                return usage_error(err, "--grad lists '" + v + "' more than once");
        }
    }

    std::optional<Expr> expr;
    try {
        expr = parse(expr_text);
    } catch (const ParseError& pe) {
        err << "nestad: " << pe.what() << '\n';
        return 2;
    }

    Real value = 0.0;
    std::vector<std::pair<std::string, Real>> derivatives;  // (variable, d/d variable)
    std::optional<Real> second_value;
    try {
        if (!grad_vars.empty()) {
            for (std::size_t i = 0; i < grad_vars.size(); ++i) {
                const Evaluation r = evaluate(*expr, bindings, grad_vars[i]);
                if (i == 0) value = r.value;
                derivatives.emplace_back(grad_vars[i], *r.derivative);
            }
        } else if (!wrt.empty()) {
            if (second) {
                const SecondOrder s = evaluate_second(*expr, bindings, wrt);
                value = s.value;
                derivatives.emplace_back(wrt, s.first);
                second_value = s.second;
            } else {
                const Evaluation r = evaluate(*expr, bindings, wrt);
                value = r.value;
                derivatives.emplace_back(wrt, *r.derivative);
            }
        } else {
            value = evaluate(*expr, bindings).value;
        }
    } catch (const EvalError& ee) {
        err << "nestad: " << ee.what() << '\n';
        return ee.kind == EvalError::Kind::unbound_variable ? 3 : 2;
    }

    if (json_out) {
        nlohmann::ordered_json j;
        j["value"] = json_number(value);
        if (!derivatives.empty()) {
            nlohmann::ordered_json d = nlohmann::ordered_json::object();
            for (const auto& [name, x] : derivatives) d[name] = json_number(x);
            j["derivatives"] = std::move(d);
        }
        if (second_value) j["second"] = json_number(*second_value);
        out << j.dump() << '\n';
    } else {
        out << "value = " << format_real(value) << '\n';
        for (const auto& [name, x] : derivatives)
            out << "d/d" << name << " = " << format_real(x) << '\n';
        if (second_value) out << "d2/d" << wrt << "2 = " << format_real(*second_value) << '\n';
    }
    return 0;
}

}  // namespace nestad::cli
