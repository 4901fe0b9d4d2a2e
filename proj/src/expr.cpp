#include <nestad/expr.hpp>

#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <utility>

namespace nestad {

namespace {

std::string describe(std::size_t offset, const std::string& detail) {
    return "syntax error at offset " + std::to_string(offset) + ": " + detail;
}

constexpr bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

constexpr bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct Parser {
    std::string_view src;
    std::size_t pos = 0;

    [[noreturn]] void fail(std::size_t at, const std::string& detail) const {
        throw ParseError(at, detail);
    }

    void skip_ws() {
        while (pos < src.size() &&
               (src[pos] == ' ' || src[pos] == '\t' || src[pos] == '\n' || src[pos] == '\r'))
            ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        skip_ws();
        if (pos >= src.size() || src[pos] != c) fail(pos, std::string("expected ") + what);
        ++pos;
    }

    // expr := term (('+' | '-') term)*
    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            if (eat('+'))
                e = Expr{Binary{BinaryOp::add, make_expr(std::move(e)), make_expr(parse_term())}};
            else if (eat('-'))
                e = Expr{Binary{BinaryOp::sub, make_expr(std::move(e)), make_expr(parse_term())}};
            else
                return e;
        }
    }

    // term := unary (('*' | '/') unary)*
    Expr parse_term() {
        Expr e = parse_unary();
        for (;;) {
            if (eat('*'))
                e = Expr{Binary{BinaryOp::mul, make_expr(std::move(e)), make_expr(parse_unary())}};
            else if (eat('/'))
                e = Expr{Binary{BinaryOp::div, make_expr(std::move(e)), make_expr(parse_unary())}};
            else
                return e;
        }
    }

    // unary := '-' unary | power
    Expr parse_unary() {
        if (eat('-')) return Expr{Unary{UnaryFn::neg, make_expr(parse_unary())}};
        return parse_power();
    }

    // power := atom ('^' unary)?   — right-associative, binds tighter than
    // unary minus on the left but admits one on the right ("2^-3")
    Expr parse_power() {
        Expr base = parse_atom();
        if (eat('^'))
            return Expr{Pow{make_expr(std::move(base)), make_expr(parse_unary())}};
        return base;
    }

    Expr parse_atom() {
        skip_ws();
        if (pos >= src.size()) fail(pos, "expected an operand");
        const char c = src[pos];
        if (c == '(') {
            ++pos;
            Expr e = parse_expr();
            expect(')', "')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (ident_start(c)) return parse_ident();
        fail(pos, "expected an operand");
    }

    Expr parse_number() {
        const char* first = src.data() + pos;
        const char* last = src.data() + src.size();
        Real v{};
        const auto [p, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || p == first) fail(pos, "malformed number");
        pos = static_cast<std::size_t>(p - src.data());
        return Expr{Number{v}};
    }

    std::string scan_ident() {
        const std::size_t start = pos;
        while (pos < src.size() && ident_char(src[pos])) ++pos;
        return std::string(src.substr(start, pos - start));
    }

    std::string parse_var_name() {
        skip_ws();
        if (pos >= src.size() || !ident_start(src[pos])) fail(pos, "expected a variable name");
        return scan_ident();
    }

    Expr parse_ident() {
        const std::size_t start = pos;
        std::string name = scan_ident();
        if (!eat('(')) return Expr{Var{std::move(name)}};

        if (name == "D" || name == "D_at") {
            Expr body = parse_expr();
            expect(',', "','");
            std::string var = parse_var_name();
            ExprPtr at;
            if (name == "D_at") {
                expect(',', "','");
                at = make_expr(parse_expr());
            }
            expect(')', "')'");
            return Expr{Deriv{make_expr(std::move(body)), std::move(var), std::move(at)}};
        }

        static constexpr std::array<std::pair<std::string_view, UnaryFn>, 6> fns{{
            {"exp", UnaryFn::exp},
            {"log", UnaryFn::log},
            {"sin", UnaryFn::sin},
            {"cos", UnaryFn::cos},
            {"tan", UnaryFn::tan},
            {"sqrt", UnaryFn::sqrt},
        }};
        for (const auto& [fn_name, fn] : fns) {
            if (name == fn_name) {
                Expr arg = parse_expr();
                expect(')', "')'");
                return Expr{Unary{fn, make_expr(std::move(arg))}};
            }
        }
        fail(start, "unknown function '" + name + "'");
    }
};

constexpr char op_char(BinaryOp op) {
    switch (op) {
        case BinaryOp::add: return '+';
        case BinaryOp::sub: return '-';
        case BinaryOp::mul: return '*';
        case BinaryOp::div: return '/';
    }
    return '?';
}

constexpr const char* fn_name(UnaryFn fn) {
    switch (fn) {
        case UnaryFn::neg: return "-";
        case UnaryFn::exp: return "exp";
        case UnaryFn::log: return "log";
        case UnaryFn::sin: return "sin";
        case UnaryFn::cos: return "cos";
        case UnaryFn::tan: return "tan";
        case UnaryFn::sqrt: return "sqrt";
    }
    return "?";
}

void format_into(const Expr& e, std::string& out) {
    std::visit(
        [&](const auto& node) {
            using N = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<N, Number>) {
                out += format_real(node.value);
            } else if constexpr (std::is_same_v<N, Var>) {
                out += node.name;
            } else if constexpr (std::is_same_v<N, Unary>) {
                if (node.fn == UnaryFn::neg) {
                    out += "(-";
                    format_into(*node.child, out);
                    out += ')';
                } else {
                    out += fn_name(node.fn);
                    out += '(';
                    format_into(*node.child, out);
                    out += ')';
                }
            } else if constexpr (std::is_same_v<N, Binary>) {
                out += '(';
                format_into(*node.left, out);
                out += ' ';
                out += op_char(node.op);
                out += ' ';
                format_into(*node.right, out);
                out += ')';
            } else if constexpr (std::is_same_v<N, Pow>) {
                out += '(';
                format_into(*node.base, out);
                out += " ^ ";
                format_into(*node.exponent, out);
                out += ')';
            } else {
                out += node.at ? "D_at(" : "D(";
                format_into(*node.body, out);
                out += ", ";
                out += node.var;
                if (node.at) {
                    out += ", ";
                    format_into(*node.at, out);
                }
                out += ')';
            }
        },
        e.node);
}

bool same_bits(Real a, Real b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace

ParseError::ParseError(std::size_t offset_, const std::string& detail)
    : std::runtime_error(describe(offset_, detail)), offset(offset_) {}

Expr parse(std::string_view source) {
    Parser p{source};
    Expr e = p.parse_expr();
    p.skip_ws();
    if (p.pos != source.size()) p.fail(p.pos, "unexpected trailing input");
    return e;
}

std::string format(const Expr& e) {
    std::string out;
    format_into(e, out);
    return out;
}

std::string format_real(Real x) {
    if (std::isnan(x)) return "NaN";
    if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& na) {
            using N = std::decay_t<decltype(na)>;
            const auto& nb = std::get<N>(b.node);
            if constexpr (std::is_same_v<N, Number>) {
                return same_bits(na.value, nb.value);
            } else if constexpr (std::is_same_v<N, Var>) {
                return na.name == nb.name;
            } else if constexpr (std::is_same_v<N, Unary>) {
                return na.fn == nb.fn && structurally_equal(*na.child, *nb.child);
            } else if constexpr (std::is_same_v<N, Binary>) {
                return na.op == nb.op && structurally_equal(*na.left, *nb.left) &&
                       structurally_equal(*na.right, *nb.right);
            } else if constexpr (std::is_same_v<N, Pow>) {
                return structurally_equal(*na.base, *nb.base) &&
                       structurally_equal(*na.exponent, *nb.exponent);
            } else {
                if (na.var != nb.var) return false;
                if (static_cast<bool>(na.at) != static_cast<bool>(nb.at)) return false;
                if (na.at && !structurally_equal(*na.at, *nb.at)) return false;
                return structurally_equal(*na.body, *nb.body);
            }
        },
        a.node);
}

}  // namespace nestad
