#pragma once

// Text form of torus observables.
//
//   expr  := term (('+' | '-') term)*
//   term  := number | [number '*'] ('cos' | 'sin') '(' '2pi' '*' '(' lin ')' ')'
//   lin   := [int] ('x' | 'p') (('+' | '-') [int] ('x' | 'p'))*
//
// or a raw mode list "k1,k2:re,im; k1,k2:re,im ...". "2*pi" is accepted for "2pi".

#include <cctype>
#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>

#include "qchaos/torus.hpp"

namespace qchaos {

class ParseError : public DomainError {
public:
    ParseError(const std::string& what, std::size_t pos)
        : DomainError("parse error at position " + std::to_string(pos) + ": " + what), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

namespace detail {

class ObservableParser {
public:
    explicit ObservableParser(std::string_view s) : s_(s) {}

    TorusObservable::Coeffs parse() {
        TorusObservable::Coeffs out;
        skip();
        if (at_end()) throw ParseError("empty observable", pos_);
        double sign = 1.0;
        if (peek() == '+' || peek() == '-') {
            sign = get() == '-' ? -1.0 : 1.0;
            skip();
        }
        term(sign, out);
        while (true) {
            skip();
            if (at_end()) break;
            const char c = peek();
            if (c != '+' && c != '-') throw ParseError(std::string("unexpected '") + c + "'", pos_);
            get();
            skip();
            term(c == '-' ? -1.0 : 1.0, out);
        }
        return out;
    }

    TorusObservable::Coeffs parse_modes() {
        TorusObservable::Coeffs out;
        while (true) {
            skip_sep();
            if (at_end()) break;
            const long long k1 = integer();
            expect(',');
            const long long k2 = integer();
            expect(':');
            const double re = number();
            expect(',');
            const double im = number();
            out[Mode{k1, k2}] += cplx(re, im);
        }
        if (out.empty()) throw ParseError("empty mode list", pos_);
        return out;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[pos_]; }
    char get() { return at_end() ? '\0' : s_[pos_++]; }
    void skip() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    void skip_sep() {
        while (!at_end() && (std::isspace(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == ';')) ++pos_;
    }
    void expect(char c) {
        skip();
        if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
        get();
        skip();
    }
    bool literal(std::string_view w) {
        if (s_.substr(pos_, w.size()) == w) {
            pos_ += w.size();
            return true;
        }
        return false;
    }

    double number() {
        skip();
        const char* b = s_.data() + pos_;
        const char* e = s_.data() + s_.size();
        double v = 0.0;
        const auto r = std::from_chars(b, e, v);
        if (r.ec != std::errc() || r.ptr == b) throw ParseError("expected a number", pos_);
        pos_ += static_cast<std::size_t>(r.ptr - b);
        skip();
        return v;
    }

    long long integer() {
        skip();
        const char* b = s_.data() + pos_;
        const char* e = s_.data() + s_.size();
        long long v = 0;
        const auto r = std::from_chars(b, e, v);
        if (r.ec != std::errc() || r.ptr == b) throw ParseError("expected an integer", pos_);
        pos_ += static_cast<std::size_t>(r.ptr - b);
        skip();
        return v;
    }

    void term(double sign, TorusObservable::Coeffs& out) {
        double coef = 1.0;
        if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
            coef = number();
            skip();
            if (peek() != '*') {
                out[Mode{0, 0}] += sign * coef;
                return;
            }
            get();
            skip();
        }
        const std::size_t fpos = pos_;
        bool is_cos;
        if (literal("cos"))
            is_cos = true;
        else if (literal("sin"))
            is_cos = false;
        else
            throw ParseError("expected a number, 'cos' or 'sin'", fpos);
        expect('(');
        if (!literal("2pi") && !literal("2*pi")) throw ParseError("expected '2pi'", pos_);
        expect('*');
        expect('(');
        const Mode k = linear();
        expect(')');
        expect(')');
        const double a = sign * coef;
        if (k == Mode{0, 0}) {
            if (is_cos) out[k] += a;
            return;
        }
        if (is_cos) {
            out[k] += a / 2.0;
            out[-k] += a / 2.0;
        } else {
            out[k] += a / (2.0 * kI);
            out[-k] -= a / (2.0 * kI);
        }
    }

    Mode linear() {
        Mode k{0, 0};
        bool seen_x = false, seen_p = false;
        bool first = true;
        while (true) {
            skip();
            long long sgn = 1;
            if (peek() == '+' || peek() == '-') {
                sgn = get() == '-' ? -1 : 1;
                skip();
            } else if (!first) {
                break;
            }
            long long c = 1;
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                c = integer();
                if (peek() == '*') {
                    get();
                    skip();
                }
            }
            const char v = get();
            if (v == 'x') {
                if (seen_x) throw ParseError("'x' repeated", pos_ - 1);
                seen_x = true;
                k.k1 = sgn * c;
            } else if (v == 'p') {
                if (seen_p) throw ParseError("'p' repeated", pos_ - 1);
                seen_p = true;
                k.k2 = sgn * c;
            } else {
                throw ParseError("expected 'x' or 'p'", pos_ - 1);
            }
            first = false;
        }
        return k;
    }
};

}  // namespace detail

/// Parses either grammar. With require_real a non-real result is rejected.
inline TorusObservable parse_observable(std::string_view text, bool require_real = false) {
    detail::ObservableParser p(text);
    const bool modes = text.find(':') != std::string_view::npos;
    TorusObservable::Coeffs c = modes ? p.parse_modes() : p.parse();
    TorusObservable probe(c, false);
    const bool real = probe.satisfies_reality(1e-12);
    if (require_real && !real) throw DomainError("observable is not real-valued");
    return TorusObservable(std::move(c), real);
}

/// Trigonometric form for real observables, mode list otherwise. parse_observable inverts it.
inline std::string serialize_observable(const TorusObservable& f) {
    char buf[128];
    std::string out;
    if (f.is_real()) {
        for (const auto& [k, c] : f.coeffs()) {
            const bool zero = k == Mode{0, 0};
            if (!zero && !(k.k1 > 0 || (k.k1 == 0 && k.k2 > 0))) continue;
            const auto add = [&](double a, const char* fn) {
                if (a == 0.0) return;
                if (!out.empty()) out += a < 0 ? " - " : " + ";
                else if (a < 0) out += "-";
                if (fn == nullptr) {
                    std::snprintf(buf, sizeof buf, "%.17g", std::abs(a));
                } else {
                    std::snprintf(buf, sizeof buf, "%.17g*%s(2pi*(%lldx%+lldp))", std::abs(a), fn, k.k1, k.k2);
                }
                out += buf;
            };
            if (zero) {
                add(c.real(), nullptr);
            } else {
                add(2.0 * c.real(), "cos");
                add(-2.0 * c.imag(), "sin");
            }
        }
        return out.empty() ? "0" : out;
    }
    for (const auto& [k, c] : f.coeffs()) {
        std::snprintf(buf, sizeof buf, "%s%lld,%lld:%.17g,%.17g", out.empty() ? "" : "; ", k.k1, k.k2, c.real(), c.imag());
        out += buf;
    }
    return out.empty() ? "0,0:0,0" : out;
}

}  // namespace qchaos
