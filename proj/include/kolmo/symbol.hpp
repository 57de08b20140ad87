#pragma once

// Symbols polynomial in z and conj(z), with a parser for the small
// expression language the command line accepts:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary ('*' unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?
//   primary := number | 'i' | 'z' | 'w' | '|z|^2' | 'conj' '(' expr ')' | '(' expr ')'
//
// 'w' is accepted as a synonym for 'z'. |z| itself is not a polynomial, so it
// must be followed by an even power.

#include <kolmo/errors.hpp>
#include <kolmo/numerics.hpp>

#include <cctype>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <utility>

namespace kolmo {

/// sum c_{ab} z^a conj(z)^b
class PolySymbol
{
public:
    using Key = std::pair<int, int>;

    PolySymbol() = default;

    static PolySymbol constant(Complex c)
    {
        PolySymbol s;
        s.add(0, 0, c);
        return s;
    }

    /// c z^a conj(z)^b
    static PolySymbol monomial(int a, int b, Complex c = 1.0)
    {
        if (a < 0 || b < 0)
            throw ParameterError("PolySymbol: exponents must be >= 0");
        PolySymbol s;
        s.add(a, b, c);
        return s;
    }

    void add(int a, int b, Complex c)
    {
        if (c == Complex(0.0))
            return;
        auto &v = terms_[{a, b}];
        v += c;
        if (v == Complex(0.0))
            terms_.erase({a, b});
    }

    const std::map<Key, Complex> &terms() const { return terms_; }

    int degree() const
    {
        int d = 0;
        for (const auto &[k, c] : terms_)
            d = std::max(d, k.first + k.second);
        return d;
    }

    /// Largest |a - b|: the angular bandwidth.
    int bandwidth() const
    {
        int d = 0;
        for (const auto &[k, c] : terms_)
            d = std::max(d, std::abs(k.first - k.second));
        return d;
    }

    bool is_real() const
    {
        for (const auto &[k, c] : terms_) {
            auto it = terms_.find({k.second, k.first});
            if (it == terms_.end() || std::abs(it->second - std::conj(c)) > 1e-15 * std::abs(c))
                return false;
        }
        return true;
    }

    bool is_radial() const
    {
        for (const auto &[k, c] : terms_)
            if (k.first != k.second)
                return false;
        return true;
    }

    Complex operator()(Complex z) const
    {
        Complex acc = 0.0;
        const Complex zb = std::conj(z);
        for (const auto &[k, c] : terms_)
            acc += c * detail_pow(z, k.first) * detail_pow(zb, k.second);
        return acc;
    }

    PolySymbol conj() const
    {
        PolySymbol s;
        for (const auto &[k, c] : terms_)
            s.add(k.second, k.first, std::conj(c));
        return s;
    }

    PolySymbol operator+(const PolySymbol &o) const
    {
        PolySymbol s = *this;
        for (const auto &[k, c] : o.terms_)
            s.add(k.first, k.second, c);
        return s;
    }

    PolySymbol operator-() const
    {
        PolySymbol s;
        for (const auto &[k, c] : terms_)
            s.add(k.first, k.second, -c);
        return s;
    }

    PolySymbol operator-(const PolySymbol &o) const { return *this + (-o); }

    PolySymbol operator*(const PolySymbol &o) const
    {
        PolySymbol s;
        for (const auto &[k1, c1] : terms_)
            for (const auto &[k2, c2] : o.terms_)
                s.add(k1.first + k2.first, k1.second + k2.second, c1 * c2);
        return s;
    }

    PolySymbol pow(int e) const
    {
        if (e < 0)
            throw ParameterError("PolySymbol: negative power");
        PolySymbol out = constant(1.0);
        for (int i = 0; i < e; ++i)
            out = out * *this;
        return out;
    }

    std::string to_string() const
    {
        if (terms_.empty())
            return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto &[k, c] : terms_) {
            if (!first)
                os << " + ";
            first = false;
            if (c.imag() == 0.0)
                os << detail::fmt_num(c.real());
            else
                os << "(" << detail::fmt_num(c.real()) << (c.imag() < 0 ? "-" : "+")
                   << detail::fmt_num(std::abs(c.imag())) << "i)";
            if (k.first > 0)
                os << "*z^" << k.first;
            if (k.second > 0)
                os << "*conj(z)^" << k.second;
        }
        return os.str();
    }

private:
    static Complex detail_pow(Complex z, int e)
    {
        Complex r = 1.0;
        for (int i = 0; i < e; ++i)
            r *= z;
        return r;
    }

    std::map<Key, Complex> terms_;
};

namespace detail {

class SymbolParser
{
public:
    explicit SymbolParser(const std::string &text) : s_(text) {}

    PolySymbol parse()
    {
        skip();
        if (pos_ == s_.size())
            throw ParseError("empty symbol expression", pos_);
        PolySymbol out = expr();
        skip();
        if (pos_ != s_.size())
            throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return out;
    }

private:
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c))
            throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    bool accept_word(const char *w)
    {
        skip();
        const std::size_t n = std::char_traits<char>::length(w);
        if (s_.compare(pos_, n, w) == 0) {
            pos_ += n;
            return true;
        }
        return false;
    }

    PolySymbol expr()
    {
        PolySymbol acc = term();
        for (;;) {
            if (accept('+'))
                acc = acc + term();
            else if (accept('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    PolySymbol term()
    {
        PolySymbol acc = unary();
        while (accept('*'))
            acc = acc * unary();
        return acc;
    }

    PolySymbol unary()
    {
        if (accept('-'))
            return -unary();
        if (accept('+'))
            return unary();
        return power();
    }

    int exponent()
    {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (start == pos_)
            throw ParseError("expected a nonnegative integer exponent", start);
        const long e = std::strtol(s_.substr(start, pos_ - start).c_str(), nullptr, 10);
        if (e > 64)
            throw ParseError("exponent too large", start);
        return static_cast<int>(e);
    }

    PolySymbol power()
    {
        PolySymbol base = primary();
        if (accept('^'))
            return base.pow(exponent());
        return base;
    }

    PolySymbol primary()
    {
        skip();
        if (pos_ >= s_.size())
            throw ParseError("unexpected end of expression", pos_);
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return number();
        if (accept('(')) {
            PolySymbol e = expr();
            expect(')');
            return e;
        }
        if (accept_word("conj")) {
            expect('(');
            PolySymbol e = expr();
            expect(')');
            return e.conj();
        }
        if (c == '|') {
            ++pos_;
            skip();
            if (!(accept('z') || accept('w')))
                throw ParseError("only |z| is supported between bars", pos_);
            expect('|');
            if (!accept('^'))
                throw ParseError("|z| must be raised to an even power", pos_);
            const std::size_t at = pos_;
            const int e = exponent();
            if (e % 2 != 0)
                throw ParseError("|z| must be raised to an even power", at);
            return PolySymbol::monomial(e / 2, e / 2);
        }
        if (accept('z') || accept('w'))
            return PolySymbol::monomial(1, 0);
        if (accept('i'))
            return PolySymbol::constant(Complex(0.0, 1.0));
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    PolySymbol number()
    {
        const char *begin = s_.c_str() + pos_;
        char *end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin)
            throw ParseError("malformed number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        return PolySymbol::constant(v);
    }

    const std::string &s_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parse a symbol expression; errors carry the 0-based character offset.
inline PolySymbol parse_symbol(const std::string &text)
{
    return detail::SymbolParser(text).parse();
}

} // namespace kolmo
