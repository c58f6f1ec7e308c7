#include "carlock/parse.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace carlock {

namespace {

enum class Tok { LParen, RParen, Plus, Minus, Ladder, Number, Imag, End };

struct Token {
    Tok kind;
    std::size_t pos;
    std::string text;
    double value = 0.0;  // Number
    int mode = 0;        // Ladder
    bool dagger = false; // Ladder
};

const char* tok_name(Tok t) {
    switch (t) {
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Ladder: return "ladder operator";
        case Tok::Number: return "number";
        case Tok::Imag: return "'i'";
        case Tok::End: return "end of input";
    }
    return "?";
}

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
    while (i < n) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        std::size_t start = i;
        switch (c) {
            case '(': out.push_back({Tok::LParen, start, "("}); ++i; continue;
            case ')': out.push_back({Tok::RParen, start, ")"}); ++i; continue;
            case '+': out.push_back({Tok::Plus, start, "+"}); ++i; continue;
            case '-': out.push_back({Tok::Minus, start, "-"}); ++i; continue;
            default: break;
        }
        if (c == 'a') {
            ++i;
            std::size_t dstart = i;
            while (i < n && is_digit(text[i])) ++i;
            if (i == dstart)
                throw ParseError(start, std::string(1, c), {"mode index after 'a'"});
            int mode = 0;
            auto [p, ec] = std::from_chars(text.data() + dstart, text.data() + i, mode);
            if (ec != std::errc{} || mode < 1)
                throw ParseError(dstart, std::string(text.substr(dstart, i - dstart)),
                                 {"mode index >= 1"});
            bool dagger = false;
            if (i < n && text[i] == '^') { dagger = true; ++i; }
            Token t{Tok::Ladder, start, std::string(text.substr(start, i - start))};
            t.mode = mode;
            t.dagger = dagger;
            out.push_back(std::move(t));
            continue;
        }
        if (c == 'i') {
            out.push_back({Tok::Imag, start, "i"});
            ++i;
            continue;
        }
        if (is_digit(c)) {
            while (i < n && is_digit(text[i])) ++i;
            if (i < n && text[i] == '.') {
                ++i;
                while (i < n && is_digit(text[i])) ++i;
            }
            if (i < n && (text[i] == 'e' || text[i] == 'E')) {
                std::size_t save = i;
                ++i;
                if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
                if (i < n && is_digit(text[i])) {
                    while (i < n && is_digit(text[i])) ++i;
                } else {
                    i = save;  // 'e' belongs to something else; not part of the number
                }
            }
            double value = 0.0;
            auto [p, ec] = std::from_chars(text.data() + start, text.data() + i, value);
            if (ec != std::errc{})
                throw ParseError(start, std::string(text.substr(start, i - start)), {"number"});
            Token t{Tok::Number, start, std::string(text.substr(start, i - start))};
            t.value = value;
            out.push_back(std::move(t));
            continue;
        }
        throw ParseError(start, std::string(1, c),
                         {"'('", "')'", "'+'", "'-'", "ladder operator", "number"});
    }
    out.push_back({Tok::End, n, ""});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    OperatorExpr parse() {
        OperatorExpr e = expr();
        expect(Tok::End, {"'+'", "'-'", tok_name(Tok::End)});
        return e;
    }

private:
    std::vector<Token> toks_;
    std::size_t idx_ = 0;

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t k = idx_ + ahead;
        return k < toks_.size() ? toks_[k] : toks_.back();
    }
    const Token& advance() { return toks_[idx_++]; }
    bool accept(Tok k) {
        if (peek().kind == k) { ++idx_; return true; }
        return false;
    }
    void expect(Tok k, std::vector<std::string> expected) {
        if (!accept(k)) fail(std::move(expected));
    }
    [[noreturn]] void fail(std::vector<std::string> expected) const {
        const Token& t = peek();
        throw ParseError(t.pos, t.kind == Tok::End ? "end of input" : t.text,
                         std::move(expected));
    }

    OperatorExpr expr() {
        bool negate = false;
        if (accept(Tok::Minus)) negate = true;
        else accept(Tok::Plus);
        OperatorExpr acc = term();
        if (negate) acc = raw_scale(-1.0, acc);
        for (;;) {
            if (accept(Tok::Plus)) acc = raw_add(acc, term());
            else if (accept(Tok::Minus)) acc = raw_add(acc, raw_scale(-1.0, term()));
            else break;
        }
        return acc;
    }

    OperatorExpr term() {
        bool have_coeff = false;
        cplx coeff{1.0, 0.0};
        if (peek().kind == Tok::Number) {
            coeff = cplx{advance().value, 0.0};
            have_coeff = true;
        }
        if (!starts_factor()) {
            if (have_coeff) return scalar_expr(coeff);
            fail({"number", "ladder operator", "'('"});
        }
        OperatorExpr acc = factor();
        while (starts_factor()) acc = raw_multiply(acc, factor());
        return have_coeff ? raw_scale(coeff, acc) : acc;
    }

    static OperatorExpr scalar_expr(cplx c) {
        if (std::abs(c) < kCoeffPruneTol) return OperatorExpr::zero();
        return OperatorExpr::identity(c);
    }

    bool starts_factor() const {
        return peek().kind == Tok::Ladder || peek().kind == Tok::LParen;
    }

    // Lookahead for "(" [-] number [("+"|"-") number "i"] ")".
    bool looks_like_complex_coeff() const {
        std::size_t k = 0;
        if (peek(k).kind != Tok::LParen) return false;
        ++k;
        if (peek(k).kind == Tok::Minus) ++k;
        if (peek(k).kind != Tok::Number) return false;
        ++k;
        if (peek(k).kind == Tok::RParen) return true;
        if (peek(k).kind != Tok::Plus && peek(k).kind != Tok::Minus) return false;
        ++k;
        if (peek(k).kind != Tok::Number) return false;
        ++k;
        if (peek(k).kind != Tok::Imag) return false;
        ++k;
        return peek(k).kind == Tok::RParen;
    }

    cplx parse_complex_literal() {
        expect(Tok::LParen, {"'('", "number"});
        double re_sign = accept(Tok::Minus) ? -1.0 : 1.0;
        if (peek().kind != Tok::Number) fail({"number"});
        double re = re_sign * advance().value;
        double im = 0.0;
        if (!accept(Tok::RParen)) {
            double im_sign = 1.0;
            if (accept(Tok::Minus)) im_sign = -1.0;
            else expect(Tok::Plus, {"'+'", "'-'", "')'"});
            if (peek().kind != Tok::Number) fail({"number"});
            im = im_sign * advance().value;
            expect(Tok::Imag, {"'i'"});
            expect(Tok::RParen, {"')'"});
        }
        return cplx{re, im};
    }

    OperatorExpr factor() {
        if (peek().kind == Tok::Ladder) {
            const Token& t = advance();
            return OperatorExpr::ladder(t.mode, t.dagger);
        }
        if (looks_like_complex_coeff()) return scalar_expr(parse_complex_literal());
        expect(Tok::LParen, {"ladder operator", "'('"});
        OperatorExpr e = expr();
        expect(Tok::RParen, {"'+'", "'-'", "')'"});
        return e;
    }
};

bool is_one(double x) { return x == 1.0; }

} // namespace

ParseError::ParseError(std::size_t position, std::string found,
                       std::vector<std::string> expected)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "parse error at position " << position << ": found '" << found
             << "', expected ";
          for (std::size_t i = 0; i < expected.size(); ++i) {
              if (i) os << (i + 1 == expected.size() ? " or " : ", ");
              os << expected[i];
          }
          return os.str();
      }()),
      position_(position), found_(std::move(found)), expected_(std::move(expected)) {}

OperatorExpr parse_expr(std::string_view text) { return Parser(text).parse(); }

std::string format_real(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, p);
}

std::string to_string(const std::vector<LadderOp>& factors) {
    if (factors.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) out += ' ';
        out += 'a';
        out += std::to_string(factors[i].mode);
        if (factors[i].dagger) out += '^';
    }
    return out;
}

std::string to_string(const OperatorExpr& e) {
    if (e.terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const Monomial& m : e.terms) {
        const double re = m.coeff.real();
        const double im = m.coeff.imag();
        std::string body;
        if (im == 0.0) {
            const double mag = re < 0.0 ? -re : re;
            if (first) out += re < 0.0 ? "-" : "";
            else out += re < 0.0 ? " - " : " + ";
            if (m.factors.empty()) body = format_real(mag);
            else if (!is_one(mag)) body = format_real(mag) + " ";
        } else {
            if (!first) out += " + ";
            body = "(" + format_real(re) + (im < 0.0 ? "-" : "+") +
                   format_real(im < 0.0 ? -im : im) + "i)";
            if (!m.factors.empty()) body += " ";
        }
        out += body;
        if (!m.factors.empty()) out += to_string(m.factors);
        first = false;
    }
    return out;
}

} // namespace carlock
