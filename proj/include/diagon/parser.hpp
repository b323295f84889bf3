#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"
#include "rational.hpp"

namespace diagon {

// lhs = 0
struct Equation {
    Polynomial lhs;
    std::optional<std::string> name;
    std::string source_text;

    std::size_t nvars() const { return lhs.nvars(); }
    unsigned degree() const { return lhs.degree(); }
};

namespace detail {

enum class TokenKind { number, variable, star, caret, slash, plus, minus, equals, end };

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

inline std::string describe(const Token& t) {
    switch (t.kind) {
        case TokenKind::end: return "end of input";
        default: return "'" + t.text + "'";
    }
}

// Splits equation text into tokens. Comment and directive lines must already be blanked.
inline std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t line = 1, column = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t s = 0; s < n; ++s, ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
    };
    while (i < text.size()) {
        const char ch = text[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            advance(1);
            continue;
        }
        const std::size_t tl = line, tc = column;
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j < text.size() && text[j] == '.')
                throw ParseError("non-integer number (use integers or ratios such as 3/2)", tl, tc);
            tokens.push_back({TokenKind::number, std::string(text.substr(i, j - i)), tl, tc});
            advance(j - i);
            continue;
        }
        if (ch == 'x') {
            std::size_t j = i + 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j == i + 1) throw ParseError("expected variable index after 'x'", tl, tc);
            if (j < text.size() && (std::isalpha(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                throw ParseError("unexpected character '" + std::string(1, text[j]) +
                                     "' (products need an explicit '*')",
                                 line, column + (j - i));
            tokens.push_back({TokenKind::variable, std::string(text.substr(i, j - i)), tl, tc});
            advance(j - i);
            continue;
        }
        TokenKind kind;
        switch (ch) {
            case '*': kind = TokenKind::star; break;
            case '^': kind = TokenKind::caret; break;
            case '/': kind = TokenKind::slash; break;
            case '+': kind = TokenKind::plus; break;
            case '-': kind = TokenKind::minus; break;
            case '=': kind = TokenKind::equals; break;
            default: throw ParseError("unexpected character '" + std::string(1, ch) + "'", tl, tc);
        }
        tokens.push_back({kind, std::string(1, ch), tl, tc});
        advance(1);
    }
    tokens.push_back({TokenKind::end, "", line, column});
    return tokens;
}

struct RawFactor {
    Rational coefficient = 1;
    std::vector<std::pair<std::size_t, unsigned>> powers; // (1-based variable index, exponent)
};

// Recursive descent over:
//   equation := side '=' side
//   side     := ['+'|'-'] term (('+'|'-') term)*
//   term     := factor ('*' factor)*
//   factor   := integer ['/' integer] | variable ['^' integer]
class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    std::vector<std::pair<RawFactor, int>> parse_equation() {
        auto terms = parse_side(+1);
        expect(TokenKind::equals, "'='");
        auto rhs = parse_side(-1);
        terms.insert(terms.end(), rhs.begin(), rhs.end());
        if (peek().kind != TokenKind::end)
            fail("unexpected " + describe(peek()) + " after equation");
        return terms;
    }

    std::size_t max_index() const { return max_index_; }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what, peek().line, peek().column);
    }

    void expect(TokenKind kind, const std::string& what) {
        if (peek().kind != kind) fail("expected " + what + ", found " + describe(peek()));
        ++pos_;
    }

    std::vector<std::pair<RawFactor, int>> parse_side(int side_sign) {
        std::vector<std::pair<RawFactor, int>> terms;
        int sign = 1;
        if (peek().kind == TokenKind::plus || peek().kind == TokenKind::minus)
            sign = next().kind == TokenKind::minus ? -1 : 1;
        terms.emplace_back(parse_term(), sign * side_sign);
        while (peek().kind == TokenKind::plus || peek().kind == TokenKind::minus) {
            sign = next().kind == TokenKind::minus ? -1 : 1;
            terms.emplace_back(parse_term(), sign * side_sign);
        }
        return terms;
    }

    RawFactor parse_term() {
        RawFactor term;
        parse_factor(term);
        while (peek().kind == TokenKind::star) {
            ++pos_;
            parse_factor(term);
        }
        if (peek().kind == TokenKind::number || peek().kind == TokenKind::variable)
            fail("implicit multiplication is not supported; use '*'");
        return term;
    }

    void parse_factor(RawFactor& term) {
        const Token& t = peek();
        if (t.kind == TokenKind::number) {
            ++pos_;
            Integer num(t.text);
            Integer den = 1;
            if (peek().kind == TokenKind::slash) {
                ++pos_;
                if (peek().kind != TokenKind::number) fail("expected denominator, found " + describe(peek()));
                den = Integer(next().text);
                if (den == 0) throw ParseError("zero denominator", t.line, t.column);
            }
            if (peek().kind == TokenKind::caret) fail("exponents apply to variables only");
            term.coefficient *= make_rational(num, den);
            return;
        }
        if (t.kind == TokenKind::variable) {
            ++pos_;
            const std::string digits = t.text.substr(1);
            if (digits.size() > 6) throw ParseError("variable index too large", t.line, t.column);
            const std::size_t index = std::stoul(digits);
            if (index == 0) throw ParseError("variable index must be positive (x1, x2, ...)", t.line, t.column);
            unsigned exponent = 1;
            if (peek().kind == TokenKind::caret) {
                ++pos_;
                const Token& e = peek();
                if (e.kind == TokenKind::minus) fail("negative exponent");
                if (e.kind != TokenKind::number) fail("exponent must be a non-negative integer");
                ++pos_;
                if (peek().kind == TokenKind::slash) fail("exponent must be a non-negative integer");
                if (e.text.size() > 4) throw ParseError("exponent too large", e.line, e.column);
                exponent = static_cast<unsigned>(std::stoul(e.text));
            }
            max_index_ = std::max(max_index_, index);
            term.powers.emplace_back(index, exponent);
            return;
        }
        fail("expected a number or a variable, found " + describe(t));
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t max_index_ = 0;
};

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

} // namespace detail

// Parses the equation text format: '#' comments, optional "name: <label>" and "vars <k>"
// lines, then a single equation "<polynomial> = <polynomial>".
inline Equation parse_equation(std::string_view text) {
    std::string body(text);
    std::optional<std::string> name;
    std::size_t min_vars = 0;

    // Blank comments and directives in place so token positions keep their original line/column.
    std::size_t line_start = 0, line_no = 1;
    while (line_start <= body.size()) {
        std::size_t line_end = body.find('\n', line_start);
        if (line_end == std::string::npos) line_end = body.size();
        const std::size_t hash = body.find('#', line_start);
        if (hash != std::string::npos && hash < line_end)
            std::fill(body.begin() + static_cast<long>(hash), body.begin() + static_cast<long>(line_end), ' ');
        const std::string line = detail::trim(std::string_view(body).substr(line_start, line_end - line_start));
        bool directive = false;
        if (line.rfind("name:", 0) == 0) {
            if (name) throw ParseError("duplicate name line", line_no, 1);
            name = detail::trim(std::string_view(line).substr(5));
            directive = true;
        } else if (line.rfind("vars", 0) == 0 && (line.size() == 4 || std::isspace(static_cast<unsigned char>(line[4])))) {
            const std::string value = detail::trim(std::string_view(line).substr(4));
            if (value.empty() || value.size() > 6 ||
                !std::all_of(value.begin(), value.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
                throw ParseError("'vars' expects a positive integer", line_no, 1);
            min_vars = std::stoul(value);
            if (min_vars == 0) throw ParseError("'vars' expects a positive integer", line_no, 1);
            directive = true;
        }
        if (directive)
            std::fill(body.begin() + static_cast<long>(line_start), body.begin() + static_cast<long>(line_end), ' ');
        if (line_end == body.size()) break;
        line_start = line_end + 1;
        ++line_no;
    }

    detail::Parser parser(detail::tokenize(body));
    const auto raw_terms = parser.parse_equation();
    const std::size_t k = std::max(parser.max_index(), min_vars);

    Polynomial lhs(k);
    for (const auto& [raw, sign] : raw_terms) {
        Monomial m(k);
        for (const auto& [index, exponent] : raw.powers) m.exponents[index - 1] += exponent;
        lhs.add_term(m, raw.coefficient * sign);
    }
    return Equation{std::move(lhs), std::move(name), std::string(text)};
}

inline Equation make_equation(Polynomial lhs, std::optional<std::string> name = std::nullopt) {
    return Equation{std::move(lhs), std::move(name), {}};
}

// Canonical text: descending lexicographic terms, explicit '*' and '^'.
inline std::string format_polynomial(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        const bool negative = c < 0;
        const Rational magnitude = abs(c);
        if (first)
            out << (negative ? "-" : "");
        else
            out << (negative ? " - " : " + ");
        first = false;

        std::vector<std::string> factors;
        if (magnitude != 1 || m.total_degree() == 0) factors.push_back(to_string(magnitude));
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            std::string f = "x" + std::to_string(i + 1);
            if (m[i] > 1) f += "^" + std::to_string(m[i]);
            factors.push_back(std::move(f));
        }
        for (std::size_t i = 0; i < factors.size(); ++i) out << (i ? "*" : "") << factors[i];
    }
    return out.str();
}

// A "vars k" line is prepended when x_k does not occur, so the text parses back with the same k.
// The zero polynomial prints as plain "0 = 0".
inline std::string format_equation(const Polynomial& p) {
    std::string text;
    bool top_used = false;
    for (const auto& [m, c] : p.terms())
        if (p.nvars() > 0 && m[p.nvars() - 1] != 0) top_used = true;
    if (p.nvars() > 0 && !top_used && !p.is_zero()) text = "vars " + std::to_string(p.nvars()) + "\n";
    return text + format_polynomial(p) + " = 0";
}

inline std::string format_equation(const Equation& e) { return format_equation(e.lhs); }

// Full file text including the optional name header.
inline std::string format_equation_file(const Equation& e) {
    std::string text;
    if (e.name) text = "name: " + *e.name + "\n";
    return text + format_equation(e.lhs) + "\n";
}

inline Equation load_equation_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'", 0, 0);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    Equation e = parse_equation(buffer.str());
    if (!e.name) e.name = path.stem().string();
    return e;
}

// Every *.dioph file in a directory, sorted by file name.
inline std::vector<Equation> load_corpus(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".dioph") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<Equation> corpus;
    corpus.reserve(files.size());
    for (const auto& f : files) corpus.push_back(load_equation_file(f));
    return corpus;
}

} // namespace diagon
