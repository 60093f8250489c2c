#pragma once

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "weilmot/errors.hpp"
#include "weilmot/rational.hpp"

namespace weilmot {

/// One monomial with an integer coefficient; exps has one entry per ambient
/// variable x0..xN.
struct Term {
    Int coeff;
    std::vector<unsigned> exps;

    unsigned total_degree() const {
        unsigned d = 0;
        for (unsigned e : exps) d += e;
        return d;
    }
};

/// Homogeneous multivariate integer polynomial, like terms combined.
struct MultiPoly {
    unsigned nvars = 0;  // ambient + 1
    std::vector<Term> terms;
    unsigned degree = 0;

    bool is_zero() const { return terms.empty(); }
};

/// Parses "x0^3 + 2x1*x2^2 - 7" style text into a homogeneous polynomial in
/// x0..xN. `*` is optional, `^` denotes powers, coefficients are integers.
/// Errors carry the 1-based column within the string; the caller supplies
/// file-level position if it has one.
inline MultiPoly parse_poly(const std::string& text, unsigned ambient) {
    const unsigned nvars = ambient + 1;
    std::size_t i = 0;
    auto col = [&] { return static_cast<int>(i) + 1; };
    auto fail = [&](const std::string& msg) { return ParseError(msg, 0, col()); };
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto read_uint = [&]() -> Int {
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) throw fail("expected a number");
        return Int(text.substr(start, i - start));
    };

    std::vector<Term> raw;
    skip_ws();
    if (i == text.size()) throw fail("empty polynomial");
    bool first = true;
    while (i < text.size()) {
        // sign
        int sign = 1;
        skip_ws();
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip_ws();
        } else if (!first) {
            throw fail("expected '+' or '-' between terms");
        }
        first = false;

        Term t{Int(sign), std::vector<unsigned>(nvars, 0)};
        bool have_factor = false;
        while (true) {
            skip_ws();
            if (i >= text.size()) break;
            char c = text[i];
            if (c == '*') {
                if (!have_factor) throw fail("'*' without a left factor");
                ++i;
                skip_ws();
                if (i >= text.size()) throw fail("'*' without a right factor");
                c = text[i];
            } else if (c == '+' || c == '-') {
                break;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                Int v = read_uint();
                if (abs(v) > Int(1) << 31) throw fail("coefficient magnitude exceeds 2^31");
                t.coeff *= v;
                have_factor = true;
            } else if (c == 'x') {
                std::size_t var_col = i;
                ++i;
                if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) {
                    i = var_col;
                    throw fail("variable must be x<k>");
                }
                Int idx = read_uint();
                if (idx >= nvars) {
                    i = var_col;
                    throw fail("variable x" + idx.get_str() + " outside ambient P^" +
                               std::to_string(ambient));
                }
                unsigned v = static_cast<unsigned>(idx.get_ui());
                unsigned exp = 1;
                skip_ws();
                if (i < text.size() && text[i] == '^') {
                    ++i;
                    skip_ws();
                    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
                        throw fail("expected an exponent after '^'");
                    Int ev = read_uint();
                    if (ev > 64) throw fail("exponent too large");
                    exp = static_cast<unsigned>(ev.get_ui());
                }
                t.exps[v] += exp;
                have_factor = true;
            } else {
                throw fail(std::string("unexpected character '") + c + "'");
            }
        }
        if (!have_factor) throw fail("empty term");
        raw.push_back(std::move(t));
    }

    // homogeneity across the terms as written
    unsigned degree = raw.front().total_degree();
    for (const Term& t : raw)
        if (t.total_degree() != degree)
            throw ParseError("polynomial is not homogeneous: term degrees " +
                                 std::to_string(degree) + " and " +
                                 std::to_string(t.total_degree()) + " both appear",
                             0, 1);

    // combine like terms
    std::map<std::vector<unsigned>, Int> combined;
    for (Term& t : raw) combined[t.exps] += t.coeff;
    MultiPoly out;
    out.nvars = nvars;
    out.degree = degree;
    for (auto& [exps, coeff] : combined)
        if (coeff != 0) out.terms.push_back(Term{coeff, exps});
    return out;
}

}  // namespace weilmot
