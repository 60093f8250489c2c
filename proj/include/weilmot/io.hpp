#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "weilmot/errors.hpp"
#include "weilmot/motive.hpp"
#include "weilmot/variety.hpp"
#include "weilmot/zeta.hpp"

namespace weilmot::io {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* report_schema = "weilmot-report/1";

// ---- positions and digests ----

inline std::pair<int, int> position_at(const std::string& text, std::size_t offset) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

/// FNV-1a 64-bit content digest, for the report's inputs block.
inline std::string digest_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a:") + buf;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- big integers / rationals in JSON ----

/// Integers that fit in signed 64 bits serialize as JSON numbers, larger ones
/// as decimal strings.
inline ordered_json int_json(const Int& v) {
    if (v.fits_slong_p()) return ordered_json(static_cast<std::int64_t>(v.get_si()));
    return ordered_json(v.get_str());
}

inline Int int_from_json(const ordered_json& j, const std::string& what) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::invalid_argument&) {
        }
    }
    throw ParseError(what + " must be an integer");
}

// ---- variety files ----

struct VarietyInput {
    std::string name;
    bool smooth = false;
    bool ch0_trivial = false;
    CountCombinator tree;
};

namespace detail {

/// Best-effort location of a polynomial string inside the original file text,
/// so malformed polynomials get a line/column diagnostic.
inline ParseError locate_poly_error(const std::string& text, const std::string& poly,
                                    const ParseError& inner) {
    std::size_t pos = text.find("\"" + poly + "\"");
    if (pos == std::string::npos)
        return ParseError("in polynomial '" + poly + "': " + inner.what());
    auto [line, col] = position_at(text, pos + 1);
    int in_col = inner.column() > 0 ? inner.column() - 1 : 0;
    return ParseError("in polynomial '" + poly + "': " + inner.what(), line, col + in_col);
}

inline VarietySpec parse_leaf(const ordered_json& j, const std::string& text) {
    if (!j.is_object()) throw ParseError("variety must be a JSON object");
    if (!j.contains("ambient")) throw ParseError("variety needs an \"ambient\" dimension");
    if (!j.at("ambient").is_number_integer() || j.at("ambient").get<std::int64_t>() < 0 ||
        j.at("ambient").get<std::int64_t>() > 16)
        throw ParseError("\"ambient\" must be an integer in [0, 16]");
    unsigned ambient = j.at("ambient").get<unsigned>();
    std::vector<std::string> polys;
    if (j.contains("polys"))
        for (const auto& p : j.at("polys")) polys.push_back(p.get<std::string>());
    std::string name = j.value("name", std::string("unnamed"));
    unsigned dim = j.value("dim", ambient);
    bool smooth = j.value("smooth", false);
    bool ch0 = j.value("ch0_trivial", false);
    try {
        return VarietySpec::make(name, ambient, dim, polys, smooth, ch0);
    } catch (const ParseError& e) {
        // find the offending polynomial for a file-level position
        for (const auto& p : polys) {
            try {
                parse_poly(p, ambient);
            } catch (const ParseError& inner) {
                throw locate_poly_error(text, p, inner);
            }
        }
        throw;
    }
}

inline CountCombinator parse_node(const ordered_json& j, const std::string& text) {
    if (!j.is_object() || !j.contains("node"))
        throw ParseError("combinator node needs a \"node\" tag");
    std::string tag = j.at("node").get<std::string>();
    if (tag == "leaf") {
        if (!j.contains("variety")) throw ParseError("leaf node needs a \"variety\" object");
        return CountCombinator::make_leaf(parse_leaf(j.at("variety"), text));
    }
    if (tag == "product") {
        if (!j.contains("left") || !j.contains("right"))
            throw ParseError("product node needs \"left\" and \"right\"");
        return CountCombinator::make_product(parse_node(j.at("left"), text),
                                             parse_node(j.at("right"), text));
    }
    if (tag == "blowup") {
        if (!j.contains("base")) throw ParseError("blowup node needs a \"base\"");
        CountCombinator base = parse_node(j.at("base"), text);
        unsigned dim = 0;
        if (j.contains("base_dim"))
            dim = j.at("base_dim").get<unsigned>();
        else if (base.kind == CountCombinator::Kind::leaf)
            dim = base.leaf.dim;
        else
            throw ParseError("blowup of a non-leaf base needs an explicit \"base_dim\"");
        return CountCombinator::make_blowup(std::move(base), dim);
    }
    if (tag == "projbundle") {
        if (!j.contains("base") || !j.contains("m"))
            throw ParseError("projbundle node needs \"base\" and \"m\"");
        return CountCombinator::make_projbundle(parse_node(j.at("base"), text),
                                                j.at("m").get<unsigned>());
    }
    throw ParseError("unknown combinator node tag '" + tag + "'");
}

}  // namespace detail

inline VarietyInput parse_variety_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = position_at(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(std::string("invalid JSON: ") + e.what(), line, col);
    }
    try {
        VarietyInput in;
        in.name = j.value("name", std::string("unnamed"));
        in.smooth = j.value("smooth", false);
        in.ch0_trivial = j.value("ch0_trivial", false);
        if (j.contains("combinator")) {
            in.tree = detail::parse_node(j.at("combinator"), text);
        } else {
            in.tree = CountCombinator::make_leaf(detail::parse_leaf(j, text));
            in.smooth = in.tree.leaf.smooth;
            in.ch0_trivial = in.tree.leaf.ch0_trivial;
            in.name = in.tree.leaf.name;
        }
        return in;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid variety file: ") + e.what());
    }
}

inline VarietyInput load_variety(const std::string& path) {
    return parse_variety_text(read_file(path));
}

// ---- spectrum files ----

inline std::vector<Rat> rat_coeffs_from_json(const ordered_json& arr) {
    if (!arr.is_array() || arr.empty()) throw ParseError("\"poly\" must be a non-empty array");
    std::vector<Rat> c;
    c.reserve(arr.size());
    for (const auto& v : arr) {
        if (v.is_string())
            c.push_back(parse_rat(v.get<std::string>()));
        else if (v.is_number_integer())
            c.push_back(Rat(static_cast<long>(v.get<std::int64_t>())));
        else
            throw ParseError("polynomial coefficients must be integers or \"num/den\" strings");
    }
    return c;
}

inline VirtualMotive parse_spectrum_text(const std::string& text,
                                         unsigned degree_cap = default_degree_cap()) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = position_at(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(std::string("invalid JSON: ") + e.what(), line, col);
    }
    try {
        if (!j.contains("q")) throw ParseError("spectrum needs \"q\"");
        PrimePower q = PrimePower::from(j.at("q").get<std::uint64_t>());
        VirtualMotive m(q);
        if (j.contains("terms")) {
            for (const auto& t : j.at("terms")) {
                RatPoly poly(rat_coeffs_from_json(t.at("poly")));
                long mult = t.at("mult").get<long>();
                if (poly.degree() < 1) throw ParseError("orbit polynomial must have degree >= 1");
                if (!poly.is_monic()) throw ParseError("orbit polynomial must be monic: " + poly.str());
                m.add_term(NumberOrbit(poly, degree_cap), mult);
            }
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid spectrum file: ") + e.what());
    }
}

inline VirtualMotive load_spectrum(const std::string& path,
                                   unsigned degree_cap = default_degree_cap()) {
    return parse_spectrum_text(read_file(path), degree_cap);
}

inline ordered_json spectrum_json(const VirtualMotive& m) {
    ordered_json terms = ordered_json::array();
    for (const auto& [orbit, mult] : m.terms()) {
        ordered_json poly = ordered_json::array();
        for (const Rat& c : orbit.poly().coeffs()) poly.push_back(c.get_str());
        terms.push_back({{"poly", poly}, {"mult", mult}});
    }
    return {{"q", m.q().q}, {"terms", terms}};
}

// ---- zeta serialization ----

inline ordered_json zeta_json(const RationalZeta& z) {
    auto side = [](const RatPoly& p) {
        ordered_json arr = ordered_json::array();
        for (const Rat& c : p.coeffs()) {
            if (is_integer(c))
                arr.push_back(int_json(Int(c.get_num())));
            else
                arr.push_back(c.get_str());
        }
        return arr;
    };
    return {{"num", side(z.num)}, {"den", side(z.den)}};
}

inline RationalZeta zeta_from_json(const ordered_json& j) {
    try {
        RatPoly num(rat_coeffs_from_json(j.at("num")));
        RatPoly den(rat_coeffs_from_json(j.at("den")));
        return RationalZeta::make(std::move(num), std::move(den));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid zeta: ") + e.what());
    }
}

// ---- count sequences ----

inline ordered_json counts_json(const CountSequence& cs) {
    ordered_json arr = ordered_json::array();
    for (const Int& c : cs.counts) arr.push_back(int_json(c));
    return {{"q", cs.q.q}, {"counts", arr}};
}

}  // namespace weilmot::io
