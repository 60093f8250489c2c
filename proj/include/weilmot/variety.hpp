#pragma once

#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "weilmot/errors.hpp"
#include "weilmot/ff.hpp"
#include "weilmot/polyparse.hpp"
#include "weilmot/rational.hpp"

namespace weilmot {

/// A projective variety cut out by homogeneous integer polynomials in P^N.
/// Smoothness and CH0-triviality are user assertions, echoed by reports and
/// never verified here.
struct VarietySpec {
    std::string name;
    unsigned ambient = 0;
    unsigned dim = 0;
    bool smooth = false;
    bool ch0_trivial = false;
    std::vector<std::string> poly_text;
    std::vector<MultiPoly> polys;

    static VarietySpec make(std::string name, unsigned ambient, unsigned dim,
                            std::vector<std::string> polys, bool smooth = true,
                            bool ch0_trivial = false) {
        VarietySpec s;
        s.name = std::move(name);
        s.ambient = ambient;
        s.dim = dim;
        s.smooth = smooth;
        s.ch0_trivial = ch0_trivial;
        s.poly_text = std::move(polys);
        for (const auto& t : s.poly_text) s.polys.push_back(parse_poly(t, ambient));
        if (s.dim > s.ambient) throw ParseError("dim exceeds ambient dimension");
        return s;
    }
};

/// Count-level constructions: products, projective bundles, blow-ups at a
/// (user-asserted) rational point. Blow-ups and bundles are formulas on
/// counts, not scheme constructions.
struct CountCombinator {
    enum class Kind { leaf, product, blowup, projbundle };

    Kind kind = Kind::leaf;
    VarietySpec leaf;                        // kind == leaf
    std::unique_ptr<CountCombinator> left;   // product: left; blowup/projbundle: base
    std::unique_ptr<CountCombinator> right;  // product only
    unsigned param = 0;                      // blowup: base_dim; projbundle: m

    static CountCombinator make_leaf(VarietySpec v) {
        CountCombinator c;
        c.kind = Kind::leaf;
        c.leaf = std::move(v);
        return c;
    }
    static CountCombinator make_product(CountCombinator l, CountCombinator r) {
        CountCombinator c;
        c.kind = Kind::product;
        c.left = std::make_unique<CountCombinator>(std::move(l));
        c.right = std::make_unique<CountCombinator>(std::move(r));
        return c;
    }
    static CountCombinator make_blowup(CountCombinator base, unsigned base_dim) {
        if (base_dim < 1) throw ParseError("blow-up needs base dimension >= 1");
        CountCombinator c;
        c.kind = Kind::blowup;
        c.left = std::make_unique<CountCombinator>(std::move(base));
        c.param = base_dim;
        return c;
    }
    static CountCombinator make_projbundle(CountCombinator base, unsigned m) {
        CountCombinator c;
        c.kind = Kind::projbundle;
        c.left = std::make_unique<CountCombinator>(std::move(base));
        c.param = m;
        return c;
    }
};

/// Exact point counts N_1..N_max over F_{q^n}.
struct CountSequence {
    PrimePower q;
    std::vector<Int> counts;  // counts[n-1] = N_n

    const Int& at(unsigned n) const { return counts.at(n - 1); }
    unsigned length() const { return static_cast<unsigned>(counts.size()); }
};

struct CountOptions {
    unsigned threads = 1;
    std::uint64_t field_cap = 1ull << 31;  // largest |F_{q^n}| we will enumerate
};

namespace detail {

/// Polynomial compiled against a concrete field: coefficients reduced mod p,
/// arranged for Horner evaluation variable by variable.
class CompiledPoly {
public:
    CompiledPoly(const MultiPoly& poly, const ExtField& field) : F_(field), e_(field.degree()) {
        std::vector<Term> terms;
        const std::uint32_t p = field.p();
        for (const Term& t : poly.terms) {
            Int c = t.coeff % p;
            if (c < 0) c += p;
            if (c != 0) terms.push_back(Term{c, t.exps});
        }
        trivially_zero_ = terms.empty();
        if (!trivially_zero_) root_ = compile(terms, 0, poly.nvars);
        depth_ = tree_depth(root_) + 1;
    }

    bool trivially_zero() const { return trivially_zero_; }
    unsigned depth() const { return depth_; }

    /// Evaluates at the coordinate digit matrix; true iff the value is zero.
    /// scratch layout: per depth level two element buffers, plus one shared
    /// 2e-limb multiply scratch at the end.
    bool vanishes_at(const std::uint32_t* coords, std::uint32_t* elem_scratch,
                     std::uint64_t* mul_scratch) const {
        if (trivially_zero_) return true;
        std::uint32_t* out = elem_scratch;
        eval(root_, coords, out, elem_scratch + e_, mul_scratch);
        for (unsigned i = 0; i < e_; ++i)
            if (out[i]) return false;
        return true;
    }

private:
    struct Node {
        int var = -1;                         // -1: constant leaf
        std::vector<std::uint32_t> constant;  // leaf payload
        std::vector<Node> coeffs;             // by power of var, constant first
    };

    Node compile(const std::vector<Term>& terms, unsigned from_var, unsigned nvars) {
        int var = -1;
        for (unsigned v = from_var; v < nvars && var < 0; ++v)
            for (const Term& t : terms)
                if (t.exps[v] > 0) {
                    var = static_cast<int>(v);
                    break;
                }
        if (var < 0) {
            // constant: at most one combined term remains
            Node n;
            n.constant.assign(e_, 0);
            Int acc = 0;
            for (const Term& t : terms) acc += t.coeff;
            acc %= F_.p();
            if (acc < 0) acc += F_.p();
            n.constant[0] = static_cast<std::uint32_t>(acc.get_ui());
            return n;
        }
        unsigned maxk = 0;
        for (const Term& t : terms) maxk = std::max(maxk, t.exps[var]);
        std::vector<std::vector<Term>> groups(maxk + 1);
        for (Term t : terms) {
            unsigned k = t.exps[var];
            t.exps[var] = 0;
            groups[k].push_back(std::move(t));
        }
        Node n;
        n.var = var;
        n.coeffs.reserve(maxk + 1);
        for (auto& g : groups) n.coeffs.push_back(compile(g, var + 1, nvars));
        return n;
    }

    static unsigned tree_depth(const Node& n) {
        unsigned d = 0;
        for (const Node& c : n.coeffs) d = std::max(d, tree_depth(c) + 1);
        return d;
    }

    void eval(const Node& n, const std::uint32_t* coords, std::uint32_t* out,
              std::uint32_t* scratch, std::uint64_t* mul_scratch) const {
        if (n.var < 0) {
            std::copy(n.constant.begin(), n.constant.end(), out);
            return;
        }
        const std::uint32_t* x = coords + static_cast<unsigned>(n.var) * e_;
        std::uint32_t* tmp = scratch;
        std::uint32_t* child = scratch + e_;
        eval(n.coeffs.back(), coords, out, scratch + 2 * e_, mul_scratch);
        for (std::size_t k = n.coeffs.size() - 1; k-- > 0;) {
            F_.mul_digits(out, x, tmp, mul_scratch);
            eval(n.coeffs[k], coords, child, scratch + 2 * e_, mul_scratch);
            F_.add_digits(tmp, child, out);
        }
    }

    const ExtField& F_;
    unsigned e_;
    Node root_;
    bool trivially_zero_ = false;
    unsigned depth_ = 1;
};

inline Int count_range(const ExtField& field, unsigned ambient,
                       const std::vector<CompiledPoly>& polys, std::uint64_t begin,
                       std::uint64_t end) {
    const unsigned e = field.degree();
    unsigned depth = 2;
    for (const auto& cp : polys) depth = std::max(depth, cp.depth() + 2);
    std::vector<std::uint32_t> elem_scratch(2 * e * depth + 2 * e);
    std::vector<std::uint64_t> mul_scratch(2 * e);

    ProjectiveEnumerator en(field, ambient);
    en.seek(begin);
    unsigned long hits = 0;
    for (std::uint64_t idx = begin; idx < end && !en.done(); ++idx) {
        bool ok = true;
        for (const auto& cp : polys) {
            if (!cp.vanishes_at(en.coord_digits(0), elem_scratch.data(), mul_scratch.data())) {
                ok = false;
                break;
            }
        }
        if (ok) ++hits;
        en.next();
    }
    return Int(hits);
}

}  // namespace detail

/// |X(F_{q^n})| by full enumeration of projective representatives with
/// early-exit evaluation. Exact; parallel partitioning of the representative
/// stream changes nothing but wall time.
inline Int count_points(const VarietySpec& spec, const PrimePower& q, unsigned n,
                        const CountOptions& opt = {}) {
    if (n < 1) throw Error(errc::base_mismatch, "extension index must be >= 1");
    const unsigned e = q.f * n;
    Int card = pow_int(Int(static_cast<unsigned long>(q.p)), e);
    if (card > Int(static_cast<unsigned long>(opt.field_cap)))
        throw Error(errc::field_cap_exceeded,
                    "|F_q^n| = " + card.get_str() + " exceeds cap " + std::to_string(opt.field_cap));
    ExtField field = ExtField::build(q.p, e, /*degree_cap=*/64);

    std::vector<detail::CompiledPoly> polys;
    for (const MultiPoly& mp : spec.polys) {
        detail::CompiledPoly cp(mp, field);
        if (!cp.trivially_zero()) polys.push_back(std::move(cp));
    }

    ProjectiveEnumerator en(field, spec.ambient);
    Int total = en.total();
    if (opt.threads <= 1 || !total.fits_ulong_p()) {
        std::uint64_t end = total.fits_ulong_p() ? total.get_ui() : ~0ull;
        return detail::count_range(field, spec.ambient, polys, 0, end);
    }

    const std::uint64_t total_u = total.get_ui();
    const unsigned k = opt.threads;
    std::vector<Int> partial(k, Int(0));
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < k; ++t) {
        std::uint64_t begin = total_u / k * t + std::min<std::uint64_t>(t, total_u % k);
        std::uint64_t end = total_u / k * (t + 1) + std::min<std::uint64_t>(t + 1, total_u % k);
        workers.emplace_back([&, t, begin, end] {
            partial[t] = detail::count_range(field, spec.ambient, polys, begin, end);
        });
    }
    for (auto& w : workers) w.join();
    Int sum = 0;
    for (const Int& v : partial) sum += v;
    return sum;
}

/// Count of a combinator tree over F_{q^n}: products multiply, a projective
/// bundle of fiber dimension m multiplies by |P^m(F_{q^n})|, and a blow-up at
/// a rational point of a d-dimensional base adds |P^(d-1)(F_{q^n})| - 1.
inline Int combinator_count(const CountCombinator& node, const PrimePower& q, unsigned n,
                            const CountOptions& opt = {}) {
    Int qn = pow_int(q.as_int(), n);
    auto projective_space = [&](unsigned m) -> Int {  // |P^m(F_{q^n})|
        return Int((pow_int(qn, m + 1) - 1) / (qn - 1));
    };
    switch (node.kind) {
        case CountCombinator::Kind::leaf:
            return count_points(node.leaf, q, n, opt);
        case CountCombinator::Kind::product:
            return combinator_count(*node.left, q, n, opt) *
                   combinator_count(*node.right, q, n, opt);
        case CountCombinator::Kind::projbundle:
            return combinator_count(*node.left, q, n, opt) * projective_space(node.param);
        case CountCombinator::Kind::blowup:
            return combinator_count(*node.left, q, n, opt) - 1 + projective_space(node.param - 1);
    }
    throw Error(errc::parse_error, "unknown combinator node");
}

inline CountSequence count_sequence(const VarietySpec& spec, const PrimePower& q, unsigned n_max,
                                    const CountOptions& opt = {}) {
    if (n_max < 1) throw Error(errc::base_mismatch, "n_max must be >= 1");
    CountSequence cs{q, {}};
    cs.counts.reserve(n_max);
    for (unsigned n = 1; n <= n_max; ++n) cs.counts.push_back(count_points(spec, q, n, opt));
    return cs;
}

inline CountSequence count_sequence(const CountCombinator& node, const PrimePower& q,
                                    unsigned n_max, const CountOptions& opt = {}) {
    if (n_max < 1) throw Error(errc::base_mismatch, "n_max must be >= 1");
    CountSequence cs{q, {}};
    cs.counts.reserve(n_max);
    for (unsigned n = 1; n <= n_max; ++n) cs.counts.push_back(combinator_count(node, q, n, opt));
    return cs;
}

// ---- congruence verdicts ----

struct CongruenceVerdict {
    unsigned n;
    Int modulus;  // q^(kappa*n)
    Int residue_a;
    Int residue_b;
    bool pass;
};

struct CongruenceReport {
    unsigned kappa;
    std::vector<CongruenceVerdict> verdicts;
    bool all_pass;
    std::optional<unsigned> first_fail;
};

/// Checks N_n(A) = N_n(B) mod q^(kappa*n) for every available n. The modulus
/// grows with n: killing L^kappa leaves counts well-defined mod q^(kappa*n)
/// at level n.
inline CongruenceReport congruence_check(const CountSequence& a, const CountSequence& b,
                                         unsigned kappa = 1) {
    if (a.q != b.q) throw Error(errc::base_mismatch, "count sequences over different q");
    if (a.length() != b.length())
        throw Error(errc::base_mismatch, "count sequences of different length");
    if (kappa < 1) throw Error(errc::base_mismatch, "kappa must be >= 1");
    CongruenceReport rep{kappa, {}, true, std::nullopt};
    for (unsigned n = 1; n <= a.length(); ++n) {
        Int modulus = pow_int(a.q.as_int(), static_cast<unsigned long>(kappa) * n);
        Int ra = a.at(n) % modulus;
        if (ra < 0) ra += modulus;
        Int rb = b.at(n) % modulus;
        if (rb < 0) rb += modulus;
        bool pass = ra == rb;
        if (!pass && !rep.first_fail) rep.first_fail = n;
        rep.all_pass = rep.all_pass && pass;
        rep.verdicts.push_back(CongruenceVerdict{n, modulus, ra, rb, pass});
    }
    return rep;
}

}  // namespace weilmot
