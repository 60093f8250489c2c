#pragma once

#include <cstdint>
#include <vector>

#include "weilmot/errors.hpp"
#include "weilmot/rational.hpp"

namespace weilmot {

/// Validated odd-sized prime modulus, 2 <= p < 2^31.
class PrimeModulus {
public:
    explicit PrimeModulus(std::uint64_t p) {
        if (p < 2 || p >= (1ull << 31))
            throw Error(errc::not_prime, "prime must satisfy 2 <= p < 2^31");
        if (!is_prime_u64(p)) throw Error(errc::not_prime, std::to_string(p) + " is not prime");
        p_ = static_cast<std::uint32_t>(p);
    }
    std::uint32_t value() const { return p_; }
    bool operator==(const PrimeModulus& o) const { return p_ == o.p_; }

private:
    std::uint32_t p_;
};

class ExtField;

/// Field element as a reduced coefficient vector of length e over F_p.
struct FFElem {
    const ExtField* field = nullptr;
    std::vector<std::uint32_t> coeffs;

    bool is_zero() const {
        for (auto c : coeffs)
            if (c) return false;
        return true;
    }
};

/// F_{p^e} = F_p[x]/(m) with the canonical irreducible modulus m: the first
/// irreducible monic polynomial of degree e in ascending order of the integer
/// sum(c_i * p^i) over the non-leading coefficients. Deterministic across
/// runs, no polynomial tables needed.
///
/// Immutable after construction; safe to share across threads.
class ExtField {
public:
    static ExtField build(std::uint64_t p, unsigned e, unsigned degree_cap = 16) {
        if (e < 1 || e > degree_cap)
            throw Error(errc::degree_cap_exceeded,
                        "extension degree " + std::to_string(e) + " outside [1, " +
                            std::to_string(degree_cap) + "]");
        return ExtField(PrimeModulus(p), e);
    }

    std::uint32_t p() const { return p_; }
    unsigned degree() const { return e_; }
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    Int cardinality() const { return pow_int(Int(static_cast<unsigned long>(p_)), e_); }

    /// |F| when it fits in 64 bits (it always does under the counting cap).
    std::uint64_t cardinality_u64() const {
        Int c = cardinality();
        if (!c.fits_ulong_p()) throw Error(errc::field_cap_exceeded, "field too large to index");
        return c.get_ui();
    }

    bool same_field(const ExtField& o) const {
        return p_ == o.p_ && e_ == o.e_ && modulus_ == o.modulus_;
    }

    // ---- element construction ----

    FFElem zero() const { return FFElem{this, std::vector<std::uint32_t>(e_, 0)}; }
    FFElem one() const { return from_int(1); }
    /// x mod m, the canonical generator of the extension.
    FFElem gen() const {
        FFElem r = zero();
        if (e_ == 1)
            r.coeffs[0] = 0;  // x = 0 in F_p[x]/(x)
        else
            r.coeffs[1] = 1;
        return r;
    }
    FFElem from_int(long v) const {
        FFElem r = zero();
        long m = v % static_cast<long>(p_);
        if (m < 0) m += p_;
        r.coeffs[0] = static_cast<std::uint32_t>(m);
        return r;
    }
    FFElem from_int(const Int& v) const {
        FFElem r = zero();
        Int m = v % static_cast<unsigned long>(p_);
        if (m < 0) m += static_cast<unsigned long>(p_);
        r.coeffs[0] = static_cast<std::uint32_t>(m.get_ui());
        return r;
    }
    FFElem from_coeffs(std::vector<std::uint32_t> c) const {
        if (c.size() != e_) throw Error(errc::field_mismatch, "coefficient vector length mismatch");
        for (auto v : c)
            if (v >= p_) throw Error(errc::field_mismatch, "coefficient not reduced mod p");
        return FFElem{this, std::move(c)};
    }

    /// Element code sum(c_i p^i) < p^e, the enumeration order of elements.
    std::uint64_t encode(const FFElem& a) const {
        std::uint64_t v = 0;
        for (unsigned i = e_; i-- > 0;) v = v * p_ + a.coeffs[i];
        return v;
    }
    FFElem decode(std::uint64_t code) const {
        FFElem r = zero();
        for (unsigned i = 0; i < e_; ++i) {
            r.coeffs[i] = static_cast<std::uint32_t>(code % p_);
            code /= p_;
        }
        return r;
    }

    // ---- arithmetic ----

    FFElem add(const FFElem& a, const FFElem& b) const {
        check(a), check(b);
        FFElem r = zero();
        add_digits(a.coeffs.data(), b.coeffs.data(), r.coeffs.data());
        return r;
    }
    FFElem sub(const FFElem& a, const FFElem& b) const {
        check(a), check(b);
        FFElem r = zero();
        for (unsigned i = 0; i < e_; ++i) {
            std::uint32_t x = a.coeffs[i], y = b.coeffs[i];
            r.coeffs[i] = x >= y ? x - y : x + p_ - y;
        }
        return r;
    }
    FFElem neg(const FFElem& a) const {
        check(a);
        return sub(zero(), a);
    }
    FFElem mul(const FFElem& a, const FFElem& b) const {
        check(a), check(b);
        FFElem r = zero();
        std::vector<std::uint64_t> scratch(2 * e_);
        mul_digits(a.coeffs.data(), b.coeffs.data(), r.coeffs.data(), scratch.data());
        return r;
    }
    FFElem pow(FFElem a, std::uint64_t k) const {
        check(a);
        FFElem r = one();
        while (k) {
            if (k & 1) r = mul(r, a);
            a = mul(a, a);
            k >>= 1;
        }
        return r;
    }
    /// a^p, the absolute Frobenius.
    FFElem frobenius(const FFElem& a) const { return pow(a, p_); }

    FFElem inv(const FFElem& a) const {
        check(a);
        if (a.is_zero()) throw Error(errc::division_by_zero, "inverse of zero field element");
        // extended Euclid in F_p[x] against the modulus
        std::vector<std::uint32_t> r0 = modulus_, r1 = a.coeffs;
        trim(r1);
        std::vector<std::uint32_t> t0{}, t1{1};
        while (!r1.empty()) {
            auto [q, r] = poly_divmod(r0, r1);
            std::vector<std::uint32_t> t2 = poly_sub(t0, poly_mul(q, t1));
            r0 = std::move(r1);
            r1 = std::move(r);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        // r0 is a nonzero constant gcd; scale t0 by its inverse mod p
        std::uint32_t c = r0.empty() ? 1 : r0[0];
        std::uint64_t cinv = scalar_inv(c);
        FFElem out = zero();
        for (std::size_t i = 0; i < t0.size() && i < e_; ++i)
            out.coeffs[i] = static_cast<std::uint32_t>((t0[i] * cinv) % p_);
        return out;
    }

    // ---- raw digit kernels for the counting loop (no allocation) ----

    void add_digits(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out) const {
        for (unsigned i = 0; i < e_; ++i) {
            std::uint32_t s = a[i] + b[i];
            out[i] = s >= p_ ? s - p_ : s;
        }
    }

    /// out = a*b mod modulus; scratch must hold 2e u64 slots. out may not
    /// alias a or b.
    void mul_digits(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out,
                    std::uint64_t* scratch) const {
        const unsigned e = e_;
        const std::uint64_t p = p_;
        for (unsigned i = 0; i < 2 * e; ++i) scratch[i] = 0;
        for (unsigned i = 0; i < e; ++i) {
            if (!a[i]) continue;
            std::uint64_t ai = a[i];
            for (unsigned j = 0; j < e; ++j) {
                // products < 2^62; reduce eagerly so sums stay below 2^63
                scratch[i + j] = (scratch[i + j] + ai * b[j]) % p;
            }
        }
        for (unsigned i = 2 * e - 1; i >= e; --i) {
            std::uint64_t c = scratch[i];
            if (c) {
                scratch[i] = 0;
                for (unsigned j = 0; j < e; ++j) {
                    std::uint64_t m = modulus_[j];
                    if (m) scratch[i - e + j] = (scratch[i - e + j] + c * (p - m)) % p;
                }
            }
            if (i == e) break;
        }
        for (unsigned i = 0; i < e; ++i) out[i] = static_cast<std::uint32_t>(scratch[i]);
    }

private:
    ExtField(PrimeModulus p, unsigned e) : p_(p.value()), e_(e) {
        if (e_ == 1) {
            modulus_ = {0, 1};  // x
            return;
        }
        std::vector<std::uint32_t> digits(e_, 0);
        while (true) {
            modulus_ = digits;
            modulus_.push_back(1);
            if (is_irreducible(modulus_)) return;
            unsigned i = 0;
            while (i < e_ && digits[i] == p_ - 1) digits[i++] = 0;
            if (i == e_)
                throw Error(errc::not_prime, "no irreducible modulus found");  // unreachable
            ++digits[i];
        }
    }

    void check(const FFElem& a) const {
        if (a.field == nullptr || !same_field(*a.field))
            throw Error(errc::field_mismatch, "element from a different field");
    }

    std::uint64_t scalar_inv(std::uint32_t c) const {
        // Fermat: c^(p-2) mod p
        std::uint64_t r = 1, b = c, k = p_ - 2;
        while (k) {
            if (k & 1) r = r * b % p_;
            b = b * b % p_;
            k >>= 1;
        }
        return r;
    }

    // -- dense F_p[x] helpers on trimmed uint32 vectors (constant first) --

    static void trim(std::vector<std::uint32_t>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    }

    std::vector<std::uint32_t> poly_mul(const std::vector<std::uint32_t>& a,
                                        const std::vector<std::uint32_t>& b) const {
        if (a.empty() || b.empty()) return {};
        std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                acc[i + j] = (acc[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p_;
        std::vector<std::uint32_t> r(acc.begin(), acc.end());
        trim(r);
        return r;
    }

    std::vector<std::uint32_t> poly_sub(const std::vector<std::uint32_t>& a,
                                        const std::vector<std::uint32_t>& b) const {
        std::vector<std::uint32_t> r(std::max(a.size(), b.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i) {
            std::uint32_t x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
            r[i] = x >= y ? x - y : x + p_ - y;
        }
        trim(r);
        return r;
    }

    std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> poly_divmod(
        const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) const {
        std::vector<std::uint32_t> r = a, q;
        trim(r);
        if (b.empty()) throw Error(errc::division_by_zero, "polynomial division by zero");
        if (r.size() >= b.size()) q.assign(r.size() - b.size() + 1, 0);
        std::uint64_t lead_inv = scalar_inv(b.back());
        while (r.size() >= b.size()) {
            std::uint64_t f = r.back() * lead_inv % p_;
            std::size_t shift = r.size() - b.size();
            q[shift] = static_cast<std::uint32_t>(f);
            for (std::size_t i = 0; i < b.size(); ++i) {
                std::uint64_t sub = f * b[i] % p_;
                std::uint32_t& dst = r[shift + i];
                dst = dst >= sub ? dst - static_cast<std::uint32_t>(sub)
                                 : dst + p_ - static_cast<std::uint32_t>(sub);
            }
            trim(r);
            if (r.size() < b.size()) break;
        }
        trim(q);
        return {q, r};
    }

    std::vector<std::uint32_t> poly_gcd_fp(std::vector<std::uint32_t> a,
                                           std::vector<std::uint32_t> b) const {
        trim(a), trim(b);
        while (!b.empty()) {
            auto r = poly_divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a;
    }

    std::vector<std::uint32_t> poly_powmod_p(std::vector<std::uint32_t> base,
                                             const std::vector<std::uint32_t>& mod) const {
        // base^p mod `mod` by square-and-multiply on the 31-bit exponent
        std::vector<std::uint32_t> result{1};
        std::uint32_t k = p_;
        while (k) {
            if (k & 1) result = poly_divmod(poly_mul(result, base), mod).second;
            base = poly_divmod(poly_mul(base, base), mod).second;
            k >>= 1;
        }
        return result;
    }

    bool is_irreducible(const std::vector<std::uint32_t>& f) const {
        const unsigned e = static_cast<unsigned>(f.size()) - 1;
        if (f[0] == 0) return e == 1;  // divisible by x
        std::vector<std::uint32_t> x{0, 1};
        // Frobenius chain t_k = x^(p^k) mod f
        std::vector<std::vector<std::uint32_t>> chain(e + 1);
        chain[0] = x;
        for (unsigned k = 1; k <= e; ++k) chain[k] = poly_powmod_p(chain[k - 1], f);
        if (poly_sub(chain[e], x) != std::vector<std::uint32_t>{}) return false;
        for (unsigned r = 2; r <= e; ++r) {
            if (e % r != 0) continue;
            bool r_prime = true;
            for (unsigned d = 2; d * d <= r; ++d)
                if (r % d == 0) {
                    r_prime = false;
                    break;
                }
            if (!r_prime) continue;
            auto diff = poly_sub(chain[e / r], x);
            auto g = poly_gcd_fp(f, diff);
            if (g.size() != 1) return false;
        }
        return true;
    }

    std::uint32_t p_;
    unsigned e_;
    std::vector<std::uint32_t> modulus_;  // length e+1, monic, constant first
};

inline FFElem operator+(const FFElem& a, const FFElem& b) { return a.field->add(a, b); }
inline FFElem operator-(const FFElem& a, const FFElem& b) { return a.field->sub(a, b); }
inline FFElem operator*(const FFElem& a, const FFElem& b) { return a.field->mul(a, b); }
inline bool operator==(const FFElem& a, const FFElem& b) { return a.coeffs == b.coeffs; }

/// Streams one representative per point of P^N(F), normalized so the first
/// nonzero coordinate is 1: pivot position ascending, then the free suffix
/// coordinates in lexicographic element-code order, last coordinate fastest.
///
/// Coordinates are exposed as a flat digit matrix, (N+1) rows of e limbs.
class ProjectiveEnumerator {
public:
    ProjectiveEnumerator(const ExtField& field, unsigned ambient_dim)
        : F_(field), N_(ambient_dim), card_(field.cardinality_u64()) {
        e_ = F_.degree();
        digits_.assign((N_ + 1) * e_, 0);
        codes_.assign(N_ + 1, 0);
        stratum_sizes_.resize(N_ + 1);
        Int total = 0;
        for (unsigned i = 0; i <= N_; ++i) {
            stratum_sizes_[N_ - i] = pow_int(Int(static_cast<unsigned long>(card_)), i);
            total += stratum_sizes_[N_ - i];
        }
        total_ = total;
    }

    const Int& total() const { return total_; }

    std::uint64_t total_u64() const {
        if (!total_.fits_ulong_p()) throw Error(errc::field_cap_exceeded, "point count too large");
        return total_.get_ui();
    }

    /// Positions at the first point (1:0:...:0). Always exists.
    void first() {
        pivot_ = 0;
        std::fill(digits_.begin(), digits_.end(), 0);
        std::fill(codes_.begin(), codes_.end(), 0);
        set_coord_one(0);
        done_ = false;
    }

    /// Positions at the point with the given global index.
    void seek(std::uint64_t index) {
        std::fill(digits_.begin(), digits_.end(), 0);
        std::fill(codes_.begin(), codes_.end(), 0);
        unsigned i = 0;
        while (i <= N_) {
            Int size = stratum_sizes_[i];
            if (Int(static_cast<unsigned long>(index)) < size) break;
            index -= size.get_ui();
            ++i;
        }
        if (i > N_) {
            done_ = true;
            return;
        }
        pivot_ = i;
        set_coord_one(i);
        for (unsigned j = N_ + 1; j-- > i + 1;) {
            set_coord(j, index % card_);
            index /= card_;
        }
        done_ = false;
    }

    bool done() const { return done_; }

    /// Advances to the next representative; false when exhausted.
    bool next() {
        unsigned j = N_ + 1;
        while (j-- > pivot_ + 1) {
            if (codes_[j] + 1 < card_) {
                increment_coord(j);
                return true;
            }
            set_coord(j, 0);
        }
        // stratum exhausted; move the pivot right
        if (pivot_ == N_) {
            done_ = true;
            return false;
        }
        set_coord(pivot_, 0);
        ++pivot_;
        set_coord_one(pivot_);
        return true;
    }

    const std::uint32_t* coord_digits(unsigned j) const { return digits_.data() + j * e_; }
    std::uint64_t coord_code(unsigned j) const { return codes_[j]; }

    /// Current point as field elements (test/reporting convenience).
    std::vector<FFElem> point() const {
        std::vector<FFElem> pt;
        pt.reserve(N_ + 1);
        for (unsigned j = 0; j <= N_; ++j) {
            FFElem el = F_.zero();
            std::copy(coord_digits(j), coord_digits(j) + e_, el.coeffs.begin());
            pt.push_back(std::move(el));
        }
        return pt;
    }

private:
    void set_coord_one(unsigned j) {
        codes_[j] = 1;
        std::uint32_t* d = digits_.data() + j * e_;
        std::fill(d, d + e_, 0);
        d[0] = 1;
    }
    void set_coord(unsigned j, std::uint64_t code) {
        codes_[j] = code;
        std::uint32_t* d = digits_.data() + j * e_;
        const std::uint32_t p = F_.p();
        for (unsigned i = 0; i < e_; ++i) {
            d[i] = static_cast<std::uint32_t>(code % p);
            code /= p;
        }
    }
    void increment_coord(unsigned j) {
        ++codes_[j];
        std::uint32_t* d = digits_.data() + j * e_;
        const std::uint32_t p = F_.p();
        for (unsigned i = 0; i < e_; ++i) {
            if (d[i] + 1 < p) {
                ++d[i];
                return;
            }
            d[i] = 0;
        }
    }

    const ExtField& F_;
    unsigned N_;
    std::uint64_t card_;
    unsigned e_;
    Int total_;
    std::vector<Int> stratum_sizes_;  // indexed by pivot
    std::vector<std::uint32_t> digits_;
    std::vector<std::uint64_t> codes_;
    unsigned pivot_ = 0;
    bool done_ = true;
};

}  // namespace weilmot
