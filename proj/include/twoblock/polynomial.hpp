#pragma once

#include "twoblock/monomial.hpp"
#include "twoblock/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace twoblock {

inline mpz_class mpz_gcd_of(const mpz_class& a, const mpz_class& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

class PolyBuilder;

/// Sparse multivariate polynomial with exact rational coefficients over a
/// fixed VarTable. Immutable value type: every operation returns a fresh
/// polynomial in canonical form.
///
/// Canonical form: terms sorted in strictly descending monomial order (graded
/// by weight, ties lex by variable index with earlier-variable-larger), no
/// zero coefficients, all coefficients stored as integer numerators over one
/// positive common denominator with overall content 1. Coefficient access and
/// serialization expose reduced rationals, so the representation detail is
/// invisible at the API boundary — and canonical text round-trips bit-exactly.
class Poly {
public:
    struct Term {
        Mono m;
        mpz_class num;
    };

    Poly() : tab_(nullptr), den_(1) {}
    explicit Poly(const VarTable& tab) : tab_(&tab), den_(1) {}

    static Poly zero(const VarTable& tab) { return Poly(tab); }

    static Poly constant(const VarTable& tab, const Rat& c) {
        return monomial(tab, Mono::one(), c);
    }

    static Poly variable(const VarTable& tab, int idx) {
        return monomial(tab, Mono::var(tab, idx), Rat(1));
    }

    static Poly monomial(const VarTable& tab, const Mono& m, const Rat& c);

    const VarTable& table() const {
        if (!tab_) throw std::logic_error("Poly: no table");
        return *tab_;
    }
    bool compatible(const Poly& o) const { return tab_ == o.tab_; }

    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }
    const mpz_class& common_den() const { return den_; }

    Rat coeff_at(size_t i) const { return Rat(terms_.at(i).num, den_); }

    /// Lead term = maximal monomial (terms are stored descending).
    const Mono& lead_mono() const {
        if (is_zero()) throw std::domain_error("Poly: lead of zero");
        return terms_.front().m;
    }
    Rat lead_coeff() const { return coeff_at(0); }

    /// Coefficient of a monomial (zero if absent). Binary search on the
    /// canonical order.
    Rat coeff(const Mono& m) const {
        auto it = std::lower_bound(
            terms_.begin(), terms_.end(), m,
            [](const Term& t, const Mono& key) { return key < t.m; });
        if (it != terms_.end() && it->m == m) return Rat(it->num, den_);
        return Rat(0);
    }

    /// True when every term has the same weighted degree; the degree is
    /// reported through `deg` when non-null. The zero polynomial is
    /// homogeneous of every degree (reports 0).
    bool is_homogeneous(int* deg = nullptr) const {
        if (terms_.empty()) {
            if (deg) *deg = 0;
            return true;
        }
        int d = terms_.front().m.wdeg();
        for (const auto& t : terms_)
            if (t.m.wdeg() != d) return false;
        if (deg) *deg = d;
        return true;
    }

    /// Largest weighted degree over the terms (throws on zero polynomial).
    int wdeg() const {
        if (is_zero()) throw std::domain_error("Poly: degree of zero");
        int d = terms_.front().m.wdeg();
        for (const auto& t : terms_) d = std::max(d, t.m.wdeg());
        return d;
    }

    Poly operator-() const {
        Poly r(*this);
        for (auto& t : r.terms_) t.num = -t.num;
        return r;
    }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const { return *this + (-o); }
    Poly operator*(const Poly& o) const;
    Poly scaled(const Rat& c) const;
    Poly pow(unsigned k) const;

    bool operator==(const Poly& o) const {
        if (tab_ != o.tab_ || den_ != o.den_ || terms_.size() != o.terms_.size())
            return false;
        for (size_t i = 0; i < terms_.size(); ++i)
            if (terms_[i].num != o.terms_[i].num || !(terms_[i].m == o.terms_[i].m))
                return false;
        return true;
    }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    /// Partial derivative with respect to one variable.
    Poly derivative(int var) const;

    /// Terms of exact weighted degree d.
    Poly graded_component(int d) const;

    /// Sorted list of the distinct weighted degrees present.
    std::vector<int> degrees_present() const {
        std::vector<int> ds;
        for (const auto& t : terms_) ds.push_back(t.m.wdeg());
        std::sort(ds.begin(), ds.end());
        ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
        return ds;
    }

    /// Ring homomorphism: replace every variable by its image polynomial over
    /// `out_tab`. Every variable actually appearing must have a non-null image.
    Poly substitute(const VarTable& out_tab, const std::vector<const Poly*>& images) const;

    /// Apply the order-two symmetry whose per-variable signs live in the
    /// table: each term picks up the product of signs of its odd-exponent
    /// variables.
    Poly apply_gamma() const {
        Poly r(*this);
        for (auto& t : r.terms_)
            if (t.m.gamma_sign(*tab_) < 0) t.num = -t.num;
        r.normalize();
        return r;
    }

    /// Evaluate at a rational point (testing helper).
    Rat eval(const std::vector<Rat>& point) const {
        Rat acc(0);
        for (const auto& t : terms_) {
            Rat v(t.num, den_);
            for (int i = 0; i < tab_->arity(); ++i)
                for (int e = 0; e < t.m.exp(i); ++e) v *= point.at(size_t(i));
            acc += v;
        }
        return acc;
    }

    /// Canonical text: terms in descending order, each as
    /// "coef * v1^e1 * ... * vk^ek" (factors in ascending variable index,
    /// '^1' omitted), joined by " + ". Zero polynomial prints "0".
    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        for (size_t i = 0; i < terms_.size(); ++i) {
            if (i) os << " + ";
            os << Rat(terms_[i].num, den_).str();
            for (int v = 0; v < tab_->arity(); ++v) {
                int e = terms_[i].m.exp(v);
                if (!e) continue;
                os << " * " << tab_->name(v);
                if (e != 1) os << "^" << e;
            }
        }
        return os.str();
    }

    /// Parse the canonical text format (split on " + "; term grammar:
    /// rational ('*' name ('^' uint)?)*). Inverse of str() on canonical input,
    /// tolerant of extra whitespace.
    static Poly parse(const VarTable& tab, const std::string& text);

    friend class PolyBuilder;

private:
    void normalize() {
        terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                    [](const Term& t) { return t.num == 0; }),
                     terms_.end());
        if (terms_.empty()) {
            den_ = 1;
            return;
        }
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term& a, const Term& b) { return b.m < a.m; });
        mpz_class g = den_;
        for (const auto& t : terms_) {
            if (g == 1) break;
            g = mpz_gcd_of(g, t.num);
        }
        if (g < 0) g = -g;
        if (g > 1) {
            for (auto& t : terms_) t.num /= g;
            den_ /= g;
        }
        if (den_ < 0) {
            den_ = -den_;
            for (auto& t : terms_) t.num = -t.num;
        }
    }

    const VarTable* tab_;
    std::vector<Term> terms_;
    mpz_class den_;
};

/// Mutable accumulator for building polynomials term by term without paying
/// a normalization per operation. All pending coefficients share one working
/// denominator; build() hands back the canonical immutable Poly.
class PolyBuilder {
public:
    explicit PolyBuilder(const VarTable& tab) : tab_(&tab), den_(1) {}

    void reserve(size_t n) { acc_.reserve(n); }
    const VarTable& table() const { return *tab_; }
    const mpz_class& den() const { return den_; }

    /// Force the working denominator to a multiple of d (returns den/d).
    mpz_class align_den(const mpz_class& d) {
        if (d <= 0) throw std::invalid_argument("PolyBuilder: denominator must be positive");
        mpz_class g = mpz_gcd_of(den_, d);
        mpz_class extra = d / g;
        if (extra != 1) {
            for (auto& kv : acc_) kv.second *= extra;
            den_ *= extra;
        }
        return den_ / d;
    }

    /// Accumulate (c/d) * m.
    void add(const Mono& m, const mpz_class& c, const mpz_class& d) {
        mpz_class scale = align_den(d);
        acc_[m] += c * scale;
    }

    /// Accumulate c * m at the current working denominator (raw fast path;
    /// caller must have aligned the denominator first).
    void add_raw(const Mono& m, const mpz_class& c) { acc_[m] += c; }

    void add_rat(const Mono& m, const Rat& r) { add(m, r.num(), r.den()); }

    /// Accumulate scale * p.
    void add_poly(const Poly& p, const Rat& scale = Rat(1)) {
        if (p.is_zero() || scale.is_zero()) return;
        mpz_class d = p.common_den() * scale.den();
        mpz_class s = align_den(d);
        for (const auto& t : p.terms()) acc_[t.m] += t.num * scale.num() * s;
    }

    Poly build() {
        Poly r(*tab_);
        r.den_ = den_;
        r.terms_.reserve(acc_.size());
        for (auto& kv : acc_) {
            if (kv.second == 0) continue;
            r.terms_.push_back(Poly::Term{kv.first, std::move(kv.second)});
        }
        acc_.clear();
        den_ = 1;
        r.normalize();
        return r;
    }

private:
    const VarTable* tab_;
    std::unordered_map<Mono, mpz_class, MonoHash> acc_;
    mpz_class den_;
};

inline Poly Poly::monomial(const VarTable& tab, const Mono& m, const Rat& c) {
    PolyBuilder b(tab);
    b.add_rat(m, c);
    return b.build();
}

inline Poly Poly::operator+(const Poly& o) const {
    if (!compatible(o)) throw std::invalid_argument("Poly: mixed tables");
    PolyBuilder b(*tab_);
    b.reserve(terms_.size() + o.terms_.size());
    b.add_poly(*this);
    b.add_poly(o);
    return b.build();
}

inline Poly Poly::scaled(const Rat& c) const {
    PolyBuilder b(*tab_);
    b.add_poly(*this, c);
    return b.build();
}

inline Poly Poly::operator*(const Poly& o) const {
    if (!compatible(o)) throw std::invalid_argument("Poly: mixed tables");
    PolyBuilder b(*tab_);
    b.reserve(terms_.size() * o.terms_.size() / 2 + 8);
    b.align_den(den_ * o.den_);
    for (const auto& t1 : terms_)
        for (const auto& t2 : o.terms_)
            b.add_raw(t1.m.mul(t2.m), t1.num * t2.num);
    return b.build();
}

inline Poly Poly::pow(unsigned k) const {
    Poly r = Poly::constant(*tab_, Rat(1));
    Poly base = *this;
    while (k) {
        if (k & 1u) r = r * base;
        base = (k >>= 1) ? base * base : base;
    }
    return r;
}

inline Poly Poly::derivative(int var) const {
    PolyBuilder b(*tab_);
    b.align_den(den_);
    for (const auto& t : terms_) {
        int e = t.m.exp(var);
        if (!e) continue;
        Mono m = t.m;
        m.set_exp(*tab_, var, e - 1);
        b.add_raw(m, t.num * e);
    }
    return b.build();
}

inline Poly Poly::graded_component(int d) const {
    PolyBuilder b(*tab_);
    b.align_den(den_);
    for (const auto& t : terms_)
        if (t.m.wdeg() == d) b.add_raw(t.m, t.num);
    return b.build();
}

inline Poly Poly::substitute(const VarTable& out_tab,
                             const std::vector<const Poly*>& images) const {
    if (int(images.size()) != tab_->arity())
        throw std::invalid_argument("Poly::substitute: image list arity mismatch");
    // Cache powers of each image as needed.
    std::vector<std::vector<Poly>> powers(images.size());
    auto power = [&](int v, int e) -> const Poly& {
        auto& pw = powers[size_t(v)];
        if (pw.empty()) {
            if (!images[size_t(v)])
                throw std::invalid_argument("Poly::substitute: missing image for variable " +
                                            tab_->name(v));
            pw.push_back(Poly::constant(out_tab, Rat(1)));
            pw.push_back(*images[size_t(v)]);
        }
        while (int(pw.size()) <= e) pw.push_back(pw.back() * pw[1]);
        return pw[size_t(e)];
    };
    PolyBuilder b(out_tab);
    for (const auto& t : terms_) {
        Poly prod = Poly::constant(out_tab, Rat(t.num, den_));
        for (int v = 0; v < tab_->arity(); ++v) {
            int e = t.m.exp(v);
            if (!e) continue;
            prod = prod * power(v, e);
            if (prod.is_zero()) break;
        }
        b.add_poly(prod);
    }
    return b.build();
}

inline Poly Poly::parse(const VarTable& tab, const std::string& text) {
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("Poly::parse: " + why + " in '" + text + "'");
    };
    // Tokenize into terms on " + " (plus signs separating terms are always
    // space-delimited in canonical output; coefficient signs are attached).
    std::vector<std::string> chunks;
    {
        std::string cur;
        for (size_t i = 0; i < text.size();) {
            if (text.compare(i, 3, " + ") == 0) {
                chunks.push_back(cur);
                cur.clear();
                i += 3;
            } else {
                cur += text[i++];
            }
        }
        chunks.push_back(cur);
    }
    PolyBuilder b(tab);
    auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t");
        size_t z = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, z - a + 1);
    };
    for (auto& raw : chunks) {
        std::string term = trim(raw);
        if (term.empty()) fail("empty term");
        // Split on '*'.
        std::vector<std::string> factors;
        {
            std::string cur;
            for (char ch : term) {
                if (ch == '*') {
                    factors.push_back(trim(cur));
                    cur.clear();
                } else {
                    cur += ch;
                }
            }
            factors.push_back(trim(cur));
        }
        Rat coef = Rat::parse(factors[0]);
        Mono m = Mono::one();
        for (size_t f = 1; f < factors.size(); ++f) {
            std::string& fac = factors[f];
            if (fac.empty()) fail("empty factor");
            size_t caret = fac.rfind('^');
            std::string name = fac;
            int e = 1;
            if (caret != std::string::npos) {
                std::string expstr = trim(fac.substr(caret + 1));
                bool digits = !expstr.empty();
                for (char c : expstr) digits = digits && std::isdigit(uint8_t(c));
                if (digits) {
                    name = trim(fac.substr(0, caret));
                    e = std::stoi(expstr);
                }
            }
            int idx = tab.index_of(name);
            if (idx < 0) fail("unknown variable '" + name + "'");
            m.set_exp(tab, idx, m.exp(idx) + e);
        }
        b.add_rat(m, coef);
    }
    return b.build();
}

/// Exact polynomial square root. Returns the square root with positive lead
/// coefficient when the input is a perfect square (including sqrt(0) = 0),
/// std::nullopt otherwise. Lead-term recursion: peel the current remainder's
/// lead, divide by twice the root's lead, repeat.
inline std::optional<Poly> poly_sqrt(const Poly& f) {
    if (f.is_zero()) return Poly::zero(f.table());
    const VarTable& tab = f.table();

    // Square root of the lead term, if it exists.
    const Mono& lm = f.lead_mono();
    Rat lc = f.lead_coeff();
    if (lc.sign() < 0) return std::nullopt;
    Mono half = Mono::one();
    for (int v = 0; v < tab.arity(); ++v) {
        int e = lm.exp(v);
        if (e & 1) return std::nullopt;
        if (e) half.set_exp(tab, v, e / 2);
    }
    mpz_class n = lc.num(), d = lc.den(), sn, sd;
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
    if (mpz_perfect_square_p(d.get_mpz_t()) == 0) return std::nullopt;
    mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());

    Poly g = Poly::monomial(tab, half, Rat(sn, sd));
    Poly r = f - g * g;
    const Rat twice_lc = Rat(sn * 2, sd);
    // |g| <= (|f|+1)/2 for genuine squares, so cap the iterations; exceeding
    // the cap proves the input is not a square.
    size_t cap = f.size() / 2 + 2;
    for (size_t it = 0; !r.is_zero(); ++it) {
        if (it > cap) return std::nullopt;
        const Mono& t = r.lead_mono();
        if (!half.divides(t)) return std::nullopt;
        Mono q = half.div_into(t);
        if (!(q < half)) {
            // Next root term must be strictly below the root's lead.
            return std::nullopt;
        }
        Poly u = Poly::monomial(tab, q, r.lead_coeff() / twice_lc);
        // Maintain r = f - g'^2 for g' = g + u: subtract 2 g u + u^2.
        r = r - (g * u).scaled(Rat(2)) - u * u;
        g = g + u;
    }
    return g;
}

} // namespace twoblock
