#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace twoblock {

/// Hard cap on the number of variables a single polynomial ring may hold.
/// Largest ring in practice: the 60 nonnegative-degree gl coordinates for the
/// (5,5) partition. Monomials store a fixed-size exponent array of this width.
inline constexpr int MAX_VARS = 64;

/// Ordered table of polynomial variables. Each variable carries the name used
/// in canonical serialization, an integer grading weight, and a sign in {+1,-1}
/// describing how the order-two symmetry acts on it. Variable order is the
/// tie-break order of the monomial comparison, so table construction order is
/// part of the canonical form.
class VarTable {
public:
    struct VarInfo {
        std::string name;
        int weight = 0;
        int gamma_sign = +1;
    };

    int add(const std::string& name, int weight, int gamma_sign = +1) {
        if (arity() >= MAX_VARS)
            throw std::length_error("VarTable: variable cap exceeded");
        if (index_.count(name))
            throw std::invalid_argument("VarTable: duplicate variable '" + name + "'");
        if (gamma_sign != 1 && gamma_sign != -1)
            throw std::invalid_argument("VarTable: gamma sign must be +1 or -1");
        vars_.push_back({name, weight, gamma_sign});
        index_[name] = int(vars_.size()) - 1;
        return int(vars_.size()) - 1;
    }

    int arity() const { return int(vars_.size()); }
    const VarInfo& info(int i) const { return vars_.at(size_t(i)); }
    const std::string& name(int i) const { return vars_.at(size_t(i)).name; }
    int weight(int i) const { return vars_.at(size_t(i)).weight; }
    int gamma_sign(int i) const { return vars_.at(size_t(i)).gamma_sign; }

    /// Index of a named variable, or -1 when absent.
    int index_of(const std::string& name) const {
        auto it = index_.find(name);
        return it == index_.end() ? -1 : it->second;
    }

private:
    std::vector<VarInfo> vars_;
    std::unordered_map<std::string, int> index_;
};

/// Exponent vector of a monomial, with its weighted degree cached. Plain data:
/// a monomial does not know its table, but all exponents beyond the owning
/// table's arity are zero, so hashing and comparison can use the full array.
///
/// Canonical order ("graded lex by variable index"): first compare weighted
/// degree, then exponent vectors lexicographically where a larger exponent on
/// an earlier variable wins. The maximum under this order is the lead monomial.
class Mono {
public:
    Mono() = default;

    static Mono one() { return Mono(); }

    static Mono var(const VarTable& tab, int idx, int exp = 1) {
        Mono m;
        m.set_exp(tab, idx, exp);
        return m;
    }

    int exp(int idx) const { return e_[size_t(idx)]; }

    /// Set one exponent, keeping the cached weighted degree consistent.
    void set_exp(const VarTable& tab, int idx, int exp) {
        if (idx < 0 || idx >= tab.arity())
            throw std::out_of_range("Mono: variable index out of range");
        if (exp < 0 || exp > 255)
            throw std::out_of_range("Mono: exponent out of range");
        wdeg_ += (exp - int(e_[size_t(idx)])) * tab.weight(idx);
        tdeg_ += exp - int(e_[size_t(idx)]);
        e_[size_t(idx)] = uint8_t(exp);
    }

    /// Weighted (graded) degree under the table's weights.
    int wdeg() const { return wdeg_; }
    /// Total degree (sum of exponents).
    int tdeg() const { return tdeg_; }

    bool is_one() const { return tdeg_ == 0; }

    Mono mul(const Mono& o) const {
        Mono r;
        for (int w = 0; w < WORDS; ++w) {
            // Per-byte saturation check, then plain add: exponents stay small
            // (degrees are bounded by the grading bound), so overflow is a bug.
            for (int b = 0; b < 8; ++b) {
                int i = w * 8 + b;
                int s = int(e_[size_t(i)]) + int(o.e_[size_t(i)]);
                if (s > 255) throw std::overflow_error("Mono: exponent overflow");
                r.e_[size_t(i)] = uint8_t(s);
            }
        }
        r.wdeg_ = wdeg_ + o.wdeg_;
        r.tdeg_ = tdeg_ + o.tdeg_;
        return r;
    }

    bool divides(const Mono& o) const {
        for (int i = 0; i < MAX_VARS; ++i)
            if (e_[size_t(i)] > o.e_[size_t(i)]) return false;
        return true;
    }

    /// Quotient monomial o / *this; caller must ensure divisibility.
    Mono div_into(const Mono& o) const {
        Mono r;
        for (int i = 0; i < MAX_VARS; ++i) {
            int d = int(o.e_[size_t(i)]) - int(e_[size_t(i)]);
            if (d < 0) throw std::domain_error("Mono: non-divisible quotient");
            r.e_[size_t(i)] = uint8_t(d);
        }
        r.wdeg_ = o.wdeg_ - wdeg_;
        r.tdeg_ = o.tdeg_ - tdeg_;
        return r;
    }

    /// Indices with nonzero exponent, ascending.
    std::vector<int> support() const {
        std::vector<int> s;
        for (int i = 0; i < MAX_VARS; ++i)
            if (e_[size_t(i)]) s.push_back(i);
        return s;
    }

    bool operator==(const Mono& o) const {
        return wdeg_ == o.wdeg_ && std::memcmp(e_.data(), o.e_.data(), MAX_VARS) == 0;
    }
    bool operator!=(const Mono& o) const { return !(*this == o); }

    /// Strict canonical order: graded, then lex by variable index.
    bool operator<(const Mono& o) const {
        if (wdeg_ != o.wdeg_) return wdeg_ < o.wdeg_;
        return std::memcmp(e_.data(), o.e_.data(), MAX_VARS) < 0;
    }
    bool operator>(const Mono& o) const { return o < *this; }

    size_t hash() const {
        // FNV-1a over the exponent words; degree folded in at the end.
        const uint64_t* w = reinterpret_cast<const uint64_t*>(e_.data());
        uint64_t h = 1469598103934665603ull;
        for (int i = 0; i < WORDS; ++i) {
            h ^= w[i];
            h *= 1099511628211ull;
        }
        h ^= uint64_t(uint32_t(wdeg_));
        h *= 1099511628211ull;
        return size_t(h);
    }

    /// Product of the per-variable symmetry signs, exponent-weighted:
    /// the eigenvalue of the induced action on this monomial.
    int gamma_sign(const VarTable& tab) const {
        int s = 1;
        for (int i = 0; i < tab.arity(); ++i)
            if (e_[size_t(i)] & 1 && tab.gamma_sign(i) < 0) s = -s;
        return s;
    }

private:
    static constexpr int WORDS = MAX_VARS / 8;
    alignas(8) std::array<uint8_t, MAX_VARS> e_{};
    int32_t wdeg_ = 0;
    int32_t tdeg_ = 0;
};

struct MonoHash {
    size_t operator()(const Mono& m) const { return m.hash(); }
};

} // namespace twoblock
