#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace twoblock {

/// Arbitrary-precision rational number, always stored reduced with positive
/// denominator. Thin value wrapper over GMP's mpq_class; every constructor
/// and operation canonicalizes, so two equal values are representation-equal.
class Rat {
public:
    Rat() : q_(0) {}
    Rat(long n) : q_(n) {}
    Rat(long n, long d) : q_(n, d) {
        if (d == 0) throw std::invalid_argument("Rat: zero denominator");
        q_.canonicalize();
    }
    explicit Rat(const mpz_class& n) : q_(n) {}
    Rat(const mpz_class& n, const mpz_class& d) : q_(n, d) {
        if (d == 0) throw std::invalid_argument("Rat: zero denominator");
        q_.canonicalize();
    }
    explicit Rat(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    /// Parse "p" or "p/q" (optional leading '-' or '+'). Throws on malformed
    /// input or zero denominator.
    static Rat parse(const std::string& s) {
        if (s.empty()) throw std::invalid_argument("Rat::parse: empty string");
        mpq_class q;
        if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
            throw std::invalid_argument("Rat::parse: bad rational '" + s + "'");
        if (mpq_denref(q.get_mpq_t())->_mp_size == 0)
            throw std::invalid_argument("Rat::parse: zero denominator in '" + s + "'");
        q.canonicalize();
        return Rat(q);
    }

    const mpz_class num() const { return q_.get_num(); }
    const mpz_class den() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }
    int sign() const { return sgn(q_); }

    Rat operator-() const { return Rat(mpq_class(-q_)); }
    Rat operator+(const Rat& o) const { return Rat(mpq_class(q_ + o.q_)); }
    Rat operator-(const Rat& o) const { return Rat(mpq_class(q_ - o.q_)); }
    Rat operator*(const Rat& o) const { return Rat(mpq_class(q_ * o.q_)); }
    Rat operator/(const Rat& o) const {
        if (o.is_zero()) throw std::domain_error("Rat: division by zero");
        return Rat(mpq_class(q_ / o.q_));
    }
    Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
    Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
    Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
    Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

    Rat inverse() const {
        if (is_zero()) throw std::domain_error("Rat: inverse of zero");
        return Rat(mpq_class(1 / q_));
    }

    bool operator==(const Rat& o) const { return q_ == o.q_; }
    bool operator!=(const Rat& o) const { return q_ != o.q_; }
    bool operator<(const Rat& o) const { return q_ < o.q_; }
    bool operator<=(const Rat& o) const { return q_ <= o.q_; }
    bool operator>(const Rat& o) const { return q_ > o.q_; }
    bool operator>=(const Rat& o) const { return q_ >= o.q_; }

    /// Canonical text: "p" when the denominator is 1, else "p/q".
    std::string str() const { return q_.get_str(); }

    friend std::ostream& operator<<(std::ostream& os, const Rat& r) {
        return os << r.str();
    }

private:
    mpq_class q_;
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }

struct RatHash {
    size_t operator()(const Rat& r) const {
        std::hash<std::string> h;
        return h(r.str());
    }
};

} // namespace twoblock
