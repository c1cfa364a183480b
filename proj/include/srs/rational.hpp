#pragma once
// Exact rational and Gaussian-rational scalars for the Laurent backend.
// Numerator and denominator are 128-bit with overflow-checked arithmetic and
// gcd reduction after every operation; chains of compositions, inversions and
// Taylor expansions at truncation 2 stay far below the limit.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace srs {

class Rational {
public:
    using int128 = __int128;

    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        reduce();
    }

    long long num() const {
        if (num_ > INT64_MAX || num_ < INT64_MIN)
            throw std::overflow_error("Rational: numerator exceeds 64 bits");
        return static_cast<long long>(num_);
    }
    long long den() const {
        if (den_ > INT64_MAX) throw std::overflow_error("Rational: denominator exceeds 64 bits");
        return static_cast<long long>(den_);
    }

    bool is_zero() const { return num_ == 0; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(add(mul(a.num_, b.den_), mul(b.num_, a.den_)), mul(a.den_, b.den_));
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make(sub(mul(a.num_, b.den_), mul(b.num_, a.den_)), mul(a.den_, b.den_));
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(mul(a.num_, b.num_), mul(a.den_, b.den_));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return make(mul(a.num_, b.den_), mul(a.den_, b.num_));
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    double to_double() const { return double(num_) / double(den_); }

    std::string str() const {
        if (den_ == 1) return to_str(num_);
        return to_str(num_) + "/" + to_str(den_);
    }

    static Rational from_parts(int128 n, int128 d) { return make(n, d); }
    int128 raw_num() const { return num_; }
    int128 raw_den() const { return den_; }

private:
    static int128 add(int128 a, int128 b) {
        int128 r;
        if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Rational: overflow");
        return r;
    }
    static int128 sub(int128 a, int128 b) {
        int128 r;
        if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("Rational: overflow");
        return r;
    }
    static int128 mul(int128 a, int128 b) {
        int128 r;
        if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Rational: overflow");
        return r;
    }
    static int128 gcd(int128 a, int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }
    static Rational make(int128 n, int128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        int128 g = gcd(n, d);
        Rational r;
        r.num_ = n / g;
        r.den_ = d / g;
        return r;
    }
    void reduce() {
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        int128 g = gcd(num_, den_);
        num_ /= g;
        den_ /= g;
    }
    static std::string to_str(int128 v) {
        if (v == 0) return "0";
        bool neg = v < 0;
        unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
        std::string s;
        while (u > 0) {
            s += char('0' + int(u % 10));
            u /= 10;
        }
        if (neg) s += '-';
        return std::string(s.rbegin(), s.rend());
    }

    int128 num_;
    int128 den_;
};

// Gaussian rational a + b*i. Exact field: closed under the four operations.
class RationalC {
public:
    RationalC() = default;
    RationalC(Rational re) : re_(re) {}
    RationalC(long long re) : re_(re) {}
    RationalC(Rational re, Rational im) : re_(re), im_(im) {}

    static RationalC i() { return RationalC(Rational(0), Rational(1)); }

    const Rational& real() const { return re_; }
    const Rational& imag() const { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

    friend RationalC operator+(const RationalC& a, const RationalC& b) {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend RationalC operator-(const RationalC& a, const RationalC& b) {
        return {a.re_ - b.re_, a.im_ - b.im_};
    }
    friend RationalC operator*(const RationalC& a, const RationalC& b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend RationalC operator/(const RationalC& a, const RationalC& b) {
        Rational n = b.re_ * b.re_ + b.im_ * b.im_;
        if (n.is_zero()) throw std::domain_error("RationalC: division by zero");
        return {(a.re_ * b.re_ + a.im_ * b.im_) / n, (a.im_ * b.re_ - a.re_ * b.im_) / n};
    }
    RationalC operator-() const { return {-re_, -im_}; }

    RationalC& operator+=(const RationalC& o) { return *this = *this + o; }
    RationalC& operator-=(const RationalC& o) { return *this = *this - o; }
    RationalC& operator*=(const RationalC& o) { return *this = *this * o; }
    RationalC& operator/=(const RationalC& o) { return *this = *this / o; }

    friend bool operator==(const RationalC& a, const RationalC& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const RationalC& a, const RationalC& b) { return !(a == b); }

    // Integer power, negative exponents allowed for nonzero values.
    RationalC pow(int e) const {
        RationalC base = *this;
        if (e < 0) { base = RationalC(1) / base; e = -e; }
        RationalC r(1);
        while (e > 0) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }

    std::string str() const {
        if (im_.is_zero()) return re_.str();
        return "(" + re_.str() + "+" + im_.str() + "i)";
    }

private:
    Rational re_;
    Rational im_;
};

inline RationalC operator*(long long a, const RationalC& b) { return RationalC(a) * b; }

} // namespace srs
