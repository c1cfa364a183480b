#pragma once
// Laurent polynomials over Gaussian rationals: the exact coefficient ring for
// the two-chart projective-line backend. Chart transitions are restricted to
// x -> c*x^e with e = +1 or -1, the largest family under which Laurent
// polynomials pull back to Laurent polynomials.

#include "srs/rational.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>

namespace srs {

class LaurentFn {
public:
    using Scalar = RationalC;

    // x -> coeff * x^exponent, exponent in {+1, -1}; coeff nonzero.
    struct ChartMap {
        RationalC coeff = RationalC(1);
        int exponent = 1;

        static ChartMap identity() { return {}; }
        bool is_identity() const { return exponent == 1 && coeff == RationalC(1); }

        // this o inner
        ChartMap after(const ChartMap& inner) const {
            ChartMap r;
            r.exponent = exponent * inner.exponent;
            r.coeff = coeff * inner.coeff.pow(exponent);
            return r;
        }
        ChartMap inverse() const {
            ChartMap r;
            r.exponent = exponent;
            r.coeff = (exponent == 1) ? RationalC(1) / coeff : coeff;
            return r;
        }
        LaurentFn derivative() const {
            LaurentFn d;
            d.set(exponent - 1, coeff * RationalC(exponent));
            return d;
        }
        LaurentFn as_fn() const {
            LaurentFn f;
            f.set(exponent, coeff);
            return f;
        }
    };

    LaurentFn() = default;

    static LaurentFn zero() { return {}; }
    static LaurentFn one() { return monomial(0, RationalC(1)); }
    static LaurentFn monomial(int k, RationalC c) {
        LaurentFn f;
        f.set(k, c);
        return f;
    }
    static Scalar scalar(long long num, long long den = 1) {
        return RationalC(Rational(num, den));
    }

    void set(int k, RationalC c) {
        if (c.is_zero()) coeffs_.erase(k);
        else coeffs_[k] = c;
    }
    RationalC coeff(int k) const {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? RationalC() : it->second;
    }
    const std::map<int, RationalC>& coeffs() const { return coeffs_; }

    bool is_zero(double = 0.0) const { return coeffs_.empty(); }

    double sup_norm() const {
        double m = 0.0;
        for (auto& [k, c] : coeffs_) m = std::max(m, std::abs(c.to_complex()));
        return m;
    }

    friend LaurentFn operator+(const LaurentFn& a, const LaurentFn& b) {
        LaurentFn r = a;
        for (auto& [k, c] : b.coeffs_) r.set(k, r.coeff(k) + c);
        return r;
    }
    friend LaurentFn operator-(const LaurentFn& a, const LaurentFn& b) {
        LaurentFn r = a;
        for (auto& [k, c] : b.coeffs_) r.set(k, r.coeff(k) - c);
        return r;
    }
    LaurentFn operator-() const {
        LaurentFn r;
        for (auto& [k, c] : coeffs_) r.coeffs_[k] = -c;
        return r;
    }
    friend LaurentFn operator*(const LaurentFn& a, const LaurentFn& b) {
        LaurentFn r;
        for (auto& [ka, ca] : a.coeffs_)
            for (auto& [kb, cb] : b.coeffs_) r.set(ka + kb, r.coeff(ka + kb) + ca * cb);
        return r;
    }
    friend LaurentFn operator*(const Scalar& s, const LaurentFn& a) {
        LaurentFn r;
        if (s.is_zero()) return r;
        for (auto& [k, c] : a.coeffs_) r.coeffs_[k] = s * c;
        return r;
    }
    LaurentFn& operator+=(const LaurentFn& o) { return *this = *this + o; }
    LaurentFn& operator-=(const LaurentFn& o) { return *this = *this - o; }
    LaurentFn& operator*=(const LaurentFn& o) { return *this = *this * o; }

    friend bool operator==(const LaurentFn& a, const LaurentFn& b) {
        return a.coeffs_ == b.coeffs_;
    }

    LaurentFn ddx() const {
        LaurentFn r;
        for (auto& [k, c] : coeffs_)
            if (k != 0) r.set(k - 1, RationalC(k) * c);
        return r;
    }
    LaurentFn ddxbar() const { return {}; } // holomorphic backend

    // Pullback along x -> c*x^e: sum a_k (c x^e)^k.
    LaurentFn pullback(const ChartMap& m) const {
        if (m.is_identity()) return *this;
        LaurentFn r;
        for (auto& [k, c] : coeffs_) r.set(m.exponent * k, c * m.coeff.pow(k));
        return r;
    }

    // Division by an invertible element; on this ring units are monomials.
    LaurentFn div_unit(const LaurentFn& u) const {
        if (u.coeffs_.size() != 1)
            throw std::domain_error("LaurentFn::div_unit: divisor is not a monomial");
        auto [k, c] = *u.coeffs_.begin();
        LaurentFn r;
        for (auto& [kk, cc] : coeffs_) r.set(kk - k, cc / c);
        return r;
    }

    std::complex<double> eval(std::complex<double> x) const {
        std::complex<double> s = 0.0;
        for (auto& [k, c] : coeffs_) s += c.to_complex() * std::pow(x, k);
        return s;
    }

    std::string str() const {
        if (coeffs_.empty()) return "0";
        std::string s;
        for (auto& [k, c] : coeffs_) {
            if (!s.empty()) s += " + ";
            s += c.str() + "*x^" + std::to_string(k);
        }
        return s;
    }

private:
    std::map<int, RationalC> coeffs_;
};

} // namespace srs
