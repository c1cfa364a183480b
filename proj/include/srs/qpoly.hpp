#pragma once
// Finite sums  f(z) = sum_m a_m exp(2*pi*i*m*z)  on the cylinder C/Z.
// These are the holomorphic chart functions of the torus backend: they are
// holomorphic on every horizontal band, closed under products and d/dz, and
// pull back exactly across the lattice translations identifying the two
// annular charts (mode m picks up exp(2*pi*i*m*t) under z -> z + t).

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

namespace srs {

class QPoly {
public:
    using Scalar = std::complex<double>;
    using cd = std::complex<double>;

    // z -> z + shift
    struct ChartMap {
        cd shift = 0.0;

        static ChartMap identity() { return {}; }
        bool is_identity() const { return shift == 0.0; }
        ChartMap after(const ChartMap& inner) const { return {shift + inner.shift}; }
        ChartMap inverse() const { return {-shift}; }
        QPoly derivative() const { return QPoly::one(); }
    };

    QPoly() = default;

    static QPoly zero() { return {}; }
    static QPoly one() { return mode(0, 1.0); }
    static QPoly mode(int m, cd a) {
        QPoly f;
        f.set(m, a);
        return f;
    }
    static Scalar scalar(long long num, long long den = 1) {
        return cd(double(num) / double(den), 0.0);
    }

    void set(int m, cd a) {
        if (a == 0.0) modes_.erase(m);
        else modes_[m] = a;
    }
    cd coeff(int m) const {
        auto it = modes_.find(m);
        return it == modes_.end() ? cd(0.0) : it->second;
    }
    const std::map<int, cd>& modes() const { return modes_; }

    bool is_zero(double tol = 1e-9) const { return sup_norm() <= tol; }

    double sup_norm() const {
        double m = 0.0;
        for (auto& [k, a] : modes_) m = std::max(m, std::abs(a));
        return m;
    }

    friend QPoly operator+(const QPoly& a, const QPoly& b) {
        QPoly r = a;
        for (auto& [m, c] : b.modes_) r.set(m, r.coeff(m) + c);
        return r;
    }
    friend QPoly operator-(const QPoly& a, const QPoly& b) {
        QPoly r = a;
        for (auto& [m, c] : b.modes_) r.set(m, r.coeff(m) - c);
        return r;
    }
    QPoly operator-() const {
        QPoly r;
        for (auto& [m, c] : modes_) r.modes_[m] = -c;
        return r;
    }
    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        QPoly r;
        for (auto& [ma, ca] : a.modes_)
            for (auto& [mb, cb] : b.modes_) r.set(ma + mb, r.coeff(ma + mb) + ca * cb);
        return r;
    }
    friend QPoly operator*(const Scalar& s, const QPoly& a) {
        QPoly r;
        for (auto& [m, c] : a.modes_) r.set(m, s * c);
        return r;
    }
    QPoly& operator+=(const QPoly& o) { return *this = *this + o; }
    QPoly& operator-=(const QPoly& o) { return *this = *this - o; }
    QPoly& operator*=(const QPoly& o) { return *this = *this * o; }

    QPoly ddx() const { // d/dz
        QPoly r;
        constexpr cd tpi(0.0, 2.0 * std::numbers::pi);
        for (auto& [m, c] : modes_)
            if (m != 0) r.set(m, tpi * double(m) * c);
        return r;
    }
    QPoly ddxbar() const { return {}; }

    QPoly pullback(const ChartMap& t) const {
        if (t.is_identity()) return *this;
        QPoly r;
        constexpr cd tpi(0.0, 2.0 * std::numbers::pi);
        for (auto& [m, c] : modes_) r.set(m, c * std::exp(tpi * double(m) * t.shift));
        return r;
    }

    QPoly div_unit(const QPoly& u) const {
        if (u.modes_.size() != 1)
            throw std::domain_error("QPoly::div_unit: divisor is not a single mode");
        auto [k, a] = *u.modes_.begin();
        QPoly r;
        for (auto& [m, c] : modes_) r.set(m - k, c / a);
        return r;
    }

    cd eval(cd z) const {
        constexpr cd tpi(0.0, 2.0 * std::numbers::pi);
        cd s = 0.0;
        for (auto& [m, c] : modes_) s += c * std::exp(tpi * double(m) * z);
        return s;
    }

    std::string str() const {
        if (modes_.empty()) return "0";
        std::string s;
        for (auto& [m, c] : modes_) {
            if (!s.empty()) s += " + ";
            s += "(" + std::to_string(c.real()) + "," + std::to_string(c.imag()) + ")e[" +
                 std::to_string(m) + "]";
        }
        return s;
    }

private:
    std::map<int, cd> modes_;
};

} // namespace srs
