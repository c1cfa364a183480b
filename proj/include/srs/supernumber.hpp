#pragma once
// Truncated supercommutative series in one odd coordinate theta and odd
// parameters xi_1..xi_n, with ring-valued coefficients. Products are cut off
// at total xi-degree `trunc` (2 everywhere in the library; 3 is allowed so
// tests can check truncation consistency).
//
// Conventions, used consistently everywhere:
//   * canonical monomial order: theta first, then xi indices ascending;
//   * odd derivatives are LEFT derivatives: d/dv strikes v after moving it to
//     the front with Koszul signs, so d/dxi1 (theta xi1) = -theta.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

namespace srs {

enum class Parity { even, odd };

inline Parity operator+(Parity a, Parity b) {
    return (a == b) ? Parity::even : Parity::odd;
}

// theta^a xi_{i1} ... xi_{ip}, indices strictly increasing, p <= 2.
struct OddIndex {
    bool theta = false;
    std::vector<int> xi; // strictly increasing, entries in 1..n

    int xi_degree() const { return static_cast<int>(xi.size()); }
    Parity parity() const { return ((theta ? 1 : 0) + xi.size()) % 2 == 0 ? Parity::even : Parity::odd; }

    bool operator<(const OddIndex& o) const {
        if (theta != o.theta) return !theta;
        return xi < o.xi;
    }
    bool operator==(const OddIndex& o) const { return theta == o.theta && xi == o.xi; }

    static OddIndex unit() { return {}; }
    static OddIndex of_theta() { return {true, {}}; }
    static OddIndex of_xi(int i) { return {false, {i}}; }
    static OddIndex of_xi(int i, int j) {
        if (i > j) std::swap(i, j);
        return {false, {i, j}};
    }
};

template <class Ring>
class SuperSeries {
public:
    using Scalar = typename Ring::Scalar;

    SuperSeries() = default;
    explicit SuperSeries(int n, int trunc = 2) : n_(n), trunc_(trunc) {
        if (trunc != 2 && trunc != 3)
            throw std::invalid_argument("SuperSeries: truncation order must be 2 (or 3 in tests)");
    }

    static SuperSeries constant(int n, Ring c, int trunc = 2) {
        SuperSeries s(n, trunc);
        s.set(OddIndex::unit(), std::move(c));
        return s;
    }
    static SuperSeries theta(int n, int trunc = 2) {
        SuperSeries s(n, trunc);
        s.set(OddIndex::of_theta(), Ring::one());
        return s;
    }
    static SuperSeries xi(int n, int i, int trunc = 2) {
        SuperSeries s(n, trunc);
        s.set(OddIndex::of_xi(i), Ring::one());
        return s;
    }

    int n() const { return n_; }
    int trunc() const { return trunc_; }

    void set(const OddIndex& m, Ring c) {
        check_index(m);
        if (c.is_zero()) terms_.erase(m);
        else terms_[m] = std::move(c);
    }
    void add_to(const OddIndex& m, const Ring& c) { set(m, coeff(m) + c); }

    Ring coeff(const OddIndex& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Ring::zero() : it->second;
    }
    const std::map<OddIndex, Ring>& terms() const { return terms_; }

    bool is_zero(double tol = 0.0) const {
        for (auto& [m, c] : terms_)
            if (!c.is_zero(tol)) return false;
        return true;
    }
    double sup_norm() const {
        double v = 0.0;
        for (auto& [m, c] : terms_) v = std::max(v, c.sup_norm());
        return v;
    }

    bool is_homogeneous(Parity p) const {
        for (auto& [m, c] : terms_)
            if (m.parity() != p) return false;
        return true;
    }

    // --- linear structure -------------------------------------------------
    friend SuperSeries operator+(const SuperSeries& a, const SuperSeries& b) {
        a.check_compat(b);
        SuperSeries r = a;
        for (auto& [m, c] : b.terms_) r.add_to(m, c);
        return r;
    }
    friend SuperSeries operator-(const SuperSeries& a, const SuperSeries& b) {
        a.check_compat(b);
        SuperSeries r = a;
        for (auto& [m, c] : b.terms_) r.set(m, r.coeff(m) - c);
        return r;
    }
    SuperSeries operator-() const {
        SuperSeries r(n_, trunc_);
        for (auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }
    SuperSeries& operator+=(const SuperSeries& o) { return *this = *this + o; }
    SuperSeries& operator-=(const SuperSeries& o) { return *this = *this - o; }

    friend SuperSeries operator*(const Scalar& s, const SuperSeries& a) {
        SuperSeries r(a.n_, a.trunc_);
        for (auto& [m, c] : a.terms_) r.set(m, s * c);
        return r;
    }
    friend SuperSeries operator*(const Ring& g, const SuperSeries& a) {
        SuperSeries r(a.n_, a.trunc_);
        for (auto& [m, c] : a.terms_) r.set(m, g * c);
        return r;
    }

    // --- supercommutative product ------------------------------------------
    friend SuperSeries operator*(const SuperSeries& a, const SuperSeries& b) {
        a.check_compat(b);
        SuperSeries r(a.n_, a.trunc_);
        for (auto& [ma, ca] : a.terms_) {
            for (auto& [mb, cb] : b.terms_) {
                int sign = 0;
                OddIndex m;
                if (!merge(ma, mb, a.trunc_, m, sign)) continue;
                Ring prod = ca * cb;
                r.add_to(m, sign > 0 ? prod : -prod);
            }
        }
        return r;
    }
    SuperSeries& operator*=(const SuperSeries& o) { return *this = *this * o; }

    // --- derivatives --------------------------------------------------------
    // Left derivative with respect to theta.
    SuperSeries derive_theta() const {
        SuperSeries r(n_, trunc_);
        for (auto& [m, c] : terms_) {
            if (!m.theta) continue;
            OddIndex out = m;
            out.theta = false;
            r.add_to(out, c);
        }
        return r;
    }
    // Left derivative with respect to xi_i.
    SuperSeries derive_xi(int i) const {
        SuperSeries r(n_, trunc_);
        for (auto& [m, c] : terms_) {
            auto pos = std::find(m.xi.begin(), m.xi.end(), i);
            if (pos == m.xi.end()) continue;
            int crossings = (m.theta ? 1 : 0) + static_cast<int>(pos - m.xi.begin());
            OddIndex out = m;
            out.xi.erase(out.xi.begin() + (pos - m.xi.begin()));
            Ring v = c;
            if (crossings % 2) v = -v;
            r.add_to(out, v);
        }
        return r;
    }
    // Even derivative: ring d/dx on every coefficient.
    SuperSeries ddx() const {
        SuperSeries r(n_, trunc_);
        for (auto& [m, c] : terms_) r.set(m, c.ddx());
        return r;
    }

    SuperSeries pullback(const typename Ring::ChartMap& f) const {
        SuperSeries r(n_, trunc_);
        for (auto& [m, c] : terms_) r.set(m, c.pullback(f));
        return r;
    }

    // --- structure helpers ---------------------------------------------------
    Ring classical() const { return coeff(OddIndex::unit()); }

    SuperSeries nilpotent_part() const {
        SuperSeries r = *this;
        r.terms_.erase(OddIndex::unit());
        return r;
    }
    // Split as A + theta*B with A, B theta-free; returns (A, B).
    std::pair<SuperSeries, SuperSeries> theta_split() const {
        SuperSeries a(n_, trunc_), b(n_, trunc_);
        for (auto& [m, c] : terms_) {
            if (m.theta) {
                OddIndex mm = m;
                mm.theta = false;
                b.set(mm, c);
            } else {
                a.set(m, c);
            }
        }
        return {a, b};
    }
    SuperSeries xi_component(int degree) const {
        SuperSeries r(n_, trunc_);
        for (auto& [m, c] : terms_)
            if (m.xi_degree() == degree) r.set(m, c);
        return r;
    }
    SuperSeries truncated(int new_trunc) const {
        SuperSeries r(n_, new_trunc);
        for (auto& [m, c] : terms_)
            if (m.xi_degree() <= new_trunc) r.set(m, c);
        return r;
    }

    // --- substitution ---------------------------------------------------------
    // Substitute x -> chart + even_nil, theta -> odd_image. `even_nil` must be
    // even with every term of xi-degree >= 1; odd_image must be odd. Ring
    // coefficients are Taylor-expanded around the chart image to second order,
    // which is exact here since nilpotent^3 = 0 at truncation 2.
    SuperSeries substitute(const typename Ring::ChartMap& chart, const SuperSeries& even_nil,
                           const SuperSeries& odd_image) const {
        check_compat(even_nil);
        check_compat(odd_image);
        if (!even_nil.is_homogeneous(Parity::even))
            throw std::domain_error("substitute: even image has odd terms");
        if (!odd_image.is_homogeneous(Parity::odd))
            throw std::domain_error("substitute: odd image has even terms");
        if (!even_nil.classical().is_zero())
            throw std::domain_error("substitute: nilpotent part carries a classical term");

        SuperSeries nil2 = even_nil * even_nil;
        SuperSeries r(n_, trunc_);
        for (auto& [m, c] : terms_) {
            // Taylor expansion of the coefficient around the chart image.
            SuperSeries piece = SuperSeries::constant(n_, c.pullback(chart), trunc_);
            piece += c.ddx().pullback(chart) * even_nil;
            Ring c2 = Ring::scalar(1, 2) * c.ddx().ddx().pullback(chart);
            piece += c2 * nil2;
            // Odd part of the monomial.
            if (m.theta) piece = piece * odd_image;
            if (m.xi_degree() > 0) {
                SuperSeries mono(n_, trunc_);
                OddIndex mm = m;
                mm.theta = false;
                mono.set(mm, Ring::one());
                piece = piece * mono;
            }
            r += piece;
        }
        return r;
    }
    // Convenience for identity-chart images x -> x + nilpotent: the series
    // holds only the nilpotent correction (a classical entry is rejected by
    // the full overload rather than silently treated as a shift).
    SuperSeries substitute(const SuperSeries& even_image, const SuperSeries& odd_image) const {
        return substitute(Ring::ChartMap::identity(), even_image, odd_image);
    }

private:
    void check_index(const OddIndex& m) const {
        if (m.xi_degree() > trunc_)
            throw std::domain_error("SuperSeries: xi-degree beyond truncation");
        for (size_t k = 0; k < m.xi.size(); ++k) {
            if (m.xi[k] < 1 || m.xi[k] > n_)
                throw std::domain_error("SuperSeries: xi index out of range");
            if (k > 0 && m.xi[k - 1] >= m.xi[k])
                throw std::domain_error("SuperSeries: xi indices not strictly increasing");
        }
    }
    void check_compat(const SuperSeries& o) const {
        if (n_ != o.n_ || trunc_ != o.trunc_)
            throw std::invalid_argument("SuperSeries: mixing different parameter spaces");
    }

    // Product of canonical monomials with Koszul sign; false if it vanishes.
    static bool merge(const OddIndex& a, const OddIndex& b, int trunc, OddIndex& out, int& sign) {
        if (a.theta && b.theta) return false; // theta^2 = 0
        if (a.xi_degree() + b.xi_degree() > trunc) return false;
        int s = 0;
        if (b.theta) s += a.xi_degree(); // move theta of b across xi-block of a
        // merge xi lists, counting inversions (pairs i in a.xi, j in b.xi with j < i)
        for (int i : a.xi)
            for (int j : b.xi) {
                if (i == j) return false; // nilpotent
                if (j < i) ++s;
            }
        out.theta = a.theta || b.theta;
        out.xi.clear();
        std::merge(a.xi.begin(), a.xi.end(), b.xi.begin(), b.xi.end(), std::back_inserter(out.xi));
        sign = (s % 2 == 0) ? 1 : -1;
        return true;
    }

    int n_ = 0;
    int trunc_ = 2;
    std::map<OddIndex, Ring> terms_;
};

} // namespace srs
