#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "srs/laurent.hpp"
#include "srs/supernumber.hpp"

#include <random>
#include <vector>

using namespace srs;
using Series = SuperSeries<LaurentFn>;

namespace {

LaurentFn lx(int k, long long num = 1, long long den = 1) {
    return LaurentFn::monomial(k, RationalC(Rational(num, den)));
}

// random Laurent polynomial with small rational coefficients, degrees in [-2,2]
LaurentFn random_laurent(std::mt19937& rng) {
    std::uniform_int_distribution<int> deg(-2, 2), num(-3, 3), den(1, 2);
    LaurentFn f;
    for (int t = 0; t < 3; ++t)
        f.set(deg(rng), RationalC(Rational(num(rng), den(rng)), Rational(num(rng), den(rng))));
    return f;
}

Series random_series(std::mt19937& rng, int n, int trunc = 2) {
    Series s(n, trunc);
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<OddIndex> idx;
    idx.push_back(OddIndex::unit());
    for (int i = 1; i <= n; ++i) idx.push_back(OddIndex::of_xi(i));
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) idx.push_back(OddIndex::of_xi(i, j));
    size_t base = idx.size();
    for (size_t k = 0; k < base; ++k) {
        OddIndex m = idx[k];
        m.theta = true;
        idx.push_back(m);
    }
    for (auto& m : idx)
        if (coin(rng)) s.set(m, random_laurent(rng));
    return s;
}

// D = d/dtheta + theta d/dx through series operations
Series apply_d(const Series& s) {
    return s.derive_theta() + Series::theta(s.n(), s.trunc()) * s.ddx();
}

std::vector<OddIndex> all_monomials(int n) {
    std::vector<OddIndex> idx;
    idx.push_back(OddIndex::unit());
    for (int i = 1; i <= n; ++i) idx.push_back(OddIndex::of_xi(i));
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) idx.push_back(OddIndex::of_xi(i, j));
    size_t base = idx.size();
    for (size_t k = 0; k < base; ++k) {
        OddIndex m = idx[k];
        m.theta = true;
        idx.push_back(m);
    }
    return idx;
}

} // namespace

TEST_CASE("nilpotency and anticommutation of generators") {
    int n = 2;
    Series th = Series::theta(n);
    Series x1 = Series::xi(n, 1);
    Series x2 = Series::xi(n, 2);

    CHECK((th * th).is_zero());
    CHECK((x1 * x1).is_zero());

    Series a = x1 * x2;
    Series b = x2 * x1;
    CHECK((a + b).is_zero());
    CHECK(a.coeff(OddIndex::of_xi(1, 2)) == LaurentFn::one());

    // (theta xi1)(theta xi2) = 0
    CHECK(((th * x1) * (th * x2)).is_zero());
}

TEST_CASE("left odd derivatives") {
    int n = 2;
    Series th = Series::theta(n);
    Series x1 = Series::xi(n, 1);
    Series x2 = Series::xi(n, 2);

    // d/dtheta (theta xi1) = xi1
    CHECK(((th * x1).derive_theta() - x1).is_zero());
    // d/dxi1 (theta xi1) = -theta
    CHECK(((th * x1).derive_xi(1) + th).is_zero());
    // d/dxi2 (xi1 xi2) = -xi1
    CHECK(((x1 * x2).derive_xi(2) + x1).is_zero());
}

TEST_CASE("product is associative and supercommutative on monomials, n=3") {
    int n = 3;
    auto idx = all_monomials(n);
    std::vector<Series> mono;
    for (auto& m : idx) {
        Series s(n);
        s.set(m, LaurentFn::one());
        mono.push_back(s);
    }
    for (auto& a : mono)
        for (auto& b : mono) {
            // supercommutativity: a b = (-1)^{|a||b|} b a
            auto& ma = a.terms().begin()->first;
            auto& mb = b.terms().begin()->first;
            Series ab = a * b;
            Series ba = b * a;
            bool both_odd = ma.parity() == Parity::odd && mb.parity() == Parity::odd;
            CHECK((both_odd ? (ab + ba) : (ab - ba)).is_zero());
            for (auto& c : mono) CHECK((((a * b) * c) - (a * (b * c))).is_zero());
        }
}

TEST_CASE("odd derivative is an odd derivation") {
    std::mt19937 rng(7);
    int n = 2;
    for (int iter = 0; iter < 20; ++iter) {
        auto idx = all_monomials(n);
        std::uniform_int_distribution<size_t> pick(0, idx.size() - 1);
        Series a(n), b(n);
        a.set(idx[pick(rng)], random_laurent(rng));
        b.set(idx[pick(rng)], random_laurent(rng));
        bool a_odd = a.terms().empty() || a.terms().begin()->first.parity() == Parity::odd;
        for (int v = 0; v <= n; ++v) {
            auto d = [&](const Series& s) { return v == 0 ? s.derive_theta() : s.derive_xi(v); };
            Series lhs = d(a * b);
            Series rhs = d(a) * b + (a_odd ? -(a * d(b)) : a * d(b));
            CHECK((lhs - rhs).is_zero());
        }
    }
}

TEST_CASE("D squared is d/dx") {
    std::mt19937 rng(11);
    for (int iter = 0; iter < 25; ++iter) {
        Series s = random_series(rng, 2);
        CHECK((apply_d(apply_d(s)) - s.ddx()).is_zero());
    }
}

TEST_CASE("substitution: identity images") {
    std::mt19937 rng(3);
    int n = 2;
    for (int iter = 0; iter < 10; ++iter) {
        Series s = random_series(rng, n);
        Series x_img(n); // identity: classical chart + zero nilpotent
        Series th_img = Series::theta(n);
        CHECK((s.substitute(LaurentFn::ChartMap::identity(), x_img, th_img) - s).is_zero());
    }
}

TEST_CASE("substitution: even Taylor shift") {
    int n = 2;
    // coefficient g(x) = x^3, image x -> x + xi1 xi2 b(x), b = x^2
    Series s(n);
    s.set(OddIndex::unit(), lx(3));
    Series nil(n);
    nil.set(OddIndex::of_xi(1, 2), lx(2));
    Series out = s.substitute(LaurentFn::ChartMap::identity(), nil, Series::theta(n));
    // expected: x^3 + xi1 xi2 * x^2 * 3x^2
    Series expect(n);
    expect.set(OddIndex::unit(), lx(3));
    expect.set(OddIndex::of_xi(1, 2), lx(4, 3));
    CHECK((out - expect).is_zero());
}

TEST_CASE("substitution: odd slot with chart pullback") {
    int n = 1;
    // term theta*g(x), g = x^2; theta -> theta*zeta(x) + xi1 psi(x), x -> 1/x
    Series s(n);
    OddIndex m = OddIndex::of_theta();
    s.set(m, lx(2));
    LaurentFn::ChartMap flip{RationalC(1), -1};
    Series odd_img(n);
    odd_img.set(OddIndex::of_theta(), lx(1, 5));     // zeta = 5x
    odd_img.set(OddIndex::of_xi(1), lx(0, 7));       // psi = 7
    Series out = s.substitute(flip, Series(n), odd_img);
    // expected: (theta*5x + xi1*7) * (1/x)^2
    Series expect(n);
    expect.set(OddIndex::of_theta(), lx(-1, 5));
    expect.set(OddIndex::of_xi(1), lx(-2, 7));
    CHECK((out - expect).is_zero());
}

TEST_CASE("truncation consistency: order 3 computation truncated to 2") {
    std::mt19937 rng(23);
    int n = 3;
    for (int iter = 0; iter < 10; ++iter) {
        Series a3 = random_series(rng, n, 3);
        Series b3 = random_series(rng, n, 3);
        Series a2 = a3.truncated(2), b2 = b3.truncated(2);
        CHECK(((a3 * b3).truncated(2) - a2 * b2).is_zero());
        CHECK(((a3 + b3).truncated(2) - (a2 + b2)).is_zero());
        CHECK((apply_d(a3).truncated(2) - apply_d(a2)).is_zero());
    }
}

TEST_CASE("parity errors are rejected") {
    int n = 1;
    Series s = Series::theta(n);
    Series bad_odd = Series::constant(n, LaurentFn::one()); // even where odd required
    CHECK_THROWS(s.substitute(LaurentFn::ChartMap::identity(), Series(n), bad_odd));
    Series bad_even = Series::xi(n, 1); // odd where even required
    CHECK_THROWS(s.substitute(LaurentFn::ChartMap::identity(), bad_even, Series::theta(n)));
}
