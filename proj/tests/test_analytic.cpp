#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "srs/analytic.hpp"
#include "srs/laurent.hpp"
#include "srs/superconformal.hpp"
#include "test_util.hpp"

#include <random>

using namespace srs;

namespace {

const TorusGeom kGeom{cd(0.25, 0.45)};

FourierModes random_modes(std::mt19937& rng, int N, int band = 2) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    FourierModes f(N);
    for (int m = -band; m <= band; ++m)
        for (int n = -band; n <= band; ++n) f.at(m, n) = cd(amp(rng), amp(rng));
    return f;
}

AnalyticDeformation random_deformation(std::mt19937& rng, int n, bool proportional_chi = true) {
    AnalyticDeformation a = AnalyticDeformation::zero(kGeom, n);
    FourierModes base = random_modes(rng, a.N);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    for (int i = 1; i <= n; ++i)
        a.chi_at(i) = proportional_chi ? cd(amp(rng), amp(rng)) * base : random_modes(rng, a.N);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) a.h_at(i, j) = random_modes(rng, a.N);
    return a;
}

GaugeVectorField random_gauge(std::mt19937& rng, int n, int N, bool zero_mean = false) {
    GaugeVectorField g = GaugeVectorField::zero(n, N);
    for (int i = 1; i <= n; ++i) {
        g.nu1_at(i) = random_modes(rng, N);
        if (zero_mean) g.nu1_at(i).at(0, 0) = 0.0;
    }
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) g.nu2[{i, j}] = random_modes(rng, N);
    return g;
}

} // namespace

TEST_CASE("wronskian integrability check") {
    int n = 2;
    AnalyticDeformation a = AnalyticDeformation::zero(kGeom, n);

    // constants pass (dz kills them)
    a.chi_at(1) = FourierModes::constant(a.N, {1.0, 0.5});
    a.chi_at(2) = FourierModes::constant(a.N, {-2.0, 0.25});
    CHECK(check_analytic_deformation(a).ok);

    // proportional smooth data pass
    std::mt19937 rng(7);
    FourierModes s = random_modes(rng, a.N);
    a.chi_at(1) = s;
    a.chi_at(2) = cd(5.0, 0.0) * s;
    CHECK(check_analytic_deformation(a).ok);

    // chi^1 = 1, chi^2 = e_{1,0}: fails
    a.chi_at(1) = FourierModes::constant(a.N, 1.0);
    a.chi_at(2) = FourierModes::mode(a.N, 1, 0, 1.0);
    CHECK_FALSE(check_analytic_deformation(a).ok);
}

TEST_CASE("apply_gauge: trivial, h-only law, exact inverse round trip") {
    int n = 2;
    std::mt19937 rng(11);
    AnalyticDeformation a = random_deformation(rng, n);

    GaugeVectorField zero = GaugeVectorField::zero(n, a.N);
    CHECK(deformation_distance(apply_gauge(a, zero, GaugeOrder::second), a) == 0.0);

    // chi = 0, nu^{ij} only: h' = h + dbar nu^{ij}
    AnalyticDeformation b = AnalyticDeformation::zero(kGeom, n);
    b.h_at(1, 2) = random_modes(rng, b.N);
    GaugeVectorField g2 = GaugeVectorField::zero(n, b.N);
    g2.nu2[{1, 2}] = random_modes(rng, b.N);
    AnalyticDeformation b2 = apply_gauge(b, g2, GaugeOrder::linear);
    FourierModes expect = b.h_at(1, 2) + dbar(kGeom, g2.nu2[{1, 2}]);
    CHECK((b2.h_at(1, 2) - expect).sup_norm() < 1e-12);

    // second order, then the negated gauge: conjugation inverts exactly
    GaugeVectorField g = random_gauge(rng, n, a.N);
    GaugeVectorField gneg = GaugeVectorField::zero(n, a.N);
    for (int i = 1; i <= n; ++i) gneg.nu1_at(i) = -g.nu1_at(i);
    for (auto& [ij, f] : g.nu2) gneg.nu2[ij] = -f;
    AnalyticDeformation round =
        apply_gauge(apply_gauge(a, g, GaugeOrder::second), gneg, GaugeOrder::second);
    CHECK(deformation_distance(round, a) < 1e-8);
}

TEST_CASE("gauge cross coefficients match the generic symbolic bracket") {
    // Validate, over an exact ring, the coefficient 2(nu^j chi^i - nu^i chi^j)
    // used by apply_gauge: build phi = xi_i chi^i N + xi_j chi^j N and
    // nu = xi_i nu^i N + xi_j nu^j N with N = (d/dtheta - theta d/dx), take
    // the generic bracket, and read off the W^+ part at xi_i xi_j.
    using Series = SuperSeries<LaurentFn>;
    int n = 2;
    std::mt19937 rng(13);
    LaurentFn c1 = testutil::random_laurent(rng), c2 = testutil::random_laurent(rng);
    LaurentFn v1 = testutil::random_laurent(rng), v2 = testutil::random_laurent(rng);

    auto graded_wminus = [&](int i, const LaurentFn& coeff) {
        return wminus_field(n, Series::xi(n, i) * Series::constant(n, coeff));
    };
    VectorField<LaurentFn> phi = graded_wminus(1, c1) + graded_wminus(2, c2);
    VectorField<LaurentFn> nu = graded_wminus(1, v1) + graded_wminus(2, v2);
    VectorField<LaurentFn> br = vf_bracket(phi, nu);

    auto dec = decompose_vf(br);
    REQUIRE(dec.superconformal);
    LaurentFn wplus_coeff;
    for (auto& p : dec.pieces)
        if (p.plus && p.index == OddIndex::of_xi(1, 2)) wplus_coeff = p.coeff;
    LaurentFn expect = LaurentFn::scalar(2) * (v2 * c1 - v1 * c2);
    CHECK((wplus_coeff - expect).is_zero());
}

TEST_CASE("gauge additivity up to the recorded quadratic correction") {
    int n = 2;
    std::mt19937 rng(17);
    AnalyticDeformation a = random_deformation(rng, n);
    GaugeVectorField g1 = random_gauge(rng, n, a.N);
    GaugeVectorField g2 = random_gauge(rng, n, a.N);

    AnalyticDeformation two = apply_gauge(apply_gauge(a, g1, GaugeOrder::linear), g2,
                                          GaugeOrder::linear);
    GaugeVectorField sum = GaugeVectorField::zero(n, a.N);
    for (int i = 1; i <= n; ++i) sum.nu1_at(i) = g1.nu1_at(i) + g2.nu1_at(i);
    for (auto& [ij, f] : g1.nu2) sum.nu2[ij] = f + g2.nu2.at(ij);
    AnalyticDeformation one = apply_gauge(a, sum, GaugeOrder::linear);

    // the defect is exactly the cross terms of g2 against dbar g1
    for (int i = 1; i <= n; ++i)
        CHECK((two.chi_at(i) - one.chi_at(i)).sup_norm() < 1e-11);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            FourierModes defect =
                2.0 * (grid_product(g2.nu1_at(j), dbar(kGeom, g1.nu1_at(i)), a.G, a.N) -
                       grid_product(g2.nu1_at(i), dbar(kGeom, g1.nu1_at(j)), a.G, a.N));
            CHECK((two.h_at(i, j) - one.h_at(i, j) - defect).sup_norm() < 1e-10);
        }
}

TEST_CASE("find_gauge: constructive, trivial, obstructed") {
    int n = 2;
    std::mt19937 rng(19);
    AnalyticDeformation a1 = random_deformation(rng, n);

    GaugeVectorField g = random_gauge(rng, n, a1.N);
    AnalyticDeformation a2 = apply_gauge(a1, g, GaugeOrder::second);
    auto res = find_gauge(a1, a2);
    REQUIRE(res.witness.has_value());
    CHECK(res.verify_residual < 1e-9);

    auto res2 = find_gauge(a1, a1);
    REQUIRE(res2.witness.has_value());
    for (int i = 1; i <= n; ++i) CHECK(res2.witness->nu1_at(i).sup_norm() < 1e-12);

    // harmonic difference obstructs
    AnalyticDeformation a3 = a1;
    a3.chi_at(1) += FourierModes::constant(a1.N, {0.75, 0.0});
    auto res3 = find_gauge(a1, a3);
    CHECK_FALSE(res3.witness.has_value());
    CHECK(std::abs(res3.linear_obstruction[1] - cd(0.75, 0.0)) < 1e-12);
}

TEST_CASE("analytic classes: means and their gauge behaviour") {
    int n = 2;
    std::mt19937 rng(23);

    AnalyticDeformation zero = AnalyticDeformation::zero(kGeom, n);
    auto c0 = analytic_classes(zero);
    for (auto& [i, c] : c0.chi_means) CHECK(std::abs(c) == 0.0);
    for (auto& [ij, c] : c0.h_means) CHECK(std::abs(c) == 0.0);

    // chi = c + dbar s has harmonic part exactly c
    cd harm{0.3, -0.8};
    FourierModes s = random_modes(rng, zero.N);
    AnalyticDeformation a = AnalyticDeformation::zero(kGeom, n);
    a.chi_at(1) = FourierModes::constant(a.N, harm) + dbar(kGeom, s);
    auto sol = dbar_solve(kGeom, a.chi_at(1));
    CHECK(std::abs(sol.harmonic - harm) < 1e-13);
    CHECK(std::abs(analytic_classes(a).chi_means[1] - harm) < 1e-13);

    // chi-means are gauge invariants; h-means shift by the cross-term means
    AnalyticDeformation b = random_deformation(rng, n);
    GaugeVectorField g = random_gauge(rng, n, b.N);
    AnalyticDeformation bg = apply_gauge(b, g, GaugeOrder::linear);
    auto cb = analytic_classes(b);
    auto cbg = analytic_classes(bg);
    for (int i = 1; i <= n; ++i) CHECK(std::abs(cb.chi_means[i] - cbg.chi_means[i]) < 1e-10);
    auto cross = gauge_cross_means(b, g);
    for (auto& [ij, c] : cross)
        CHECK(std::abs(cbg.h_means[ij] - cb.h_means[ij] - c) < 1e-10);
}

TEST_CASE("gauge orbits preserve the wronskian condition on shared-profile data") {
    int n = 2;
    std::mt19937 rng(29);
    AnalyticDeformation a = random_deformation(rng, n, /*proportional_chi=*/true);
    REQUIRE(check_analytic_deformation(a).ok);
    // shared-profile gauges nu^i = c^i nu0 keep the chi data proportional
    FourierModes nu0 = random_modes(rng, a.N);
    GaugeVectorField g = GaugeVectorField::zero(n, a.N);
    g.nu1_at(1) = cd(0.7, 0.1) * nu0;
    g.nu1_at(2) = cd(-0.3, 0.9) * nu0;
    // ... applied to proportional chi with matching ratios:
    AnalyticDeformation ap = AnalyticDeformation::zero(kGeom, n);
    FourierModes base = random_modes(rng, a.N);
    ap.chi_at(1) = cd(0.7, 0.1) * base;
    ap.chi_at(2) = cd(-0.3, 0.9) * base;
    REQUIRE(check_analytic_deformation(ap).ok);
    AnalyticDeformation apg = apply_gauge(ap, g, GaugeOrder::linear);
    CHECK(check_analytic_deformation(apg).ok);
}

TEST_CASE("gauge search with three parameters") {
    int n = 3;
    std::mt19937 rng(37);
    AnalyticDeformation a = AnalyticDeformation::zero(kGeom, n);
    FourierModes base = random_modes(rng, a.N);
    a.chi_at(1) = base;
    a.chi_at(2) = cd(0.5, -0.5) * base;
    a.chi_at(3) = cd(-1.0, 0.25) * base;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) a.h_at(i, j) = random_modes(rng, a.N);
    REQUIRE(check_analytic_deformation(a).ok);

    GaugeVectorField g = GaugeVectorField::zero(n, a.N);
    for (int i = 1; i <= n; ++i) g.nu1_at(i) = random_modes(rng, a.N);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) g.nu2[{i, j}] = random_modes(rng, a.N);
    AnalyticDeformation a2 = apply_gauge(a, g, GaugeOrder::second);
    auto res = find_gauge(a, a2);
    REQUIRE(res.witness.has_value());
    CHECK(res.verify_residual < 1e-9);
}

TEST_CASE("chi harmonic parts are a complete linear-order invariant") {
    int n = 2;
    std::mt19937 rng(31);
    // same harmonic parts, different profiles: a linear-order gauge matches
    // the chi data on the nose
    AnalyticDeformation a = random_deformation(rng, n);
    AnalyticDeformation b = a;
    for (int i = 1; i <= n; ++i) {
        FourierModes bump = random_modes(rng, a.N);
        bump.at(0, 0) = 0.0;
        b.chi_at(i) += dbar(kGeom, bump); // mean unchanged
    }
    GaugeVectorField nu = GaugeVectorField::zero(n, a.N);
    bool solvable = true;
    for (int i = 1; i <= n; ++i) {
        auto sol = dbar_solve(kGeom, b.chi_at(i) - a.chi_at(i));
        solvable = solvable && std::abs(sol.harmonic) < 1e-12;
        nu.nu1_at(i) = sol.primitive;
    }
    REQUIRE(solvable);
    AnalyticDeformation moved = apply_gauge(a, nu, GaugeOrder::linear);
    for (int i = 1; i <= n; ++i) CHECK((moved.chi_at(i) - b.chi_at(i)).sup_norm() < 1e-10);

    // different harmonic parts: no gauge can match (dbar-images have no mean)
    AnalyticDeformation c = a;
    c.chi_at(1) += FourierModes::constant(a.N, {0.1, 0.0});
    auto res = find_gauge(a, c);
    CHECK_FALSE(res.witness.has_value());
    CHECK(std::abs(res.linear_obstruction[1] - cd(0.1, 0.0)) < 1e-12);
}
