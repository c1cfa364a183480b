#include "srs/bridge.hpp"

namespace srs {

Eigen::MatrixXcd qpoly_to_grid(const TorusGeom& geom, const QPoly& f, int G) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(G, G);
    constexpr cd tpi(0.0, 2.0 * M_PI);
    for (auto& [m, a] : f.modes()) {
        Eigen::VectorXcd cu(G), cv(G);
        for (int j = 0; j < G; ++j) cu(j) = std::exp(tpi * double(m) * (double(j) / G));
        for (int k = 0; k < G; ++k) cv(k) = std::exp(tpi * double(m) * geom.tau * (double(k) / G));
        out += a * (cu * cv.transpose());
    }
    return out;
}

namespace {

// form(u,v) = -rho_A'(v)/(tau - conj tau) * value-of-the-component-cocycle.
// `from_b_side` assembles the same object in chart-B bookkeeping (cocycle
// entries pulled back across the transitions); the two must agree to float
// accuracy, which is the well-definedness check.
Eigen::MatrixXcd assemble_pou_form(const TorusCechContext& ctx, const QPoly& plus,
                                   const QPoly& minus, bool from_b_side) {
    const TorusGeom& geom = ctx.geom();
    int G = ctx.cfg().G;
    const PartitionOfUnity& pou = ctx.pou();
    cd denom = geom.tau - std::conj(geom.tau);

    Eigen::MatrixXcd gplus = qpoly_to_grid(geom, plus, G);
    Eigen::MatrixXcd gminus = qpoly_to_grid(geom, minus, G);
    // B-side bookkeeping: comp_minus sits at v_B = v + 1 and the entry is
    // read through the pulled-back chart function; exercises the transport.
    QPoly minus_b = minus.pullback(QPoly::ChartMap{-geom.tau});

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(G, G);
    for (int k = 0; k < G; ++k) {
        double v = double(k) / G;
        if (pou.drho_a[k] == 0.0) continue;
        cd weight = -pou.drho_a[k] / denom;
        bool in_minus = pou.cover.in_comp_minus(v);
        for (int j = 0; j < G; ++j) {
            cd value;
            if (in_minus && from_b_side) {
                cd zb = cd(double(j) / G, 0.0) + geom.tau * (v + 1.0);
                value = minus_b.eval(zb);
            } else {
                value = in_minus ? gminus(j, k) : gplus(j, k);
            }
            out(j, k) = weight * value;
        }
    }
    return out;
}

} // namespace

TorusCechContext::TorusCechContext(TorusBackend base, BridgeConfig cfg)
    : base_(base), cfg_(cfg), geom_(base.tau), pou_(PartitionOfUnity::build(cfg.G, cfg.overlap)) {
    // measure the normalisation constant from the generator cocycle (1, 0)
    norm_const_ = 0.0; // sentinel during the bootstrap call below
    FourierModes gen = cech_entry_to_form(*this, QPoly::one(), QPoly::zero());
    norm_const_ = 1.0 / gen.mean();
}

FourierModes cech_entry_to_form(const TorusCechContext& ctx, const QPoly& plus,
                                const QPoly& minus, double* chart_disagreement) {
    Eigen::MatrixXcd ga = assemble_pou_form(ctx, plus, minus, false);
    if (chart_disagreement) {
        Eigen::MatrixXcd gb = assemble_pou_form(ctx, plus, minus, true);
        *chart_disagreement = (ga - gb).cwiseAbs().maxCoeff();
    }
    return to_modes(ga, ctx.cfg().N);
}

std::pair<QPoly, QPoly> form_to_cech_entry(const TorusCechContext& ctx, const FourierModes& f) {
    // per-chart primitives sigma = P - mean*(norm_const)*v_chart; the smooth
    // part cancels in sigma_B - sigma_A, leaving per-component constants.
    cd m = f.mean();
    QPoly plus = QPoly::zero();
    QPoly minus;
    minus.set(0, -m * ctx.norm_const());
    return {plus, minus};
}

std::map<OddIndex, FourierModes> cech_to_dolbeault(const TorusCechContext& ctx,
                                                   const CechCocycle<TorusBackend>& c,
                                                   double* chart_disagreement) {
    if (c.entries.size() != 2)
        throw std::domain_error("cech_to_dolbeault: expected one entry per overlap component");
    std::map<OddIndex, FourierModes> out;
    double worst = 0.0;
    // collect the slots present in either component
    std::map<OddIndex, bool> slots;
    for (auto& e : c.entries)
        for (auto& [m, coeff] : e.terms()) slots[m] = true;
    for (auto& [slot, unused] : slots) {
        double dis = 0.0;
        out[slot] = cech_entry_to_form(ctx, c.entries[0].coeff(slot), c.entries[1].coeff(slot),
                                       chart_disagreement ? &dis : nullptr);
        worst = std::max(worst, dis);
    }
    if (chart_disagreement) *chart_disagreement = worst;
    return out;
}

CechCocycle<TorusBackend> dolbeault_to_cech(const TorusCechContext& ctx,
                                            const std::map<OddIndex, FourierModes>& forms,
                                            int n) {
    CechCocycle<TorusBackend> c;
    c.n = n;
    c.sheaf = "per-slot";
    c.entries.assign(2, SuperSeries<QPoly>(n));
    for (auto& [slot, f] : forms) {
        auto [plus, minus] = form_to_cech_entry(ctx, f);
        c.entries[0].set(slot, plus);
        c.entries[1].set(slot, minus);
    }
    return c;
}

AnalyticDeformation algebraic_to_analytic(const TorusCechContext& ctx,
                                          const AlgebraicDeformation<TorusBackend>& d) {
    if (!verify_atlas(d).ok)
        throw std::domain_error("algebraic_to_analytic: atlas fails verification");
    if (!wronskian_check(d).ok)
        throw std::domain_error("algebraic_to_analytic: Wronskian condition fails");

    AnalyticDeformation a = AnalyticDeformation::zero(ctx.geom(), d.n, ctx.cfg().N, ctx.cfg().G);
    for (int i = 1; i <= d.n; ++i)
        a.chi_at(i) = cech_entry_to_form(ctx, d.at(0).psi_coeff(i), d.at(1).psi_coeff(i));
    for (int i = 1; i <= d.n; ++i)
        for (int j = i + 1; j <= d.n; ++j)
            a.h_at(i, j) = cech_entry_to_form(ctx, d.at(0).g_coeff(i, j), d.at(1).g_coeff(i, j));
    return a;
}

AlgebraicDeformation<TorusBackend> analytic_to_algebraic(const TorusCechContext& ctx,
                                                         const AnalyticDeformation& a) {
    if (!check_analytic_deformation(a).ok)
        throw std::domain_error("analytic_to_algebraic: Wronskian condition fails");
    int n = a.n;
    SuperSeries<QPoly> psi_p(n), psi_m(n), g_p(n), g_m(n);
    for (int i = 1; i <= n; ++i) {
        auto [plus, minus] = form_to_cech_entry(ctx, a.chi_at(i));
        psi_p.set(OddIndex::of_xi(i), plus);
        psi_m.set(OddIndex::of_xi(i), minus);
    }
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            auto [plus, minus] = form_to_cech_entry(ctx, a.h_at(i, j));
            g_p.set(OddIndex::of_xi(i, j), plus);
            g_m.set(OddIndex::of_xi(i, j), minus);
        }
    return integrate_thickening(ctx.base(), n, {psi_p, psi_m}, {g_p, g_m});
}

} // namespace srs
