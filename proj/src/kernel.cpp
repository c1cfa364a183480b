#include "srs/bridge.hpp"

namespace srs {

namespace {

// flat-top Fourier window: 1 up to r0, cos^2 rolloff to zero at r1
double window(int m, int n, int r0, int r1) {
    int r = std::max(std::abs(m), std::abs(n));
    if (r <= r0) return 1.0;
    if (r >= r1) return 0.0;
    double t = double(r - r0) / double(r1 - r0);
    double c = std::cos(0.5 * M_PI * t);
    return c * c;
}

} // namespace

PairingKernel make_spectral_kernel(const TorusGeom& geom, int kgrid, cd r0, int flat_band,
                                   int cutoff_band) {
    cutoff_band = std::min(cutoff_band, kgrid / 2 - 1);
    flat_band = std::min(flat_band, cutoff_band - 1);
    PairingKernel k;
    k.kgrid = kgrid;
    k.tau = geom.tau;
    k.flat_band = flat_band;
    k.cutoff_band = cutoff_band;
    int P = kgrid * kgrid;
    double area = geom.area;
    constexpr cd tpi(0.0, 2.0 * M_PI);

    // K(z,w) = F(z - w) is translation invariant; build the displacement
    // tables for F and its z-derivative, then fill the product-grid matrix.
    Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(kgrid, kgrid);
    Eigen::MatrixXcd dF = Eigen::MatrixXcd::Zero(kgrid, kgrid);
    Eigen::MatrixXcd moll = Eigen::MatrixXcd::Zero(kgrid, kgrid);
    for (int m = -cutoff_band; m <= cutoff_band; ++m)
        for (int n = -cutoff_band; n <= cutoff_band; ++n) {
            double w = window(m, n, flat_band, cutoff_band);
            if (w == 0.0) continue;
            cd coeff_moll = w / area;
            cd coeff_f = 0.0;
            if (m != 0 || n != 0) coeff_f = tpi * r0 * w / (area * geom.dbar_symbol(m, n));
            for (int dj = 0; dj < kgrid; ++dj)
                for (int dk = 0; dk < kgrid; ++dk) {
                    double ph = 2.0 * M_PI * (m * double(dj) + n * double(dk)) / kgrid;
                    cd e(std::cos(ph), std::sin(ph));
                    F(dj, dk) += coeff_f * e;
                    moll(dj, dk) += coeff_moll * e;
                    dF(dj, dk) += (m != 0 || n != 0 ? geom.dbar_symbol(m, n) * coeff_f : cd(0.0)) * e;
                }
        }

    // compat residual against dbar_z K = 2 pi i R (delta_moll - 1/Area)
    double resid = 0.0;
    for (int dj = 0; dj < kgrid; ++dj)
        for (int dk = 0; dk < kgrid; ++dk) {
            cd rhs = tpi * r0 * (moll(dj, dk) - 1.0 / area);
            resid = std::max(resid, std::abs(dF(dj, dk) - rhs));
        }
    k.compat_residual = resid;

    k.R = Eigen::VectorXcd::Constant(P, r0);
    k.K.resize(P, P);
    for (int j = 0; j < kgrid; ++j)
        for (int kk = 0; kk < kgrid; ++kk)
            for (int j2 = 0; j2 < kgrid; ++j2)
                for (int k2 = 0; k2 < kgrid; ++k2)
                    k.K(j * kgrid + kk, j2 * kgrid + k2) =
                        F(((j - j2) % kgrid + kgrid) % kgrid, ((kk - k2) % kgrid + kgrid) % kgrid);
    return k;
}

namespace {

Eigen::VectorXcd flatten_on_kernel_grid(const FourierModes& f, int kgrid) {
    // band-limit to the kernel grid's Nyquist: the coarse quadrature cannot
    // see beyond it anyway
    int nmax = (kgrid - 1) / 2;
    Eigen::MatrixXcd g = to_grid(f.cutoff() > nmax ? f.resized(nmax) : f, kgrid);
    Eigen::VectorXcd v(kgrid * kgrid);
    for (int j = 0; j < kgrid; ++j)
        for (int k = 0; k < kgrid; ++k) v(j * kgrid + k) = g(j, k);
    return v;
}

} // namespace

cd pairing(const AnalyticDeformation& a, const PairingKernel& k) {
    if (std::abs(k.tau - a.geom.tau) > 1e-12)
        throw std::invalid_argument("pairing: kernel modulus does not match the deformation");
    int kg = k.kgrid;
    double cell = a.geom.area / double(kg * kg); // dA per grid cell
    constexpr cd tpi(0.0, 2.0 * M_PI);

    cd total = 0.0;
    for (int i = 1; i <= a.n; ++i)
        for (int j = i + 1; j <= a.n; ++j) {
            Eigen::VectorXcd ci = flatten_on_kernel_grid(a.chi_at(i), kg);
            Eigen::VectorXcd cj = flatten_on_kernel_grid(a.chi_at(j), kg);
            cd dbl = (ci.transpose() * (k.K * cj)).value() * cell * cell;
            Eigen::VectorXcd hij = flatten_on_kernel_grid(a.h_at(i, j), kg);
            // residue contraction <Res, h> = (1/2) R h; see bridge.hpp
            cd single = 0.5 * (k.R.array() * hij.array()).sum() * cell;
            total += dbl - tpi * single;
        }
    return total;
}

PairingInvarianceReport pairing_invariance_check(const AnalyticDeformation& a,
                                                 const PairingKernel& k,
                                                 const GaugeVectorField& nu, double compat_bound,
                                                 double rel_tol) {
    PairingInvarianceReport rep;
    rep.compat = k.compat_residual;
    if (k.compat_residual > compat_bound) {
        rep.refused = true;
        return rep;
    }
    rep.before = pairing(a, k);
    rep.after = pairing(apply_gauge(a, nu, GaugeOrder::second), k);
    rep.abs_diff = std::abs(rep.after - rep.before);
    double scale = std::max(std::abs(rep.before), 1e-30);
    rep.rel_diff = rep.abs_diff / scale;

    // invariance is a theorem for zero-mean nu^i; the torus has global spin
    // sections (constants), and gauges carrying them shift the pairing, so
    // report how much harmonic content the gauge has.
    double harm = 0.0;
    for (int i = 1; i <= nu.n; ++i) harm = std::max(harm, std::abs(nu.nu1_at(i).mean()));
    rep.harmonic_defect = harm;
    rep.ok = rep.rel_diff <= rel_tol;
    return rep;
}

} // namespace srs
