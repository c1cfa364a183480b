#pragma once
// Cech <-> Dolbeault conversions on the two-band torus cover, the two
// directions of the correspondence between algebraic and analytic
// deformations, and the invariant pairing with a pluggable kernel.
//
// The partition-of-unity image of a cocycle (c+, c-) is assembled from the
// closed-form derivative of the band profile:
//     form(u,v) = -rho_A'(v)/(tau - conj tau) * c_comp(z),   z = u + tau*v,
// supported on the two overlap strips. Its mean is
//     (c+_0 - c-_0)/(tau - conj tau) = class / (tau - conj tau),
// so the cover normalisation constant (class per unit harmonic part) is
// tau - conj(tau); it is measured once from the generator round trip rather
// than hard-coded, and its grid stability is part of the acceptance suite.
//
// The inverse direction uses per-chart primitives sigma_chart = P + mean *
// (-(tau-conj tau)) * v_chart with P the zero-mean spectral primitive; the
// smooth parts cancel in differences and the cocycle is per-component
// constant: (0, -mean * norm_const).

#include "srs/analytic.hpp"
#include "srs/atlas.hpp"
#include "srs/pou.hpp"

#include <map>

namespace srs {

Eigen::MatrixXcd qpoly_to_grid(const TorusGeom& geom, const QPoly& f, int G);

struct BridgeConfig {
    int N = 32;          // form mode cutoff
    int G = 128;         // evaluation grid
    double overlap = 0.25;
};

class TorusCechContext {
public:
    TorusCechContext(TorusBackend base, BridgeConfig cfg);

    const TorusBackend& base() const { return base_; }
    const BridgeConfig& cfg() const { return cfg_; }
    const TorusGeom& geom() const { return geom_; }
    const PartitionOfUnity& pou() const { return pou_; }
    cd norm_const() const { return norm_const_; } // class = norm_const * mean(form)

    // class of a form under the measured normalisation
    cd class_of_form(const FourierModes& f) const { return norm_const_ * f.mean(); }

private:
    TorusBackend base_;
    BridgeConfig cfg_;
    TorusGeom geom_;
    PartitionOfUnity pou_;
    cd norm_const_;
};

// Scalar-slot conversions.
FourierModes cech_entry_to_form(const TorusCechContext& ctx, const QPoly& plus,
                                const QPoly& minus, double* chart_disagreement = nullptr);
std::pair<QPoly, QPoly> form_to_cech_entry(const TorusCechContext& ctx, const FourierModes& f);

// Structured conversions on a full cocycle: one form per xi-monomial slot.
std::map<OddIndex, FourierModes> cech_to_dolbeault(const TorusCechContext& ctx,
                                                   const CechCocycle<TorusBackend>& c,
                                                   double* chart_disagreement = nullptr);
CechCocycle<TorusBackend> dolbeault_to_cech(const TorusCechContext& ctx,
                                            const std::map<OddIndex, FourierModes>& forms, int n);

// The correspondence.
AnalyticDeformation algebraic_to_analytic(const TorusCechContext& ctx,
                                          const AlgebraicDeformation<TorusBackend>& d);
AlgebraicDeformation<TorusBackend> analytic_to_algebraic(const TorusCechContext& ctx,
                                                         const AnalyticDeformation& a);

// ---------------------------------------------------------------------------
// invariant pairing

// Kernel data on the coarse product grid. K is stored as a (kgrid^2) x
// (kgrid^2) matrix over flattened grid indices p = j*kgrid + k; R is the
// residue-side function on the same grid. compat_residual measures
//     max | dbar_z K - 2*pi*i*R(z)*(delta_moll - 1/Area) |
// against the mollified diagonal delta used in the construction.
struct PairingKernel {
    int kgrid = 64;
    cd tau{0.25, 0.45};
    Eigen::MatrixXcd K;
    Eigen::VectorXcd R;
    double compat_residual = 0.0;

    // mollifier bookkeeping (Fourier window of the delta)
    int flat_band = 8;
    int cutoff_band = 16;
};

// Spectral construction: solve dbar_z K = 2 pi i R (delta_moll - 1/Area)
// mode-wise with constant R = r0. The mollifier is a flat-top Fourier window
// (1 up to `flat_band`, smooth rolloff to zero at `cutoff_band`): a Gaussian
// profile of two-cell width would damp low modes by percents and provably
// spoil the gauge invariance of the pairing, while the flat-top window keeps
// the delta localised to a few cells and leaves the active band untouched.
PairingKernel make_spectral_kernel(const TorusGeom& geom, int kgrid = 64, cd r0 = cd(1.0, 0.0),
                                   int flat_band = 8, int cutoff_band = 16);

// sum_{i<j} [ Int_{CxC} K(z,w) chi^i(z) chi^j(w) dA dA
//             - 2 pi i Int_C <Res, h^{ij}> dA ],
// trapezoidal quadrature on the kernel grid. The residue contraction is
// <Res, h> = (1/2) R h; the factor 1/2 is the normalisation of the residue
// pairing fixed by gauge invariance under the bracket conventions of
// analytic.hpp (the analogue of a convention-dependent sign).
cd pairing(const AnalyticDeformation& a, const PairingKernel& k);

struct PairingInvarianceReport {
    bool refused = false;   // kernel compat residual above the bound
    double compat = 0.0;
    cd before = 0.0;
    cd after = 0.0;
    double abs_diff = 0.0;
    double rel_diff = 0.0;
    double harmonic_defect = 0.0; // harmonic content of nu^i (invariance needs zero)
    bool ok = false;
};

// Compares pairing(a) with pairing(apply_gauge(a, nu, second)). Invariance is
// a theorem for compatible kernels and gauges whose first-order parts have no
// harmonic component; the harmonic defect is reported separately.
PairingInvarianceReport pairing_invariance_check(const AnalyticDeformation& a,
                                                 const PairingKernel& k,
                                                 const GaugeVectorField& nu,
                                                 double compat_bound = 1e-6,
                                                 double rel_tol = 1e-6);

} // namespace srs
