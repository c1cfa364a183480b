#pragma once
// Smooth functions on the flat torus C/(Z + tau*Z), Im(tau) > 0, as dense
// Fourier mode arrays over (m,n) in [-N,N]^2 with respect to the basis
// e_{m,n}(u,v) = exp(2*pi*i*(m*u + n*v)), where z = u + tau*v.
//
// Derivative symbols, from z = u + tau*v and zbar = u + conj(tau)*v:
//   d/dzbar = (tau*d/du - d/dv) / (tau - conj(tau))
//   d/dz    = (d/dv - conj(tau)*d/du) / (tau - conj(tau))
// so on e_{m,n}:
//   dbar_symbol(m,n) = pi*(m*tau - n)/Im(tau)
//   dz_symbol(m,n)   = pi*(n - conj(tau)*m)/Im(tau)
// The only harmonic mode is (0,0); dbar is invertible on all others, which is
// what the spectral dbar solver uses.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace srs {

using cd = std::complex<double>;

struct TorusGeom {
    cd tau;
    double im_tau;
    double area; // Lebesgue area of the fundamental domain

    explicit TorusGeom(cd tau_) : tau(tau_), im_tau(tau_.imag()), area(tau_.imag()) {
        if (im_tau <= 0.0) throw std::invalid_argument("TorusGeom: Im(tau) must be positive");
    }

    cd dbar_symbol(int m, int n) const {
        return M_PI * (double(m) * tau - double(n)) / im_tau;
    }
    cd dz_symbol(int m, int n) const {
        return M_PI * (double(n) - std::conj(tau) * double(m)) / im_tau;
    }
};

class FourierModes {
public:
    using Scalar = cd;

    FourierModes() = default;
    explicit FourierModes(int N) : N_(N), a_(Eigen::MatrixXcd::Zero(2 * N + 1, 2 * N + 1)) {}

    static FourierModes zero(int N) { return FourierModes(N); }
    static FourierModes constant(int N, cd c) {
        FourierModes f(N);
        f.at(0, 0) = c;
        return f;
    }
    static FourierModes mode(int N, int m, int n, cd c) {
        FourierModes f(N);
        f.at(m, n) = c;
        return f;
    }

    int cutoff() const { return N_; }
    cd& at(int m, int n) { return a_(m + N_, n + N_); }
    cd at(int m, int n) const { return a_(m + N_, n + N_); }
    const Eigen::MatrixXcd& array() const { return a_; }
    Eigen::MatrixXcd& array() { return a_; }

    cd mean() const { return at(0, 0); }

    cd eval(double u, double v) const {
        cd s = 0.0;
        for (int m = -N_; m <= N_; ++m)
            for (int n = -N_; n <= N_; ++n) {
                if (at(m, n) == cd(0.0)) continue;
                double ph = 2.0 * M_PI * (m * u + n * v);
                s += at(m, n) * cd(std::cos(ph), std::sin(ph));
            }
        return s;
    }

    double sup_norm() const { return a_.size() ? a_.cwiseAbs().maxCoeff() : 0.0; }
    bool is_zero(double tol = 1e-9) const { return sup_norm() <= tol; }

    FourierModes resized(int N2) const {
        FourierModes r(N2);
        int K = std::min(N_, N2);
        for (int m = -K; m <= K; ++m)
            for (int n = -K; n <= K; ++n) r.at(m, n) = at(m, n);
        return r;
    }

    friend FourierModes operator+(const FourierModes& x, const FourierModes& y) {
        x.check(y);
        FourierModes r = x;
        r.a_ += y.a_;
        return r;
    }
    friend FourierModes operator-(const FourierModes& x, const FourierModes& y) {
        x.check(y);
        FourierModes r = x;
        r.a_ -= y.a_;
        return r;
    }
    FourierModes operator-() const {
        FourierModes r = *this;
        r.a_ = -r.a_;
        return r;
    }
    friend FourierModes operator*(cd s, const FourierModes& x) {
        FourierModes r = x;
        r.a_ *= s;
        return r;
    }
    FourierModes& operator+=(const FourierModes& o) {
        check(o);
        a_ += o.a_;
        return *this;
    }
    FourierModes& operator-=(const FourierModes& o) {
        check(o);
        a_ -= o.a_;
        return *this;
    }

private:
    void check(const FourierModes& o) const {
        if (N_ != o.N_) throw std::invalid_argument("FourierModes: cutoff mismatch");
    }
    int N_ = 0;
    Eigen::MatrixXcd a_;
};

// Spectral calculus.
FourierModes dbar(const TorusGeom& g, const FourierModes& f);
FourierModes dz(const TorusGeom& g, const FourierModes& f);

struct DbarSolution {
    FourierModes primitive; // zero-mean, dbar(primitive) = input - harmonic
    cd harmonic;            // mean mode of the input
};
DbarSolution dbar_solve(const TorusGeom& g, const FourierModes& f);

// Equispaced-grid transforms; exact for |m|,|n| <= N < G/2. Grid point (j,k)
// is (u,v) = (j/G, k/G), stored grid(j,k).
Eigen::MatrixXcd to_grid(const FourierModes& f, int G);
FourierModes to_modes(const Eigen::MatrixXcd& grid, int N);

// Grid-average = trapezoidal mean over the unit square in (u,v).
inline cd grid_mean(const Eigen::MatrixXcd& grid) { return grid.mean(); }

// Pointwise multiplication on a grid of the given size, projected back.
FourierModes grid_product(const FourierModes& x, const FourierModes& y, int G, int Nout);

} // namespace srs
