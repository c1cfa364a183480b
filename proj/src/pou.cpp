#include "srs/pou.hpp"

#include <cmath>

namespace srs {

namespace {

// C^8 polynomial step s(t) = int_0^t u^8 (1-u)^8 du / B(9,9): high enough
// smoothness that trapezoidal sums of anything built from it converge like
// h^10, which keeps the cover normalisation constant stable across the
// 128/256 grids to well under 1e-8. (An exp(-1/t)-type step is C-infinity
// but its trapezoid error saturates near 1e-7 at these grid sizes.)
constexpr int kStepPow = 8;

double beta_norm() {
    // B(9,9) = sum_i C(8,i) (-1)^i / (9+i)
    static const double b = [] {
        double s = 0.0;
        double c = 1.0; // C(8,i)
        for (int i = 0; i <= kStepPow; ++i) {
            s += (i % 2 ? -1.0 : 1.0) * c / double(kStepPow + 1 + i);
            c = c * double(kStepPow - i) / double(i + 1);
        }
        return s;
    }();
    return b;
}

double step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double s = 0.0;
    double c = 1.0;
    double tp = std::pow(t, kStepPow + 1);
    for (int i = 0; i <= kStepPow; ++i) {
        s += (i % 2 ? -1.0 : 1.0) * c * tp / double(kStepPow + 1 + i);
        tp *= t;
        c = c * double(kStepPow - i) / double(i + 1);
    }
    return s / beta_norm();
}

double dstep(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::pow(t * (1.0 - t), kStepPow) / beta_norm();
}

double wrap01(double v) {
    double r = std::fmod(v, 1.0);
    return r < 0.0 ? r + 1.0 : r;
}

} // namespace

double BandCover::rho_a(double v) const {
    v = wrap01(v);
    if (v < w) return step(v / w);
    if (v <= 0.5) return 1.0;
    if (v < 0.5 + w) return 1.0 - step((v - 0.5) / w);
    return 0.0;
}

double BandCover::drho_a(double v) const {
    v = wrap01(v);
    if (v < w) return dstep(v / w) / w;
    if (v <= 0.5) return 0.0;
    if (v < 0.5 + w) return -dstep((v - 0.5) / w) / w;
    return 0.0;
}

bool BandCover::in_comp_plus(double v) const {
    v = wrap01(v);
    return v > 0.5 && v < 0.5 + w;
}
bool BandCover::in_comp_minus(double v) const {
    v = wrap01(v);
    return v < w;
}

PartitionOfUnity PartitionOfUnity::build(int grid, double w) {
    PartitionOfUnity p;
    p.cover.w = w;
    p.grid = grid;
    p.rho_a.resize(grid);
    p.drho_a.resize(grid);
    for (int k = 0; k < grid; ++k) {
        double v = double(k) / grid;
        p.rho_a[k] = p.cover.rho_a(v);
        p.drho_a[k] = p.cover.drho_a(v);
    }
    return p;
}

double PartitionOfUnity::sum_defect() const {
    double m = 0.0;
    for (int k = 0; k < grid; ++k) {
        double rb = 1.0 - rho_a[k];
        m = std::max(m, std::abs(rho_a[k] + rb - 1.0));
    }
    return m;
}

double PartitionOfUnity::support_defect() const {
    // rho_a must vanish outside the A band (0, 1/2+w); rho_b outside (1/2, 1+w).
    double m = 0.0;
    for (int k = 0; k < grid; ++k) {
        double v = double(k) / grid;
        bool in_a = v > 0.0 && v < 0.5 + cover.w;
        bool in_b = v > 0.5 || v < cover.w;
        if (!in_a) m = std::max(m, std::abs(rho_a[k]));
        if (!in_b) m = std::max(m, std::abs(1.0 - rho_a[k]));
    }
    return m;
}

} // namespace srs
