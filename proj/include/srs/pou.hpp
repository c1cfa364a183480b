#pragma once
// Partition of unity subordinate to the two-band cover of the torus.
//
// The cover: chart A is the band v in (0, 1/2 + w), chart B the band
// v in (1/2, 1 + w) taken mod 1, with overlap width w. Their intersection has
// two annular components:
//     comp_plus  : v in (1/2, 1/2 + w)
//     comp_minus : v in (0, w)        (chart B reaches it at v_B = v + 1)
// Profiles are built from the C-infinity step s(t) = sig(t)/(sig(t)+sig(1-t)),
// sig(t) = exp(-1/t), so grid sums of anything built from them converge
// spectrally and the cover normalisation constant is stable across grids.

#include <Eigen/Dense>

namespace srs {

struct BandCover {
    double w = 0.25;

    // rho_A: 0 at v<=0, rises on (0,w), equals 1 on [w,1/2], falls on
    // (1/2, 1/2+w), 0 on [1/2+w, 1).
    double rho_a(double v) const;
    double drho_a(double v) const; // d/dv, supported on the two overlap strips

    bool in_comp_plus(double v) const;
    bool in_comp_minus(double v) const;
};

struct PartitionOfUnity {
    BandCover cover;
    int grid = 0;
    Eigen::VectorXd rho_a;  // sampled at v_k = k/grid
    Eigen::VectorXd drho_a; // derivative samples

    static PartitionOfUnity build(int grid, double w = 0.25);

    // max |rho_a + rho_b - 1| on the grid (rho_b := 1 - rho_a, so this checks
    // the sampled construction, and support containment is checked separately)
    double sum_defect() const;
    double support_defect() const; // leakage of each profile outside its chart band
};

} // namespace srs
