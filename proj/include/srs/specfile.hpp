#pragma once
// Deformation-spec files: a schema-versioned JSON container holding either an
// algebraic section (per-intersection-component coefficient tables) or an
// analytic section (chi/h mode lists), plus the base-curve header. Laurent
// coefficients are exact rational 4-tuples [num_re, den_re, num_im, den_im];
// complex numbers are [re, im] pairs; torus chart functions are mode lists.
//
// Kernel files are binary: a small header {magic, kgrid, tau, bands} followed
// by R (kgrid^2 complex doubles) and K ((kgrid^2)^2 complex doubles),
// row-major over flattened grid indices.

#include "srs/analytic.hpp"
#include "srs/atlas.hpp"
#include "srs/bridge.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace srs {

struct SpecFileError : std::runtime_error {
    explicit SpecFileError(const std::string& what) : std::runtime_error(what) {}
};

struct SpecFile {
    int schema_version = 1;
    std::string backend; // "p1-laurent" or "torus-fourier"
    int n = 0;

    // torus parameters (defaults apply when absent)
    cd tau{0.25, 0.45};
    int cutoff = 32;
    int grid = 128;

    std::optional<AlgebraicDeformation<P1Backend>> alg_p1;
    std::optional<AlgebraicDeformation<TorusBackend>> alg_torus;
    std::optional<AnalyticDeformation> analytic;

    std::string kernel_path;

    bool is_torus() const { return backend == "torus-fourier"; }
    bool has_algebraic() const { return alg_p1.has_value() || alg_torus.has_value(); }
};

SpecFile load_spec(const std::string& path);
void save_spec(const SpecFile& spec, const std::string& path);

PairingKernel load_kernel(const std::string& path);
void save_kernel(const PairingKernel& k, const std::string& path);

} // namespace srs
