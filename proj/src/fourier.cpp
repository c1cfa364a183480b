#include "srs/fourier.hpp"

#include <map>
#include <mutex>

namespace srs {

FourierModes dbar(const TorusGeom& g, const FourierModes& f) {
    int N = f.cutoff();
    FourierModes r(N);
    for (int m = -N; m <= N; ++m)
        for (int n = -N; n <= N; ++n) r.at(m, n) = g.dbar_symbol(m, n) * f.at(m, n);
    return r;
}

FourierModes dz(const TorusGeom& g, const FourierModes& f) {
    int N = f.cutoff();
    FourierModes r(N);
    for (int m = -N; m <= N; ++m)
        for (int n = -N; n <= N; ++n) r.at(m, n) = g.dz_symbol(m, n) * f.at(m, n);
    return r;
}

DbarSolution dbar_solve(const TorusGeom& g, const FourierModes& f) {
    int N = f.cutoff();
    DbarSolution s{FourierModes(N), f.at(0, 0)};
    for (int m = -N; m <= N; ++m)
        for (int n = -N; n <= N; ++n) {
            if (m == 0 && n == 0) continue;
            s.primitive.at(m, n) = f.at(m, n) / g.dbar_symbol(m, n);
        }
    return s;
}

namespace {

// DFT matrix E(i, j) = exp(2*pi*i*(i-N)*j/G), shape (2N+1) x G. Cached: the
// same few (N, G) pairs are used over and over.
const Eigen::MatrixXcd& dft_matrix(int N, int G) {
    static std::map<std::pair<int, int>, Eigen::MatrixXcd> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(N, G);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Eigen::MatrixXcd E(2 * N + 1, G);
    for (int i = 0; i < 2 * N + 1; ++i) {
        int m = i - N;
        for (int j = 0; j < G; ++j) {
            double ph = 2.0 * M_PI * double(m) * double(j) / double(G);
            E(i, j) = cd(std::cos(ph), std::sin(ph));
        }
    }
    return cache.emplace(key, std::move(E)).first->second;
}

} // namespace

Eigen::MatrixXcd to_grid(const FourierModes& f, int G) {
    int N = f.cutoff();
    if (G <= 2 * N) throw std::invalid_argument("to_grid: grid too coarse for cutoff");
    const Eigen::MatrixXcd& E = dft_matrix(N, G);
    return E.transpose() * f.array() * E;
}

FourierModes to_modes(const Eigen::MatrixXcd& grid, int N) {
    int G = static_cast<int>(grid.rows());
    if (grid.cols() != G) throw std::invalid_argument("to_modes: grid must be square");
    if (G <= 2 * N) throw std::invalid_argument("to_modes: grid too coarse for cutoff");
    const Eigen::MatrixXcd& E = dft_matrix(N, G);
    FourierModes f(N);
    f.array() = (E.conjugate() * grid * E.adjoint()) / double(G) / double(G);
    return f;
}

FourierModes grid_product(const FourierModes& x, const FourierModes& y, int G, int Nout) {
    Eigen::MatrixXcd gx = to_grid(x, G);
    Eigen::MatrixXcd gy = to_grid(y, G);
    return to_modes(gx.cwiseProduct(gy), Nout);
}

} // namespace srs
