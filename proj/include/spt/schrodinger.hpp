#ifndef SPT_SCHRODINGER_HPP
#define SPT_SCHRODINGER_HPP

#include <cstddef>
#include <vector>

namespace spt {

struct Subband {
    double energy_eV = 0;
    std::vector<double> psi;       // real envelope on the full grid, sum |psi|^2 dz = 1
    double sheet_density_cm2 = 0;  // filled in by subband_density
};

// Position-dependent-mass eigenproblem
//   -(hbar^2/2) d/dz [ (1/m(z)) dpsi/dz ] + V(z) psi = E psi
// with psi = 0 at both grid ends, discretized as a symmetric tridiagonal
// system with half-cell mass averaging. Returns the n_states lowest
// states, energy-ascending, normalized so sum |psi|^2 dz = 1 (dz in nm).
std::vector<Subband> solve_schrodinger(const std::vector<double>& band_edge_eV,
                                       const std::vector<double>& mass_m0, double dz_nm,
                                       std::size_t n_states);

}  // namespace spt

#endif
