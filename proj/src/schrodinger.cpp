#include "spt/schrodinger.hpp"

#include <cmath>

#include "spt/constants.hpp"
#include "spt/errors.hpp"
#include "spt/tridiag.hpp"

namespace spt {

std::vector<Subband> solve_schrodinger(const std::vector<double>& band_edge_eV,
                                       const std::vector<double>& mass_m0, double dz_nm,
                                       std::size_t n_states) {
    const std::size_t n = band_edge_eV.size();
    if (n < 3) throw ConfigError("Schrodinger grid needs at least 3 nodes");
    if (mass_m0.size() != n) throw ConfigError("band edge and mass arrays differ in length");
    for (double m : mass_m0)
        if (!(m > 0)) throw ConfigError("effective mass must be > 0 everywhere");
    const std::size_t ni = n - 2;  // interior nodes carry the unknowns
    if (n_states > ni)
        throw ConfigError("n_states = " + std::to_string(n_states) +
                          " exceeds interior node count " + std::to_string(ni));

    // Kinetic coupling through half cells: t_{i+1/2} = hbar^2/(2 dz^2) <1/m>.
    const double kin = constants::hbar2_over_2m0 / (dz_nm * dz_nm);
    std::vector<double> t_half(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        t_half[i] = kin * 0.5 * (1.0 / mass_m0[i] + 1.0 / mass_m0[i + 1]);

    std::vector<double> diag(ni), off(ni > 0 ? ni - 1 : 0);
    for (std::size_t i = 0; i < ni; ++i) {
        const std::size_t g = i + 1;  // full-grid index
        diag[i] = t_half[g - 1] + t_half[g] + band_edge_eV[g];
        if (i + 1 < ni) off[i] = -t_half[g];
    }

    TridiagEigen eig = lowest_eigenpairs(diag, off, n_states);

    std::vector<Subband> out(n_states);
    for (std::size_t j = 0; j < n_states; ++j) {
        out[j].energy_eV = eig.values[j];
        out[j].psi.assign(n, 0.0);
        double norm2 = 0;
        for (std::size_t i = 0; i < ni; ++i) norm2 += eig.vectors[j][i] * eig.vectors[j][i];
        const double scale = 1.0 / std::sqrt(norm2 * dz_nm);
        for (std::size_t i = 0; i < ni; ++i) out[j].psi[i + 1] = eig.vectors[j][i] * scale;
    }
    return out;
}

}  // namespace spt
