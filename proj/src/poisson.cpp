#include "spt/poisson.hpp"

#include <cmath>

#include "spt/constants.hpp"
#include "spt/errors.hpp"
#include "spt/tridiag.hpp"

namespace spt {

namespace {

// Series (harmonic) average keeps eps * dphi/dz continuous when the
// dielectric steps on a node.
inline double eps_half(double a, double b) { return 2.0 * a * b / (a + b); }

inline double rho_term(double charge_cm3) {
    return charge_cm3 * constants::cm3_to_nm3 / constants::eps0;  // V / nm^2
}

}  // namespace

std::vector<double> solve_poisson(const std::vector<double>& charge_cm3,
                                  const std::vector<double>& eps_r, double dz_nm,
                                  double bc_surface_V) {
    const std::size_t n = eps_r.size();
    if (n < 2) throw ConfigError("Poisson grid needs at least 2 nodes");
    if (charge_cm3.size() != n) throw ConfigError("charge and eps arrays differ in length");

    const double inv_dz2 = 1.0 / (dz_nm * dz_nm);
    std::vector<double> lower(n - 1, 0.0), diag(n, 0.0), upper(n - 1, 0.0), rhs(n, 0.0);

    diag[0] = 1.0;
    rhs[0] = bc_surface_V;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double em = eps_half(eps_r[i - 1], eps_r[i]) * inv_dz2;
        const double ep = eps_half(eps_r[i], eps_r[i + 1]) * inv_dz2;
        lower[i - 1] = em;
        diag[i] = -(em + ep);
        upper[i] = ep;
        rhs[i] = -rho_term(charge_cm3[i]);
    }
    // Zero-field end: half-cell flux balance.
    const double em = eps_half(eps_r[n - 2], eps_r[n - 1]) * inv_dz2;
    lower[n - 2] = 2.0 * em;
    diag[n - 1] = -2.0 * em;
    rhs[n - 1] = -rho_term(charge_cm3[n - 1]);

    return tridiag_solve(std::move(lower), std::move(diag), std::move(upper), std::move(rhs));
}

double poisson_residual(const std::vector<double>& phi, const std::vector<double>& charge_cm3,
                        const std::vector<double>& eps_r, double dz_nm, double bc_surface_V) {
    const std::size_t n = phi.size();
    const double inv_dz2 = 1.0 / (dz_nm * dz_nm);
    double worst = std::fabs(phi[0] - bc_surface_V) * inv_dz2;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double em = eps_half(eps_r[i - 1], eps_r[i]);
        const double ep = eps_half(eps_r[i], eps_r[i + 1]);
        const double lhs = (ep * (phi[i + 1] - phi[i]) - em * (phi[i] - phi[i - 1])) * inv_dz2;
        worst = std::max(worst, std::fabs(lhs + rho_term(charge_cm3[i])));
    }
    const double em = eps_half(eps_r[n - 2], eps_r[n - 1]);
    const double lhs = -2.0 * em * (phi[n - 1] - phi[n - 2]) * inv_dz2;
    worst = std::max(worst, std::fabs(lhs + rho_term(charge_cm3[n - 1])));
    return worst;
}

}  // namespace spt
