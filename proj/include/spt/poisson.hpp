#ifndef SPT_POISSON_HPP
#define SPT_POISSON_HPP

#include <vector>

namespace spt {

// Solves d/dz [ eps_r(z) dphi/dz ] = -rho(z) / eps0 on the uniform grid.
// rho is the signed volume charge in e * cm^-3 (donors positive, electrons
// negative). Dirichlet phi = bc_surface_V at node 0; zero-field Neumann at
// the far end, enforced with a half-cell flux balance so global charge is
// conserved. phi and eps_r are continuous in the flux sense across
// dielectric steps by construction of the half-cell averages.
std::vector<double> solve_poisson(const std::vector<double>& charge_cm3,
                                  const std::vector<double>& eps_r, double dz_nm,
                                  double bc_surface_V);

// Max-norm of the discrete residual d/dz[eps dphi/dz] + rho/eps0, in the
// units of the charge term (V/nm^2). Used by tests and the CLI report.
double poisson_residual(const std::vector<double>& phi, const std::vector<double>& charge_cm3,
                        const std::vector<double>& eps_r, double dz_nm, double bc_surface_V);

}  // namespace spt

#endif
