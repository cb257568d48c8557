#ifndef SPT_FERMI_HPP
#define SPT_FERMI_HPP

#include <vector>

#include "spt/schrodinger.hpp"

namespace spt {

// Overflow-safe ln(1 + e^x) and its derivative.
double softplus(double x);
double logistic(double x);

// Fermi-Dirac integral of order 1/2 (Aymerich-Humet closed form, <0.5%).
double fermi_half(double eta);

// Sheet density, cm^-2, of one 2D subband:
//   n = m*/ (pi hbar^2) * kT * ln(1 + exp((E_F - E) / kT))
double subband_sheet_density_cm2(double energy_eV, double fermi_eV, double temperature_K,
                                 double mass_m0);

// Fills sheet_density on each subband using the envelope-probability-weighted
// mass and returns n(z) in cm^-3 on the grid.
std::vector<double> subband_density(std::vector<Subband>& subbands, double fermi_eV,
                                    double temperature_K, const std::vector<double>& mass_m0,
                                    double dz_nm);

// Bulk conduction-band density, cm^-3: N_c(T) * F_{1/2}((E_F - E_c)/kT).
double bulk_density_cm3(double ec_eV, double fermi_eV, double temperature_K, double mass_m0);

}  // namespace spt

#endif
