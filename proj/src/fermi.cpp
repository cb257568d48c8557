#include "spt/fermi.hpp"

#include <cmath>

#include "spt/constants.hpp"
#include "spt/errors.hpp"

namespace spt {

double softplus(double x) {
    if (x > 34.0) return x;  // e^-34 below double epsilon of the sum
    if (x < -700.0) return 0.0;
    return std::log1p(std::exp(x));
}

double logistic(double x) {
    if (x > 40.0) return 1.0;
    if (x < -700.0) return 0.0;
    const double e = std::exp(-std::fabs(x));
    return x >= 0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
}

double fermi_half(double eta) {
    // Aymerich-Humet, Serra-Mestres, Millan (1981).
    if (eta < -40.0) return std::exp(eta);
    const double a = eta + 1.0;
    const double denom =
        std::pow(eta * eta * eta * eta + 50.0 +
                     33.6 * eta * (1.0 - 0.68 * std::exp(-0.17 * a * a)),
                 -0.375);
    const double boltz = eta > 700.0 ? 0.0 : std::exp(-eta);
    return 1.0 / (boltz + 0.75 * std::sqrt(M_PI) * denom);
}

double subband_sheet_density_cm2(double energy_eV, double fermi_eV, double temperature_K,
                                 double mass_m0) {
    const double kT = constants::k_B * temperature_K;
    const double dos = mass_m0 * constants::dos2d_per_m0 * constants::nm2_to_cm2;  // cm^-2 eV^-1
    return dos * kT * softplus((fermi_eV - energy_eV) / kT);
}

std::vector<double> subband_density(std::vector<Subband>& subbands, double fermi_eV,
                                    double temperature_K, const std::vector<double>& mass_m0,
                                    double dz_nm) {
    if (!(temperature_K > 0)) throw ConfigError("temperature must be > 0");
    std::vector<double> n_cm3(mass_m0.size(), 0.0);
    for (auto& sb : subbands) {
        double m_eff = 0;  // envelope-probability-weighted mass
        for (std::size_t i = 0; i < mass_m0.size(); ++i)
            m_eff += mass_m0[i] * sb.psi[i] * sb.psi[i] * dz_nm;
        sb.sheet_density_cm2 =
            subband_sheet_density_cm2(sb.energy_eV, fermi_eV, temperature_K, m_eff);
        for (std::size_t i = 0; i < n_cm3.size(); ++i)
            n_cm3[i] += sb.sheet_density_cm2 * sb.psi[i] * sb.psi[i] * 1e7;  // cm^-2 nm^-1 -> cm^-3
    }
    return n_cm3;
}

double bulk_density_cm3(double ec_eV, double fermi_eV, double temperature_K, double mass_m0) {
    const double kT = constants::k_B * temperature_K;
    // N_c = 2 (m kT / 2 pi hbar^2)^{3/2}; in nm^-3 with eV nm^2 units.
    const double x = mass_m0 * kT / (4.0 * M_PI * constants::hbar2_over_2m0);
    const double nc_nm3 = 2.0 * x * std::sqrt(x);
    return nc_nm3 * fermi_half((fermi_eV - ec_eV) / kT) / constants::cm3_to_nm3;
}

}  // namespace spt
