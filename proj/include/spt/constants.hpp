#ifndef SPT_CONSTANTS_HPP
#define SPT_CONSTANTS_HPP

// Working unit system: energy in eV, length in nm, potential in V,
// sheet density in cm^-2, volume density in cm^-3, time in s.

namespace spt::constants {

constexpr double hbar2_over_2m0 = 0.0380998212;    // hbar^2/(2 m0), eV nm^2
constexpr double k_B            = 8.617333262e-5;  // eV / K
constexpr double eps0           = 0.0552634940;    // e / (V nm)
constexpr double hc             = 1.239841984;     // eV um (photon energy = hc / lambda_um)
constexpr double q_e            = 1.602176634e-19; // C
constexpr double m0_kg          = 9.1093837015e-31;

// 2D density of states per unit free-electron mass, nm^-2 eV^-1
constexpr double dos2d_per_m0 = 1.0 / (3.14159265358979323846 * 2.0 * hbar2_over_2m0);

constexpr double nm2_to_cm2 = 1.0e14;   // 1 nm^-2 = 1e14 cm^-2
constexpr double cm3_to_nm3 = 1.0e-21;  // 1 cm^-3 = 1e-21 nm^-3

}  // namespace spt::constants

#endif
