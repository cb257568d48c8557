#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "spt/constants.hpp"
#include "spt/fermi.hpp"
#include "spt/schrodinger.hpp"

using namespace spt;
namespace c = spt::constants;

TEST_CASE("softplus and logistic saturate without overflow") {
    CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(softplus(1500.0) == 1500.0);
    CHECK(softplus(-1500.0) == 0.0);
    CHECK(softplus(-50.0) == doctest::Approx(std::exp(-50.0)).epsilon(1e-10));
    CHECK(logistic(0.0) == 0.5);
    CHECK(logistic(1500.0) == 1.0);
    CHECK(logistic(-1500.0) == 0.0);
}

TEST_CASE("sheet density vanishes 50 kT below the subband") {
    const double t = 4.2, m = 0.041;
    const double kT = c::k_B * t;
    const double dos_kT = m * c::dos2d_per_m0 * c::nm2_to_cm2 * kT;
    const double n = subband_sheet_density_cm2(50.0 * kT, 0.0, t, m);
    CHECK(n < 1e-20 * dos_kT);
}

TEST_CASE("degenerate limit: n -> (m/pi hbar^2)(E_F - E1)") {
    // Oracle computed independently from the constants.
    const double m = 0.065, dE = 0.02;  // E_F - E1, eV
    const double t = 0.01;              // kT = 8.6e-7 eV << dE
    const double oracle = m * c::dos2d_per_m0 * c::nm2_to_cm2 * dE;
    const double n = subband_sheet_density_cm2(0.0, dE, t, m);
    CHECK(n == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("n(z) integrates to the sheet-density sum") {
    const double dz = 0.05, length = 10.0;
    const auto n_nodes = static_cast<std::size_t>(std::llround(length / dz)) + 1;
    std::vector<double> edge(n_nodes, 0.0), mass(n_nodes, 0.041);
    auto states = solve_schrodinger(edge, mass, dz, 3);
    // Fermi level above E2 so two subbands fill appreciably.
    auto density = subband_density(states, states[1].energy_eV + 0.01, 4.2, mass, dz);
    double integral = 0;
    for (double v : density) integral += v * dz * 1e-7;  // cm^-3 nm -> cm^-2
    double total = 0;
    for (const auto& s : states) total += s.sheet_density_cm2;
    CHECK(integral == doctest::Approx(total).epsilon(1e-6));
    CHECK(states[0].sheet_density_cm2 > states[1].sheet_density_cm2);
    for (const auto& s : states) CHECK(s.sheet_density_cm2 >= 0);
}

TEST_CASE("fermi_half spans Boltzmann to degenerate regimes") {
    CHECK(fermi_half(-12.0) == doctest::Approx(std::exp(-12.0)).epsilon(0.005));
    const double eta = 2500.0;  // deep degenerate
    const double sommerfeld = 4.0 / (3.0 * std::sqrt(M_PI)) * std::pow(eta, 1.5);
    CHECK(fermi_half(eta) == doctest::Approx(sommerfeld).epsilon(0.01));
    // Normalized convention (-> e^eta in the Boltzmann limit):
    // F(0) = (1 - 1/sqrt(2)) zeta(3/2) = 0.76515.
    CHECK(fermi_half(0.0) == doctest::Approx(0.76515).epsilon(0.005));
}

TEST_CASE("bulk density reproduces the textbook N_c scale") {
    // InP at 300 K, Boltzmann regime: n = N_c exp(eta), N_c ~ 5.7e17 cm^-3.
    const double t = 300.0, m = 0.0795;
    const double eta = -5.0;
    const double n = bulk_density_cm3(-c::k_B * t * eta, 0.0, t, m);
    const double x = m * c::k_B * t / (4.0 * M_PI * c::hbar2_over_2m0);
    const double nc = 2.0 * x * std::sqrt(x) / c::cm3_to_nm3;
    CHECK(nc == doctest::Approx(5.7e17).epsilon(0.05));
    CHECK(n == doctest::Approx(nc * std::exp(eta)).epsilon(0.01));
}
