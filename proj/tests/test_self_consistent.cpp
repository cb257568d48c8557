#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spt/errors.hpp"
#include "spt/self_consistent.hpp"
#include "spt/stack.hpp"

using namespace spt;

namespace {

SolverConfig quick() {
    SolverConfig c;
    c.dz_nm = 0.25;  // test-speed grid; acceptance runs the 0.1 nm default
    return c;
}

}  // namespace

TEST_CASE("reference stack converges and sits at a fixed point") {
    SelfConsistentSolver solver(reference_stack(), quick());
    SolveResult r = solver.solve();
    CHECK(r.converged);
    CHECK(r.iterations <= 500);
    REQUIRE(!r.residual_history.empty());
    CHECK(r.residual_history.back() < 1e-5);

    // One more full iteration moves Ec by less than tol everywhere.
    CHECK(solver.iterate_once() < 1e-5);
}

TEST_CASE("residual decreases monotonically after the first 10 iterations") {
    SolveResult r = self_consistent_solve(reference_stack(), quick());
    REQUIRE(r.residual_history.size() > 12);
    for (std::size_t i = 10; i + 1 < r.residual_history.size(); ++i)
        CHECK(r.residual_history[i + 1] <= r.residual_history[i] * (1.0 + 1e-9));
}

TEST_CASE("modulation doping contrast: soaked vs un-soaked donors") {
    SolveResult soaked = self_consistent_solve(reference_stack(1.0), quick());
    SolveResult dark = self_consistent_solve(reference_stack(0.0), quick());
    REQUIRE(soaked.converged);
    REQUIRE(dark.converged);

    const double n_soaked = layer_sheet_density_cm2(soaked, kChannelLayer);
    const double n_dark = layer_sheet_density_cm2(dark, kChannelLayer);
    CHECK(n_soaked > 1e10);
    CHECK(n_dark < 1e9);

    // Channel ground state below E_F when soaked; absorption well empty.
    CHECK(soaked.subbands.front().energy_eV < soaked.fermi_level_eV);
    CHECK(layer_sheet_density_cm2(soaked, kAbsorptionLayer) < 1e9);
}

TEST_CASE("profile invariants and boundary conditions") {
    SolveResult r = self_consistent_solve(reference_stack(), quick());
    const Grid& g = r.grid;

    // Ec - Ev equals the local gap everywhere.
    for (std::size_t i = 0; i < g.nodes(); ++i)
        CHECK(r.profile.Ec_eV[i] - r.profile.Ev_eV[i] ==
              doctest::Approx(g.e_g[i]).epsilon(1e-12));

    // Surface pinning: Ec(0) - E_F = barrier (zero gate bias).
    CHECK(r.profile.Ec_eV.front() ==
          doctest::Approx(r.surface_barrier_eV).epsilon(1e-10));

    // Zero-field substrate end.
    const std::size_t n = g.nodes();
    CHECK(std::fabs(r.profile.phi_V[n - 1] - r.profile.phi_V[n - 2]) / g.dz < 1e-6);

    // Densities are physical.
    for (double v : r.n_cm3) CHECK(v >= 0);
    for (const auto& sb : r.subbands) CHECK(sb.sheet_density_cm2 >= 0);
}

TEST_CASE("subbands are orthonormal, sorted, and energy-consistent") {
    SolveResult r = self_consistent_solve(reference_stack(), quick());
    const double dz = r.grid.dz;
    for (std::size_t i = 0; i < r.subbands.size(); ++i) {
        double norm = 0;
        for (double p : r.subbands[i].psi) norm += p * p * dz;
        CHECK(std::fabs(norm - 1.0) < 1e-8);
        if (i > 0) CHECK(r.subbands[i].energy_eV >= r.subbands[i - 1].energy_eV);
        for (std::size_t j = 0; j < i; ++j) {
            double dot = 0;
            for (std::size_t k = 0; k < r.subbands[i].psi.size(); ++k)
                dot += r.subbands[i].psi[k] * r.subbands[j].psi[k] * dz;
            CHECK(std::fabs(dot) < 1e-6);
        }
    }
    REQUIRE(!r.hole_subbands.empty());
    for (const auto& hb : r.hole_subbands) {
        double norm = 0;
        for (double p : hb.psi) norm += p * p * dz;
        CHECK(std::fabs(norm - 1.0) < 1e-8);
    }
}

TEST_CASE("gate bias moves the surface boundary") {
    DeviceStack biased = reference_stack();
    biased.gate_bias_V = -0.3;
    SolveResult r = self_consistent_solve(biased, quick());
    CHECK(r.profile.Ec_eV.front() ==
          doctest::Approx(r.surface_barrier_eV + 0.3).epsilon(1e-9));
}

TEST_CASE("iteration cap reports non-convergence with history") {
    SolverConfig c = quick();
    c.max_iter = 2;
    SolveResult r = self_consistent_solve(reference_stack(), c);
    CHECK(!r.converged);
    CHECK(r.iterations == 2);
    CHECK(r.residual_history.size() == 2);
}

TEST_CASE("config validation") {
    SolverConfig c = quick();
    c.mixing = 0.0;
    CHECK_THROWS_AS(self_consistent_solve(reference_stack(), c), ConfigError);
    c = quick();
    c.tol_potential_eV = -1;
    CHECK_THROWS_AS(self_consistent_solve(reference_stack(), c), ConfigError);
}
