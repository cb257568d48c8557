#ifndef SPT_SELF_CONSISTENT_HPP
#define SPT_SELF_CONSISTENT_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "spt/grid.hpp"
#include "spt/schrodinger.hpp"
#include "spt/stack.hpp"

namespace spt {

struct SolverConfig {
    double dz_nm = 0.1;
    double tol_potential_eV = 1e-5;
    int max_iter = 500;
    double mixing = 0.2;  // in (0, 1]
    std::size_t n_states = 8;         // electron states tracked while iterating
    std::size_t n_hole_states = 24;   // heavy-hole states, final potential only; the
                                      // surface field stacks hole states under the gate
                                      // before the absorption well appears
    std::size_t n_report_states = 32; // electron states in the final report
    // Quantum region: eigenstates are solved between the surface and this
    // depth; below it the (empty at 4.2 K) bulk is treated semiclassically.
    // Default: 50 nm past the deepest doped layer, or the whole stack when
    // nothing is doped.
    std::optional<double> quantum_depth_nm;
};

struct PotentialProfile {
    std::vector<double> Ec_eV;  // conduction-band edge
    std::vector<double> Ev_eV;  // heavy-hole band edge; Ec - Ev = local E_g
    std::vector<double> phi_V;  // electrostatic potential
};

struct SolveResult {
    Grid grid;
    PotentialProfile profile;
    std::vector<Subband> subbands;       // electrons, ascending energy
    std::vector<Subband> hole_subbands;  // heavy holes; energy_eV is the
                                         // eigenvalue in the -Ev landscape
    double fermi_level_eV = 0.0;         // reference: E_F = 0
    std::vector<double> n_cm3;           // electron density
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;  // applied max|dEc| per iteration
    double surface_barrier_eV = 0.0;
};

// Damped fixed-point loop: build Ec from offsets + phi, solve subbands in
// the quantum region, fill with Fermi-Dirac at E_F = 0 (substrate-side
// reference), rebuild the potential from donors minus electrons, mix with
// under-relaxation, stop when the applied update drops below tol. The
// Poisson step solves the screened (quantum-corrected) problem so the loop
// stays stable at 4.2 K. Surface boundary: Ec(0) - E_F = barrier - V_gate.
class SelfConsistentSolver {
public:
    SelfConsistentSolver(const DeviceStack& stack, SolverConfig config,
                         const MaterialTable& table = MaterialTable::builtin());

    // One damped update of phi; returns the applied max|dEc|.
    double iterate_once();
    SolveResult finalize() const;  // eigen solves + densities in the current phi
    SolveResult solve();           // full loop to convergence or max_iter

    const std::vector<double>& phi() const { return phi_; }
    const Grid& grid() const { return grid_; }

private:
    std::vector<double> quantum_density_cm3(const std::vector<Subband>& subbands) const;
    std::vector<double> screened_poisson(const std::vector<Subband>& subbands) const;
    std::vector<Subband> solve_window_states(const std::vector<double>& edge_full,
                                             const std::vector<double>& mass_full,
                                             std::size_t count) const;

    Grid grid_;
    SolverConfig cfg_;
    double temperature_K_;
    double barrier_eV_;
    double bc_surface_V_;
    std::size_t window_end_;  // node count of the quantum region (from node 0)
    std::vector<double> phi_;
    std::vector<double> residuals_;
    int iterations_ = 0;
    bool converged_ = false;
};

SolveResult self_consistent_solve(const DeviceStack& stack, const SolverConfig& config = {},
                                  const MaterialTable& table = MaterialTable::builtin());

// Integral of |psi|^2 over one layer (envelope weight, dimensionless).
double layer_weight(const Subband& sb, const Grid& grid, std::size_t layer);

// Integral of n(z) over one layer, cm^-2.
double layer_sheet_density_cm2(const SolveResult& result, std::size_t layer);

}  // namespace spt

#endif
