#include "spt/self_consistent.hpp"

#include <algorithm>
#include <cmath>

#include "spt/constants.hpp"
#include "spt/errors.hpp"
#include "spt/fermi.hpp"
#include "spt/poisson.hpp"
#include "spt/tridiag.hpp"

namespace spt {

namespace {

constexpr double kFermi = 0.0;  // global reference

inline double eps_half(double a, double b) { return 2.0 * a * b / (a + b); }

// Nonlinear Poisson solve with a local charge model n(z, phi):
//   d/dz[eps dphi/dz] = -(donor - n) / eps0
// Newton iteration on the tridiagonal system; density is a monotone
// non-decreasing function of phi, so the damped iteration is global.
template <typename DensityFn>
std::vector<double> newton_poisson(std::vector<double> phi, const std::vector<double>& donor_cm3,
                                   const std::vector<double>& eps_r, double dz_nm,
                                   double bc_surface_V, DensityFn&& density_and_slope) {
    const std::size_t n = phi.size();
    const double inv_dz2 = 1.0 / (dz_nm * dz_nm);
    const double to_vnm2 = constants::cm3_to_nm3 / constants::eps0;  // cm^-3 -> V/nm^2
    const double clamp = 0.05;  // volts per Newton step

    std::vector<double> lower(n - 1), diag(n), upper(n - 1), rhs(n);
    for (int it = 0; it < 400; ++it) {
        for (std::size_t i = 0; i < n - 1; ++i) lower[i] = upper[i] = 0.0;

        diag[0] = 1.0;
        rhs[0] = -(phi[0] - bc_surface_V);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double em = eps_half(eps_r[i - 1], eps_r[i]) * inv_dz2;
            const double ep = eps_half(eps_r[i], eps_r[i + 1]) * inv_dz2;
            const auto [n_cm3, dn_dphi] = density_and_slope(i, phi[i]);
            const double f = em * (phi[i - 1] - phi[i]) + ep * (phi[i + 1] - phi[i]) +
                             (donor_cm3[i] - n_cm3) * to_vnm2;
            lower[i - 1] = em;
            diag[i] = -(em + ep) - dn_dphi * to_vnm2;
            upper[i] = ep;
            rhs[i] = -f;
        }
        {
            const double em = eps_half(eps_r[n - 2], eps_r[n - 1]) * inv_dz2;
            const auto [n_cm3, dn_dphi] = density_and_slope(n - 1, phi[n - 1]);
            const double f =
                2.0 * em * (phi[n - 2] - phi[n - 1]) + (donor_cm3[n - 1] - n_cm3) * to_vnm2;
            lower[n - 2] = 2.0 * em;
            diag[n - 1] = -2.0 * em - dn_dphi * to_vnm2;
            rhs[n - 1] = -f;
        }

        std::vector<double> step = tridiag_solve(lower, diag, upper, rhs);
        double worst = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = std::clamp(step[i], -clamp, clamp);
            phi[i] += s;
            worst = std::max(worst, std::fabs(s));
        }
        if (worst < 1e-13) return phi;
    }
    throw ConvergenceError("screened Poisson solve did not reach 1e-13 V");
}

}  // namespace

SelfConsistentSolver::SelfConsistentSolver(const DeviceStack& stack, SolverConfig config,
                                           const MaterialTable& table)
    : grid_(discretize(stack, config.dz_nm, table)),
      cfg_(config),
      temperature_K_(stack.temperature_K),
      barrier_eV_(resolved_surface_barrier(stack, table)) {
    if (!(cfg_.tol_potential_eV > 0)) throw ConfigError("tol_potential must be > 0");
    if (!(cfg_.mixing > 0) || cfg_.mixing > 1) throw ConfigError("mixing must be in (0, 1]");
    if (cfg_.max_iter < 1) throw ConfigError("max_iter must be >= 1");
    if (cfg_.n_states < 1) throw ConfigError("n_states must be >= 1");

    // Ec(0) - E_F = barrier - V_gate and Ec = ec_ref - phi give the Dirichlet value.
    bc_surface_V_ = grid_.ec_ref.front() - (barrier_eV_ - stack.gate_bias_V);

    double depth;
    if (cfg_.quantum_depth_nm) {
        depth = *cfg_.quantum_depth_nm;
    } else {
        depth = grid_.z.back();
        double deepest_doped = -1.0;
        for (std::size_t li = 0; li < stack.layers.size(); ++li)
            if (stack.layers[li].donor_doping_cm3 > 0)
                deepest_doped = grid_.z[grid_.end_node(li) - 1];
        if (deepest_doped >= 0) depth = std::min(depth, deepest_doped + 50.0);
    }
    window_end_ = std::min<std::size_t>(
        grid_.nodes(), static_cast<std::size_t>(std::llround(depth / grid_.dz)) + 1);
    if (window_end_ < 3) throw ConfigError("quantum region smaller than 3 nodes");

    // Classical warm start: semiclassical electrons everywhere.
    phi_.assign(grid_.nodes(), bc_surface_V_);
    phi_ = newton_poisson(phi_, grid_.donor_cm3, grid_.eps_r, grid_.dz, bc_surface_V_,
                          [&](std::size_t i, double p) {
                              const double ec = grid_.ec_ref[i] - p;
                              const double n = bulk_density_cm3(ec, kFermi, temperature_K_,
                                                                grid_.m_e[i]);
                              const double h = 1e-4;
                              const double np = bulk_density_cm3(ec - h, kFermi, temperature_K_,
                                                                 grid_.m_e[i]);
                              return std::pair{n, (np - n) / h};
                          });
}

std::vector<Subband> SelfConsistentSolver::solve_window_states(
    const std::vector<double>& edge_full, const std::vector<double>& mass_full,
    std::size_t count) const {
    std::vector<double> edge(edge_full.begin(), edge_full.begin() + window_end_);
    std::vector<double> mass(mass_full.begin(), mass_full.begin() + window_end_);
    std::vector<Subband> win = solve_schrodinger(edge, mass, grid_.dz, count);
    for (auto& sb : win) sb.psi.resize(grid_.nodes(), 0.0);  // zero beyond the window
    return win;
}

std::vector<double> SelfConsistentSolver::screened_poisson(
    const std::vector<Subband>& subbands) const {
    // Local-shift predictor: each subband follows the potential update at
    // fixed envelope, which keeps the Poisson step stable at 4.2 K where the
    // degenerate filling is razor sharp. At the fixed point the shift
    // vanishes and the plain quantum density is recovered.
    const double kT = constants::k_B * temperature_K_;
    struct Term {
        double dos_kT_cm2;  // prefactor of the softplus, cm^-2
        double energy;
    };
    std::vector<Term> terms(subbands.size());
    for (std::size_t s = 0; s < subbands.size(); ++s) {
        double m_eff = 0;
        for (std::size_t i = 0; i < grid_.nodes(); ++i)
            m_eff += grid_.m_e[i] * subbands[s].psi[i] * subbands[s].psi[i] * grid_.dz;
        terms[s] = {m_eff * constants::dos2d_per_m0 * constants::nm2_to_cm2 * kT,
                    subbands[s].energy_eV};
    }

    return newton_poisson(
        phi_, grid_.donor_cm3, grid_.eps_r, grid_.dz, bc_surface_V_,
        [&](std::size_t i, double p) {
            double n = 0, slope = 0;
            if (i < window_end_) {
                const double dphi = p - phi_[i];
                for (std::size_t s = 0; s < terms.size(); ++s) {
                    const double psi2 = subbands[s].psi[i] * subbands[s].psi[i] * 1e7;
                    const double x = (kFermi - terms[s].energy + dphi) / kT;
                    n += terms[s].dos_kT_cm2 * softplus(x) * psi2;
                    slope += terms[s].dos_kT_cm2 * logistic(x) / kT * psi2;
                }
            } else {
                const double ec = grid_.ec_ref[i] - p;
                n = bulk_density_cm3(ec, kFermi, temperature_K_, grid_.m_e[i]);
                const double h = 1e-4;
                const double np = bulk_density_cm3(ec - h, kFermi, temperature_K_, grid_.m_e[i]);
                slope = (np - n) / h;
            }
            return std::pair{n, slope};
        });
}

double SelfConsistentSolver::iterate_once() {
    std::vector<double> ec(grid_.nodes());
    for (std::size_t i = 0; i < grid_.nodes(); ++i) ec[i] = grid_.ec_ref[i] - phi_[i];

    std::vector<Subband> subbands = solve_window_states(ec, grid_.m_e, cfg_.n_states);
    std::vector<double> phi_solve = screened_poisson(subbands);

    double applied = 0;
    for (std::size_t i = 0; i < phi_.size(); ++i) {
        const double step = cfg_.mixing * (phi_solve[i] - phi_[i]);
        phi_[i] += step;
        applied = std::max(applied, std::fabs(step));
    }
    residuals_.push_back(applied);
    ++iterations_;
    return applied;
}

SolveResult SelfConsistentSolver::solve() {
    converged_ = false;
    for (int it = 0; it < cfg_.max_iter; ++it) {
        if (iterate_once() < cfg_.tol_potential_eV) {
            converged_ = true;
            break;
        }
    }
    return finalize();
}

std::vector<double> SelfConsistentSolver::quantum_density_cm3(
    const std::vector<Subband>& subbands) const {
    std::vector<double> n(grid_.nodes(), 0.0);
    for (const auto& sb : subbands)
        for (std::size_t i = 0; i < n.size(); ++i)
            n[i] += sb.sheet_density_cm2 * sb.psi[i] * sb.psi[i] * 1e7;
    return n;
}

SolveResult SelfConsistentSolver::finalize() const {
    SolveResult r;
    r.grid = grid_;
    r.surface_barrier_eV = barrier_eV_;
    r.fermi_level_eV = kFermi;
    r.iterations = iterations_;
    r.converged = converged_;
    r.residual_history = residuals_;

    const std::size_t n = grid_.nodes();
    r.profile.phi_V = phi_;
    r.profile.Ec_eV.resize(n);
    r.profile.Ev_eV.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.profile.Ec_eV[i] = grid_.ec_ref[i] - phi_[i];
        r.profile.Ev_eV[i] = r.profile.Ec_eV[i] - grid_.e_g[i];
    }

    const std::size_t n_el = std::max(cfg_.n_report_states, cfg_.n_states);
    r.subbands = solve_window_states(r.profile.Ec_eV, grid_.m_e, n_el);
    subband_density(r.subbands, kFermi, temperature_K_, grid_.m_e, grid_.dz);
    r.n_cm3 = quantum_density_cm3(r.subbands);
    for (std::size_t i = window_end_; i < n; ++i)
        r.n_cm3[i] = bulk_density_cm3(r.profile.Ec_eV[i], kFermi, temperature_K_, grid_.m_e[i]);

    // Heavy holes in the final potential only; they carry no charge here.
    if (cfg_.n_hole_states > 0) {
        std::vector<double> hole_edge(n);
        for (std::size_t i = 0; i < n; ++i) hole_edge[i] = -r.profile.Ev_eV[i];
        r.hole_subbands = solve_window_states(hole_edge, grid_.m_hh, cfg_.n_hole_states);
    }
    return r;
}

SolveResult self_consistent_solve(const DeviceStack& stack, const SolverConfig& config,
                                  const MaterialTable& table) {
    SelfConsistentSolver solver(stack, config, table);
    return solver.solve();
}

double layer_weight(const Subband& sb, const Grid& grid, std::size_t layer) {
    double w = 0;
    for (std::size_t i = grid.first_node(layer); i < grid.end_node(layer); ++i)
        w += sb.psi[i] * sb.psi[i] * grid.dz;
    return w;
}

double layer_sheet_density_cm2(const SolveResult& result, std::size_t layer) {
    const Grid& g = result.grid;
    double s = 0;
    for (std::size_t i = g.first_node(layer); i < g.end_node(layer); ++i)
        s += result.n_cm3[i] * g.dz * 1e-7;  // cm^-3 nm -> cm^-2
    return s;
}

}  // namespace spt
