#ifndef SPT_DERIVED_HPP
#define SPT_DERIVED_HPP

#include <cstddef>
#include <vector>

#include "spt/grid.hpp"
#include "spt/self_consistent.hpp"

namespace spt {

// Envelope-weighted electron g-factor: sum over layers of g_layer times the
// probability the state puts in that layer. Pure averaging; no
// energy-dependent corrections.
double effective_g(const Subband& sb, const Grid& grid);

// Same weighting with caller-supplied per-layer g values (one per stack
// layer), the hook for energy-dependent corrections to the bulk numbers.
double effective_g(const Subband& sb, const Grid& grid,
                   const std::vector<double>& g_by_layer);

// WKB transmission through the classically forbidden set {z : Ec(z) > E},
// kappa = sqrt(2 m (Ec - E)) / hbar, trapezoidal integration. 1 when the
// set is empty.
double wkb_transmission(const std::vector<double>& ec_eV, const std::vector<double>& mass_m0,
                        double dz_nm, double energy_eV);

// tau = 1 / (f T) with the round-trip attempt frequency f = v / (2 L),
// v = sqrt(2 E / m). T = 0 underflows to +inf.
struct TunnelingTime {
    double tau_s;
    double attempt_frequency_hz;
    static constexpr const char* frequency_convention = "v_over_2L";
};
TunnelingTime tunneling_time(double well_width_nm, double well_mass_m0,
                             double energy_above_well_bottom_eV, double transmission);

// Escape of the absorption-well ground state toward the channel through the
// cladding + barrier layers between the two wells (the downhill path; the
// surface side is not an escape route).
struct BarrierReport {
    double energy_eV;           // tunneling state, absolute scale
    double energy_above_well_bottom_eV;
    double transmission;
    TunnelingTime time;
    std::size_t electron_state;  // index into result.subbands
};

// Structural barrier: conduction offsets relative to the well material,
// untilted, at the solved confinement energy. This models the electron
// trapped in the window-center lateral minimum, where the slope the gated
// surroundings impose on the 1D profile is absent.
BarrierReport trap_escape_lifetime(const SolveResult& result, std::size_t absorption_layer,
                                   std::size_t channel_layer);

// In-situ variant: the self-consistent (tilted) profile between the wells at
// an explicit absolute energy (CLI --energy-eV).
BarrierReport barrier_lifetime_at(const SolveResult& result, std::size_t absorption_layer,
                                  std::size_t channel_layer, double energy_eV);

// lambda = hc / (E_g(well) + E_e1 + E_hh1); confinement energies measured
// from the band edges inside the absorption layer. Requires one electron
// and one heavy-hole state with > 50% envelope weight in that layer, else
// throws NoBoundStateError.
struct InterbandReport {
    double lambda_um;
    double transition_eV;
    double electron_confinement_eV;
    double hole_confinement_eV;
    std::size_t electron_state;
    std::size_t hole_state;
};
InterbandReport interband_wavelength(const SolveResult& result, std::size_t absorption_layer);

enum class BeamProfile { gaussian, uniform };

struct BeamGeometry {
    double spot_diameter_um;    // Gaussian: 1/e^2 intensity diameter
    double window_diameter_um;
    BeamProfile profile = BeamProfile::gaussian;
};

// Fraction of beam power entering the gate window. Gaussian:
// 1 - exp(-2 d_w^2 / (4 w^2)) with w the 1/e^2 radius; uniform: area ratio
// clipped to 1.
double window_power_fraction(const BeamGeometry& beam);

struct PhotonBudget {
    double incident_rate_in_window;  // photons / s
    double absorptivity;             // [0, 1]
    double absorbed_rate;            // photons / s
};

PhotonBudget absorbed_photon_rate(double power_W, double wavelength_um, double fraction,
                                  double absorptivity);

}  // namespace spt

#endif
