#include "spt/derived.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spt/constants.hpp"
#include "spt/errors.hpp"

namespace spt {

double effective_g(const Subband& sb, const Grid& grid,
                   const std::vector<double>& g_by_layer) {
    const std::size_t n_layers = grid.layer_start_node.size();
    if (g_by_layer.size() != n_layers)
        throw ConfigError("need one g value per stack layer");
    double g = 0, wsum = 0;
    for (std::size_t li = 0; li < n_layers; ++li) {
        const double w = layer_weight(sb, grid, li);
        g += g_by_layer[li] * w;
        wsum += w;
    }
    return g / wsum;
}

double effective_g(const Subband& sb, const Grid& grid) {
    std::vector<double> g(grid.layer_start_node.size());
    for (std::size_t li = 0; li < g.size(); ++li) g[li] = grid.g_e[grid.first_node(li)];
    return effective_g(sb, grid, g);
}

double wkb_transmission(const std::vector<double>& ec_eV, const std::vector<double>& mass_m0,
                        double dz_nm, double energy_eV) {
    const std::size_t n = ec_eV.size();
    std::vector<double> kappa(n, 0.0);
    bool forbidden = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double barrier = ec_eV[i] - energy_eV;
        if (barrier > 0) {
            kappa[i] = std::sqrt(mass_m0[i] * barrier / constants::hbar2_over_2m0);
            forbidden = true;
        }
    }
    if (!forbidden) return 1.0;
    double integral = 0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        integral += 0.5 * (kappa[i] + kappa[i + 1]) * dz_nm;
    const double exponent = -2.0 * integral;
    return exponent < -745.0 ? 0.0 : std::exp(exponent);
}

TunnelingTime tunneling_time(double well_width_nm, double well_mass_m0,
                             double energy_above_well_bottom_eV, double transmission) {
    if (!(transmission >= 0) || transmission > 1)
        throw ConfigError("transmission must be in [0, 1]");
    if (!(energy_above_well_bottom_eV > 0))
        throw ConfigError("attempt energy must be > 0");
    const double v = std::sqrt(2.0 * energy_above_well_bottom_eV * constants::q_e /
                               (well_mass_m0 * constants::m0_kg));  // m/s
    const double f = v / (2.0 * well_width_nm * 1e-9);              // Hz
    TunnelingTime t;
    t.attempt_frequency_hz = f;
    t.tau_s = transmission > 0 ? 1.0 / (f * transmission)
                               : std::numeric_limits<double>::infinity();
    return t;
}

namespace {

// Lowest electron state with > 50% weight in the layer.
std::size_t localized_state(const std::vector<Subband>& states, const Grid& grid,
                            std::size_t layer, const char* kind) {
    for (std::size_t s = 0; s < states.size(); ++s)
        if (layer_weight(states[s], grid, layer) > 0.5) return s;
    throw NoBoundStateError(std::string("NoBoundState: no ") + kind +
                            " state with > 50% weight in layer " + std::to_string(layer));
}

double absorption_well_bottom(const SolveResult& result, std::size_t layer) {
    const Grid& g = result.grid;
    double bottom = result.profile.Ec_eV[g.first_node(layer)];
    for (std::size_t i = g.first_node(layer); i < g.end_node(layer); ++i)
        bottom = std::min(bottom, result.profile.Ec_eV[i]);
    return bottom;
}

BarrierReport finish_report(const SolveResult& result, std::size_t absorption_layer,
                            double energy_eV, double energy_above_bottom_eV,
                            double transmission, std::size_t state_index) {
    const Grid& g = result.grid;
    BarrierReport r;
    r.energy_eV = energy_eV;
    r.energy_above_well_bottom_eV = energy_above_bottom_eV;
    r.transmission = transmission;
    const double width =
        static_cast<double>(g.end_node(absorption_layer) - g.first_node(absorption_layer)) * g.dz;
    const double well_mass = g.m_e[g.first_node(absorption_layer)];
    r.time = tunneling_time(width, well_mass, energy_above_bottom_eV, transmission);
    r.electron_state = state_index;
    return r;
}

void check_layer_order(std::size_t absorption_layer, std::size_t channel_layer) {
    if (channel_layer <= absorption_layer + 1)
        throw ConfigError("channel layer must lie below the absorption layer");
}

}  // namespace

BarrierReport trap_escape_lifetime(const SolveResult& result, std::size_t absorption_layer,
                                   std::size_t channel_layer) {
    check_layer_order(absorption_layer, channel_layer);
    const Grid& g = result.grid;
    const std::size_t s =
        localized_state(result.subbands, g, absorption_layer, "electron");
    const double bottom = absorption_well_bottom(result, absorption_layer);
    const double e_conf = result.subbands[s].energy_eV - bottom;

    // The escape barrier as grown: conduction offsets relative to the well
    // material, untilted. A trapped electron sits in the window-center
    // lateral minimum where the gate-induced slope of the surroundings is
    // absent, so the structural barrier is the relevant one; the in-situ
    // tilted profile is available through barrier_lifetime_at.
    const std::size_t from = g.end_node(absorption_layer);
    const std::size_t to = g.first_node(channel_layer);
    const double well_ref = g.ec_ref[g.first_node(absorption_layer)];
    std::vector<double> ec(to + 1 - from), mass(to + 1 - from);
    for (std::size_t i = from; i <= to; ++i) {
        ec[i - from] = g.ec_ref[i] - well_ref;
        mass[i - from] = g.m_e[i];
    }
    const double t = wkb_transmission(ec, mass, g.dz, e_conf);
    return finish_report(result, absorption_layer, result.subbands[s].energy_eV, e_conf, t, s);
}

BarrierReport barrier_lifetime_at(const SolveResult& result, std::size_t absorption_layer,
                                  std::size_t channel_layer, double energy_eV) {
    check_layer_order(absorption_layer, channel_layer);
    const Grid& g = result.grid;
    const std::size_t from = g.end_node(absorption_layer);
    const std::size_t to = g.first_node(channel_layer);
    std::vector<double> ec(result.profile.Ec_eV.begin() + from,
                           result.profile.Ec_eV.begin() + to + 1);
    std::vector<double> mass(g.m_e.begin() + from, g.m_e.begin() + to + 1);
    const double bottom = absorption_well_bottom(result, absorption_layer);
    const double t = wkb_transmission(ec, mass, g.dz, energy_eV);
    return finish_report(result, absorption_layer, energy_eV, energy_eV - bottom, t,
                         static_cast<std::size_t>(-1));
}

InterbandReport interband_wavelength(const SolveResult& result, std::size_t absorption_layer) {
    const Grid& g = result.grid;
    if (absorption_layer >= g.layer_start_node.size())
        throw ConfigError("absorption layer index out of range");

    const std::size_t se =
        localized_state(result.subbands, g, absorption_layer, "electron");
    const std::size_t sh =
        localized_state(result.hole_subbands, g, absorption_layer, "heavy-hole");

    double ec_edge = std::numeric_limits<double>::infinity();
    double ev_edge = -std::numeric_limits<double>::infinity();
    for (std::size_t i = g.first_node(absorption_layer); i < g.end_node(absorption_layer); ++i) {
        ec_edge = std::min(ec_edge, result.profile.Ec_eV[i]);
        ev_edge = std::max(ev_edge, result.profile.Ev_eV[i]);
    }

    InterbandReport r;
    r.electron_state = se;
    r.hole_state = sh;
    r.electron_confinement_eV = result.subbands[se].energy_eV - ec_edge;
    // Hole eigenvalues live in the -Ev landscape, so the edge enters with +.
    r.hole_confinement_eV = result.hole_subbands[sh].energy_eV + ev_edge;
    const double e_gap = g.e_g[g.first_node(absorption_layer)];
    r.transition_eV = e_gap + r.electron_confinement_eV + r.hole_confinement_eV;
    r.lambda_um = constants::hc / r.transition_eV;
    return r;
}

double window_power_fraction(const BeamGeometry& beam) {
    if (!(beam.spot_diameter_um > 0) || !(beam.window_diameter_um > 0))
        throw ConfigError("beam diameters must be > 0");
    const double dw = beam.window_diameter_um;
    const double ds = beam.spot_diameter_um;
    if (beam.profile == BeamProfile::uniform) {
        const double ratio = (dw / ds) * (dw / ds);
        return std::min(1.0, ratio);
    }
    const double w = ds / 2.0;  // 1/e^2 intensity radius
    return -std::expm1(-2.0 * dw * dw / (4.0 * w * w));
}

PhotonBudget absorbed_photon_rate(double power_W, double wavelength_um, double fraction,
                                  double absorptivity) {
    if (power_W < 0 || fraction < 0 || absorptivity < 0 || absorptivity > 1)
        throw ConfigError("photon budget inputs must be >= 0, absorptivity <= 1");
    PhotonBudget b;
    b.absorptivity = absorptivity;
    if (power_W == 0 || fraction == 0) {
        b.incident_rate_in_window = 0;
        b.absorbed_rate = 0;
        return b;
    }
    const double photon_J = constants::hc / wavelength_um * constants::q_e;
    b.incident_rate_in_window = power_W * fraction / photon_J;
    b.absorbed_rate = b.incident_rate_in_window * absorptivity;
    return b;
}

}  // namespace spt
