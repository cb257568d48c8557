#ifndef SPT_TRAP_DYNAMICS_HPP
#define SPT_TRAP_DYNAMICS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spt/master_equation.hpp"

namespace spt {

// Integer occupation of the window trap and of the photo-ionizable donors.
struct TrapState {
    int n_trapped = 0;
    int n_ionized = 0;
    int capacity = 1;
    int donor_total = 0;
};

// Wavelength-dependent event rates. Below the interband edge absorbed
// photons create trapped electrons; above it they photo-neutralize the trap
// and photo-ionize the remaining neutral donors. The crossover is smoothed
// over eps_lambda (absorption edges are not step functions), outside of
// which the two branches are exactly exclusive.
struct RateModel {
    double lambda_gap_um = 1.31;
    double eps_lambda_um = 0.02;
    double photon_rate_per_s = 1.0;     // absorbed photons/s while the shutter is open
    double detrap_efficiency = 1.0;     // photo-neutralization events per above-gap photon
    double ionize_efficiency = 0.0;     // donor ionizations per above-gap photon, all-neutral
    double dark_spike_rate_per_s = 0.0; // spontaneous positive steps, shutter-independent

    // 1 below the edge, 0 above, cubic smoothstep within +-eps_lambda.
    double trap_weight(double lambda_um) const;

    double trap_rate(double lambda_um, const TrapState& s, bool shutter_open) const;
    double detrap_rate(double lambda_um, const TrapState& s, bool shutter_open) const;
    double ionize_rate(double lambda_um, const TrapState& s, bool shutter_open) const;
};

// Smooth linear-above-threshold channel; trapped electrons raise the
// threshold, ionized donors lower it.
struct ChannelModel {
    double G0_S = 1.0e-5;
    double V_th0_V = 0.1;        // threshold with nothing trapped, nothing ionized
    double dVth_trap_V = 0.01;   // > 0
    double dVth_ion_V = -0.006;  // < 0
    double V_sd_V = 0.5e-3;
    double softness_V = 0.005;
};

double channel_current(const ChannelModel& m, double gate_V, const TrapState& s);

// G0 that puts the channel at target_A for the given bias and state.
double calibrate_g0(const ChannelModel& m, double gate_V, const TrapState& s, double target_A);

struct ShutterSchedule {
    double period_s = 50.0;
    double open_duration_s = 10.0;  // 0 < open <= period
    double t_start_s = 0.0;         // first opening
    double total_time_s = 0.0;      // informational span of the schedule

    bool is_open(double t_s) const;
    // Next open/close transition strictly after t, if any.
    std::optional<double> next_toggle_after(double t_s) const;
    static ShutterSchedule always_open();
};

struct LightDrive {
    double wavelength_um = 1.3;
    // Linear sweep from sweep_from to sweep_to over [0, sweep_duration];
    // overrides wavelength_um when set.
    bool sweeping = false;
    double sweep_from_um = 0, sweep_to_um = 0, sweep_duration_s = 0;

    double wavelength_at(double t_s) const;
};

enum class EventKind { trap, detrap, ionize };
const char* to_string(EventKind k);

struct TraceSample {
    double t_s;
    double current_A;
    int n_trapped;
    int n_ionized;
    bool shutter_open;
};

struct TraceEvent {
    double t_s;
    EventKind kind;
};

struct Trace {
    std::vector<TraceSample> samples;
    std::vector<TraceEvent> events;
    std::uint64_t seed = 0;
    std::string config_echo;  // key-value lines reproducing the run
};

struct TraceConfig {
    RateModel rates;
    ChannelModel channel;
    double gate_bias_V = 0.0;
    LightDrive light;
    ShutterSchedule shutter = ShutterSchedule::always_open();
    TrapState initial;
    double duration_s = 100.0;
    double sample_dt_s = 0.1;
};

// Exact-event Gillespie run. Rates are frozen between events; shutter
// transitions (and sample ticks while the wavelength sweeps) truncate the
// pending waiting-time draw, which is statistically exact for exponential
// waits. Deterministic: (config, seed) fixes every byte of the Trace.
Trace simulate_trace(const TraceConfig& cfg, std::uint64_t seed);

// Fig. 4 run shape: wavelength swept linearly while the shutter stays open.
// The swept range must span lambda_gap.
TraceConfig configure_sweep(TraceConfig cfg, double from_um, double to_um, double duration_s);
Trace spectral_sweep(TraceConfig cfg, double from_um, double to_um, double duration_s,
                     std::uint64_t seed);

// Fig. 5 run shape: two-level switching under a periodic shutter. Requires
// capacity 1 and trap/detrap rates within 2x at the operating wavelength.
TraceConfig configure_switching(TraceConfig cfg, const ShutterSchedule& schedule,
                                double duration_s);
Trace balanced_switching(TraceConfig cfg, const ShutterSchedule& schedule, double duration_s,
                         std::uint64_t seed);

// Rate matrix of the (n_trapped, n_ionized) chain under constant
// illumination, for the master-equation oracle. State index =
// n_trapped * (donor_total + 1) + n_ionized.
std::vector<std::vector<double>> trap_chain_rates(const RateModel& rates, double lambda_um,
                                                  const TrapState& shape, bool shutter_open);

// Per-sample median current across seeds seed0 .. seed0 + n_seeds - 1.
std::vector<double> ensemble_median_current(const TraceConfig& cfg, std::uint64_t seed0,
                                            int n_seeds);

}  // namespace spt

#endif
