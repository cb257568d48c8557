#include "spt/presets.hpp"

namespace spt::presets {

BeamGeometry reference_beam() {
    BeamGeometry b;
    b.spot_diameter_um = 5000.0;
    b.window_diameter_um = 1.0;
    b.profile = BeamProfile::gaussian;
    return b;
}

ChannelModel reference_channel() {
    ChannelModel m;
    m.V_th0_V = 0.1;
    m.dVth_trap_V = 0.010;
    m.dVth_ion_V = -0.006;
    m.V_sd_V = 0.5e-3;
    m.softness_V = 0.005;
    TrapState soaked;
    soaked.capacity = 12;
    soaked.donor_total = kDonorTotal;
    soaked.n_ionized = kDonorTotal;
    m.G0_S = calibrate_g0(m, kFig3GateBiasV, soaked, 0.6e-9);
    return m;
}

TraceConfig fig3() {
    TraceConfig c;
    c.channel = reference_channel();
    c.gate_bias_V = kFig3GateBiasV;
    c.light.wavelength_um = 1.30;
    c.rates.lambda_gap_um = kLambdaGapUm;
    c.rates.eps_lambda_um = 0.02;
    c.rates.photon_rate_per_s = 1.0;
    c.rates.detrap_efficiency = 0.3;
    c.rates.ionize_efficiency = 1.0;  // idle: every donor is already ionized
    c.rates.dark_spike_rate_per_s = 0.01;
    c.initial.capacity = 12;
    c.initial.donor_total = kDonorTotal;
    c.initial.n_ionized = kDonorTotal;
    c.initial.n_trapped = 0;
    c.shutter = ShutterSchedule::always_open();
    c.duration_s = 120.0;
    c.sample_dt_s = 0.1;
    return c;
}

TraceConfig fig3_caption() {
    TraceConfig c = fig3();
    c.rates.photon_rate_per_s = 0.3;
    c.duration_s = 400.0;
    return c;
}

TraceConfig fig4() {
    TraceConfig c;
    c.channel = reference_channel();
    c.channel.dVth_trap_V = 0.0015;  // many shallow window-trap sites
    c.rates.lambda_gap_um = kLambdaGapUm;
    c.rates.eps_lambda_um = 0.02;
    c.rates.photon_rate_per_s = 3.0;
    c.rates.detrap_efficiency = 1.0;
    c.rates.ionize_efficiency = 2.0;
    c.rates.dark_spike_rate_per_s = 0.0;
    c.initial.capacity = 300;
    c.initial.donor_total = kDonorTotal;
    c.initial.n_ionized = 85;  // partial soak leaves the channel unpinched
    c.gate_bias_V = c.channel.V_th0_V + 85 * c.channel.dVth_ion_V + 0.10;
    c.light.sweeping = true;
    c.light.sweep_from_um = 1.0;
    c.light.sweep_to_um = 1.8;
    c.light.sweep_duration_s = 80.0;
    c.light.wavelength_um = 1.0;
    c.duration_s = 80.0;
    c.sample_dt_s = 0.1;
    return c;
}

TraceConfig fig5() {
    TraceConfig c;
    c.channel = reference_channel();
    c.rates.lambda_gap_um = kLambdaGapUm;
    c.rates.eps_lambda_um = 0.02;
    c.rates.photon_rate_per_s = 3.0;  // "30 photons in 10 seconds"
    c.rates.detrap_efficiency = 1.0;  // balanced against trapping at the edge
    c.rates.ionize_efficiency = 0.0;  // frozen incomplete soak
    c.rates.dark_spike_rate_per_s = 0.0;
    c.initial.capacity = 1;
    c.initial.donor_total = kDonorTotal;
    c.initial.n_ionized = 85;
    c.initial.n_trapped = 0;
    c.gate_bias_V = c.channel.V_th0_V + 85 * c.channel.dVth_ion_V + 0.015;
    c.light.wavelength_um = kLambdaGapUm;  // operate on the crossover
    c.shutter.period_s = 50.0;
    c.shutter.open_duration_s = 10.0;
    c.shutter.t_start_s = 20.0;
    c.shutter.total_time_s = 520.0;
    c.duration_s = 520.0;
    c.sample_dt_s = 0.1;
    return c;
}

SolverConfig fig1_solver() {
    return SolverConfig{};
}

}  // namespace spt::presets
