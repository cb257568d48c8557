#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "spt/errors.hpp"
#include "spt/io.hpp"
#include "spt/master_equation.hpp"
#include "spt/presets.hpp"
#include "spt/trap_dynamics.hpp"

using namespace spt;

namespace {

// Fraction of time spent with n_trapped == 1, reconstructed from events,
// truncated after max_events.
double occupancy_fraction(const Trace& tr, int start_n, std::size_t max_events,
                          double& window_end) {
    double t_prev = 0.0, time_high = 0.0;
    int n = start_n;
    std::size_t used = 0;
    for (const auto& e : tr.events) {
        if (used == max_events) break;
        if (n == 1) time_high += e.t_s - t_prev;
        t_prev = e.t_s;
        n += e.kind == EventKind::trap ? 1 : -1;
        ++used;
    }
    window_end = t_prev;
    return time_high / t_prev;
}

TraceConfig two_state_config(double photon_rate, double detrap_eff, double spike) {
    TraceConfig c;
    c.channel = presets::reference_channel();
    c.gate_bias_V = -0.43;
    c.initial.capacity = 1;
    c.initial.donor_total = 0;
    c.rates.lambda_gap_um = 1.31;
    c.rates.eps_lambda_um = 0.02;
    c.light.wavelength_um = 1.31;  // w = 1/2: both branches live
    c.rates.photon_rate_per_s = photon_rate;
    c.rates.detrap_efficiency = detrap_eff;
    c.rates.ionize_efficiency = 0.0;
    c.rates.dark_spike_rate_per_s = spike;
    c.duration_s = 40000.0;
    c.sample_dt_s = 1000.0;
    return c;
}

}  // namespace

TEST_CASE("channel current: pinch-off, calibration, monotonicity") {
    ChannelModel m = presets::reference_channel();
    TrapState soaked{0, presets::kDonorTotal, 12, presets::kDonorTotal};

    // Calibrated bias point carries 0.6 nA.
    CHECK(channel_current(m, presets::kFig3GateBiasV, soaked) ==
          doctest::Approx(0.6e-9).epsilon(1e-12));

    // 20 softness below threshold: effectively zero.
    const double v_deep = m.V_th0_V + soaked.n_ionized * m.dVth_ion_V - 20.0 * m.softness_V;
    CHECK(channel_current(m, v_deep, soaked) < 1e-8 * (m.V_sd_V * m.G0_S * m.softness_V));

    // Strictly decreasing in n_trapped, non-decreasing in n_ionized.
    double prev = channel_current(m, presets::kFig3GateBiasV, soaked);
    for (int k = 1; k <= 12; ++k) {
        TrapState s = soaked;
        s.n_trapped = k;
        const double now = channel_current(m, presets::kFig3GateBiasV, s);
        CHECK(now < prev);
        prev = now;
    }
    TrapState less_ion = soaked;
    less_ion.n_ionized = 50;
    CHECK(channel_current(m, presets::kFig3GateBiasV, less_ion) <=
          channel_current(m, presets::kFig3GateBiasV, soaked));
}

TEST_CASE("all rates zero: constant trace, no events") {
    TraceConfig c = presets::fig3();
    c.rates.photon_rate_per_s = 0.0;
    c.rates.dark_spike_rate_per_s = 0.0;
    c.duration_s = 5.0;
    Trace tr = simulate_trace(c, 42);
    CHECK(tr.events.empty());
    CHECK(tr.samples.size() == 51);
    for (const auto& s : tr.samples) CHECK(s.current_A == tr.samples.front().current_A);
}

TEST_CASE("determinism: same seed, same bytes; different seed differs") {
    TraceConfig c = presets::fig3();
    c.duration_s = 30.0;
    const std::string a = trace_csv_string(simulate_trace(c, 7));
    const std::string b = trace_csv_string(simulate_trace(c, 7));
    const std::string other = trace_csv_string(simulate_trace(c, 8));
    CHECK(a == b);
    CHECK(a != other);
}

TEST_CASE("fig3 preset: staircase to pinch-off") {
    TraceConfig c = presets::fig3();
    Trace tr = simulate_trace(c, 3);
    const double start = tr.samples.front().current_A;
    CHECK(start == doctest::Approx(0.6e-9).epsilon(1e-9));
    double lowest = start;
    for (const auto& s : tr.samples) lowest = std::min(lowest, s.current_A);
    CHECK(lowest < 0.01 * start);

    std::size_t traps = 0;
    int n = c.initial.n_trapped;
    for (const auto& e : tr.events) {
        if (e.kind == EventKind::trap) {
            ++traps;
            ++n;
        } else if (e.kind == EventKind::detrap) {
            --n;
        }
        CHECK(n >= 0);
        CHECK(n <= c.initial.capacity);
    }
    CHECK(traps >= 3);
}

TEST_CASE("no optical events while the shutter is closed") {
    TraceConfig c = presets::fig5();
    c.duration_s = 220.0;
    Trace tr = simulate_trace(c, 11);
    for (const auto& e : tr.events) CHECK(c.shutter.is_open(e.t_s));
    // And with the shutter never opening, nothing at all happens.
    TraceConfig dark = c;
    dark.shutter.t_start_s = 1e9;
    Trace silent = simulate_trace(dark, 11);
    CHECK(silent.events.empty());
    std::set<double> levels;
    for (const auto& s : silent.samples) levels.insert(s.current_A);
    CHECK(levels.size() == 1);
}

TEST_CASE("balanced switching: two levels, transitions only while open") {
    TraceConfig c = presets::fig5();
    Trace tr = balanced_switching(c, c.shutter, c.duration_s, 5);
    std::set<double> levels;
    for (const auto& s : tr.samples) levels.insert(s.current_A);
    CHECK(levels.size() == 2);
    CHECK(!tr.events.empty());
    for (const auto& e : tr.events) CHECK(c.shutter.is_open(e.t_s));
}

TEST_CASE("balanced switching validates its preconditions") {
    TraceConfig c = presets::fig5();
    c.initial.capacity = 2;
    CHECK_THROWS_AS(balanced_switching(c, c.shutter, 100.0, 1), ConfigError);
    c = presets::fig5();
    c.rates.detrap_efficiency = 0.2;  // 5x imbalance
    CHECK_THROWS_AS(balanced_switching(c, c.shutter, 100.0, 1), ConfigError);
}

TEST_CASE("sweep spanning requirement") {
    TraceConfig c = presets::fig4();
    CHECK_THROWS_AS(spectral_sweep(c, 1.0, 1.2, 80.0, 1), ConfigError);  // gap at 1.31
}

TEST_CASE("sweep monotonicity on either side of the gap") {
    // Entirely below the gap: trapping only, every trace non-increasing.
    TraceConfig below = presets::fig4();
    below.light.sweeping = true;
    below.light.sweep_from_um = 1.0;
    below.light.sweep_to_um = 1.25;
    below.light.sweep_duration_s = 30.0;
    below.duration_s = 30.0;
    for (std::uint64_t seed = 1; seed <= 9; ++seed) {
        Trace tr = simulate_trace(below, seed);
        for (std::size_t i = 1; i < tr.samples.size(); ++i)
            CHECK(tr.samples[i].current_A <= tr.samples[i - 1].current_A + 1e-20);
    }
    // Entirely above: photo-neutralization and donor ionization only.
    TraceConfig above = below;
    above.light.sweep_from_um = 1.37;
    above.light.sweep_to_um = 1.8;
    above.initial.n_trapped = 100;
    for (std::uint64_t seed = 1; seed <= 9; ++seed) {
        Trace tr = simulate_trace(above, seed);
        for (std::size_t i = 1; i < tr.samples.size(); ++i)
            CHECK(tr.samples[i].current_A >= tr.samples[i - 1].current_A - 1e-20);
    }
}

TEST_CASE("trap-event counts are Poisson: chi-square over 200 seeds") {
    // Constant open-shutter trapping at 1/s for 10 s, capacity high enough
    // that the state never saturates.
    TraceConfig c = presets::fig3();
    c.rates.dark_spike_rate_per_s = 0.0;
    c.rates.detrap_efficiency = 0.0;
    c.light.wavelength_um = 1.2;  // deep below the gap: w = 1
    c.initial.capacity = 1000;
    c.duration_s = 10.0;
    c.sample_dt_s = 10.0;
    const double expect_rate = 10.0;  // rate * T

    std::vector<int> counts;
    for (std::uint64_t seed = 1; seed <= 200; ++seed)
        counts.push_back(static_cast<int>(simulate_trace(c, seed).events.size()));

    // Bins {<=5, 6, ..., 14, >=15}; every expected count is above 5.
    std::vector<double> p(11, 0.0);
    double pk = std::exp(-expect_rate);  // P(0)
    double cum = pk;
    for (int k = 1; k <= 14; ++k) {
        pk *= expect_rate / k;
        if (k <= 5) cum += pk;
        else p[k - 5] = pk;
    }
    p[0] = cum;
    double tail = 1.0;
    for (int i = 0; i < 10; ++i) tail -= p[i];
    p[10] = tail;

    std::vector<double> observed(11, 0.0);
    for (int v : counts) observed[std::clamp(v - 5, 0, 10)] += 1.0;

    double chi2 = 0;
    for (int i = 0; i < 11; ++i) {
        const double expected = 200.0 * p[i];
        CHECK(expected > 5.0);
        chi2 += (observed[i] - expected) * (observed[i] - expected) / expected;
    }
    CHECK(chi2 < 23.209);  // 99th percentile of chi-square with 10 dof
}

TEST_CASE("long-run occupancy matches the master equation (3 sigma, 1e4 events)") {
    struct Config {
        double photon, detrap_eff, spike;
    };
    // Symmetric, moderately asymmetric, and strongly asymmetric via spikes.
    for (const Config& k : {Config{2.0, 1.0, 0.0}, Config{3.0, 0.4, 0.0}, Config{1.2, 2.0, 0.6}}) {
        TraceConfig c = two_state_config(k.photon, k.detrap_eff, k.spike);
        Trace tr = simulate_trace(c, 12345);
        REQUIRE(tr.events.size() >= 10000);

        auto q = trap_chain_rates(c.rates, c.light.wavelength_um, c.initial, true);
        auto pi = stationary_distribution(q);
        double t_end = 0;
        const double frac = occupancy_fraction(tr, 0, 10000, t_end);
        const double sigma = std::sqrt(pi[1] * (1.0 - pi[1]) / 10000.0);
        CHECK(std::fabs(frac - pi[1]) < 3.0 * sigma);
    }
}

TEST_CASE("three-state ladder occupancy matches the master equation") {
    TraceConfig c = two_state_config(2.0, 0.5, 0.0);
    c.initial.capacity = 2;
    c.duration_s = 60000.0;
    Trace tr = simulate_trace(c, 777);
    REQUIRE(tr.events.size() >= 10000);

    auto q = trap_chain_rates(c.rates, c.light.wavelength_um, c.initial, true);
    auto pi = stationary_distribution(q);

    std::vector<double> time_in(3, 0.0);
    double t_prev = 0;
    int n = 0;
    std::size_t used = 0;
    for (const auto& e : tr.events) {
        if (used == 10000) break;
        time_in[n] += e.t_s - t_prev;
        t_prev = e.t_s;
        n += e.kind == EventKind::trap ? 1 : -1;
        ++used;
    }
    for (int s = 0; s < 3; ++s) {
        const double frac = time_in[s] / t_prev;
        const double sigma = std::sqrt(pi[s] * (1.0 - pi[s]) / 10000.0);
        CHECK(std::fabs(frac - pi[s]) < 3.0 * sigma);
    }
}

TEST_CASE("trap chain rate matrix mirrors the rate model") {
    TraceConfig c = presets::fig3();
    auto q = trap_chain_rates(c.rates, 1.2, TrapState{0, 0, 2, 1}, true);
    REQUIRE(q.size() == 6);  // (capacity+1) x (donor_total+1)
    TrapState s{1, 0, 2, 1};
    CHECK(q[2][4] == c.rates.trap_rate(1.2, s, true));     // (1,0) -> (2,0)
    CHECK(q[2][0] == c.rates.detrap_rate(1.2, s, true));   // (1,0) -> (0,0)
    CHECK(q[2][3] == c.rates.ionize_rate(1.2, s, true));   // (1,0) -> (1,1)
}

TEST_CASE("config validation") {
    TraceConfig c = presets::fig3();
    c.duration_s = -1;
    CHECK_THROWS_AS(simulate_trace(c, 1), ConfigError);
    c = presets::fig3();
    c.shutter.open_duration_s = 60.0;
    c.shutter.period_s = 50.0;
    CHECK_THROWS_AS(simulate_trace(c, 1), ConfigError);
    c = presets::fig3();
    c.initial.n_trapped = 99;
    CHECK_THROWS_AS(simulate_trace(c, 1), ConfigError);
}

TEST_CASE("rate model crossover is exclusive outside the smoothing band") {
    RateModel r;
    r.lambda_gap_um = 1.31;
    r.eps_lambda_um = 0.02;
    r.photon_rate_per_s = 1.0;
    r.detrap_efficiency = 1.0;
    TrapState s{1, 0, 2, 0};
    CHECK(r.trap_weight(1.28) == 1.0);
    CHECK(r.trap_weight(1.34) == 0.0);
    CHECK(r.trap_weight(1.31) == 0.5);
    // Product of branches vanishes outside +-eps.
    CHECK(r.trap_rate(1.28, s, true) * r.detrap_rate(1.28, s, true) == 0.0);
    CHECK(r.trap_rate(1.34, s, true) * r.detrap_rate(1.34, s, true) == 0.0);
    CHECK(r.trap_rate(1.315, s, true) * r.detrap_rate(1.315, s, true) > 0.0);
}
