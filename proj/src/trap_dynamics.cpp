#include "spt/trap_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "spt/errors.hpp"
#include "spt/fermi.hpp"

namespace spt {

double RateModel::trap_weight(double lambda_um) const {
    const double x = (lambda_um - lambda_gap_um) / eps_lambda_um;
    if (x <= -1.0) return 1.0;
    if (x >= 1.0) return 0.0;
    return 0.5 - 0.75 * x + 0.25 * x * x * x;  // C^1 smoothstep, compact support
}

double RateModel::trap_rate(double lambda_um, const TrapState& s, bool shutter_open) const {
    if (!shutter_open || s.n_trapped >= s.capacity) return 0.0;
    return photon_rate_per_s * trap_weight(lambda_um);
}

double RateModel::detrap_rate(double lambda_um, const TrapState& s, bool shutter_open) const {
    if (s.n_trapped <= 0) return 0.0;
    double r = dark_spike_rate_per_s;
    if (shutter_open)
        r += photon_rate_per_s * (1.0 - trap_weight(lambda_um)) * detrap_efficiency;
    return r;
}

double RateModel::ionize_rate(double lambda_um, const TrapState& s, bool shutter_open) const {
    if (!shutter_open || s.donor_total <= 0 || s.n_ionized >= s.donor_total) return 0.0;
    const double neutral_fraction =
        static_cast<double>(s.donor_total - s.n_ionized) / static_cast<double>(s.donor_total);
    return photon_rate_per_s * (1.0 - trap_weight(lambda_um)) * ionize_efficiency *
           neutral_fraction;
}

double channel_current(const ChannelModel& m, double gate_V, const TrapState& s) {
    const double v_th = m.V_th0_V + s.n_trapped * m.dVth_trap_V + s.n_ionized * m.dVth_ion_V;
    const double v_eff = gate_V - v_th;
    return m.V_sd_V * m.G0_S * m.softness_V * softplus(v_eff / m.softness_V);
}

double calibrate_g0(const ChannelModel& m, double gate_V, const TrapState& s, double target_A) {
    ChannelModel unit = m;
    unit.G0_S = 1.0;
    const double base = channel_current(unit, gate_V, s);
    if (!(base > 0)) throw ConfigError("cannot calibrate G0: channel fully pinched at this bias");
    return target_A / base;
}

bool ShutterSchedule::is_open(double t_s) const {
    if (t_s < t_start_s) return false;
    const double phase = std::fmod(t_s - t_start_s, period_s);
    return phase < open_duration_s;
}

std::optional<double> ShutterSchedule::next_toggle_after(double t_s) const {
    if (open_duration_s >= period_s) {
        // Never closes once started.
        return t_s < t_start_s ? std::optional<double>(t_start_s) : std::nullopt;
    }
    if (t_s < t_start_s) return t_start_s;
    const double rel = t_s - t_start_s;
    const double cycle = std::floor(rel / period_s);
    const double phase = rel - cycle * period_s;
    const double base = t_start_s + cycle * period_s;
    if (phase < open_duration_s) return base + open_duration_s;
    return base + period_s;
}

ShutterSchedule ShutterSchedule::always_open() {
    ShutterSchedule s;
    s.period_s = 1.0;
    s.open_duration_s = 1.0;
    s.t_start_s = 0.0;
    return s;
}

double LightDrive::wavelength_at(double t_s) const {
    if (!sweeping) return wavelength_um;
    if (sweep_duration_s <= 0) return sweep_to_um;
    const double f = std::clamp(t_s / sweep_duration_s, 0.0, 1.0);
    return sweep_from_um + (sweep_to_um - sweep_from_um) * f;
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::trap: return "trap";
        case EventKind::detrap: return "detrap";
        case EventKind::ionize: return "ionize";
    }
    return "?";
}

namespace {

void validate(const TraceConfig& cfg) {
    if (!(cfg.duration_s > 0)) throw ConfigError("duration must be > 0");
    if (!(cfg.sample_dt_s > 0)) throw ConfigError("sample_dt must be > 0");
    if (!(cfg.shutter.open_duration_s > 0) ||
        cfg.shutter.open_duration_s > cfg.shutter.period_s)
        throw ConfigError("shutter needs 0 < open_duration <= period");
    if (cfg.shutter.t_start_s < 0) throw ConfigError("shutter t_start must be >= 0");
    if (cfg.initial.capacity < 0 || cfg.initial.donor_total < 0)
        throw ConfigError("state bounds must be >= 0");
    if (cfg.initial.n_trapped < 0 || cfg.initial.n_trapped > cfg.initial.capacity)
        throw ConfigError("initial n_trapped outside [0, capacity]");
    if (cfg.initial.n_ionized < 0 || cfg.initial.n_ionized > cfg.initial.donor_total)
        throw ConfigError("initial n_ionized outside [0, donor_total]");
    if (!(cfg.rates.eps_lambda_um > 0)) throw ConfigError("eps_lambda must be > 0");
    if (cfg.rates.photon_rate_per_s < 0 || cfg.rates.dark_spike_rate_per_s < 0 ||
        cfg.rates.detrap_efficiency < 0 || cfg.rates.ionize_efficiency < 0)
        throw ConfigError("rates must be >= 0");
    if (!(cfg.channel.G0_S > 0)) throw ConfigError("G0 must be > 0");
    if (!(cfg.channel.dVth_trap_V > 0) || !(cfg.channel.dVth_ion_V < 0))
        throw ConfigError("need dVth_trap > 0 > dVth_ion");
}

std::string echo_config(const TraceConfig& c, std::uint64_t seed) {
    std::ostringstream o;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    o << "seed " << seed << "\n"
      << "duration_s " << num(c.duration_s) << "\n"
      << "sample_dt_s " << num(c.sample_dt_s) << "\n"
      << "gate_bias_V " << num(c.gate_bias_V) << "\n"
      << "lambda_um " << num(c.light.wavelength_um) << "\n";
    if (c.light.sweeping)
        o << "sweep_from_um " << num(c.light.sweep_from_um) << "\n"
          << "sweep_to_um " << num(c.light.sweep_to_um) << "\n"
          << "sweep_duration_s " << num(c.light.sweep_duration_s) << "\n";
    o << "lambda_gap_um " << num(c.rates.lambda_gap_um) << "\n"
      << "eps_lambda_um " << num(c.rates.eps_lambda_um) << "\n"
      << "photon_rate_per_s " << num(c.rates.photon_rate_per_s) << "\n"
      << "detrap_efficiency " << num(c.rates.detrap_efficiency) << "\n"
      << "ionize_efficiency " << num(c.rates.ionize_efficiency) << "\n"
      << "dark_spike_rate_per_s " << num(c.rates.dark_spike_rate_per_s) << "\n"
      << "shutter_period_s " << num(c.shutter.period_s) << "\n"
      << "shutter_open_s " << num(c.shutter.open_duration_s) << "\n"
      << "shutter_t_start_s " << num(c.shutter.t_start_s) << "\n"
      << "G0_S " << num(c.channel.G0_S) << "\n"
      << "V_th0_V " << num(c.channel.V_th0_V) << "\n"
      << "dVth_trap_V " << num(c.channel.dVth_trap_V) << "\n"
      << "dVth_ion_V " << num(c.channel.dVth_ion_V) << "\n"
      << "V_sd_V " << num(c.channel.V_sd_V) << "\n"
      << "softness_V " << num(c.channel.softness_V) << "\n"
      << "capacity " << c.initial.capacity << "\n"
      << "donor_total " << c.initial.donor_total << "\n"
      << "n_trapped_0 " << c.initial.n_trapped << "\n"
      << "n_ionized_0 " << c.initial.n_ionized << "\n";
    return o.str();
}

// Uniform in [0, 1); mt19937_64 output is fully pinned by the standard, so
// traces are byte-stable across platforms.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Trace simulate_trace(const TraceConfig& cfg, std::uint64_t seed) {
    validate(cfg);
    Trace trace;
    trace.seed = seed;
    trace.config_echo = echo_config(cfg, seed);

    std::mt19937_64 rng(seed);
    TrapState state = cfg.initial;
    double t = 0.0;
    std::size_t next_sample = 0;
    const auto n_samples = static_cast<std::size_t>(std::floor(cfg.duration_s / cfg.sample_dt_s)) + 1;

    auto emit_through = [&](double t_limit) {
        while (next_sample < n_samples) {
            const double ts = static_cast<double>(next_sample) * cfg.sample_dt_s;
            if (ts > t_limit) break;
            trace.samples.push_back({ts, channel_current(cfg.channel, cfg.gate_bias_V, state),
                                     state.n_trapped, state.n_ionized,
                                     cfg.shutter.is_open(ts)});
            ++next_sample;
        }
    };

    while (t < cfg.duration_s) {
        const bool open = cfg.shutter.is_open(t);
        const double lambda = cfg.light.wavelength_at(t);
        const double r_trap = cfg.rates.trap_rate(lambda, state, open);
        const double r_detrap = cfg.rates.detrap_rate(lambda, state, open);
        const double r_ionize = cfg.rates.ionize_rate(lambda, state, open);
        const double total = r_trap + r_detrap + r_ionize;

        // Rates stay frozen until an event or the next refresh boundary:
        // shutter toggles always; sample ticks too while the wavelength moves.
        double boundary = cfg.duration_s;
        if (auto tog = cfg.shutter.next_toggle_after(t); tog && *tog < boundary)
            boundary = *tog;
        if (cfg.light.sweeping) {
            double k = std::floor(t / cfg.sample_dt_s) + 1.0;
            double next_tick = k * cfg.sample_dt_s;
            while (next_tick <= t) next_tick = ++k * cfg.sample_dt_s;  // fp guard
            boundary = std::min(boundary, next_tick);
        }

        if (total <= 0.0) {
            emit_through(std::min(boundary, cfg.duration_s));
            t = boundary;
            continue;
        }

        const double wait = -std::log1p(-uniform01(rng)) / total;
        const double t_event = t + wait;
        if (t_event >= boundary) {
            // Truncate the draw at the boundary; exponential waits make the
            // re-draw statistically exact.
            emit_through(std::min(boundary, cfg.duration_s));
            t = boundary;
            continue;
        }

        // Samples up to the event instant carry the pre-event state.
        emit_through(t_event);
        const double pick = uniform01(rng) * total;
        EventKind kind;
        if (pick < r_trap) {
            kind = EventKind::trap;
            ++state.n_trapped;
        } else if (pick < r_trap + r_detrap) {
            kind = EventKind::detrap;
            --state.n_trapped;
        } else {
            kind = EventKind::ionize;
            ++state.n_ionized;
        }
        if (state.n_trapped < 0 || state.n_trapped > state.capacity ||
            state.n_ionized < 0 || state.n_ionized > state.donor_total)
            throw Error("state bounds violated during simulation");
        trace.events.push_back({t_event, kind});
        t = t_event;
    }
    emit_through(cfg.duration_s);
    return trace;
}

TraceConfig configure_sweep(TraceConfig cfg, double from_um, double to_um, double duration_s) {
    cfg.light.sweeping = true;
    cfg.light.sweep_from_um = from_um;
    cfg.light.sweep_to_um = to_um;
    cfg.light.sweep_duration_s = duration_s;
    cfg.duration_s = duration_s;
    cfg.shutter = ShutterSchedule::always_open();
    if (!(std::min(from_um, to_um) <= cfg.rates.lambda_gap_um &&
          cfg.rates.lambda_gap_um <= std::max(from_um, to_um)))
        throw ConfigError("sweep range must span lambda_gap");
    return cfg;
}

Trace spectral_sweep(TraceConfig cfg, double from_um, double to_um, double duration_s,
                     std::uint64_t seed) {
    return simulate_trace(configure_sweep(std::move(cfg), from_um, to_um, duration_s), seed);
}

TraceConfig configure_switching(TraceConfig cfg, const ShutterSchedule& schedule,
                                double duration_s) {
    cfg.shutter = schedule;
    cfg.duration_s = duration_s;
    if (cfg.initial.capacity != 1)
        throw ConfigError("balanced switching expects a single-electron trap (capacity 1)");
    TrapState empty = cfg.initial;
    empty.n_trapped = 0;
    TrapState full = cfg.initial;
    full.n_trapped = 1;
    const double lam = cfg.light.wavelength_um;
    const double up = cfg.rates.trap_rate(lam, empty, true);
    const double down = cfg.rates.detrap_rate(lam, full, true);
    if (!(up > 0) || !(down > 0) || up / down > 2.0 || down / up > 2.0)
        throw ConfigError("trap and neutralization rates must be within 2x (balanced)");
    return cfg;
}

Trace balanced_switching(TraceConfig cfg, const ShutterSchedule& schedule, double duration_s,
                         std::uint64_t seed) {
    return simulate_trace(configure_switching(std::move(cfg), schedule, duration_s), seed);
}

std::vector<std::vector<double>> trap_chain_rates(const RateModel& rates, double lambda_um,
                                                  const TrapState& shape, bool shutter_open) {
    const int nt = shape.capacity + 1;
    const int ni = shape.donor_total + 1;
    const int n = nt * ni;
    auto index = [&](int trapped, int ion) { return trapped * ni + ion; };
    std::vector<std::vector<double>> q(n, std::vector<double>(n, 0.0));
    for (int a = 0; a < nt; ++a) {
        for (int b = 0; b < ni; ++b) {
            TrapState s = shape;
            s.n_trapped = a;
            s.n_ionized = b;
            if (a + 1 < nt)
                q[index(a, b)][index(a + 1, b)] = rates.trap_rate(lambda_um, s, shutter_open);
            if (a > 0)
                q[index(a, b)][index(a - 1, b)] = rates.detrap_rate(lambda_um, s, shutter_open);
            if (b + 1 < ni)
                q[index(a, b)][index(a, b + 1)] = rates.ionize_rate(lambda_um, s, shutter_open);
        }
    }
    return q;
}

std::vector<double> ensemble_median_current(const TraceConfig& cfg, std::uint64_t seed0,
                                            int n_seeds) {
    if (n_seeds < 1) throw ConfigError("ensemble needs at least one seed");
    std::vector<std::vector<double>> per_seed;
    per_seed.reserve(n_seeds);
    for (int k = 0; k < n_seeds; ++k) {
        Trace tr = simulate_trace(cfg, seed0 + static_cast<std::uint64_t>(k));
        std::vector<double> cur(tr.samples.size());
        for (std::size_t i = 0; i < tr.samples.size(); ++i) cur[i] = tr.samples[i].current_A;
        per_seed.push_back(std::move(cur));
    }
    const std::size_t n = per_seed.front().size();
    std::vector<double> median(n);
    std::vector<double> col(per_seed.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = 0; s < per_seed.size(); ++s) col[s] = per_seed[s][i];
        std::sort(col.begin(), col.end());
        const std::size_t m = col.size();
        median[i] = m % 2 ? col[m / 2] : 0.5 * (col[m / 2 - 1] + col[m / 2]);
    }
    return median;
}

}  // namespace spt
