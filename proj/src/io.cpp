#include "spt/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "spt/errors.hpp"

namespace spt {

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_human(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path + "'");
    f << text;
    if (!f) throw IoError("write failed for '" + path + "'");
}

void write_profile_csv(const std::string& path, const SolveResult& r) {
    std::ostringstream o;
    o << "z_nm,Ec_eV,Ev_eV,phi_V,n_cm3\n";
    for (std::size_t i = 0; i < r.grid.nodes(); ++i)
        o << format_full(r.grid.z[i]) << "," << format_full(r.profile.Ec_eV[i]) << ","
          << format_full(r.profile.Ev_eV[i]) << "," << format_full(r.profile.phi_V[i]) << ","
          << format_full(r.n_cm3[i]) << "\n";
    write_text_file(path, o.str());
}

std::string trace_csv_string(const Trace& t) {
    std::ostringstream o;
    o << "t_s,I_A,n_trapped,n_ionized,shutter\n";
    for (const auto& s : t.samples)
        o << format_full(s.t_s) << "," << format_full(s.current_A) << "," << s.n_trapped << ","
          << s.n_ionized << "," << (s.shutter_open ? 1 : 0) << "\n";
    return o.str();
}

void write_trace_csv(const std::string& path, const Trace& t) {
    write_text_file(path, trace_csv_string(t));
}

void write_events_csv(const std::string& path, const Trace& t) {
    std::ostringstream o;
    o << "t_s,kind\n";
    for (const auto& e : t.events) o << format_full(e.t_s) << "," << to_string(e.kind) << "\n";
    write_text_file(path, o.str());
}

void write_key_values(const std::string& path, const KeyValues& kv) {
    std::ostringstream o;
    for (const auto& [k, v] : kv) o << k << " " << v << "\n";
    write_text_file(path, o.str());
}

}  // namespace spt
