#ifndef SPT_IO_HPP
#define SPT_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "spt/self_consistent.hpp"
#include "spt/trap_dynamics.hpp"

namespace spt {

// Files carry full round-trip precision ("%.17g"); console summaries round.
std::string format_full(double v);
std::string format_human(double v);

// z_nm, Ec_eV, Ev_eV, phi_V, n_cm3
void write_profile_csv(const std::string& path, const SolveResult& r);

// t_s, I_A, n_trapped, n_ionized, shutter
void write_trace_csv(const std::string& path, const Trace& t);
std::string trace_csv_string(const Trace& t);

// t_s, kind
void write_events_csv(const std::string& path, const Trace& t);

// Ordered key-value lines ("key value\n").
using KeyValues = std::vector<std::pair<std::string, std::string>>;
void write_key_values(const std::string& path, const KeyValues& kv);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace spt

#endif
