#ifndef SPT_STACK_HPP
#define SPT_STACK_HPP

#include <optional>
#include <string>
#include <vector>

#include "spt/materials.hpp"

namespace spt {

struct Layer {
    std::string material;
    double thickness_nm = 0;       // > 0
    double donor_doping_cm3 = 0;   // >= 0
    double ionized_fraction = 0;   // in [0, 1]

    bool operator==(const Layer&) const = default;
};

// Ordered surface-first (gated cap first, substrate buffer last).
struct DeviceStack {
    std::vector<Layer> layers;
    std::optional<double> surface_barrier_eV;  // Fermi-level pinning depth; unset -> 0.7 * E_g(cap)
    double gate_bias_V = 0.0;
    double temperature_K = 4.2;

    double total_thickness_nm() const;
    bool operator==(const DeviceStack&) const = default;
};

// The grown wafer of the reference device, surface-first. The doped layer
// carries `ionized_fraction` (1 = after the deep 1.77 um soak, 0 = as grown).
DeviceStack reference_stack(double ionized_fraction = 1.0);

// Index of the 4.5 nm absorption well in reference_stack().
inline constexpr std::size_t kAbsorptionLayer = 2;
// Index of the 10 nm channel well.
inline constexpr std::size_t kChannelLayer = 5;

// Device-description text format (see README). Throws ParseError with the
// offending line and field; materials are validated against `table`.
DeviceStack parse_stack(const std::string& text,
                        const MaterialTable& table = MaterialTable::builtin());
std::string serialize_stack(const DeviceStack& stack);
DeviceStack load_stack_file(const std::string& path,
                            const MaterialTable& table = MaterialTable::builtin());

// Pinning default: 0.7 * E_g of the cap material unless the stack sets one.
double resolved_surface_barrier(const DeviceStack& stack, const MaterialTable& table);

void validate_stack(const DeviceStack& stack, const MaterialTable& table);

}  // namespace spt

#endif
