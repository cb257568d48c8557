#ifndef SPT_GRID_HPP
#define SPT_GRID_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "spt/stack.hpp"

namespace spt {

// Uniform 1D discretization of a DeviceStack, surface node first.
// Nodes own the layer covering [layer start, layer end); the final node
// belongs to the last layer. Per-node fields are piecewise constant.
struct Grid {
    double dz = 0;                  // nm
    std::vector<double> z;          // nm, node positions from the surface
    std::vector<double> m_e;        // m0
    std::vector<double> m_hh;       // m0
    std::vector<double> eps_r;
    std::vector<double> ec_ref;     // eV, absolute conduction edge (no field)
    std::vector<double> e_g;        // eV
    std::vector<double> g_e;
    std::vector<double> donor_cm3;  // doping * ionized_fraction
    std::vector<std::size_t> layer_of_node;
    std::vector<std::size_t> layer_start_node;  // first node of each layer
    std::vector<std::string> warnings;          // thickness snap notes

    std::size_t nodes() const { return z.size(); }
    // Nodes owned by layer i: [first_node(i), end_node(i)).
    std::size_t first_node(std::size_t layer) const { return layer_start_node[layer]; }
    std::size_t end_node(std::size_t layer) const;
};

// dz must divide every layer thickness (within 1e-6 nm) or the layer is
// snapped to the nearest node count with a warning. Requires
// dz <= thinnest layer / 4, else throws GridTooCoarseError.
Grid discretize(const DeviceStack& stack, double dz_nm,
                const MaterialTable& table = MaterialTable::builtin());

}  // namespace spt

#endif
