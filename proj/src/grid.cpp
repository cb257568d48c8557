#include "spt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "spt/errors.hpp"

namespace spt {

std::size_t Grid::end_node(std::size_t layer) const {
    return layer + 1 < layer_start_node.size() ? layer_start_node[layer + 1] : z.size();
}

Grid discretize(const DeviceStack& stack, double dz_nm, const MaterialTable& table) {
    validate_stack(stack, table);
    if (!(dz_nm > 0)) throw ConfigError("dz must be > 0");

    double thinnest = stack.layers.front().thickness_nm;
    for (const auto& l : stack.layers) thinnest = std::min(thinnest, l.thickness_nm);
    if (dz_nm > thinnest / 4.0 + 1e-12)
        throw GridTooCoarseError("GridTooCoarse: dz = " + std::to_string(dz_nm) +
                                 " nm exceeds thinnest layer / 4 = " +
                                 std::to_string(thinnest / 4.0) + " nm");

    Grid g;
    g.dz = dz_nm;
    std::size_t node = 0;
    for (std::size_t li = 0; li < stack.layers.size(); ++li) {
        const Layer& l = stack.layers[li];
        const MaterialParams& m = table.lookup(l.material);
        const auto n_cells = static_cast<std::size_t>(std::llround(l.thickness_nm / dz_nm));
        const double snapped = static_cast<double>(n_cells) * dz_nm;
        if (std::fabs(snapped - l.thickness_nm) > 1e-6) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "layer %zu (%s): thickness %.9g nm snapped to %.9g nm (dz = %.9g)",
                          li, l.material.c_str(), l.thickness_nm, snapped, dz_nm);
            g.warnings.emplace_back(buf);
        }
        g.layer_start_node.push_back(node);
        const bool last = li + 1 == stack.layers.size();
        const std::size_t count = n_cells + (last ? 1 : 0);  // final node closes the grid
        for (std::size_t k = 0; k < count; ++k, ++node) {
            g.z.push_back(static_cast<double>(node) * dz_nm);
            g.m_e.push_back(m.m_e);
            g.m_hh.push_back(m.m_hh);
            g.eps_r.push_back(m.eps_r);
            g.ec_ref.push_back(m.E_c_ref);
            g.e_g.push_back(m.E_g);
            g.g_e.push_back(m.g_e);
            g.donor_cm3.push_back(l.donor_doping_cm3 * l.ionized_fraction);
            g.layer_of_node.push_back(li);
        }
    }
    return g;
}

}  // namespace spt
