#include "spt/stack.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "spt/errors.hpp"

namespace spt {

double DeviceStack::total_thickness_nm() const {
    double t = 0;
    for (const auto& l : layers) t += l.thickness_nm;
    return t;
}

DeviceStack reference_stack(double ionized_fraction) {
    DeviceStack s;
    s.layers = {
        {"In0.52Al0.48As", 60.0, 0.0, 0.0},                   // cap
        {"InP", 10.0, 0.0, 0.0},                              // upper cladding
        {"In0.53Ga0.47As", 4.5, 0.0, 0.0},                    // absorption well
        {"InP", 10.0, 0.0, 0.0},                              // lower cladding
        {"In0.52Al0.48As", 20.0, 0.0, 0.0},                   // leakage barrier
        {"In0.53Ga0.47As", 10.0, 0.0, 0.0},                   // channel well
        {"In0.52Al0.48As", 30.0, 0.0, 0.0},                   // spacer
        {"In0.52Al0.48As", 10.0, 5.0e17, ionized_fraction},   // Si doping layer
        {"In0.52Al0.48As", 1000.0, 0.0, 0.0},                 // buffer
        {"InP", 100.0, 0.0, 0.0},                             // substrate-side buffer
    };
    s.gate_bias_V = 0.0;
    s.temperature_K = 4.2;
    return s;
}

double resolved_surface_barrier(const DeviceStack& stack, const MaterialTable& table) {
    if (stack.surface_barrier_eV) return *stack.surface_barrier_eV;
    if (stack.layers.empty()) throw ConfigError("empty stack has no surface barrier");
    return 0.7 * table.lookup(stack.layers.front().material).E_g;
}

void validate_stack(const DeviceStack& stack, const MaterialTable& table) {
    if (stack.layers.empty()) throw ConfigError("EmptyStack: device needs at least one layer");
    if (!(stack.temperature_K > 0)) throw ConfigError("temperature_K must be > 0");
    for (std::size_t i = 0; i < stack.layers.size(); ++i) {
        const Layer& l = stack.layers[i];
        const std::string at = "layer " + std::to_string(i) + " (" + l.material + ")";
        table.lookup(l.material);  // throws UnknownMaterialError
        if (!(l.thickness_nm > 0)) throw ConfigError(at + ": thickness must be > 0");
        if (l.donor_doping_cm3 < 0) throw ConfigError(at + ": doping must be >= 0");
        if (l.ionized_fraction < 0 || l.ionized_fraction > 1)
            throw ConfigError(at + ": ionized_fraction must be in [0, 1]");
    }
}

namespace {

double parse_num(std::istringstream& ls, int line_no, const char* field) {
    std::string tok;
    if (!(ls >> tok)) throw ParseError(line_no, field, "missing value");
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw ParseError(line_no, field, "not a number: '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError(line_no, field, "trailing junk in '" + tok + "'");
    return v;
}

}  // namespace

DeviceStack parse_stack(const std::string& text, const MaterialTable& table) {
    DeviceStack s;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;

        if (key == "layer") {
            Layer l;
            if (!(ls >> l.material)) throw ParseError(line_no, "material", "missing material name");
            if (!table.contains(l.material))
                throw ParseError(line_no, "material", "unknown material '" + l.material + "'");
            l.thickness_nm = parse_num(ls, line_no, "thickness_nm");
            if (!(l.thickness_nm > 0))
                throw ParseError(line_no, "thickness_nm", "thickness must be > 0");
            l.donor_doping_cm3 = parse_num(ls, line_no, "doping_cm3");
            if (l.donor_doping_cm3 < 0)
                throw ParseError(line_no, "doping_cm3", "doping must be >= 0");
            l.ionized_fraction = parse_num(ls, line_no, "ionized_fraction");
            if (l.ionized_fraction < 0 || l.ionized_fraction > 1)
                throw ParseError(line_no, "ionized_fraction", "must be in [0, 1]");
            std::string extra;
            if (ls >> extra)
                throw ParseError(line_no, "layer", "unexpected trailing field '" + extra + "'");
            s.layers.push_back(std::move(l));
        } else if (key == "surface_barrier_eV") {
            s.surface_barrier_eV = parse_num(ls, line_no, "surface_barrier_eV");
        } else if (key == "gate_bias_V") {
            s.gate_bias_V = parse_num(ls, line_no, "gate_bias_V");
        } else if (key == "temperature_K") {
            s.temperature_K = parse_num(ls, line_no, "temperature_K");
            if (!(s.temperature_K > 0))
                throw ParseError(line_no, "temperature_K", "must be > 0");
        } else {
            throw ParseError(line_no, key, "unknown directive");
        }
    }
    if (s.layers.empty()) throw ParseError(line_no, "layer", "EmptyStack: no layers defined");
    return s;
}

std::string serialize_stack(const DeviceStack& stack) {
    std::ostringstream out;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    if (stack.surface_barrier_eV)
        out << "surface_barrier_eV " << num(*stack.surface_barrier_eV) << "\n";
    out << "gate_bias_V " << num(stack.gate_bias_V) << "\n";
    out << "temperature_K " << num(stack.temperature_K) << "\n";
    for (const auto& l : stack.layers)
        out << "layer " << l.material << " " << num(l.thickness_nm) << " "
            << num(l.donor_doping_cm3) << " " << num(l.ionized_fraction) << "\n";
    return out.str();
}

DeviceStack load_stack_file(const std::string& path, const MaterialTable& table) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open device description '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_stack(ss.str(), table);
}

}  // namespace spt
