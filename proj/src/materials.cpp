#include "spt/materials.hpp"

#include <fstream>
#include <sstream>

#include "spt/errors.hpp"

namespace spt {

BandOffsets band_offsets(const MaterialParams& a, const MaterialParams& b) {
    BandOffsets off;
    off.dEc = a.E_c_ref - b.E_c_ref;
    off.dEv = off.dEc - (a.E_g - b.E_g);
    return off;
}

namespace {

void validate(const MaterialParams& p) {
    if (p.name.empty()) throw ConfigError("material record without a name");
    if (!(p.E_g > 0)) throw ConfigError("material '" + p.name + "': E_g must be > 0");
    if (!(p.m_e > 0)) throw ConfigError("material '" + p.name + "': m_e must be > 0");
    if (!(p.m_hh > 0)) throw ConfigError("material '" + p.name + "': m_hh must be > 0");
    if (!(p.eps_r >= 1)) throw ConfigError("material '" + p.name + "': eps_r must be >= 1");
}

// Values pinned from low-temperature III-V compilations (Vurgaftman et al.,
// J. Appl. Phys. 89, 5815 (2001), 0 K recommendations, linearly interpolated
// to the InP-lattice-matched compositions), except the two device-fixed
// g-factors. Per-value notes live in data/materials_4p2K.dat, which mirrors
// this table exactly.
MaterialTable make_builtin() {
    MaterialTable t;
    t.set_version("1");
    t.add({"In0.53Ga0.47As", 0.816, 0.041, 0.341, 13.9, -4.5, 0.000});
    t.add({"In0.52Al0.48As", 1.530, 0.075, 0.388, 12.4, +0.5, 0.514});
    t.add({"InP",            1.424, 0.0795, 0.532, 12.5, +1.2, 0.262});
    return t;
}

}  // namespace

const MaterialTable& MaterialTable::builtin() {
    static const MaterialTable table = [] {
        MaterialTable t = make_builtin();
        return t;
    }();
    return table;
}

void MaterialTable::add(MaterialParams p) {
    validate(p);
    for (const auto& r : records_)
        if (r.name == p.name) throw ConfigError("duplicate material '" + p.name + "'");
    records_.push_back(std::move(p));
}

bool MaterialTable::contains(const std::string& name) const {
    for (const auto& r : records_)
        if (r.name == name) return true;
    return false;
}

const MaterialParams& MaterialTable::lookup(const std::string& name) const {
    for (const auto& r : records_)
        if (r.name == name) return r;
    throw UnknownMaterialError(name);
}

MaterialTable MaterialTable::parse(const std::string& text) {
    MaterialTable t;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    MaterialParams cur{};
    bool open = false;
    int fields_seen = 0;

    auto flush = [&](int at_line) {
        if (!open) return;
        if (fields_seen != 6)
            throw ParseError(at_line, "material",
                             "material '" + cur.name + "' is missing fields (need E_g_eV, m_e, m_hh, eps_r, g_e, E_c_ref_eV)");
        t.add(cur);
        open = false;
        fields_seen = 0;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;

        if (key == "version") {
            ls >> t.version_;
        } else if (key == "material") {
            flush(line_no);
            cur = MaterialParams{};
            if (!(ls >> cur.name))
                throw ParseError(line_no, "material", "expected a material name");
            open = true;
        } else {
            if (!open) throw ParseError(line_no, key, "field outside a material block");
            double v;
            if (!(ls >> v)) throw ParseError(line_no, key, "expected a numeric value");
            if (key == "E_g_eV") cur.E_g = v;
            else if (key == "m_e") cur.m_e = v;
            else if (key == "m_hh") cur.m_hh = v;
            else if (key == "eps_r") cur.eps_r = v;
            else if (key == "g_e") cur.g_e = v;
            else if (key == "E_c_ref_eV") cur.E_c_ref = v;
            else throw ParseError(line_no, key, "unknown field");
            ++fields_seen;
        }
    }
    flush(line_no);
    if (t.records_.empty()) throw ParseError(line_no, "material", "table defines no materials");
    for (const char* required : {"In0.53Ga0.47As", "In0.52Al0.48As", "InP"})
        if (!t.contains(required))
            throw ParseError(line_no, "material",
                             std::string("table must define '") + required + "'");
    return t;
}

MaterialTable MaterialTable::load_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open material table '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

}  // namespace spt
