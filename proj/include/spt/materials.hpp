#ifndef SPT_MATERIALS_HPP
#define SPT_MATERIALS_HPP

#include <string>
#include <vector>

namespace spt {

// Per-material band/transport/spin constants at 4.2 K.
// E_c_ref places every conduction-band edge on one absolute scale
// (zero chosen at In0.53Ga0.47As), so offsets follow by subtraction.
struct MaterialParams {
    std::string name;
    double E_g;      // bandgap, eV
    double m_e;      // electron effective mass, m0
    double m_hh;     // heavy-hole mass along growth axis, m0
    double eps_r;    // static relative dielectric constant
    double g_e;      // bulk electron g-factor
    double E_c_ref;  // conduction-band edge on the common scale, eV
};

struct BandOffsets {
    double dEc;  // eV, a minus b
    double dEv;  // eV
};

// dEc = a.E_c_ref - b.E_c_ref; dEv = dEc - (a.E_g - b.E_g).
BandOffsets band_offsets(const MaterialParams& a, const MaterialParams& b);

// Immutable registry. Thread-safe for concurrent reads once constructed.
class MaterialTable {
public:
    // Compiled-in table pinned at 4.2 K (see data/materials_4p2K.dat for
    // the same values with per-value source notes).
    static const MaterialTable& builtin();

    // Load a table from the key-value file format documented in the README.
    static MaterialTable load_file(const std::string& path);
    static MaterialTable parse(const std::string& text);

    const MaterialParams& lookup(const std::string& name) const;
    bool contains(const std::string& name) const;
    const std::vector<MaterialParams>& all() const { return records_; }
    const std::string& version() const { return version_; }

    void add(MaterialParams p);  // validates invariants
    void set_version(std::string v) { version_ = std::move(v); }

private:
    std::vector<MaterialParams> records_;
    std::string version_ = "unversioned";
};

}  // namespace spt

#endif
