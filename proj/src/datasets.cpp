#include "vibron/datasets.hpp"

#include "vibron/molecule_io.hpp"

#include <algorithm>

namespace vibron::datasets {

namespace {

const char* kNaphthalene = R"json({
  "name": "naphthalene",
  "modes": 2,
  "omega_initial": [509.0, 938.0],
  "omega_final": [438.0, 912.0],
  "duschinsky": [[0.98, -0.20], [0.20, 0.98]],
  "displacement_d": [0.0, 0.0],
  "length_unit": "bohr",
  "tdm": {
    "x": { "mu0": 1.00, "mu1": [1.00, -1.00] }
  }
})json";

const char* kPhenanthrene = R"json({
  "name": "phenanthrene",
  "modes": 2,
  "omega_initial": [700.0, 800.0],
  "omega_final": [679.0, 796.0],
  "duschinsky": [[0.9055, -0.4240], [0.4240, 0.9055]],
  "displacement_d": [0.1650, 0.0780],
  "length_unit": "bohr",
  "tdm": {
    "x": { "mu0": 1.00, "mu1": [1.50, -0.50] }
  }
})json";

const char* kBenzeneE1g = R"json({
  "name": "benzene_e1g",
  "modes": 3,
  "omega_initial": [712.6271, 869.5370, 869.5370],
  "omega_final": [482.2731, 593.2363, 593.2363],
  "duschinsky": [[1, 0, 0], [0, 0, 1], [0, 1, 0]],
  "displacement_d": [0.0, 0.0, 0.0],
  "length_unit": "bohr",
  "tdm": {
    "x": {
      "mu0": 0.0,
      "mu2": [[0.0, 0.0463, 0.0463],
              [0.0463, 0.0216, 0.0216],
              [0.0463, 0.0216, -0.0216]]
    }
  }
})json";

const char* kBenzeneE2g = R"json({
  "name": "benzene_e2g",
  "modes": 8,
  "omega_initial": [3369.2220, 3369.2220, 1730.1965, 1730.1964,
                    1263.3599, 1263.3599, 646.1398, 646.1398],
  "omega_final": [3389.0368, 3389.0368, 1665.3003, 1665.3003,
                  1236.7103, 1236.7103, 575.1367, 575.1367],
  "duschinsky": [
    [-8.6323e-6,  9.9999e-1,  1.7996e-5, -1.2862e-3,  4.5475e-6, -8.8874e-4, -1.9329e-3, -3.1563e-6],
    [ 9.9999e-1,  4.6727e-6,  1.2715e-3, -8.2931e-6,  8.8318e-4, -1.7281e-6, -2.0265e-5,  1.9217e-3],
    [-1.2114e-3, -2.2308e-5,  9.9881e-1,  1.2296e-5, -4.8525e-2,  2.2123e-5,  1.7170e-5, -2.9745e-3],
    [ 1.0355e-5,  1.2122e-3, -1.0929e-6,  9.9881e-1,  9.1339e-6, -4.8506e-2, -2.9613e-3,  8.6992e-7],
    [-9.4803e-4, -6.0921e-6,  4.8519e-2,  9.1307e-6,  9.9877e-1, -1.3846e-4, -4.0148e-6,  9.2288e-3],
    [-6.0924e-6,  9.6095e-4,  2.2275e-6,  4.8555e-2,  1.4398e-4,  9.9877e-1,  9.2157e-3, -1.5228e-5],
    [-1.9385e-3, -5.1031e-6,  2.4998e-3,  7.1391e-6, -9.3712e-3,  3.3886e-7, -2.4854e-6,  9.9995e-1],
    [-1.1184e-5,  1.9114e-3,  4.0060e-6,  2.5096e-3,  1.7972e-5, -9.3588e-3,  9.9995e-1,  1.0993e-5]
  ],
  "delta": [7.4613e-6, -3.1429e-5, -3.7674e-5, 3.0782e-5,
            2.3498e-5, -3.4351e-5, 2.8415e-5, -6.8897e-6],
  "length_unit": "angstrom",
  "tdm": {
    "x": { "mu0": 0.0, "mu1": [0.3054, 0.0, 0.0, 0.1795, 0.1190, 0.0, 0.0, 0.5710] },
    "y": { "mu0": 0.0, "mu1": [0.0, 0.3054, -0.1795, 0.0, 0.0, -0.1190, -0.5710, 0.0] }
  }
})json";

} // namespace

const std::vector<Entry>& all() {
    static const std::vector<Entry> entries = {
        {"naphthalene",
         "two-mode 1B2u-1A1g model, x-polarized linear TDM expansion",
         "Small, J. Chem. Phys. 54 (1971)", kNaphthalene},
        {"phenanthrene",
         "two-mode 1A1-1A1 model with displacement, x-polarized linear TDM expansion",
         "Small, J. Chem. Phys. 54 (1971)", kPhenanthrene},
        {"benzene_e1g",
         "three e1g modes of the 1B2u-1A1g transition, quadratic TDM expansion",
         "Fischer, Vibronic Coupling (1984)", kBenzeneE1g},
        {"benzene_e2g",
         "eight e2g modes of the 1B2u-1A1g transition, x/y linear TDM expansion",
         "Berger, Fischer, Klessinger, J. Phys. Chem. A 102 (1998)", kBenzeneE2g},
    };
    return entries;
}

bool has(const std::string& name) {
    const auto& entries = all();
    return std::any_of(entries.begin(), entries.end(),
                       [&](const Entry& e) { return e.name == name; });
}

const Entry& get(const std::string& name) {
    for (const Entry& e : all())
        if (e.name == name) return e;
    throw ValidationError("datasets: unknown bundled molecule '" + name + "'");
}

MoleculeSpec load(const std::string& name) {
    return parse_molecule_text(get(name).json, name + " (bundled)");
}

} // namespace vibron::datasets
