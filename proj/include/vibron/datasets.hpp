// datasets.hpp — bundled molecule files so the tool runs offline.
#pragma once

#include "vibron/molecule.hpp"

#include <string>
#include <vector>

namespace vibron::datasets {

struct Entry {
    std::string name;
    std::string description;
    std::string source;   // literature origin of the numbers
    std::string json;     // molecule file content
};

const std::vector<Entry>& all();
bool has(const std::string& name);
const Entry& get(const std::string& name);

// Parsed spec of a bundled dataset (runs through the regular file parser).
MoleculeSpec load(const std::string& name);

} // namespace vibron::datasets
