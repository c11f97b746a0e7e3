// molecule_io.hpp — molecule file parsing/validation and CSV emission.
#pragma once

#include "vibron/molecule.hpp"
#include "vibron/spectrum.hpp"

#include <iosfwd>
#include <string>

namespace vibron {

// Parses and validates a molecule file (JSON).  Unknown keys are rejected
// with the offending path; structural violations raise ValidationError
// listing every problem.  `origin` names the source in diagnostics.
MoleculeSpec parse_molecule_text(const std::string& text, const std::string& origin);
MoleculeSpec parse_molecule(const std::string& path);

// Canonical file content for a spec (used by `datasets export`).
std::string molecule_to_json(const MoleculeSpec& spec);

// Line list CSV: header `pattern,frequency_cm1,probability`, the pattern
// semicolon-joined, numbers in shortest round-trip form, rows in enumeration
// order.  read_profile_csv inverts write_profile_csv exactly.
void write_profile_csv(std::ostream& os, const SpectralProfile& profile);
SpectralProfile read_profile_csv(std::istream& is, const RealVector& omega_final);

void write_broadened_csv(std::ostream& os, const BroadenedSpectrum& spectrum);
void write_sweep_csv(std::ostream& os, const ErrorSweep& sweep);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

} // namespace vibron
