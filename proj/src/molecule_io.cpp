#include "vibron/molecule_io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace vibron {

using json = nlohmann::json;

namespace {

// byte offset -> (line, column), both 1-based
std::pair<int, int> locate(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

RealVector parse_vector(const json& node, const std::string& path) {
    if (!node.is_array())
        throw ValidationError(path + ": expected an array of numbers");
    RealVector v(static_cast<Index>(node.size()));
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_number())
            throw ValidationError(path + "[" + std::to_string(i) + "]: expected a number");
        v(static_cast<Index>(i)) = node[i].get<double>();
    }
    return v;
}

RealMatrix parse_matrix(const json& node, const std::string& path) {
    if (!node.is_array() || node.empty())
        throw ValidationError(path + ": expected an array of rows");
    const std::size_t cols = node[0].is_array() ? node[0].size() : 0;
    RealMatrix m(static_cast<Index>(node.size()), static_cast<Index>(cols));
    for (std::size_t r = 0; r < node.size(); ++r) {
        if (!node[r].is_array() || node[r].size() != cols)
            throw ValidationError(path + ": rows must be arrays of equal length");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!node[r][c].is_number())
                throw ValidationError(path + "[" + std::to_string(r) + "][" +
                                      std::to_string(c) + "]: expected a number");
            m(static_cast<Index>(r), static_cast<Index>(c)) = node[r][c].get<double>();
        }
    }
    return m;
}

void reject_unknown_keys(const json& node, const std::string& path,
                         std::initializer_list<const char*> known) {
    for (const auto& [key, _] : node.items()) {
        bool ok = false;
        for (const char* k : known) ok |= (key == k);
        if (!ok)
            throw ValidationError(path + ": unknown key '" + key + "'");
    }
}

AxisTdm parse_axis_tdm(const json& node, const std::string& path) {
    if (!node.is_object())
        throw ValidationError(path + ": expected an object");
    reject_unknown_keys(node, path, {"mu0", "mu1", "mu2"});
    AxisTdm t;
    if (node.contains("mu0")) {
        if (!node["mu0"].is_number())
            throw ValidationError(path + ".mu0: expected a number");
        t.mu0 = node["mu0"].get<double>();
    }
    if (node.contains("mu1")) t.mu1 = parse_vector(node["mu1"], path + ".mu1");
    if (node.contains("mu2")) t.mu2 = parse_matrix(node["mu2"], path + ".mu2");
    return t;
}

} // namespace

MoleculeSpec parse_molecule_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        auto [line, col] = locate(text, err.byte > 0 ? err.byte - 1 : 0);
        std::ostringstream os;
        os << origin << ":" << line << ":" << col << ": " << err.what();
        throw ParseError(os.str(), line, col);
    }
    if (!doc.is_object())
        throw ValidationError(origin + ": top level must be an object");

    reject_unknown_keys(doc, origin,
                        {"name", "modes", "omega_initial", "omega_final", "duschinsky",
                         "displacement_d", "delta", "length_unit", "tdm"});

    MoleculeSpec spec;
    if (doc.contains("name")) {
        if (!doc["name"].is_string())
            throw ValidationError(origin + ".name: expected a string");
        spec.name = doc["name"].get<std::string>();
    }
    if (!doc.contains("modes") || !doc["modes"].is_number_integer())
        throw ValidationError(origin + ".modes: required integer");
    spec.modes = doc["modes"].get<Index>();

    for (const char* key : {"omega_initial", "omega_final", "duschinsky"})
        if (!doc.contains(key))
            throw ValidationError(origin + "." + key + ": required");

    spec.omega_initial = parse_vector(doc["omega_initial"], origin + ".omega_initial");
    spec.omega_final = parse_vector(doc["omega_final"], origin + ".omega_final");
    spec.duschinsky = parse_matrix(doc["duschinsky"], origin + ".duschinsky");
    if (doc.contains("displacement_d"))
        spec.displacement_d = parse_vector(doc["displacement_d"], origin + ".displacement_d");
    if (doc.contains("delta"))
        spec.delta = parse_vector(doc["delta"], origin + ".delta");

    if (doc.contains("length_unit")) {
        const std::string unit = doc["length_unit"].is_string()
                                     ? doc["length_unit"].get<std::string>()
                                     : std::string();
        if (unit == "bohr") spec.length_unit = LengthUnit::bohr;
        else if (unit == "angstrom") spec.length_unit = LengthUnit::angstrom;
        else throw ValidationError(origin + ".length_unit: expected 'bohr' or 'angstrom'");
    } else if (spec.displacement_d) {
        throw UnitError(origin + ": length_unit required when displacement_d is present");
    }

    if (doc.contains("tdm")) {
        if (!doc["tdm"].is_object())
            throw ValidationError(origin + ".tdm: expected an object");
        reject_unknown_keys(doc["tdm"], origin + ".tdm", {"x", "y", "z"});
        for (const auto& [key, value] : doc["tdm"].items()) {
            const Axis axis = key == "x" ? Axis::x : (key == "y" ? Axis::y : Axis::z);
            spec.tdm[axis] = parse_axis_tdm(value, origin + ".tdm." + key);
        }
    }

    auto errors = spec.validate();
    if (!errors.empty()) {
        std::ostringstream os;
        os << origin << ": validation failed:";
        for (const auto& e : errors) os << "\n  - " << e;
        throw ValidationError(os.str());
    }
    return spec;
}

MoleculeSpec parse_molecule(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("parse_molecule: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_molecule_text(buf.str(), path);
}

std::string format_double(double value) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

json vector_to_json(const RealVector& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

json matrix_to_json(const RealMatrix& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

} // namespace

std::string molecule_to_json(const MoleculeSpec& spec) {
    json doc;
    doc["name"] = spec.name;
    doc["modes"] = spec.modes;
    doc["omega_initial"] = vector_to_json(spec.omega_initial);
    doc["omega_final"] = vector_to_json(spec.omega_final);
    doc["duschinsky"] = matrix_to_json(spec.duschinsky);
    if (spec.displacement_d) doc["displacement_d"] = vector_to_json(*spec.displacement_d);
    if (spec.delta) doc["delta"] = vector_to_json(*spec.delta);
    doc["length_unit"] = spec.length_unit == LengthUnit::bohr ? "bohr" : "angstrom";
    json tdm = json::object();
    for (const auto& [axis, t] : spec.tdm) {
        json axis_doc;
        axis_doc["mu0"] = t.mu0;
        if (t.mu1) axis_doc["mu1"] = vector_to_json(*t.mu1);
        if (t.mu2) axis_doc["mu2"] = matrix_to_json(*t.mu2);
        tdm[axis_name(axis)] = axis_doc;
    }
    doc["tdm"] = tdm;
    return doc.dump(2) + "\n";
}

void write_profile_csv(std::ostream& os, const SpectralProfile& profile) {
    os << "pattern,frequency_cm1,probability\n";
    for (std::size_t i = 0; i < profile.patterns.size(); ++i) {
        const Pattern& m = profile.patterns[i];
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j) os << ';';
            os << m[j];
        }
        os << ',' << format_double(profile.frequencies(static_cast<Index>(i)))
           << ',' << format_double(profile.values(static_cast<Index>(i))) << '\n';
    }
}

SpectralProfile read_profile_csv(std::istream& is, const RealVector& omega_final) {
    std::string line;
    if (!std::getline(is, line) || line != "pattern,frequency_cm1,probability")
        throw ValidationError("read_profile_csv: missing or invalid header");
    SpectralProfile profile;
    std::vector<double> freqs, vals;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw ValidationError("read_profile_csv: malformed row '" + line + "'");
        Pattern m;
        std::stringstream ps(line.substr(0, c1));
        std::string tok;
        while (std::getline(ps, tok, ';')) m.push_back(std::stoi(tok));
        if (!m.empty() && omega_final.size() != static_cast<Index>(m.size()))
            throw DimensionMismatch("read_profile_csv: pattern length mismatch");
        profile.patterns.push_back(std::move(m));
        freqs.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
        vals.push_back(std::stod(line.substr(c2 + 1)));
    }
    profile.frequencies = Eigen::Map<RealVector>(freqs.data(), static_cast<Index>(freqs.size()));
    profile.values = Eigen::Map<RealVector>(vals.data(), static_cast<Index>(vals.size()));
    return profile;
}

void write_broadened_csv(std::ostream& os, const BroadenedSpectrum& spectrum) {
    os << "frequency_cm1,intensity\n";
    for (Index i = 0; i < spectrum.grid.size(); ++i)
        os << format_double(spectrum.grid(i)) << ','
           << format_double(spectrum.intensity(i)) << '\n';
}

void write_sweep_csv(std::ostream& os, const ErrorSweep& sweep) {
    os << "tau,error\n";
    for (std::size_t i = 0; i < sweep.taus.size(); ++i)
        os << format_double(sweep.taus[i]) << ','
           << format_double(sweep.errors[i]) << '\n';
}

} // namespace vibron
