#include "vibron/cli.hpp"

#include "vibron/datasets.hpp"
#include "vibron/gauss_algebra.hpp"
#include "vibron/molecule_io.hpp"
#include "vibron/spectrum.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace vibron {

namespace {

MoleculeSpec load_molecule(const std::string& ref, std::ostream& err) {
    MoleculeSpec spec = datasets::has(ref) ? datasets::load(ref) : parse_molecule(ref);
    for (const auto& w : spec.warnings()) err << "warning: " << spec.name << ": " << w << "\n";
    return spec;
}

HtOrder parse_order(const std::string& name) {
    if (name == "condon") return HtOrder::condon;
    if (name == "ht1") return HtOrder::ht1;
    if (name == "ht2") return HtOrder::ht2;
    throw ValidationError("order: expected condon, ht1 or ht2, got '" + name + "'");
}

std::vector<Axis> parse_axes(const std::string& list) {
    std::vector<Axis> axes;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "x") axes.push_back(Axis::x);
        else if (tok == "y") axes.push_back(Axis::y);
        else if (tok == "z") axes.push_back(Axis::z);
        else if (!tok.empty())
            throw ValidationError("axes: expected a comma list of x,y,z, got '" + tok + "'");
    }
    return axes;
}

std::vector<double> parse_taus(const std::string& list) {
    std::vector<double> taus;
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t pos = 0;
        const double value = std::stod(tok, &pos);
        if (pos != tok.size())
            throw ValidationError("taus: malformed number '" + tok + "'");
        taus.push_back(value);
    }
    return taus;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot open '" + path + "' for writing");
    out << content;
}

struct SpectrumArgs {
    std::string molecule;
    std::string order{"ht1"};
    double tau{1e-2};
    int cutoff{3};
    std::string axes;
    bool exact{false};
    double broaden_width{0.0};
    std::string broaden_mode{"sigma"};
    double grid_step{1.0};
    std::string out_path;
    std::string broadened_out;
};

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out, std::ostream& err) {
    const MoleculeSpec spec = load_molecule(a.molecule, err);
    const HtOrder order = parse_order(a.order);
    const std::vector<Axis> axes = parse_axes(a.axes);

    const SpectralProfile profile =
        a.exact ? exact_profile(spec, axes, order, a.cutoff)
                : (order == HtOrder::condon
                       ? condon_profile(spec, a.cutoff)
                       : noncondon_profile(spec, axes, a.tau, order, a.cutoff));

    std::ostringstream csv;
    write_profile_csv(csv, profile);
    if (a.out_path.empty()) out << csv.str();
    else write_file(a.out_path, csv.str());

    out << "molecule " << spec.name << "  order " << order_name(order) << "  "
        << (a.exact ? "exact" : (order == HtOrder::condon
                                     ? "condon"
                                     : "tau " + format_double(a.tau)))
        << "  cutoff " << a.cutoff << "  total_mass "
        << format_double(profile.total_mass()) << "\n";

    if (a.broaden_width > 0.0) {
        const WidthMode mode =
            a.broaden_mode == "fwhm" ? WidthMode::fwhm : WidthMode::sigma;
        const BroadenedSpectrum curve =
            broaden(profile, a.broaden_width, a.grid_step, mode);
        if (curve.clamped_mass > 0.0)
            err << "warning: clamped negative line mass "
                << format_double(curve.clamped_mass) << " before broadening\n";
        std::ostringstream bcsv;
        write_broadened_csv(bcsv, curve);
        if (a.broadened_out.empty()) out << bcsv.str();
        else write_file(a.broadened_out, bcsv.str());
    }
    return 0;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Linear-optical simulator of vibronic spectra beyond the Condon approximation"};
    app.require_subcommand(1);

    SpectrumArgs sa;
    auto* spectrum_cmd = app.add_subcommand("spectrum", "Compute a spectral line list");
    spectrum_cmd->add_option("--molecule", sa.molecule, "Bundled dataset name or molecule file path")
        ->required();
    spectrum_cmd->add_option("--order", sa.order, "TDM expansion order: condon|ht1|ht2");
    spectrum_cmd->add_option("--tau", sa.tau, "Expansion parameter (1/Debye)");
    spectrum_cmd->add_option("--cutoff", sa.cutoff, "Photons per mode");
    spectrum_cmd->add_option("--axes", sa.axes, "Comma list of polarization axes (default: all)");
    spectrum_cmd->add_flag("--exact", sa.exact, "Use the tau-free reference instead of the tau combination");
    spectrum_cmd->add_option("--broaden-width", sa.broaden_width, "Gaussian broadening width (cm^-1)");
    spectrum_cmd->add_option("--broaden-mode", sa.broaden_mode, "Width semantics: sigma|fwhm");
    spectrum_cmd->add_option("--grid-step", sa.grid_step, "Broadening grid step (cm^-1)");
    spectrum_cmd->add_option("--out", sa.out_path, "Line list CSV path (default: stdout)");
    spectrum_cmd->add_option("--broadened-out", sa.broadened_out, "Broadened curve CSV path");

    std::string sw_molecule, sw_order = "ht1", sw_taus = "1e-1,3e-2,1e-2", sw_axes, sw_out;
    int sw_cutoff = 3;
    auto* sweep_cmd = app.add_subcommand("error-sweep", "L1 distance to the exact profile over tau");
    sweep_cmd->add_option("--molecule", sw_molecule, "Bundled dataset name or molecule file path")
        ->required();
    sweep_cmd->add_option("--order", sw_order, "TDM expansion order: ht1|ht2");
    sweep_cmd->add_option("--taus", sw_taus, "Comma list of tau values");
    sweep_cmd->add_option("--cutoff", sw_cutoff, "Photons per mode");
    sweep_cmd->add_option("--axes", sw_axes, "Comma list of polarization axes");
    sweep_cmd->add_option("--out", sw_out, "Sweep CSV path (default: stdout)");

    std::string sm_molecule, sm_order = "ht1", sm_axes, sm_out;
    double sm_tau = 1e-2;
    int sm_cutoff = 3;
    std::int64_t sm_shots = 100000;
    std::uint64_t sm_seed = 1;
    auto* sample_cmd = app.add_subcommand("sample", "Shot-noise simulation of the device combination");
    sample_cmd->add_option("--molecule", sm_molecule, "Bundled dataset name or molecule file path")
        ->required();
    sample_cmd->add_option("--order", sm_order, "TDM expansion order: ht1|ht2");
    sample_cmd->add_option("--tau", sm_tau, "Expansion parameter (1/Debye)");
    sample_cmd->add_option("--cutoff", sm_cutoff, "Photons per mode");
    sample_cmd->add_option("--axes", sm_axes, "Comma list of polarization axes");
    sample_cmd->add_option("--shots", sm_shots, "Samples per device");
    sample_cmd->add_option("--seed", sm_seed, "RNG seed");
    sample_cmd->add_option("--out", sm_out, "Empirical line list CSV path (default: stdout)");

    std::string v_molecule;
    auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a molecule file");
    validate_cmd->add_option("--molecule", v_molecule, "Bundled dataset name or molecule file path")
        ->required();

    auto* datasets_cmd = app.add_subcommand("datasets", "Bundled molecule datasets");
    auto* list_cmd = datasets_cmd->add_subcommand("list", "List bundled datasets");
    std::string export_dir = ".";
    auto* export_cmd = datasets_cmd->add_subcommand("export", "Write bundled datasets as JSON files");
    export_cmd->add_option("--dir", export_dir, "Output directory");
    datasets_cmd->require_subcommand(1);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.name("vibron");
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream os;
        const int code = app.exit(e, os, os);
        (code == 0 ? out : err) << os.str();
        return code == 0 ? 0 : 1;
    }

    if (spectrum_cmd->parsed()) return cmd_spectrum(sa, out, err);

    if (sweep_cmd->parsed()) {
        const MoleculeSpec spec = load_molecule(sw_molecule, err);
        const ErrorSweep sweep = error_sweep(spec, parse_axes(sw_axes),
                                             parse_order(sw_order),
                                             parse_taus(sw_taus), sw_cutoff);
        std::ostringstream csv;
        write_sweep_csv(csv, sweep);
        if (sw_out.empty()) out << csv.str();
        else write_file(sw_out, csv.str());
        if (sweep.slope_valid)
            out << "slope " << format_double(sweep.slope) << "\n";
        else
            out << "slope skipped (errors at machine precision)\n";
        return 0;
    }

    if (sample_cmd->parsed()) {
        const MoleculeSpec spec = load_molecule(sm_molecule, err);
        const SampleResult result =
            sample_profile(spec, parse_axes(sm_axes), parse_order(sm_order), sm_tau,
                           sm_cutoff, sm_shots, sm_seed);
        std::ostringstream csv;
        write_profile_csv(csv, result.empirical);
        if (sm_out.empty()) out << csv.str();
        else write_file(sm_out, csv.str());
        out << "tv_distance " << format_double(result.tv_distance) << "\n";
        return 0;
    }

    if (validate_cmd->parsed()) {
        const MoleculeSpec spec = load_molecule(v_molecule, err);
        auto [jm, delta] = build_bogoliubov_inputs(spec);
        (void)delta;
        out << "valid: " << spec.name << " (" << spec.modes << " modes, axes";
        for (Axis a : spec.axes()) out << " " << axis_name(a);
        out << ", max order " << order_name(spec.max_order())
            << ", duschinsky condition " << format_double(duschinsky_condition(jm))
            << ")\n";
        return 0;
    }

    if (list_cmd->parsed()) {
        for (const auto& e : datasets::all())
            out << e.name << "\t" << e.description << "\t[" << e.source << "]\n";
        return 0;
    }
    if (export_cmd->parsed()) {
        namespace fs = std::filesystem;
        fs::create_directories(export_dir);
        for (const auto& e : datasets::all()) {
            const std::string path = (fs::path(export_dir) / (e.name + ".json")).string();
            write_file(path, molecule_to_json(datasets::load(e.name)));
            out << "wrote " << path << "\n";
        }
        return 0;
    }
    err << "error: no subcommand\n";
    return 1;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const ValidationFailure& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalFailure& e) {
        err << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace vibron
