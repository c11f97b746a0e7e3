#include "vibron/spectrum.hpp"

#include "vibron/datasets.hpp"
#include "vibron/gauss_algebra.hpp"
#include "vibron/molecule_io.hpp"
#include "vibron/oracle.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace vibron;

namespace {

MoleculeSpec trivial_molecule() {
    MoleculeSpec spec;
    spec.name = "trivial";
    spec.modes = 2;
    spec.omega_initial = RealVector::Constant(2, 500.0);
    spec.omega_final = spec.omega_initial;
    spec.duschinsky = RealMatrix::Identity(2, 2);
    spec.displacement_d = RealVector::Zero(2);
    AxisTdm t;
    t.mu0 = 1.0;
    spec.tdm[Axis::x] = t;
    return spec;
}

// f values from the oracle chain U_Dok exp(kappa mu)|0> for one axis
RealVector oracle_aux_values(const MoleculeSpec& spec, Axis axis, cd kappa,
                             int cutoff, HtOrder order) {
    auto [j, delta] = build_bogoliubov_inputs(spec);
    const DoktorovFactors dok = doktorov_factorize(j, delta);
    DimensionlessTdm tdm = dimensionless_tdm(spec, axis);
    if (order != HtOrder::ht2) tdm.lambda2.setZero();

    std::vector<OracleOp> ops;
    ops.push_back(OracleOp::rotation(dok.u2.cast<cd>()));
    Vector lnl(dok.l.size());
    for (Index jj = 0; jj < lnl.size(); ++jj) lnl(jj) = std::log(dok.l(jj));
    ops.push_back(OracleOp::squeeze(lnl));
    ops.push_back(OracleOp::rotation(dok.u1.cast<cd>()));
    ops.push_back(OracleOp::displacement(dok.beta.cast<cd>()));
    TdmPolynomial mu;
    mu.mu0 = tdm.mu0;
    mu.lambda = tdm.lambda;
    if (order == HtOrder::ht2) mu.lambda2 = tdm.lambda2;
    ops.push_back(OracleOp::exp_tdm(kappa, mu));

    OracleOptions opt;
    opt.padding = 14;
    const TruncatedState state = truncated_oracle_state(spec.modes, cutoff, ops, opt);
    const auto patterns = enumerate_patterns(spec.modes, cutoff);
    RealVector out(static_cast<Index>(patterns.size()));
    for (std::size_t i = 0; i < patterns.size(); ++i)
        out(static_cast<Index>(i)) = std::norm(state.amplitude(patterns[i]));
    return out;
}

double line_at(const std::vector<std::pair<double, double>>& lines, double freq,
               double tol = 0.5) {
    for (const auto& [w, p] : lines)
        if (std::abs(w - freq) <= tol) return p;
    return 0.0;
}

} // namespace

TEST_CASE("condon profile of the trivial molecule is a single line") {
    const SpectralProfile p = condon_profile(trivial_molecule(), 3);
    CHECK(p.values(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.values.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.frequencies(0) == 0.0);
}

TEST_CASE("naphthalene condon profile is dominated by the 0-0 line") {
    const SpectralProfile p = condon_profile(datasets::load("naphthalene"), 3);
    CHECK(p.values(0) > 0.99);
}

TEST_CASE("condon profile equals the oracle on benzene e1g") {
    const MoleculeSpec spec = datasets::load("benzene_e1g");
    const SpectralProfile p = condon_profile(spec, 4);
    const RealVector oracle = oracle_aux_values(spec, Axis::x, cd(0, 0), 4, HtOrder::ht2);
    CHECK((p.values - oracle).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("aux profile at kappa = 0 equals the condon profile exactly") {
    const MoleculeSpec spec = datasets::load("naphthalene");
    const SpectralProfile condon = condon_profile(spec, 3);
    const SpectralProfile aux = aux_profile(spec, Axis::x, cd(0, 0), 3, HtOrder::ht1);
    CHECK((aux.values - condon.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("aux profile equals the truncated oracle for every kappa class") {
    const MoleculeSpec naph = datasets::load("naphthalene");
    for (cd kappa : {cd(0.01, 0.0), cd(0.0, 0.01), cd(-0.01, 0.0), cd(0.3, 0.0)}) {
        const SpectralProfile aux = aux_profile(naph, Axis::x, kappa, 3, HtOrder::ht1);
        const RealVector oracle = oracle_aux_values(naph, Axis::x, kappa, 3, HtOrder::ht1);
        CHECK((aux.values - oracle).cwiseAbs().maxCoeff() <= 1e-8);
    }
    const MoleculeSpec e1g = datasets::load("benzene_e1g");
    for (cd kappa : {cd(0.01, 0.0), cd(0.0, 0.01)}) {
        const SpectralProfile aux = aux_profile(e1g, Axis::x, kappa, 4, HtOrder::ht2);
        const RealVector oracle = oracle_aux_values(e1g, Axis::x, kappa, 4, HtOrder::ht2);
        CHECK((aux.values - oracle).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("first-order aux profile matches the displaced-Doktorov form") {
    // for d = 0 the chain collapses to U_Dok D(alpha) with alpha = kappa*lambda/sqrt(2)
    const MoleculeSpec spec = datasets::load("naphthalene");
    const DimensionlessTdm tdm = dimensionless_tdm(spec, Axis::x);
    const double tau = 0.05;

    auto [j, delta] = build_bogoliubov_inputs(spec);
    const DoktorovFactors dok = doktorov_factorize(j, delta);
    Vector alpha(2);
    for (Index jj = 0; jj < 2; ++jj)
        alpha(jj) = tau * tdm.lambda(jj) / std::sqrt(2.0);
    const BlochMessiahForm form =
        bloch_messiah(compose_chain(dok, RealMatrix::Identity(2, 2), Vector::Zero(2), alpha));
    const GaussianState state(form);
    const FockAmplitudeTable table(state, 3);

    double pref = std::exp(2.0 * tau * tdm.mu0);
    for (Index jj = 0; jj < 2; ++jj) {
        const cd kl = tau * tdm.lambda(jj);
        pref *= std::norm(std::exp((kl * kl + std::norm(kl)) / 4.0));
    }
    const SpectralProfile aux = aux_profile(spec, Axis::x, cd(tau, 0.0), 3, HtOrder::ht1);
    for (std::size_t i = 0; i < aux.patterns.size(); ++i)
        CHECK(aux.values(static_cast<Index>(i)) ==
              doctest::Approx(pref * table.probability(aux.patterns[i])).epsilon(1e-10));
}

TEST_CASE("noncondon profile with constant TDM equals the condon profile per bin") {
    MoleculeSpec spec = datasets::load("naphthalene");
    AxisTdm constant;
    constant.mu0 = 0.8;
    spec.tdm[Axis::x] = constant;
    for (double tau : {1e-3, 1e-2, 1e-1}) {
        const SpectralProfile nc = noncondon_profile(spec, {Axis::x}, tau, HtOrder::ht1, 3);
        const SpectralProfile condon = condon_profile(spec, 3);
        CHECK((nc.values - condon.values).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("condon consistency when lambda is exactly zero") {
    MoleculeSpec spec = datasets::load("benzene_e1g");
    AxisTdm constant;
    constant.mu0 = 1.0;
    spec.tdm[Axis::x] = constant;
    const SpectralProfile nc = noncondon_profile(spec, {Axis::x}, 1e-2, HtOrder::condon, 3);
    const SpectralProfile condon = condon_profile(spec, 3);
    CHECK((nc.values - condon.values).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("naphthalene noncondon profile: peaks and cutoff mass") {
    const SpectralProfile p =
        noncondon_profile(datasets::load("naphthalene"), {}, 1e-2, HtOrder::ht1, 3);
    CHECK(p.total_mass() == doctest::Approx(0.9999).epsilon(1e-3));
    const auto lines = p.merged_lines();
    const double p00 = line_at(lines, 0.0);
    const double p10 = line_at(lines, 438.0);
    const double p01 = line_at(lines, 912.0);
    CHECK(p00 > p10);
    CHECK(p10 > p01);
    // the three major peaks carry nearly all of the profile
    CHECK(p00 + p10 + p01 > 0.98);
}

TEST_CASE("noncondon equals exact to first order: L1 at tau = 1e-2") {
    for (const char* name : {"naphthalene", "phenanthrene"}) {
        const MoleculeSpec spec = datasets::load(name);
        const SpectralProfile approx = noncondon_profile(spec, {}, 1e-2, HtOrder::ht1, 3);
        const SpectralProfile exact = exact_profile(spec, {}, HtOrder::ht1, 3);
        CHECK((approx.values - exact.values).cwiseAbs().sum() <= 1e-3);
    }
}

TEST_CASE("exact ht1 ladder path agrees with the dense oracle") {
    for (const char* name : {"naphthalene", "phenanthrene"}) {
        const MoleculeSpec spec = datasets::load(name);
        const SpectralProfile exact = exact_profile(spec, {}, HtOrder::ht1, 3);

        const DimensionlessTdm tdm = dimensionless_tdm(spec, Axis::x);
        auto [j, delta] = build_bogoliubov_inputs(spec);
        const DoktorovFactors dok = doktorov_factorize(j, delta);
        std::vector<OracleOp> ops;
        ops.push_back(OracleOp::rotation(dok.u2.cast<cd>()));
        Vector lnl(2);
        for (Index jj = 0; jj < 2; ++jj) lnl(jj) = std::log(dok.l(jj));
        ops.push_back(OracleOp::squeeze(lnl));
        ops.push_back(OracleOp::rotation(dok.u1.cast<cd>()));
        ops.push_back(OracleOp::displacement(dok.beta.cast<cd>()));
        TdmPolynomial mu;
        mu.mu0 = tdm.mu0;
        mu.lambda = tdm.lambda;
        ops.push_back(OracleOp::apply_tdm(mu));
        OracleOptions opt;
        opt.padding = 14;
        opt.verify_convergence = false;
        const TruncatedState state = truncated_oracle_state(2, 3, ops, opt);

        const double norm = axis_normalization(tdm, HtOrder::ht1);
        for (std::size_t i = 0; i < exact.patterns.size(); ++i)
            CHECK(exact.values(static_cast<Index>(i)) ==
                  doctest::Approx(std::norm(state.amplitude(exact.patterns[i])) / norm)
                      .epsilon(1e-9));
    }
}

TEST_CASE("exact profile: naphthalene line enhancement by the Duschinsky rotation") {
    const MoleculeSpec spec = datasets::load("naphthalene");
    const SpectralProfile exact = exact_profile(spec, {}, HtOrder::ht1, 3);
    const DimensionlessTdm tdm = dimensionless_tdm(spec, Axis::x);
    const double bare =
        0.5 * tdm.lambda(0) * tdm.lambda(0) / axis_normalization(tdm, HtOrder::ht1);
    const double p10 = line_at(exact.merged_lines(), 438.0);
    CHECK(p10 > bare);            // slightly enhanced
    CHECK(p10 < bare * 1.35);
}

TEST_CASE("Richardson quadratic-remainder test") {
    const MoleculeSpec spec = datasets::load("naphthalene");
    const SpectralProfile exact = exact_profile(spec, {}, HtOrder::ht1, 3);
    const double tau = 2e-2;
    const SpectralProfile full = noncondon_profile(spec, {}, tau, HtOrder::ht1, 3);
    const SpectralProfile half = noncondon_profile(spec, {}, tau / 2, HtOrder::ht1, 3);
    const double e_full = (full.values - exact.values).cwiseAbs().sum();
    const double e_half = (half.values - exact.values).cwiseAbs().sum();
    const double ratio = e_full / e_half;
    CHECK(ratio > 3.2);
    CHECK(ratio < 4.8);
}

TEST_CASE("axis additivity of the multi-axis profile") {
    const MoleculeSpec spec = datasets::load("benzene_e2g");
    const int cutoff = 2;
    const double tau = 1e-2;
    const SpectralProfile both =
        noncondon_profile(spec, {Axis::x, Axis::y}, tau, HtOrder::ht1, cutoff);
    const SpectralProfile px = noncondon_profile(spec, {Axis::x}, tau, HtOrder::ht1, cutoff);
    const SpectralProfile py = noncondon_profile(spec, {Axis::y}, tau, HtOrder::ht1, cutoff);
    const double nx = axis_normalization(dimensionless_tdm(spec, Axis::x), HtOrder::ht1);
    const double ny = axis_normalization(dimensionless_tdm(spec, Axis::y), HtOrder::ht1);
    const RealVector combined = (nx * px.values + ny * py.values) / (nx + ny);
    CHECK((both.values - combined).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("degenerate frequency lines merge without losing mass") {
    const MoleculeSpec spec = datasets::load("benzene_e1g");
    const SpectralProfile p = exact_profile(spec, {}, HtOrder::ht2, 4);
    const auto lines = p.merged_lines();
    CHECK(lines.size() < p.patterns.size());   // degeneracies collapsed
    double merged_mass = 0.0;
    for (const auto& [w, v] : lines) merged_mass += v;
    CHECK(merged_mass == doctest::Approx(p.total_mass()).epsilon(1e-12));
}

TEST_CASE("negative bins are retained raw and clamped only in broadening") {
    const SpectralProfile p =
        noncondon_profile(datasets::load("benzene_e1g"), {}, 1e-2, HtOrder::ht2, 4);
    CHECK(p.values.minCoeff() < 0.0);          // tiny negative tail bins exist
    CHECK(p.values.minCoeff() > -1e-6);
    CHECK(p.total_mass() <= 1.0 + 1e-6);
    CHECK(p.total_mass() >= 0.0);
    const BroadenedSpectrum curve = broaden(p, 100.0, 1.0);
    CHECK(curve.clamped_mass > 0.0);
    CHECK(curve.clamped_mass < 1e-6);
    CHECK(curve.intensity.minCoeff() >= 0.0);

    // the tau^2 overshoot keeps the displaced-molecule mass within its envelope
    const SpectralProfile q =
        noncondon_profile(datasets::load("phenanthrene"), {}, 1e-2, HtOrder::ht1, 3);
    CHECK(q.total_mass() >= 0.0);
    CHECK(q.total_mass() <= 1.0 + 50.0 * 1e-4);
}

TEST_CASE("broaden places a symmetric Gaussian on a single line") {
    MoleculeSpec spec = trivial_molecule();
    const SpectralProfile p = condon_profile(spec, 1);
    const BroadenedSpectrum curve = broaden(p, 100.0, 1.0);
    // peak at the line, value ~ sum of all line contributions there
    Index imax = 0;
    curve.intensity.maxCoeff(&imax);
    CHECK(std::abs(curve.grid(imax)) <= 1.0);
    CHECK(curve.intensity(imax) == doctest::Approx(1.0).epsilon(1e-6));
    // integral approximates p * sigma * sqrt(2 pi)
    const double integral = curve.intensity.sum() * 1.0;
    CHECK(integral == doctest::Approx(100.0 * std::sqrt(2.0 * M_PI)).epsilon(1e-3));
    for (Index i = 1; i < curve.grid.size(); ++i)
        CHECK(curve.grid(i) > curve.grid(i - 1));
}

TEST_CASE("broaden resolves well-separated lines and honors fwhm mode") {
    const SpectralProfile p =
        noncondon_profile(datasets::load("naphthalene"), {}, 1e-2, HtOrder::ht1, 3);
    const BroadenedSpectrum curve = broaden(p, 50.0, 1.0);
    // maxima near 0 and 438 resolved as separate peaks
    const auto near = [&](double freq) {
        double best = 0.0;
        for (Index i = 0; i < curve.grid.size(); ++i)
            if (std::abs(curve.grid(i) - freq) < 30.0)
                best = std::max(best, curve.intensity(i));
        return best;
    };
    const double at220 = near(220.0);
    CHECK(near(0.0) > at220);
    CHECK(near(438.0) > at220);

    const BroadenedSpectrum fwhm = broaden(p, 100.0, 1.0, WidthMode::fwhm);
    CHECK(fwhm.width == doctest::Approx(100.0 / (2.0 * std::sqrt(2.0 * std::log(2.0)))));
}

TEST_CASE("error sweep: condon-only TDM gives machine-zero errors") {
    MoleculeSpec spec = datasets::load("naphthalene");
    AxisTdm constant;
    constant.mu0 = 1.0;
    spec.tdm[Axis::x] = constant;
    const ErrorSweep sweep =
        error_sweep(spec, {}, HtOrder::condon, {1e-1, 3e-2, 1e-2}, 3);
    CHECK(!sweep.slope_valid);
    for (double e : sweep.errors) CHECK(e < 1e-14);
}

TEST_CASE("error sweep slope is -2 for naphthalene") {
    const ErrorSweep sweep = error_sweep(datasets::load("naphthalene"), {},
                                         HtOrder::ht1, {1e-1, 3e-2, 1e-2}, 3);
    CHECK(sweep.slope_valid);
    CHECK(sweep.slope == doctest::Approx(-2.0).epsilon(0.15));
    CHECK(sweep.taus[0] > sweep.taus[1]);
    CHECK_THROWS_AS(error_sweep(datasets::load("naphthalene"), {}, HtOrder::ht1,
                                {1e-1, 1e-2}, 3),
                    ValidationError);
}

TEST_CASE("benzene ht2 departs from the quadratic slope at small tau") {
    const MoleculeSpec spec = datasets::load("benzene_e1g");
    const ErrorSweep good =
        error_sweep(spec, {}, HtOrder::ht2, {3e-1, 1e-1, 3e-2}, 4);
    CHECK(good.slope == doctest::Approx(-2.0).epsilon(0.15));
    const ErrorSweep bad =
        error_sweep(spec, {}, HtOrder::ht2, {1e-2, 3e-3, 1e-3}, 4);
    // effective rescaling tau_eff ~ 1e-3 tau: rounding noise flattens the fit
    CHECK(std::abs(bad.slope + 2.0) > 0.5);
}

TEST_CASE("sampling is deterministic and converges with shots") {
    const MoleculeSpec spec = datasets::load("naphthalene");

    const SampleResult one = sample_profile(spec, {}, HtOrder::ht1, 0.5, 3, 1, 7);
    int support = 0;
    for (Index i = 0; i < one.empirical.values.size(); ++i)
        support += (one.empirical.values(i) != 0.0);
    CHECK(support <= 4);   // one delta per device

    const SampleResult a = sample_profile(spec, {}, HtOrder::ht1, 0.5, 3, 2000, 42);
    const SampleResult b = sample_profile(spec, {}, HtOrder::ht1, 0.5, 3, 2000, 42);
    CHECK((a.empirical.values - b.empirical.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.tv_distance == b.tv_distance);

    const SampleResult c = sample_profile(spec, {}, HtOrder::ht1, 0.5, 3, 2000, 43);
    CHECK((a.empirical.values - c.empirical.values).cwiseAbs().maxCoeff() > 0.0);

    // law of large numbers at tau = 0.5 where the 1/tau^2 amplification is mild
    const SampleResult big = sample_profile(spec, {}, HtOrder::ht1, 0.5, 3, 10000000, 11);
    CHECK(big.tv_distance <= 5e-3);
    CHECK(big.tv_distance < a.tv_distance);
}

TEST_CASE("profile metadata is recorded") {
    const SpectralProfile p =
        noncondon_profile(datasets::load("naphthalene"), {}, 1e-2, HtOrder::ht1, 3);
    CHECK(p.meta.molecule == "naphthalene");
    CHECK(p.meta.order == HtOrder::ht1);
    CHECK(p.meta.tau == doctest::Approx(1e-2));
    CHECK(p.meta.cutoff == 3);
    const SpectralProfile e = exact_profile(datasets::load("naphthalene"), {}, HtOrder::ht1, 3);
    CHECK(e.meta.tau_label == "exact");
}
