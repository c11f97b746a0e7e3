#include "vibron/spectrum.hpp"

#include "vibron/gauss_algebra.hpp"
#include "vibron/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace vibron {

namespace {

RealVector pattern_frequencies(const std::vector<Pattern>& patterns,
                               const RealVector& omega_final) {
    RealVector freqs(static_cast<Index>(patterns.size()));
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        double w = 0.0;
        for (Index j = 0; j < omega_final.size(); ++j)
            w += patterns[i][static_cast<std::size_t>(j)] * omega_final(j);
        freqs(static_cast<Index>(i)) = w;
    }
    return freqs;
}

// Zero out expansion orders above the requested one.
DimensionlessTdm restrict_order(DimensionlessTdm tdm, HtOrder order) {
    if (order == HtOrder::condon) {
        tdm.lambda.setZero();
        tdm.has_linear = false;
    }
    if (order != HtOrder::ht2) {
        tdm.lambda2.setZero();
        tdm.has_quadratic = false;
    }
    return tdm;
}

std::vector<Axis> resolve_axes(const MoleculeSpec& spec, const std::vector<Axis>& axes) {
    std::vector<Axis> out = axes.empty() ? spec.axes() : axes;
    if (out.empty())
        throw ValidationError("profile: molecule carries no TDM axis data");
    for (Axis a : out)
        if (spec.tdm.find(a) == spec.tdm.end())
            throw ValidationError("profile: axis " + axis_name(a) + " not present in molecule");
    return out;
}

struct ChainContext {
    DoktorovFactors dok;
    std::vector<Pattern> patterns;
    RealVector frequencies;

    ChainContext(const MoleculeSpec& spec, int cutoff) {
        auto [j, delta] = build_bogoliubov_inputs(spec);
        dok = doktorov_factorize(j, delta);
        patterns = enumerate_patterns(spec.modes, cutoff);
        frequencies = pattern_frequencies(patterns, spec.omega_final);
    }
};

// |⟨m|U_Dok|0⟩|² over the pattern list (the κ-independent f(0)).
RealVector condon_values(const ChainContext& ctx, int cutoff) {
    const BlochMessiahForm form = bloch_messiah(doktorov_transform(ctx.dok));
    const GaussianState state(form);
    const FockAmplitudeTable table(state, cutoff);
    RealVector out(static_cast<Index>(ctx.patterns.size()));
    for (std::size_t i = 0; i < ctx.patterns.size(); ++i)
        out(static_cast<Index>(i)) = table.probability(ctx.patterns[i]);
    return out;
}

// Unnormalized f_m(κ) for one axis at κ ≠ 0.
RealVector aux_values(const ChainContext& ctx, const DimensionlessTdm& tdm, cd kappa,
                      int cutoff) {
    const HtModeFactors fac = build_ht_factors(kappa, tdm);
    const BogoliubovTransform chain =
        compose_chain(ctx.dok, fac.u_ht, fac.xi, fac.alpha);
    const BlochMessiahForm form = bloch_messiah(chain);
    const GaussianState state(form);
    const FockAmplitudeTable table(state, cutoff);
    const double pref = fac.probability_prefactor();
    RealVector out(static_cast<Index>(ctx.patterns.size()));
    for (std::size_t i = 0; i < ctx.patterns.size(); ++i)
        out(static_cast<Index>(i)) = pref * table.probability(ctx.patterns[i]);
    return out;
}

TdmPolynomial to_polynomial(const DimensionlessTdm& tdm) {
    TdmPolynomial mu;
    mu.mu0 = tdm.mu0;
    mu.lambda = tdm.lambda;
    if (tdm.has_quadratic) mu.lambda2 = tdm.lambda2;
    return mu;
}

} // namespace

double SpectralProfile::total_mass() const {
    return values.sum();
}

std::vector<std::pair<double, double>> SpectralProfile::merged_lines(double tol) const {
    std::vector<Index> order(values.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        return frequencies(a) < frequencies(b);
    });
    std::vector<std::pair<double, double>> lines;
    for (Index idx : order) {
        if (!lines.empty() && frequencies(idx) - lines.back().first <= tol) {
            lines.back().second += values(idx);
        } else {
            lines.emplace_back(frequencies(idx), values(idx));
        }
    }
    return lines;
}

SpectralProfile condon_profile(const MoleculeSpec& spec, int cutoff) {
    const ChainContext ctx(spec, cutoff);
    SpectralProfile profile;
    profile.patterns = ctx.patterns;
    profile.frequencies = ctx.frequencies;
    profile.values = condon_values(ctx, cutoff);
    profile.meta = {spec.name, {}, HtOrder::condon, "condon", 0.0, cutoff};
    return profile;
}

SpectralProfile aux_profile(const MoleculeSpec& spec, Axis axis, cd kappa,
                            int cutoff, HtOrder order) {
    const ChainContext ctx(spec, cutoff);
    SpectralProfile profile;
    profile.patterns = ctx.patterns;
    profile.frequencies = ctx.frequencies;
    if (kappa == cd(0.0, 0.0)) {
        profile.values = condon_values(ctx, cutoff);   // f(0) is κ-independent
    } else {
        const DimensionlessTdm tdm = restrict_order(dimensionless_tdm(spec, axis), order);
        profile.values = aux_values(ctx, tdm, kappa, cutoff);
    }
    profile.meta = {spec.name, {axis}, order,
                    "aux", std::abs(kappa), cutoff};
    return profile;
}

SpectralProfile noncondon_profile(const MoleculeSpec& spec,
                                  const std::vector<Axis>& axes_in, double tau,
                                  HtOrder order, int cutoff) {
    if (!(tau > 0.0))
        throw ValidationError("noncondon_profile: tau must be positive");
    const std::vector<Axis> axes = resolve_axes(spec, axes_in);
    const ChainContext ctx(spec, cutoff);

    const RealVector f0 = condon_values(ctx, cutoff);
    RealVector total = RealVector::Zero(f0.size());
    std::vector<DimensionlessTdm> tdms;
    for (Axis axis : axes)
        tdms.push_back(restrict_order(dimensionless_tdm(spec, axis), order));
    const NormalizationConstant norm = normalization_constant(tdms, order);

    for (const auto& tdm : tdms) {
        if (tdm.lambda.isZero(0.0) && tdm.lambda2.isZero(0.0)) {
            // constant μ̂: the κ combination has the exact limit μ⁰²·f(0)
            total += tdm.mu0 * tdm.mu0 * f0;
            continue;
        }
        const RealVector fi = aux_values(ctx, tdm, cd(0.0, tau), cutoff);
        const RealVector fp = aux_values(ctx, tdm, cd(tau, 0.0), cutoff);
        const RealVector fm = aux_values(ctx, tdm, cd(-tau, 0.0), cutoff);
        total += (fi + 0.5 * fp + 0.5 * fm - 2.0 * f0) / (2.0 * tau * tau);
    }
    SpectralProfile profile;
    profile.patterns = ctx.patterns;
    profile.frequencies = ctx.frequencies;
    profile.values = total / norm.value;
    profile.meta = {spec.name, axes, order, std::to_string(tau), tau, cutoff};
    return profile;
}

namespace {

// Exact ⟨m|U_Dok μ̂|0⟩ for linear μ̂, by rewriting U_Dok q̂_j U_Dok† through the
// Bogoliubov blocks and acting with ladder operators on the Condon state:
//   U a_j† U† = −Xᵀ(a − z̄) + Y†(a† − z),   a_k|ψ⟩ = (A a† + b)_k|ψ⟩.
RealVector exact_ht1_values(const ChainContext& ctx,
                            const std::vector<DimensionlessTdm>& tdms,
                            double norm_total, int cutoff) {
    const BogoliubovTransform chain = doktorov_transform(ctx.dok);
    const BlochMessiahForm form = bloch_messiah(chain);
    const GaussianState state(form);
    const FockAmplitudeTable table(state, cutoff);

    const Matrix ladder_mix = -chain.x.transpose() * state.a + chain.y.adjoint();
    const Vector ladder_const =
        -chain.x.transpose() * (state.b - chain.z.conjugate()) -
        chain.y.adjoint() * chain.z;

    const Index m = ctx.dok.modes();
    RealVector total = RealVector::Zero(static_cast<Index>(ctx.patterns.size()));
    for (const auto& tdm : tdms) {
        const Vector lam = tdm.lambda.cast<cd>();
        const cd c0 = tdm.mu0 + (lam.transpose() * ladder_const)(0) / std::sqrt(2.0);
        const Vector ck = (ladder_mix.transpose() * lam) / std::sqrt(2.0);
        for (std::size_t i = 0; i < ctx.patterns.size(); ++i) {
            const Pattern& pat = ctx.patterns[i];
            cd amp = c0 * table.amplitude(pat);
            for (Index k = 0; k < m; ++k) {
                const int mk = pat[static_cast<std::size_t>(k)];
                if (mk > 0) {
                    Pattern prev = pat;
                    --prev[static_cast<std::size_t>(k)];
                    amp += ck(k) * std::sqrt(static_cast<double>(mk)) *
                           table.amplitude(prev);
                }
            }
            total(static_cast<Index>(i)) += std::norm(amp);
        }
    }
    return total / norm_total;
}

RealVector exact_oracle_values(const MoleculeSpec& spec, const ChainContext& ctx,
                               const std::vector<DimensionlessTdm>& tdms,
                               double norm_total, int cutoff) {
    if (spec.modes > 6 || cutoff > 10)
        throw CutoffExceeded("exact_profile: dense oracle guard (modes <= 6, cutoff <= 10)");
    std::vector<OracleOp> base;
    base.push_back(OracleOp::rotation(ctx.dok.u2.cast<cd>()));
    Vector lnl(ctx.dok.l.size());
    for (Index j = 0; j < lnl.size(); ++j) lnl(j) = std::log(ctx.dok.l(j));
    base.push_back(OracleOp::squeeze(lnl));
    base.push_back(OracleOp::rotation(ctx.dok.u1.cast<cd>()));
    base.push_back(OracleOp::displacement(ctx.dok.beta.cast<cd>()));

    RealVector total = RealVector::Zero(static_cast<Index>(ctx.patterns.size()));
    for (const auto& tdm : tdms) {
        std::vector<OracleOp> ops = base;
        ops.push_back(OracleOp::apply_tdm(to_polynomial(tdm)));
        const TruncatedState state = truncated_oracle_state(spec.modes, cutoff, ops);
        for (std::size_t i = 0; i < ctx.patterns.size(); ++i)
            total(static_cast<Index>(i)) += std::norm(state.amplitude(ctx.patterns[i]));
    }
    return total / norm_total;
}

} // namespace

SpectralProfile exact_profile(const MoleculeSpec& spec,
                              const std::vector<Axis>& axes_in, HtOrder order,
                              int cutoff) {
    const std::vector<Axis> axes = resolve_axes(spec, axes_in);
    const ChainContext ctx(spec, cutoff);

    SpectralProfile profile;
    profile.patterns = ctx.patterns;
    profile.frequencies = ctx.frequencies;
    profile.meta = {spec.name, axes, order, "exact", 0.0, cutoff};

    if (order == HtOrder::condon) {
        profile.values = condon_values(ctx, cutoff);
        return profile;
    }
    std::vector<DimensionlessTdm> tdms;
    for (Axis axis : axes)
        tdms.push_back(restrict_order(dimensionless_tdm(spec, axis), order));
    const NormalizationConstant norm = normalization_constant(tdms, order);

    profile.values = (order == HtOrder::ht1)
        ? exact_ht1_values(ctx, tdms, norm.value, cutoff)
        : exact_oracle_values(spec, ctx, tdms, norm.value, cutoff);
    return profile;
}

BroadenedSpectrum broaden(const SpectralProfile& profile, double width_cm1,
                          double grid_step, WidthMode mode) {
    if (!(width_cm1 > 0.0))
        throw ValidationError("broaden: width must be positive");
    if (!(grid_step > 0.0))
        throw ValidationError("broaden: grid step must be positive");

    const double sigma =
        mode == WidthMode::sigma ? width_cm1
                                 : width_cm1 / (2.0 * std::sqrt(2.0 * std::log(2.0)));

    BroadenedSpectrum out;
    out.width = sigma;
    auto lines = profile.merged_lines();
    double clamped = 0.0;
    for (auto& [freq, p] : lines) {
        (void)freq;
        if (p < 0.0) {
            clamped += -p;
            p = 0.0;
        }
    }
    out.clamped_mass = clamped;
    if (lines.empty()) return out;

    const double lo = lines.front().first - 4.0 * sigma;
    const double hi = lines.back().first + 4.0 * sigma;
    const Index n = static_cast<Index>(std::floor((hi - lo) / grid_step)) + 1;
    out.grid.resize(n);
    out.intensity = RealVector::Zero(n);
    for (Index i = 0; i < n; ++i) out.grid(i) = lo + grid_step * i;
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    for (const auto& [freq, p] : lines) {
        if (p == 0.0) continue;
        for (Index i = 0; i < n; ++i) {
            const double d = out.grid(i) - freq;
            out.intensity(i) += p * std::exp(-d * d * inv2s2);
        }
    }
    return out;
}

ErrorSweep error_sweep(const MoleculeSpec& spec, const std::vector<Axis>& axes,
                       HtOrder order, std::vector<double> taus, int cutoff) {
    if (taus.size() < 3)
        throw ValidationError("error_sweep: need at least 3 tau values");
    for (double t : taus)
        if (!(t > 0.0)) throw ValidationError("error_sweep: tau values must be positive");
    std::sort(taus.begin(), taus.end(), std::greater<double>());

    const SpectralProfile exact = exact_profile(spec, axes, order, cutoff);

    ErrorSweep sweep;
    sweep.taus = taus;
    for (double tau : taus) {
        const SpectralProfile approx = noncondon_profile(spec, axes, tau, order, cutoff);
        sweep.errors.push_back((approx.values - exact.values).cwiseAbs().sum());
    }

    bool positive = true;
    for (double e : sweep.errors) positive &= (e > 1e-14);
    if (positive) {
        // least squares of log E against log(1/τ)
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(taus.size());
        for (std::size_t i = 0; i < taus.size(); ++i) {
            const double x = -std::log(taus[i]);
            const double y = std::log(sweep.errors[i]);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        sweep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        sweep.slope_valid = true;
    }
    return sweep;
}

namespace {

// Deterministic uniform in [0,1) from a raw 64-bit draw; avoids the
// implementation-defined std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    x ^= x >> 30; x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27; x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

} // namespace

SampleResult sample_combination(const std::vector<Pattern>& patterns,
                                const RealVector& frequencies,
                                const std::vector<SampleDevice>& devices,
                                std::int64_t shots, std::uint64_t seed) {
    if (shots < 1)
        throw ValidationError("sample_combination: shots must be >= 1");
    const Index n = static_cast<Index>(patterns.size());

    RealVector estimate = RealVector::Zero(n);
    RealVector noiseless = RealVector::Zero(n);

    for (std::size_t d = 0; d < devices.size(); ++d) {
        const SampleDevice& dev = devices[d];
        if (dev.values.size() != n)
            throw DimensionMismatch("sample_combination: device size mismatch");
        if (dev.values.minCoeff() < 0.0)
            throw ValidationError("sample_combination: device distribution has negative entries");
        const double mass = dev.values.sum();
        if (!(mass > 0.0)) continue;

        noiseless += dev.weight * dev.values;

        RealVector cdf(n);
        double acc = 0.0;
        for (Index i = 0; i < n; ++i) {
            acc += dev.values(i) / mass;
            cdf(i) = acc;
        }
        cdf(n - 1) = 1.0;

        std::mt19937_64 rng(mix_seed(seed, d));
        RealVector counts = RealVector::Zero(n);
        for (std::int64_t s = 0; s < shots; ++s) {
            const double u = uniform01(rng);
            const double* begin = cdf.data();
            const Index idx = static_cast<Index>(
                std::lower_bound(begin, begin + n, u) - begin);
            counts(std::min(idx, n - 1)) += 1.0;
        }
        estimate += (dev.weight * mass / static_cast<double>(shots)) * counts;
    }

    SampleResult result;
    result.empirical.patterns = patterns;
    result.empirical.frequencies = frequencies;
    result.empirical.values = estimate;
    result.tv_distance = 0.5 * (estimate - noiseless).cwiseAbs().sum();
    return result;
}

SampleResult sample_profile(const MoleculeSpec& spec, const std::vector<Axis>& axes_in,
                            HtOrder order, double tau, int cutoff,
                            std::int64_t shots, std::uint64_t seed) {
    if (!(tau > 0.0))
        throw ValidationError("sample_profile: tau must be positive");
    const std::vector<Axis> axes = resolve_axes(spec, axes_in);
    const ChainContext ctx(spec, cutoff);

    std::vector<DimensionlessTdm> tdms;
    for (Axis axis : axes)
        tdms.push_back(restrict_order(dimensionless_tdm(spec, axis), order));
    const NormalizationConstant norm = normalization_constant(tdms, order);

    const RealVector f0 = condon_values(ctx, cutoff);
    const double base = 1.0 / (2.0 * norm.value * tau * tau);

    std::vector<SampleDevice> devices;
    for (const auto& tdm : tdms) {
        devices.push_back({aux_values(ctx, tdm, cd(0.0, tau), cutoff), base});
        devices.push_back({aux_values(ctx, tdm, cd(tau, 0.0), cutoff), 0.5 * base});
        devices.push_back({aux_values(ctx, tdm, cd(-tau, 0.0), cutoff), 0.5 * base});
        devices.push_back({f0, -2.0 * base});
    }
    SampleResult result =
        sample_combination(ctx.patterns, ctx.frequencies, devices, shots, seed);
    result.empirical.meta = {spec.name, axes, order, std::to_string(tau), tau, cutoff};
    return result;
}

} // namespace vibron
