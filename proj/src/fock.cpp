#include "vibron/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vibron {

namespace {

constexpr Index kEnumerationBudget = Index{1} << 26;

bool colex_less(const Pattern& a, const Pattern& b) {
    for (std::size_t k = a.size(); k-- > 0;) {
        if (a[k] != b[k]) return a[k] < b[k];
    }
    return false;
}

} // namespace

std::vector<Pattern> enumerate_patterns(Index modes, int per_mode_cutoff) {
    if (modes <= 0)
        throw DimensionMismatch("enumerate_patterns: modes must be positive");
    if (per_mode_cutoff < 0)
        throw CutoffExceeded("enumerate_patterns: negative cutoff");

    double size = 1.0;
    for (Index j = 0; j < modes; ++j) size *= per_mode_cutoff + 1;
    if (size > static_cast<double>(kEnumerationBudget))
        throw CutoffExceeded("enumerate_patterns: box of " + std::to_string(size) +
                             " patterns exceeds the enumeration budget");

    std::vector<Pattern> out;
    out.reserve(static_cast<std::size_t>(size));
    Pattern m(static_cast<std::size_t>(modes), 0);
    while (true) {
        out.push_back(m);
        Index j = modes - 1;
        while (j >= 0 && m[static_cast<std::size_t>(j)] == per_mode_cutoff) {
            m[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
        ++m[static_cast<std::size_t>(j)];
    }
    std::sort(out.begin(), out.end(), [](const Pattern& a, const Pattern& b) {
        const int ta = std::accumulate(a.begin(), a.end(), 0);
        const int tb = std::accumulate(b.begin(), b.end(), 0);
        if (ta != tb) return ta < tb;
        return colex_less(a, b);
    });
    return out;
}

GaussianState::GaussianState(const BlochMessiahForm& form) {
    const Index m = form.modes();
    RealVector tanh_s(m), sech_s(m);
    for (Index j = 0; j < m; ++j) {
        tanh_s(j) = std::tanh(form.sigma(j));
        sech_s(j) = 1.0 / std::cosh(form.sigma(j));
    }
    a = form.v.conjugate() * tanh_s.asDiagonal() * form.v.adjoint();
    a = 0.5 * (a + a.transpose()).eval();

    const Vector u = form.w.transpose() * form.gamma;
    b = form.v.conjugate() * (sech_s.asDiagonal() * u);

    cd log_n0 = -0.5 * form.gamma.squaredNorm();
    for (Index j = 0; j < m; ++j) {
        log_n0 += -0.5 * std::log(std::cosh(form.sigma(j)));
        log_n0 += -0.5 * tanh_s(j) * u(j) * u(j);
    }
    vacuum = std::exp(log_n0);
}

FockAmplitudeTable::FockAmplitudeTable(const GaussianState& state, int per_mode_cutoff)
    : modes_(state.modes()), cutoff_(per_mode_cutoff) {
    if (cutoff_ < 0)
        throw CutoffExceeded("FockAmplitudeTable: negative cutoff");
    const Index levels = cutoff_ + 1;
    double size = 1.0;
    for (Index j = 0; j < modes_; ++j) size *= static_cast<double>(levels);
    if (size > static_cast<double>(kEnumerationBudget))
        throw CutoffExceeded("FockAmplitudeTable: box exceeds the enumeration budget");

    strides_.assign(static_cast<std::size_t>(modes_), 1);
    for (Index j = modes_ - 2; j >= 0; --j)
        strides_[static_cast<std::size_t>(j)] =
            strides_[static_cast<std::size_t>(j + 1)] * levels;
    const Index total = strides_[0] * levels;
    amps_.assign(static_cast<std::size_t>(total), cd(0.0, 0.0));

    std::vector<double> sqrt_n(static_cast<std::size_t>(levels) + 1);
    for (std::size_t n = 0; n < sqrt_n.size(); ++n)
        sqrt_n[n] = std::sqrt(static_cast<double>(n));

    // g_{m} = [ b_i g_{m-e_i} + Σ_j A_ij √(m_j − δ_ij) g_{m-e_i-e_j} ] / √(m_i)
    // evaluated in odometer order so all predecessors are ready.
    amps_[0] = cd(1.0, 0.0);
    Pattern m(static_cast<std::size_t>(modes_), 0);
    for (Index idx = 1; idx < total; ++idx) {
        Index j = modes_ - 1;
        while (m[static_cast<std::size_t>(j)] == cutoff_) {
            m[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        ++m[static_cast<std::size_t>(j)];

        Index i = 0;
        while (m[static_cast<std::size_t>(i)] == 0) ++i;
        const Index base = idx - strides_[static_cast<std::size_t>(i)];
        cd val = state.b(i) * amps_[static_cast<std::size_t>(base)];
        for (Index k = 0; k < modes_; ++k) {
            const int mk = m[static_cast<std::size_t>(k)] - (k == i ? 1 : 0);
            if (mk > 0)
                val += state.a(i, k) * sqrt_n[static_cast<std::size_t>(mk)] *
                       amps_[static_cast<std::size_t>(base - strides_[static_cast<std::size_t>(k)])];
        }
        amps_[static_cast<std::size_t>(idx)] =
            val / sqrt_n[static_cast<std::size_t>(m[static_cast<std::size_t>(i)])];
    }
    for (auto& amp : amps_) amp *= state.vacuum;
}

Index FockAmplitudeTable::flat(const Pattern& m) const {
    if (static_cast<Index>(m.size()) != modes_)
        throw DimensionMismatch("FockAmplitudeTable: pattern length mismatch");
    Index idx = 0;
    for (Index j = 0; j < modes_; ++j) {
        const int mj = m[static_cast<std::size_t>(j)];
        if (mj < 0 || mj > cutoff_)
            throw CutoffExceeded("FockAmplitudeTable: pattern outside the tabulated box");
        idx += strides_[static_cast<std::size_t>(j)] * mj;
    }
    return idx;
}

cd FockAmplitudeTable::amplitude(const Pattern& m) const {
    return amps_[static_cast<std::size_t>(flat(m))];
}

double FockAmplitudeTable::probability(const Pattern& m) const {
    return std::norm(amplitude(m));
}

cd gaussian_fock_amplitude(const BlochMessiahForm& form, cd scale, const Pattern& m) {
    if (static_cast<Index>(m.size()) != form.modes())
        throw DimensionMismatch("gaussian_fock_amplitude: pattern length mismatch");
    int total = 0;
    int peak = 0;
    for (int mj : m) {
        if (mj < 0)
            throw CutoffExceeded("gaussian_fock_amplitude: negative photon number");
        total += mj;
        peak = std::max(peak, mj);
    }
    if (total > kMaxTotalPhotons)
        throw CutoffExceeded("gaussian_fock_amplitude: total photon number exceeds " +
                             std::to_string(kMaxTotalPhotons));

    const GaussianState state(form);
    const FockAmplitudeTable table(state, peak);
    return scale * table.amplitude(m);
}

} // namespace vibron
