#include "vibron/molecule.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace vibron {

namespace {

// CODATA 2018
constexpr double kHbar = 1.054571817e-34;        // J·s
constexpr double kSpeedOfLightCm = 2.99792458e10; // cm/s
constexpr double kAtomicMassKg = 1.66053906660e-27;
constexpr double kBohrMeter = 5.29177210903e-11;
constexpr double kAngstromMeter = 1e-10;

constexpr double kOrthoWarn = 1e-6;
constexpr double kOrthoReject = 1e-3;

double length_meter(LengthUnit unit) {
    return unit == LengthUnit::bohr ? kBohrMeter : kAngstromMeter;
}

} // namespace

std::string axis_name(Axis a) {
    switch (a) {
        case Axis::x: return "x";
        case Axis::y: return "y";
        default: return "z";
    }
}

std::string order_name(HtOrder o) {
    switch (o) {
        case HtOrder::condon: return "condon";
        case HtOrder::ht1: return "ht1";
        default: return "ht2";
    }
}

double oscillator_length(double omega_cm1, LengthUnit unit) {
    if (omega_cm1 <= 0.0)
        throw UnitError("oscillator_length: frequency must be positive");
    const double omega = 2.0 * M_PI * kSpeedOfLightCm * omega_cm1;
    const double len = length_meter(unit);
    return std::sqrt(kHbar / omega / (kAtomicMassKg * len * len));
}

std::vector<Axis> MoleculeSpec::axes() const {
    std::vector<Axis> out;
    for (const auto& [axis, _] : tdm) out.push_back(axis);
    return out;
}

HtOrder MoleculeSpec::max_order() const {
    HtOrder order = HtOrder::condon;
    for (const auto& [_, t] : tdm) {
        if (t.mu2 && order != HtOrder::ht2) order = HtOrder::ht2;
        else if (t.mu1 && order == HtOrder::condon) order = HtOrder::ht1;
    }
    return order;
}

std::vector<std::string> MoleculeSpec::validate() const {
    std::vector<std::string> errors;
    const Index m = modes;
    auto check_len = [&](const char* field, Index got) {
        if (got != m) {
            std::ostringstream os;
            os << field << ": expected " << m << " entries, got " << got;
            errors.push_back(os.str());
        }
    };
    if (m <= 0) errors.push_back("modes: must be positive");
    check_len("omega_initial", omega_initial.size());
    check_len("omega_final", omega_final.size());
    for (Index j = 0; j < omega_initial.size(); ++j)
        if (!(omega_initial(j) > 0.0))
            errors.push_back("omega_initial[" + std::to_string(j) + "]: must be strictly positive");
    for (Index j = 0; j < omega_final.size(); ++j)
        if (!(omega_final(j) > 0.0))
            errors.push_back("omega_final[" + std::to_string(j) + "]: must be strictly positive");
    if (duschinsky.rows() != m || duschinsky.cols() != m)
        errors.push_back("duschinsky: must be modes x modes");
    if (displacement_d && delta)
        errors.push_back("displacement_d/delta: exactly one may be present");
    if (!displacement_d && !delta)
        errors.push_back("displacement_d/delta: one must be present");
    if (displacement_d) check_len("displacement_d", displacement_d->size());
    if (delta) check_len("delta", delta->size());

    if (duschinsky.rows() == m && duschinsky.cols() == m && m > 0) {
        const double defect =
            (duschinsky.transpose() * duschinsky - RealMatrix::Identity(m, m)).norm();
        if (defect > kOrthoReject) {
            std::ostringstream os;
            os << "duschinsky: orthogonality defect " << defect << " exceeds " << kOrthoReject;
            errors.push_back(os.str());
        }
    }

    for (const auto& [axis, t] : tdm) {
        const std::string prefix = "tdm." + axis_name(axis);
        if (t.mu1) check_len((prefix + ".mu1").c_str(), t.mu1->size());
        if (t.mu2) {
            if (t.mu2->rows() != m || t.mu2->cols() != m) {
                errors.push_back(prefix + ".mu2: must be modes x modes");
            } else {
                for (Index r = 0; r < m; ++r)
                    for (Index c = r + 1; c < m; ++c)
                        if (std::abs((*t.mu2)(r, c) - (*t.mu2)(c, r)) > 1e-12) {
                            std::ostringstream os;
                            os << prefix << ".mu2: not symmetric at (" << r << "," << c
                               << "): " << (*t.mu2)(r, c) << " vs " << (*t.mu2)(c, r);
                            errors.push_back(os.str());
                        }
            }
        }
    }
    return errors;
}

std::vector<std::string> MoleculeSpec::warnings() const {
    std::vector<std::string> warns;
    const Index m = modes;
    if (duschinsky.rows() == m && duschinsky.cols() == m && m > 0) {
        const double defect =
            (duschinsky.transpose() * duschinsky - RealMatrix::Identity(m, m)).norm();
        if (defect > kOrthoWarn && defect <= kOrthoReject) {
            std::ostringstream os;
            os << "duschinsky orthogonality defect " << defect
               << " (quoted-precision table; accepted)";
            warns.push_back(os.str());
        }
    }
    return warns;
}

std::pair<RealMatrix, RealVector> build_bogoliubov_inputs(const MoleculeSpec& spec) {
    auto errors = spec.validate();
    if (!errors.empty())
        throw ValidationError("build_bogoliubov_inputs: " + errors.front());

    const Index m = spec.modes;
    RealMatrix j(m, m);
    for (Index r = 0; r < m; ++r)
        for (Index c = 0; c < m; ++c)
            j(r, c) = std::sqrt(spec.omega_final(r)) * spec.duschinsky(r, c) /
                      std::sqrt(spec.omega_initial(c));

    RealVector delta(m);
    if (spec.delta) {
        delta = *spec.delta;
    } else {
        for (Index r = 0; r < m; ++r)
            delta(r) = (*spec.displacement_d)(r) /
                       oscillator_length(spec.omega_final(r), spec.length_unit);
    }
    return {std::move(j), std::move(delta)};
}

DimensionlessTdm dimensionless_tdm(const MoleculeSpec& spec, Axis axis) {
    auto it = spec.tdm.find(axis);
    if (it == spec.tdm.end())
        throw ValidationError("dimensionless_tdm: axis " + axis_name(axis) + " not present");
    const AxisTdm& t = it->second;
    const Index m = spec.modes;

    RealVector conv(m);
    for (Index j = 0; j < m; ++j)
        conv(j) = oscillator_length(spec.omega_initial(j), spec.length_unit);

    DimensionlessTdm out;
    out.axis = axis;
    out.mu0 = t.mu0;
    out.lambda = RealVector::Zero(m);
    out.lambda2 = RealMatrix::Zero(m, m);
    if (t.mu1) {
        out.has_linear = true;
        out.lambda = conv.asDiagonal() * (*t.mu1);
    }
    if (t.mu2) {
        out.has_quadratic = true;
        out.lambda2 = 0.5 * conv.asDiagonal() * (*t.mu2) * conv.asDiagonal();
    }
    return out;
}

HtRotation ht_rotation(const RealMatrix& lambda2) {
    return ht_rotation(lambda2, RealVector::Zero(lambda2.rows()));
}

HtRotation ht_rotation(const RealMatrix& lambda2, const RealVector& lambda) {
    if (lambda2.rows() != lambda2.cols())
        throw DimensionMismatch("ht_rotation: Lambda must be square");
    if (lambda.size() != lambda2.rows())
        throw DimensionMismatch("ht_rotation: lambda length mismatch");

    const Index m = lambda2.rows();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (lambda2 + lambda2.transpose()));
    if (es.info() != Eigen::Success)
        throw NumericalFailure("ht_rotation: eigen decomposition failed");

    // descending eigenvalues, canonical eigenvector signs
    std::vector<Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        return es.eigenvalues()(a) > es.eigenvalues()(b);
    });

    RealMatrix q(m, m);
    HtRotation rot;
    rot.d.resize(m);
    for (Index c = 0; c < m; ++c) {
        q.col(c) = es.eigenvectors().col(order[static_cast<std::size_t>(c)]);
        rot.d(c) = es.eigenvalues()(order[static_cast<std::size_t>(c)]);
        Index r = 0;
        while (r < m - 1 && std::abs(q(r, c)) <= 1e-12) ++r;
        if (q(r, c) < 0.0) q.col(c) *= -1.0;
    }
    rot.u = q.transpose();   // Λ = Uᵀ diag(d) U
    rot.b = rot.u * lambda;
    return rot;
}

} // namespace vibron
