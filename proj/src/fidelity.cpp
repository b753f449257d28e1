#include "fidgap/fidelity.hpp"

#include <cmath>
#include <limits>

namespace fidgap {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double real_or_throw(Complex z, const char* what) {
    if (std::abs(std::imag(z)) > 1e-10) {
        throw InvariantViolation(std::string(what) + ": imaginary residue above 1e-10");
    }
    return std::real(z);
}

CMatrix projector(const CVector& psi, const ReferenceState& ref) {
    if (psi.size() != ref.shape().dQ) {
        throw DimensionMismatch("fidelity: psi does not match dQ");
    }
    return embed_Q(psi * psi.adjoint(), ref.shape());
}

}  // namespace

double fidelity_direct(const Preparation& prep, const Propagator& prop, const CVector& psi,
                       double t, const ReferenceState& ref) {
    const CMatrix state = perturbed_state(prep, ref);
    const CMatrix evolved = prop.heisenberg(t, projector(psi, ref));
    return real_or_throw((state * evolved).trace(), "fidelity_direct");
}

double fidelity_correlation(const Preparation& prep, const Propagator& prop, const CVector& psi,
                            double t, const ReferenceState& ref) {
    const CMatrix x = build_x(prep, ref);
    const CMatrix y = build_y(psi, ref);
    const double floor = real_or_throw(ref.expect(projector(psi, ref)), "fidelity_correlation");
    const CMatrix evolved = prop.heisenberg(t, y);
    return real_or_throw(gns_inner(x, evolved, ref), "fidelity_correlation") + floor;
}

double schwarz_bound(const Preparation& prep, const Propagator& prop, const CVector& psi,
                     double t, const ReferenceState& ref) {
    const CMatrix x = build_x(prep, ref);
    const CMatrix y = build_y(psi, ref);
    const double floor = real_or_throw(ref.expect(projector(psi, ref)), "schwarz_bound");
    return gns_norm(x, ref) * gns_norm(prop.heisenberg(t, y), ref) + floor;
}

double fidelity_direct(const Preparation& prep, const DynamicsSpec& spec, const CVector& psi,
                       double t, const ReferenceState& ref) {
    return fidelity_direct(prep, Propagator(spec, ref), psi, t, ref);
}

double fidelity_correlation(const Preparation& prep, const DynamicsSpec& spec, const CVector& psi,
                            double t, const ReferenceState& ref) {
    return fidelity_correlation(prep, Propagator(spec, ref), psi, t, ref);
}

double schwarz_bound(const Preparation& prep, const DynamicsSpec& spec, const CVector& psi,
                     double t, const ReferenceState& ref) {
    return schwarz_bound(prep, Propagator(spec, ref), psi, t, ref);
}

std::vector<double> gap_bound_curve(double norm_x, double norm_y, double rate, double floor,
                                    const std::vector<double>& times, bool rate_valid) {
    if (!rate_valid || rate < 0.0) {
        throw InvalidGap("gap_bound_curve: no valid decay rate");
    }
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(std::exp(-rate * t) * norm_x * norm_y + floor);
    return out;
}

std::vector<double> tracial_example_bound(int d, double lambda, const std::vector<double>& times,
                                          const ReferenceState& ref) {
    if (d < 2) throw DimensionMismatch("tracial_example_bound: d must be at least 2");
    if (lambda < 0.0) throw InvalidGap("tracial_example_bound: negative rate");
    if (!modular_trivial_on_Q(ref)) {
        throw ModularNotTrivialOnQ("tracial_example_bound: the modular flow acts nontrivially on Q");
    }
    std::vector<double> out;
    out.reserve(times.size());
    const double depth = 1.0 - 1.0 / d;
    for (double t : times) out.push_back(1.0 / d + std::exp(-lambda * t) * depth);
    return out;
}

FidelityCurve run_curve(const Model& model, const SpectralReport* report) {
    const ReferenceState& ref = model.ref;
    const Propagator prop(model.dyn, ref);

    SpectralReport local;
    if (report == nullptr && model.dyn.kind == DynKind::semigroup) {
        try {
            local = spectral_gap(model.dyn, ref, GapMode::detailed_balance);
        } catch (const NotDetailedBalance&) {
            local = spectral_gap(model.dyn, ref, GapMode::symmetrized);
        }
        report = &local;
    } else if (report == nullptr) {
        local = spectral_gap(model.dyn, ref, GapMode::symmetrized);
        report = &local;
    }

    FidelityCurve curve;
    curve.gap_available = report->valid;
    if (curve.gap_available) {
        curve.rate_used = certified_rate(*report, &curve.rate_source);
    }

    const CMatrix p_psi = projector(model.psi, ref);
    curve.floor = real_or_throw(ref.expect(p_psi), "run_curve floor");
    if (curve.floor <= 0.0 || curve.floor >= 1.0) {
        throw InvariantViolation("run_curve: omega(P_psi) outside (0, 1)");
    }

    const CMatrix x = build_x(model.prep, ref);
    const CMatrix y = build_y(model.psi, ref);
    const CMatrix state = perturbed_state(model.prep, ref);
    curve.norm_x = gns_norm(x, ref);
    curve.norm_y = gns_norm(y, ref);

    curve.times = make_time_grid(model.grid, model.dyn.kind,
                                 curve.gap_available ? curve.rate_used : 0.0);

    for (double t : curve.times) {
        const CMatrix evolved_p = prop.heisenberg(t, p_psi);
        const CMatrix evolved_y = prop.heisenberg(t, y);
        curve.f_direct.push_back(real_or_throw((state * evolved_p).trace(), "run_curve f_direct"));
        curve.f_correlation.push_back(
            real_or_throw(gns_inner(x, evolved_y, ref), "run_curve f_correlation") + curve.floor);
        curve.bound_schwarz.push_back(curve.norm_x * gns_norm(evolved_y, ref) + curve.floor);
    }

    if (curve.gap_available) {
        curve.bound_gap = gap_bound_curve(curve.norm_x, curve.norm_y, curve.rate_used,
                                          curve.floor, curve.times);
    } else {
        curve.bound_gap.assign(curve.times.size(), kNan);
    }

    // The closed-form curve applies only when the modular flow is trivial on Q
    // and the preparation targets the tracked pure state.
    const bool perfect =
        model.prep.has_target() &&
        max_abs(model.prep.target_sigma - model.psi * model.psi.adjoint()) <= 1e-8;
    if (curve.gap_available && perfect && modular_trivial_on_Q(ref)) {
        curve.bound_tracial =
            tracial_example_bound(ref.shape().dQ, curve.rate_used, curve.times, ref);
        curve.tracial_available = true;
    } else {
        curve.bound_tracial.assign(curve.times.size(), kNan);
    }
    return curve;
}

std::vector<CurveCheck> verify_curve(const FidelityCurve& curve) {
    double identity = 0.0, range = 0.0, schwarz = 0.0, chain = 0.0, floor_gap = 0.0;
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        identity = std::max(identity, std::abs(curve.f_direct[i] - curve.f_correlation[i]));
        range = std::max({range, -curve.f_direct[i], curve.f_direct[i] - 1.0});
        schwarz = std::max(schwarz, curve.f_direct[i] - curve.bound_schwarz[i]);
        if (curve.gap_available) {
            chain = std::max(chain, curve.bound_schwarz[i] - curve.bound_gap[i]);
            floor_gap = std::max(floor_gap, curve.floor - curve.bound_gap[i]);
        }
    }
    std::vector<CurveCheck> checks;
    auto push = [&checks](const std::string& name, double residual, double tol) {
        checks.push_back({name, residual, tol, residual <= tol});
    };
    push("identity f_direct vs f_correlation", identity, 1e-10);
    push("fidelity within [0,1]", range, 1e-10);
    push("f_direct below schwarz bound", schwarz, 1e-10);
    if (curve.gap_available) {
        push("schwarz below gap bound", chain, 1e-9);
        push("gap bound above floor", floor_gap, 1e-12);
    }
    return checks;
}

}  // namespace fidgap
