#pragma once

#include <string>
#include <vector>

#include "fidgap/model.hpp"
#include "fidgap/spectral.hpp"

namespace fidgap {

// Fidelity and bound curves on a shared time grid. Unavailable bounds are
// filled with NaN and flagged.
struct FidelityCurve {
    std::vector<double> times;
    std::vector<double> f_direct;
    std::vector<double> f_correlation;
    std::vector<double> bound_schwarz;
    std::vector<double> bound_gap;
    std::vector<double> bound_tracial;
    bool gap_available = false;
    bool tracial_available = false;
    double floor = 0.0;   // omega(P_psi), the large-time limit
    double norm_x = 0.0;
    double norm_y = 0.0;
    std::string rate_source;  // "lambda" or "gamma" when a certificate exists
    double rate_used = 0.0;
};

// F = tr(omega' Lambda_t(P_psi)); the imaginary residue must stay below 1e-10.
double fidelity_direct(const Preparation& prep, const Propagator& prop, const CVector& psi,
                       double t, const ReferenceState& ref);

// F = <x, Lambda_t(y)>_omega + omega(P_psi); must reproduce fidelity_direct.
double fidelity_correlation(const Preparation& prep, const Propagator& prop, const CVector& psi,
                            double t, const ReferenceState& ref);

// ||x|| ||Lambda_t(y)|| + omega(P_psi).
double schwarz_bound(const Preparation& prep, const Propagator& prop, const CVector& psi,
                     double t, const ReferenceState& ref);

// Convenience overloads constructing the propagator per call.
double fidelity_direct(const Preparation& prep, const DynamicsSpec& spec, const CVector& psi,
                       double t, const ReferenceState& ref);
double fidelity_correlation(const Preparation& prep, const DynamicsSpec& spec, const CVector& psi,
                            double t, const ReferenceState& ref);
double schwarz_bound(const Preparation& prep, const DynamicsSpec& spec, const CVector& psi,
                     double t, const ReferenceState& ref);

// exp(-rate t) ||x|| ||y|| + floor, pointwise; InvalidGap when no certificate.
std::vector<double> gap_bound_curve(double norm_x, double norm_y, double rate, double floor,
                                    const std::vector<double>& times, bool rate_valid = true);

// Closed form 1/d + exp(-lambda t)(1 - 1/d); requires the modular flow to be
// trivial on Q (ModularNotTrivialOnQ otherwise).
std::vector<double> tracial_example_bound(int d, double lambda, const std::vector<double>& times,
                                          const ReferenceState& ref);

// Assemble every curve on one grid. A precomputed spectral report may be
// passed in; otherwise one is computed (detailed balance mode first, falling
// back to the symmetrized mode).
FidelityCurve run_curve(const Model& model, const SpectralReport* report = nullptr);

// Named residual checks of the curve invariants (identity, ordering, range).
struct CurveCheck {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};
std::vector<CurveCheck> verify_curve(const FidelityCurve& curve);

}  // namespace fidgap
