#include "fidgap/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "fidgap/prep.hpp"
#include "fidgap/spectral.hpp"

namespace fidgap {

// ============================================================================
// Generators and maps
// ============================================================================

CMatrix LindbladGenerator::apply(const CMatrix& x) const {
    CMatrix out = apply_dissipative(x);
    if (h_part.size() > 0) {
        out += Complex(0, 1) * (h_part * x - x * h_part);
    }
    return out;
}

CMatrix LindbladGenerator::apply_dissipative(const CMatrix& x) const {
    CMatrix out = CMatrix::Zero(x.rows(), x.cols());
    for (const Jump& j : jumps) {
        const CMatrix vdv = j.op.adjoint() * j.op;
        out += j.rate * (j.op.adjoint() * x * j.op - 0.5 * (vdv * x + x * vdv));
    }
    return out;
}

CMatrix CpMap::apply(const CMatrix& x) const {
    if (superop.size() > 0) {
        return unvec(superop * vec(x), x.rows(), x.cols());
    }
    CMatrix out = CMatrix::Zero(x.rows(), x.cols());
    for (const CMatrix& k : kraus) out += k.adjoint() * x * k;
    return out;
}

DynamicsSpec DynamicsSpec::unitary() {
    DynamicsSpec s;
    s.kind = DynKind::unitary;
    return s;
}

DynamicsSpec DynamicsSpec::from_map(CpMap m) {
    DynamicsSpec s;
    s.kind = DynKind::map;
    s.map = std::move(m);
    return s;
}

DynamicsSpec DynamicsSpec::from_generator(LindbladGenerator g, bool davies) {
    DynamicsSpec s;
    s.kind = DynKind::semigroup;
    s.gen = std::move(g);
    s.davies_built = davies;
    return s;
}

double KmsRateFamily::operator()(double nu) const {
    return g / (1.0 + std::exp(-nu));
}

// ============================================================================
// Davies construction
// ============================================================================

namespace {

struct BohrBins {
    std::vector<double> reps;        // non-negative representatives, ascending
    std::vector<double> lo, hi;      // inclusive membership windows
};

// Cluster the non-negative eigenvalue differences of K with absolute
// tolerance tau; a cluster wider than 5*tau cannot be separated.
BohrBins bin_bohr_frequencies(const RVector& eigs, double tau) {
    std::vector<double> diffs;
    diffs.reserve(eigs.size() * eigs.size());
    for (Eigen::Index a = 0; a < eigs.size(); ++a) {
        for (Eigen::Index b = 0; b < eigs.size(); ++b) {
            const double d = eigs[b] - eigs[a];
            if (d >= -0.5 * tau) diffs.push_back(std::max(d, 0.0));
        }
    }
    std::sort(diffs.begin(), diffs.end());

    BohrBins bins;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= diffs.size(); ++i) {
        if (i == diffs.size() || diffs[i] - diffs[i - 1] > tau) {
            const double lo = diffs[start];
            const double hi = diffs[i - 1];
            if (hi - lo > 5.0 * tau) {
                throw DegenerateBinning("davies_generator: Bohr frequencies cannot be separated at the binning tolerance");
            }
            double mean = 0.0;
            for (std::size_t k = start; k < i; ++k) mean += diffs[k];
            mean /= static_cast<double>(i - start);
            // The cluster containing zero is pinned at exactly zero.
            if (lo <= 0.5 * tau) mean = 0.0;
            bins.reps.push_back(mean);
            bins.lo.push_back(lo - 0.5 * tau);
            bins.hi.push_back(hi + 0.5 * tau);
            start = i;
        }
    }
    return bins;
}

}  // namespace

LindbladGenerator davies_generator(const ReferenceState& ref,
                                   const std::vector<CMatrix>& couplings,
                                   const KmsRateFamily& rates,
                                   const std::vector<double>& g_per_coupling) {
    const int n = ref.n();
    const HermEig& ke = ref.k_eig();
    const double scale = std::max(std::abs(ke.values.maxCoeff()), std::abs(ke.values.minCoeff()));
    const double tau = 1e-9 * std::max(scale, 1e-30);

    const BohrBins bins = bin_bohr_frequencies(ke.values, tau);

    // The rate family must satisfy the KMS relation on the model's frequencies.
    for (double nu : bins.reps) {
        const double fwd = rates(nu);
        const double bwd = rates(-nu);
        if (std::abs(bwd - std::exp(-nu) * fwd) > 1e-12 * std::max(fwd, 1e-30)) {
            throw InvariantViolation("davies_generator: rate family violates gamma(-nu) = exp(-nu) gamma(nu)");
        }
    }

    LindbladGenerator gen;
    gen.h_part = ref.K();

    for (std::size_t c = 0; c < couplings.size(); ++c) {
        const CMatrix& s = couplings[c];
        if (s.rows() != n || s.cols() != n) {
            throw DimensionMismatch("davies_generator: coupling does not match the algebra dimension");
        }
        if (!is_hermitian(s)) {
            throw NotHermitian("davies_generator: coupling is not Hermitian");
        }
        const double g_scale =
            g_per_coupling.empty() ? 1.0 : g_per_coupling.at(c) / std::max(rates.g, 1e-300);

        // Coupling in the K eigenbasis; S(nu)_{ab} = S~_{ab} on eps_b - eps_a = nu.
        const CMatrix st = ke.vectors.adjoint() * s * ke.vectors;
        for (std::size_t bi = 0; bi < bins.reps.size(); ++bi) {
            const double nu = bins.reps[bi];
            CMatrix comp = CMatrix::Zero(n, n);
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    const double d = ke.values[b] - ke.values[a];
                    if (d >= bins.lo[bi] && d <= bins.hi[bi]) comp(a, b) = st(a, b);
                }
            }
            if (max_abs(comp) < 1e-14 * std::max(max_abs(st), 1e-300)) continue;
            const CMatrix s_nu = ke.vectors * comp * ke.vectors.adjoint();
            if (nu == 0.0) {
                gen.jumps.push_back({s_nu, g_scale * rates(0.0)});
            } else {
                gen.jumps.push_back({s_nu, g_scale * rates(nu)});
                gen.jumps.push_back({s_nu.adjoint(), g_scale * rates(-nu)});
            }
        }
    }
    return gen;
}

// ============================================================================
// Superoperators (ordinary column-major vec representation)
// ============================================================================

CMatrix superop_of_kraus(const std::vector<CMatrix>& kraus) {
    if (kraus.empty()) throw DimensionMismatch("superop_of_kraus: empty Kraus list");
    const Eigen::Index n = kraus.front().rows();
    CMatrix s = CMatrix::Zero(n * n, n * n);
    for (const CMatrix& k : kraus) {
        s += kron(k.transpose(), k.adjoint());
    }
    return s;
}

CMatrix superop_of_conjugation(const CMatrix& u) {
    return kron(u.conjugate(), u);
}

CMatrix superop_of_generator(const LindbladGenerator& gen, bool dissipative_only) {
    Eigen::Index n = 0;
    if (gen.h_part.size() > 0) {
        n = gen.h_part.rows();
    } else if (!gen.jumps.empty()) {
        n = gen.jumps.front().op.rows();
    } else {
        throw DimensionMismatch("superop_of_generator: empty generator");
    }
    const CMatrix id = CMatrix::Identity(n, n);
    CMatrix s = CMatrix::Zero(n * n, n * n);
    if (!dissipative_only && gen.h_part.size() > 0) {
        s += Complex(0, 1) * (kron(id, gen.h_part) - kron(gen.h_part.transpose(), id));
    }
    for (const Jump& j : gen.jumps) {
        const CMatrix vdv = j.op.adjoint() * j.op;
        s += j.rate * (kron(j.op.transpose(), j.op.adjoint()) -
                       0.5 * (kron(id, vdv) + kron(vdv.transpose(), id)));
    }
    return s;
}

CMatrix choi_of_superop(const CMatrix& superop, int n) {
    if (superop.rows() != static_cast<Eigen::Index>(n) * n) {
        throw DimensionMismatch("choi_of_superop: superoperator does not match n^2");
    }
    CMatrix choi(n * n, n * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // Image of the matrix unit E_ij.
            const CMatrix img = unvec(superop.col(static_cast<Eigen::Index>(j) * n + i), n, n);
            choi.block(i * n, j * n, n, n) = img;
        }
    }
    return choi;
}

// ============================================================================
// Detailed balance
// ============================================================================

DetailedBalanceReport detailed_balance_check_superop(const CMatrix& superop,
                                                     const ReferenceState& ref,
                                                     double tol) {
    const CMatrix m = gns_similarity(superop, ref);
    const int n = ref.n();
    const CMatrix id = CMatrix::Identity(n, n);
    const CMatrix delta_k =
        Complex(0, 1) * (kron(id, ref.K()) - kron(ref.K().transpose(), id));
    const CMatrix mk = gns_similarity(delta_k, ref);

    DetailedBalanceReport rep;
    rep.generator_norm = m.norm();
    rep.selfadjoint_residual = (m - m.adjoint()).norm();
    rep.commutation_residual = (m * mk - mk * m).norm();
    const double bar = tol * std::max(rep.generator_norm, 1e-300);
    rep.selfadjoint_pass = rep.selfadjoint_residual <= bar;
    rep.commutation_pass = rep.commutation_residual <= bar;
    return rep;
}

DetailedBalanceReport detailed_balance_check(const LindbladGenerator& gen,
                                             const ReferenceState& ref, double tol) {
    if (gen.jumps.empty()) {
        DetailedBalanceReport rep;
        rep.selfadjoint_pass = true;
        rep.commutation_pass = true;
        return rep;
    }
    return detailed_balance_check_superop(superop_of_generator(gen, true), ref, tol);
}

// ============================================================================
// Propagation
// ============================================================================

Propagator::Propagator(const DynamicsSpec& spec, const ReferenceState& ref)
    : spec_(spec), ref_(ref) {
    if (spec_.kind == DynKind::semigroup) {
        superop_ = superop_of_generator(spec_.gen, false);
        has_h_ = spec_.gen.h_part.size() > 0;

        // Hermitian GNS route: dissipative part self-adjoint and commuting
        // with the Hamiltonian term.
        if (!spec_.gen.jumps.empty()) {
            const CMatrix s_dis = superop_of_generator(spec_.gen, true);
            const CMatrix m_dis = gns_similarity(s_dis, ref_);
            const double scale = std::max(m_dis.norm(), 1e-300);
            bool ok = (m_dis - m_dis.adjoint()).norm() <= 1e-12 * scale;
            if (ok && has_h_) {
                const CMatrix s_h = superop_ - s_dis;
                ok = (s_h * s_dis - s_dis * s_h).norm() <=
                     1e-12 * scale * std::max(s_h.norm(), 1.0);
            }
            if (ok) {
                factorized_ = true;
                dis_eig_ = herm_eig(0.5 * (m_dis + m_dis.adjoint()), 1e-6);
                if (has_h_) hc_eig_ = herm_eig(spec_.gen.h_part);
            }
        } else if (has_h_) {
            factorized_ = true;
            hc_eig_ = herm_eig(spec_.gen.h_part);
        }
    } else if (spec_.kind == DynKind::map) {
        if (spec_.map.superop.size() == 0 && spec_.map.kraus.empty()) {
            throw DimensionMismatch("Propagator: map spec has no Kraus list or superoperator");
        }
    }
}

int Propagator::map_steps(double t) const {
    if (t < -1e-9) throw NegativeTime("evolve: negative time for a single-step map");
    const long long steps = std::llround(t);
    if (std::abs(t - static_cast<double>(steps)) > 1e-9) {
        throw InvalidTime("evolve: single-step maps evolve over integer times");
    }
    return static_cast<int>(std::max(steps, 0LL));
}

CMatrix Propagator::heisenberg(double t, const CMatrix& x) const {
    const int n = ref_.n();
    if (x.rows() != n || x.cols() != n) {
        throw DimensionMismatch("evolve: observable does not match the algebra dimension");
    }
    switch (spec_.kind) {
        case DynKind::unitary:
            return modular_flow(x, Complex(t, 0), ref_);
        case DynKind::map: {
            CMatrix out = x;
            const int steps = map_steps(t);
            for (int i = 0; i < steps; ++i) out = spec_.map.apply(out);
            return out;
        }
        case DynKind::semigroup: {
            if (t < 0.0) throw NegativeTime("evolve: negative time for a semigroup");
            if (t == 0.0) return x;
            if (!factorized_) {
                return unvec(expm_dense(t * superop_) * vec(x), n, n);
            }
            CMatrix out = x;
            if (!spec_.gen.jumps.empty()) {
                // exp(t L_dis) through its Hermitian GNS eigensystem.
                CVector v = dis_eig_.vectors.adjoint() * vec(out * ref_.omega_half());
                for (Eigen::Index i = 0; i < v.size(); ++i) {
                    v[i] *= std::exp(t * dis_eig_.values[i]);
                }
                out = unvec(CVector(dis_eig_.vectors * v), n, n) * ref_.omega_inv_half();
            }
            if (has_h_) {
                CVector phase(n);
                for (int i = 0; i < n; ++i) phase[i] = std::exp(Complex(0, t) * hc_eig_.values[i]);
                const CMatrix u_t = hc_eig_.vectors * phase.asDiagonal() * hc_eig_.vectors.adjoint();
                out = u_t * out * u_t.adjoint();
            }
            return out;
        }
    }
    throw Error("evolve: unreachable");
}

CMatrix Propagator::schrodinger(double t, const CMatrix& rho) const {
    const int n = ref_.n();
    if (rho.rows() != n || rho.cols() != n) {
        throw DimensionMismatch("schrodinger: state does not match the algebra dimension");
    }
    switch (spec_.kind) {
        case DynKind::unitary:
            return modular_flow(rho, Complex(-t, 0), ref_);
        case DynKind::map: {
            CMatrix out = rho;
            const int steps = map_steps(t);
            for (int i = 0; i < steps; ++i) {
                if (spec_.map.superop.size() > 0) {
                    out = unvec(spec_.map.superop.adjoint() * vec(out), n, n);
                } else {
                    CMatrix next = CMatrix::Zero(n, n);
                    for (const CMatrix& k : spec_.map.kraus) next += k * out * k.adjoint();
                    out = next;
                }
            }
            return out;
        }
        case DynKind::semigroup: {
            if (t < 0.0) throw NegativeTime("schrodinger: negative time for a semigroup");
            if (t == 0.0) return rho;
            return unvec(expm_dense(t * superop_.adjoint()) * vec(rho), n, n);
        }
    }
    throw Error("schrodinger: unreachable");
}

CMatrix evolve(const DynamicsSpec& spec, double t, const CMatrix& x, const ReferenceState& ref) {
    return Propagator(spec, ref).heisenberg(t, x);
}

CMatrix evolve_dense(const DynamicsSpec& spec, double t, const CMatrix& x,
                     const ReferenceState& ref) {
    if (spec.kind != DynKind::semigroup) {
        throw DimensionMismatch("evolve_dense: only semigroup specs have a generator");
    }
    if (t < 0.0) throw NegativeTime("evolve_dense: negative time");
    const int n = ref.n();
    const CMatrix s = superop_of_generator(spec.gen, false);
    return unvec(expm_dense(t * s) * vec(x), n, n);
}

CMatrix evolve_factorized(const LindbladGenerator& gen, double t, const CMatrix& x,
                          const ReferenceState& ref) {
    if (t < 0.0) throw NegativeTime("evolve_factorized: negative time");
    const int n = ref.n();
    const CMatrix s_dis = superop_of_generator(gen, true);
    const CMatrix m = gns_similarity(s_dis, ref);

    // exp(t L_dis) through the Hermitian GNS representation when available.
    CMatrix em;
    if (max_abs(m - m.adjoint()) <= 1e-9 * std::max(max_abs(m), 1e-300)) {
        em = mat_func(m, [t](double lam) { return std::exp(t * lam); }, 0.0, 1e-8);
    } else {
        em = expm_dense(t * m);
    }
    const CMatrix e_dis = gns_similarity_inverse(em, ref);
    const CMatrix y = unvec(e_dis * vec(x), n, n);
    return modular_flow(y, Complex(t, 0), ref);
}

CMatrix reduced_dynamics(const DynamicsSpec& spec, const Preparation& prep, double t,
                         const CMatrix& sigma, const ReferenceState& ref) {
    CMatrix initial;
    switch (prep.kind) {
        case PrepKind::single:
            initial = perturbed_state(single_perturbation(QubitTarget::from_sigma(sigma), ref), ref);
            break;
        case PrepKind::replacement:
            initial = perturbed_state(replacement_operation(QubitTarget::from_sigma(sigma), ref), ref);
            break;
        default:
            throw UnsupportedAssignment("reduced_dynamics: preparation kind has no assignment map");
    }
    const CMatrix evolved = Propagator(spec, ref).schrodinger(t, initial);
    return partial_trace_B(evolved, ref.shape().dQ, ref.shape().dB);
}

}  // namespace fidgap
