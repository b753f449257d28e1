#pragma once

#include <functional>
#include <vector>

#include "fidgap/algebra.hpp"

namespace fidgap {

// One jump operator with its nonnegative rate.
struct Jump {
    CMatrix op;
    double rate = 0.0;
};

// Heisenberg-picture Lindblad generator
//   L(X) = i[H_c, X] + sum_V rate_V (V^dag X V - 1/2 {V^dag V, X}).
// The jump part alone is the dissipative slot L_dis.
struct LindbladGenerator {
    CMatrix h_part;  // Hermitian; empty means zero
    std::vector<Jump> jumps;

    CMatrix apply(const CMatrix& x) const;
    CMatrix apply_dissipative(const CMatrix& x) const;
};

// One-shot CP identity-preserving map, Kraus-backed or superoperator-backed.
// The Heisenberg action is Lambda(b) = sum_j k_j^dag b k_j, respectively
// unvec(superop * vec(b)).
struct CpMap {
    std::vector<CMatrix> kraus;
    CMatrix superop;  // ordinary column-major vec representation; empty unless set
    bool unital = false;
    bool omega_invariant = false;

    CMatrix apply(const CMatrix& x) const;
};

enum class DynKind { unitary, map, semigroup };

// The three dynamics cases under one roof: the modular (unitary) flow, a
// single-step CP map iterated over integer times, and a Lindblad semigroup.
struct DynamicsSpec {
    DynKind kind = DynKind::unitary;
    CpMap map;               // kind == map
    LindbladGenerator gen;   // kind == semigroup
    bool davies_built = false;

    static DynamicsSpec unitary();
    static DynamicsSpec from_map(CpMap m);
    static DynamicsSpec from_generator(LindbladGenerator g, bool davies = false);
};

// KMS-consistent rate family gamma(nu) = g / (1 + exp(-nu)), which satisfies
// gamma(-nu) = exp(-nu) gamma(nu).
struct KmsRateFamily {
    double g = 1.0;
    double operator()(double nu) const;
};

// Davies construction: Fourier components S(nu) of each coupling over the
// eigenprojections of K, one jump per Bohr frequency bin, rates from the KMS
// family. Per-coupling strength overrides are optional.
LindbladGenerator davies_generator(const ReferenceState& ref,
                                   const std::vector<CMatrix>& couplings,
                                   const KmsRateFamily& rates,
                                   const std::vector<double>& g_per_coupling = {});

// Ordinary (column-major vec) superoperator builders for the Heisenberg action.
CMatrix superop_of_kraus(const std::vector<CMatrix>& kraus);
CMatrix superop_of_conjugation(const CMatrix& u);  // X -> U X U^dag
CMatrix superop_of_generator(const LindbladGenerator& gen, bool dissipative_only);

// Choi matrix of the Heisenberg action encoded by an ordinary superoperator.
CMatrix choi_of_superop(const CMatrix& superop, int n);

// Residuals of the detailed balance structure in the GNS representation:
// commutation with the modular generator and self-adjointness of L_dis.
struct DetailedBalanceReport {
    double commutation_residual = 0.0;
    double selfadjoint_residual = 0.0;
    double generator_norm = 0.0;  // Frobenius norm of the GNS matrix of L_dis
    bool commutation_pass = false;
    bool selfadjoint_pass = false;

    bool pass() const { return commutation_pass && selfadjoint_pass; }
};

DetailedBalanceReport detailed_balance_check(const LindbladGenerator& gen,
                                             const ReferenceState& ref,
                                             double tol = 1e-9);
// Same residuals for an arbitrary ordinary superoperator in the dissipative
// slot (used to flag Hamiltonian terms smuggled into it).
DetailedBalanceReport detailed_balance_check_superop(const CMatrix& superop,
                                                     const ReferenceState& ref,
                                                     double tol = 1e-9);

// Per-model propagator. Semigroup exponentials go through the Hermitian GNS
// representation of the dissipative part whenever it exists and commutes with
// the Hamiltonian term (one eigensolve, cheap per time); otherwise through the
// dense Taylor exponential of the full superoperator.
class Propagator {
public:
    Propagator(const DynamicsSpec& spec, const ReferenceState& ref);

    // Heisenberg evolution Lambda_t(X).
    CMatrix heisenberg(double t, const CMatrix& x) const;
    // Schroedinger evolution Lambda*_t(rho), the trace-pairing adjoint.
    CMatrix schrodinger(double t, const CMatrix& rho) const;

    const DynamicsSpec& spec() const { return spec_; }
    bool factorized() const { return factorized_; }

private:
    int map_steps(double t) const;

    const DynamicsSpec spec_;
    const ReferenceState& ref_;
    CMatrix superop_;        // semigroup only; ordinary representation
    bool factorized_ = false;
    HermEig dis_eig_;        // eigensystem of the GNS matrix of the jump part
    HermEig hc_eig_;         // eigensystem of the Hamiltonian part
    bool has_h_ = false;
};

CMatrix evolve(const DynamicsSpec& spec, double t, const CMatrix& x, const ReferenceState& ref);

// Heisenberg evolution by dense Taylor exponentiation of the full
// superoperator, regardless of any available Hermitian representation.
CMatrix evolve_dense(const DynamicsSpec& spec, double t, const CMatrix& x,
                     const ReferenceState& ref);

// Detailed-balance factorization route tau_t o exp(t L_dis); exact when L_dis
// commutes with the modular generator (Davies case). Kept separate from
// Propagator so the two routes can be compared.
CMatrix evolve_factorized(const LindbladGenerator& gen, double t, const CMatrix& x,
                          const ReferenceState& ref);

// Schroedinger-picture reduced dynamics through the assignment map of the
// preparation: Gamma*_t(sigma) = tr_B(Lambda*_t(omega'(sigma))).
struct Preparation;  // from prep.hpp
CMatrix reduced_dynamics(const DynamicsSpec& spec, const Preparation& prep, double t,
                         const CMatrix& sigma, const ReferenceState& ref);

}  // namespace fidgap
