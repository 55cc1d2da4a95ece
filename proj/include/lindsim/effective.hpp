// Copyright 2026 The lindsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lindsim/spectral.hpp"

namespace lindsim {

/// The projected first-order term P0 K P0 does not vanish, so the second-order
/// generator alone does not describe the slow dynamics.
class FirstOrderError : public ValidationError {
  public:
    FirstOrderError(const std::string& what, double norm) : ValidationError(what), norm_(norm) {}
    double norm() const { return norm_; }

  private:
    double norm_;
};

/// Tr_B(K (1 ⊗ ρ0)) as an operator on the system.
Operator first_order_hamiltonian(const Operator& k, const Operator& rho0,
                                 const HilbertSpace& system_space);

enum class FirstOrderPolicy { Reject, Ignore };

/// −P0 K S K P0 with K = −i[k, •]. This is the reference implementation of the
/// second-order generator; the closed forms below are checked against it.
///
/// Throws FirstOrderError when ‖P0 K P0‖ exceeds oracle_abs·max(1, 2‖k‖), unless
/// the policy is Ignore (the caller then supplies the first-order term itself).
SuperOperator effective_generator_generic(const SuperOperator& l0, const Operator& k,
                                          const SpectralData& spectral, const Tolerances& tol = {},
                                          FirstOrderPolicy policy = FirstOrderPolicy::Reject);

/// effective_generator_generic(k) + P0 (−i[k1, •]) P0. Both k and k1 act on the full space.
SuperOperator effective_with_extra(const SuperOperator& l0, const Operator& k, const Operator& k1,
                                   const SpectralData& spectral, const Tolerances& tol = {});

/// P0 (−i[h, •]) P0 on the full space.
SuperOperator projected_hamiltonian(const Operator& h, const SpectralData& spectral);

struct GammaMatrices {
    ComplexMatrix a;  // Γ^(A)_ij = −Tr(S_B(B_i ρ0) B_j)
    ComplexMatrix b;  // Γ^(B)_ij = −Tr(S_B(ρ0 B_i) B_j)
    Operator rho0;
};

GammaMatrices gamma_matrices(std::span<const Operator> b_ops, const SuperOperator& l_bath,
                             const Tolerances& tol = {});

/// System-sector generator for K = Σ L_i ⊗ B_i:
///   Σ_ij Γ^(A)_ij (L_i ρ L_j − L_j L_i ρ) + Γ^(B)_ij (L_j ρ L_i − ρ L_i L_j).
/// Valid without Hermiticity assumptions on L_i or B_i.
SuperOperator effective_from_gamma(std::span<const Operator> l_ops, const ComplexMatrix& gamma_a,
                                   const ComplexMatrix& gamma_b);

/// Lamb-shift Hamiltonian (1/2i) Σ_ij (Γ^(A) − Γ^(A)†)_ij L_j L_i.
Operator gamma_hamiltonian(std::span<const Operator> l_ops, const ComplexMatrix& gamma_a);

/// Form valid for Hermitian L_i and B_i:
///   −i[H_eff, ρ] + Σ_ij 2Γ_ij (L_i ρ L_j − ½{L_j L_i, ρ}),  Γ = (Γ^(A) + Γ^(A)†)/2.
SuperOperator effective_hermitian_form(std::span<const Operator> l_ops, const ComplexMatrix& gamma_a);

/// Σ_i dissipator(L_i, 4 g_i² τ_i).
SuperOperator prop3_closed_form(std::span<const Operator> l_ops, std::span<const double> couplings,
                                std::span<const double> damping_times);

struct SystemReduction {
    SuperOperator system;
    double residual = 0.0;  // max over matrix units E of ‖L(E ⊗ ρ0) − L^(S)(E) ⊗ ρ0‖_F
};

/// L^(S)(E) = Tr_B(L_full(E ⊗ ρ0)).
SystemReduction reduce_to_system(const SuperOperator& l_full, const Operator& rho0,
                                 const HilbertSpace& system_space);

/// X ↦ L^(S)(Tr_B X) ⊗ ρ0, the full-space form of a system-sector generator.
SuperOperator lift_to_steady_sector(const SuperOperator& l_sys, const Operator& rho0);

struct SignedJump {
    Operator op;  // unit Hilbert–Schmidt norm
    double rate = 0.0;
};

struct GksDecomposition {
    Operator hamiltonian;            // traceless
    std::vector<SignedJump> jumps;   // rates may be negative
    ComplexMatrix kossakowski;       // in the normalized traceless Hermitian basis
    double residual = 0.0;           // ‖rebuilt − input‖_F
    bool is_generator = false;       // residual within tolerance
    bool is_lindblad = false;        // additionally all rates ≥ −psd_abs

    /// Throws ValidationError when a rate is negative beyond psd_abs.
    LindbladSpec to_spec() const;
};

/// Canonical Hamiltonian + Kossakowski decomposition of a trace-annihilating,
/// Hermiticity-preserving generator. Jumps with |rate| below psd_abs·max(1, max|rate|)
/// are dropped.
GksDecomposition gks_decompose(const SuperOperator& l_sys, const Tolerances& tol = {});

/// K = Σ_α L_α ⊗ B_α with {B_α} the orthonormal Hermitian bath basis; for Hermitian K
/// every L_α is Hermitian. Terms with ‖L_α‖_F ≤ drop_below are omitted.
struct CouplingTerms {
    std::vector<Operator> l_ops;
    std::vector<Operator> b_ops;
};

CouplingTerms hermitian_coupling_terms(const Operator& k, const HilbertSpace& system_space,
                                       const HilbertSpace& bath_space, double drop_below = 0.0);

/// Second-order generator of a coupling K on system ⊗ bath with L0 = 1_S ⊗ L_B.
/// The Γ matrices are taken in the Hermitian decomposition of K, so is_lindblad
/// reflects positivity of Γ.
struct EffectiveGenerator {
    SuperOperator full;            // −P0 K S K P0 on system ⊗ bath
    SuperOperator system_sector;   // reduce_to_system(full)
    double factorization_residual = 0.0;
    CouplingTerms terms;
    ComplexMatrix gamma_a;
    ComplexMatrix gamma_b;
    ComplexMatrix gamma;           // (Γ^(A) + Γ^(A)†)/2
    Operator h_eff;
    bool is_lindblad = false;
    double gamma_min_eig = 0.0;
};

EffectiveGenerator build_effective(const Operator& k, const SuperOperator& l_bath,
                                   const HilbertSpace& system_space, const Tolerances& tol = {});

/// Orthonormal Hermitian basis of d×d matrices; element 0 is 1/√d.
std::vector<ComplexMatrix> hermitian_basis(std::size_t dim);

}  // namespace lindsim
