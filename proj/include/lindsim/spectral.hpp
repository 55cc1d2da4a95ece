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

#include "lindsim/superop.hpp"

namespace lindsim {

/// A nonzero eigenvalue has nonnegative real part: the steady set is not attractive.
class NotRelaxingError : public NumericError {
  public:
    using NumericError::NumericError;
};

/// The zero eigenvalue carries a nilpotent part, so no spectral projector exists.
class DegeneracyError : public NumericError {
  public:
    using NumericError::NumericError;
};

/// A bath generator whose kernel is not one-dimensional.
class UniquenessError : public NumericError {
  public:
    using NumericError::NumericError;
};

/// Present when the generator has the form 1_S ⊗ L_B with a unique bath steady state.
struct ProductStructure {
    HilbertSpace system_space;
    HilbertSpace bath_space;
    Operator rho0;          // bath steady state
    ComplexMatrix s_bath;   // reduced resolvent of L_B
    ComplexMatrix l_bath;
};

/// Spectral data of a generator L0 acting on column-stacked vectors.
///
/// p0 is the spectral projector onto Ker L0 and is stored both densely and as the
/// factorization p0 = p0_range · p0_corange (n×k times k×n), which downstream code
/// uses to avoid n×n×n products. s is the reduced resolvent (group inverse on the
/// complement), s = (L0 + P0)⁻¹ Q0, with the sign convention S L0 = L0 S = Q0.
struct SpectralData {
    ComplexMatrix p0;
    ComplexMatrix q0;
    ComplexMatrix s;
    ComplexMatrix p0_range;
    ComplexMatrix p0_corange;
    double tau_r = 0.0;  // ‖S‖
    double gap = 0.0;    // smallest |λ| over nonzero eigenvalues
    std::size_t kernel_dim = 0;
    ComplexVector eigenvalues;
    std::optional<ProductStructure> product;
};

/// Generic path through a full eigendecomposition. Throws NotRelaxingError or
/// DegeneracyError when the generator violates the relaxation assumptions.
SpectralData analyze(const ComplexMatrix& l0, const Tolerances& tol = {});
SpectralData analyze(const SuperOperator& l0, const Tolerances& tol = {});

/// Unique steady state and resolvent of a bath generator.
struct BathAnalysis {
    Operator rho0;
    SpectralData spectral;
};

BathAnalysis analyze_bath(const SuperOperator& l_bath, const Tolerances& tol = {});

/// Spectral data of 1_S ⊗ L_B on system ⊗ bath without diagonalizing the full
/// space: P0(X) = Tr_B(X) ⊗ ρ0 and S = 1_S ⊗ S_B.
SpectralData analyze_product(const SuperOperator& l_bath, const HilbertSpace& system_space,
                             const Tolerances& tol = {});

/// −∫_0^{t_max} e^{t L0} Q0 dt by composite Simpson quadrature (n_steps rounded
/// up to even). Q0 is approximated by 1 − e^{t_max L0}, so the result does not
/// depend on analyze(). Intended as a test oracle.
ComplexMatrix resolvent_integral_oracle(const ComplexMatrix& l0, double t_max, std::size_t n_steps);

/// Largest violation among the projector and resolvent identities, each relative
/// to max(1, ‖L0‖) where L0 enters.
struct SpectralIdentityReport {
    double p0_idempotent = 0.0;   // ‖P0² − P0‖
    double p0_annihilates = 0.0;  // max(‖P0 L0‖, ‖L0 P0‖) / ‖L0‖
    double s_inverts = 0.0;       // max(‖S L0 − Q0‖, ‖L0 S − Q0‖)
    double s_complement = 0.0;    // max(‖P0 S‖, ‖S P0‖) / max(1, ‖S‖)
    double worst() const;
};

SpectralIdentityReport check_spectral_identities(const ComplexMatrix& l0, const SpectralData& sd);

}  // namespace lindsim
