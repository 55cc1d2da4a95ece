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

#include <iosfwd>
#include <vector>

#include "lindsim/hilbert.hpp"

namespace lindsim {

/// Linear map on operators of `space`, as a d²×d² matrix acting on column-stacked
/// vectors: vec(X)[i + d·j] = X(i, j), so vec(A X B) = (Bᵀ ⊗ A) vec(X).
class SuperOperator {
  public:
    SuperOperator() = default;
    SuperOperator(HilbertSpace space, ComplexMatrix matrix);

    const HilbertSpace& space() const { return space_; }
    const ComplexMatrix& matrix() const { return matrix_; }
    std::size_t dim() const { return space_.total_dim(); }

    static SuperOperator identity(const HilbertSpace& space);
    static SuperOperator zero(const HilbertSpace& space);

    /// Applies the map to an operator.
    Operator apply(const Operator& x) const;

    SuperOperator& operator+=(const SuperOperator& o);
    SuperOperator& operator-=(const SuperOperator& o);
    SuperOperator& operator*=(Complex c);

    friend SuperOperator operator+(SuperOperator a, const SuperOperator& b) { return a += b; }
    friend SuperOperator operator-(SuperOperator a, const SuperOperator& b) { return a -= b; }
    friend SuperOperator operator*(Complex c, SuperOperator a) { return a *= c; }
    /// Composition: (a * b)(X) = a(b(X)).
    friend SuperOperator operator*(const SuperOperator& a, const SuperOperator& b);

  private:
    HilbertSpace space_;
    ComplexMatrix matrix_;
};

struct Jump {
    Operator op;
    double rate = 0.0;  // 1/time
};

/// H plus (L_i, γ_i) pairs; the generator −i[H, ρ] + Σ γ_i (L_i ρ L_i† − ½{L_i†L_i, ρ}).
struct LindbladSpec {
    HilbertSpace space;
    Operator hamiltonian;
    std::vector<Jump> jumps;

    /// Checks shapes, Hermiticity of H and nonnegative rates.
    void validate(const Tolerances& tol) const;
};

ComplexVector vectorize(const Operator& x);
Operator devectorize(const ComplexVector& v, const HilbertSpace& space);

enum class HermiticityCheck { Enforce, Skip };

/// Matrix of −i[H, •] = −i(I ⊗ H − Hᵀ ⊗ I).
SuperOperator hamiltonian_superop(const Operator& h, const Tolerances& tol = {},
                                  HermiticityCheck check = HermiticityCheck::Enforce);

/// Matrix of rate·(L ρ L† − ½{L†L, ρ}).
SuperOperator dissipator(const Operator& l, double rate);

SuperOperator liouvillian(const LindbladSpec& spec, const Tolerances& tol = {});

struct CptpReport {
    double trace_defect = 0.0;      // max over matrix units |Tr Φ(E) − Tr E|
    double choi_min_eigenvalue = 0.0;
    std::size_t choi_rank = 0;      // eigenvalues above 1e-9 · largest
};

/// Diagnostics for e^{tL}; never throws on physical violations.
CptpReport check_cptp_propagator(const SuperOperator& l, double t);

/// Choi matrix Σ_ab E_ab ⊗ Φ(E_ab) of a map given by its superoperator matrix.
ComplexMatrix choi_matrix(const ComplexMatrix& map, std::size_t dim);

/// Tr L(ρ).
Complex trace_of_image(const SuperOperator& l, const Operator& rho);

/// Superoperator A ⊗ B on H_S ⊗ H_B from superoperators on each factor. The
/// column-stacking index is reshuffled so that (A ⊗ B)(X ⊗ Y) = A(X) ⊗ B(Y).
ComplexMatrix superop_tensor(const ComplexMatrix& a, std::size_t dim_a, const ComplexMatrix& b,
                             std::size_t dim_b);

/// Partial trace over the trailing factor of dimension dim_b.
ComplexMatrix partial_trace_right(const ComplexMatrix& x, std::size_t dim_a, std::size_t dim_b);

/// Writes the matrix as CSV: one row per line, entries as "re,im" pairs.
void write_superop_csv(const SuperOperator& l, std::ostream& out);

}  // namespace lindsim
