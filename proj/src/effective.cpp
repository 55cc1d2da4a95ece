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

#include "lindsim/effective.hpp"

#include <cmath>
#include <string>

namespace lindsim {

namespace {

struct SectorMaps {
    ComplexMatrix embed;    // vec(E) ↦ vec(E ⊗ ρ0)
    ComplexMatrix trace_b;  // vec(X) ↦ vec(Tr_B X)
};

SectorMaps sector_maps(std::size_t system_dim, const Operator& rho0) {
    const auto ds = static_cast<Eigen::Index>(system_dim);
    const auto db = static_cast<Eigen::Index>(rho0.dim());
    const Eigen::Index n = ds * db;
    const ComplexMatrix& rho = rho0.matrix();
    SectorMaps maps{ComplexMatrix::Zero(n * n, ds * ds), ComplexMatrix::Zero(ds * ds, n * n)};
    for (Eigen::Index a = 0; a < ds; ++a) {
        for (Eigen::Index b = 0; b < ds; ++b) {
            const Eigen::Index e = a + ds * b;
            for (Eigen::Index i = 0; i < db; ++i) {
                for (Eigen::Index j = 0; j < db; ++j) {
                    maps.embed((a * db + i) + n * (b * db + j), e) = rho(i, j);
                }
                maps.trace_b(e, (a * db + i) + n * (b * db + i)) = 1.0;
            }
        }
    }
    return maps;
}

void require_split(const HilbertSpace& full, const HilbertSpace& system, const HilbertSpace& bath) {
    if (full.total_dim() != system.total_dim() * bath.total_dim()) {
        throw DimensionError("dimension of the full space is not system x bath");
    }
}

// −i[h, •] without the Hermiticity check, for internal composition.
ComplexMatrix commutator_matrix(const ComplexMatrix& h) {
    const Eigen::Index d = h.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    return -kI * (kron(id, h) - kron(h.transpose(), id));
}

void require_same_space(std::span<const Operator> ops, const char* what) {
    for (std::size_t i = 1; i < ops.size(); ++i) {
        if (!(ops[i].space() == ops[0].space())) {
            throw DimensionError(std::string(what) + ": operators act on different spaces");
        }
    }
}

}  // namespace

Operator first_order_hamiltonian(const Operator& k, const Operator& rho0,
                                 const HilbertSpace& system_space) {
    const std::size_t ds = system_space.total_dim();
    const std::size_t db = rho0.dim();
    if (k.dim() != ds * db) {
        throw DimensionError("first_order_hamiltonian: K has dimension " + std::to_string(k.dim()) +
                             ", expected " + std::to_string(ds * db));
    }
    const auto dse = static_cast<Eigen::Index>(ds);
    const ComplexMatrix weighted = k.matrix() * kron(ComplexMatrix::Identity(dse, dse), rho0.matrix());
    return {system_space, partial_trace_right(weighted, ds, db)};
}

namespace {

SuperOperator second_order(const HilbertSpace& space, const Operator& k, const SpectralData& spectral,
                           const Tolerances& tol, FirstOrderPolicy policy) {
    const auto n2 = static_cast<Eigen::Index>(space.total_dim() * space.total_dim());
    if (spectral.p0_range.rows() != n2 || spectral.s.rows() != n2) {
        throw DimensionError("effective_generator_generic: spectral data does not match L0");
    }
    const ComplexMatrix& range = spectral.p0_range;
    const ComplexMatrix& corange = spectral.p0_corange;
    const SuperOperator kh = hamiltonian_superop(k, tol);

    const ComplexMatrix k_range = kh.matrix() * range;
    if (policy == FirstOrderPolicy::Reject) {
        const ComplexMatrix first = range * (corange * k_range) * corange;
        const double first_norm = first.norm();
        const double limit = tol.oracle_abs * std::max(1.0, 2.0 * spectral_norm(k.matrix()));
        if (first_norm > limit) {
            throw FirstOrderError("effective_generator_generic: P0 K P0 does not vanish (norm " +
                                      std::to_string(first_norm) + ")",
                                  first_norm);
        }
    }
    const ComplexMatrix core = corange * (kh.matrix() * (spectral.s * k_range));
    ComplexMatrix full = -(range * core * corange);
    return {space, std::move(full)};
}

}  // namespace

SuperOperator effective_generator_generic(const SuperOperator& l0, const Operator& k,
                                          const SpectralData& spectral, const Tolerances& tol,
                                          FirstOrderPolicy policy) {
    if (!(k.space() == l0.space())) {
        throw DimensionError("effective_generator_generic: K and L0 act on different spaces");
    }
    return second_order(l0.space(), k, spectral, tol, policy);
}

SuperOperator projected_hamiltonian(const Operator& h, const SpectralData& spectral) {
    const ComplexMatrix& range = spectral.p0_range;
    const ComplexMatrix& corange = spectral.p0_corange;
    ComplexMatrix m = range * (corange * (commutator_matrix(h.matrix()) * range)) * corange;
    return {h.space(), std::move(m)};
}

SuperOperator effective_with_extra(const SuperOperator& l0, const Operator& k, const Operator& k1,
                                   const SpectralData& spectral, const Tolerances& tol) {
    if (!(k1.space() == l0.space())) {
        throw DimensionError("effective_with_extra: K1 and L0 act on different spaces");
    }
    if (!k1.is_hermitian(tol.hermiticity_abs)) {
        throw ValidationError("effective_with_extra: K1 is not Hermitian");
    }
    return effective_generator_generic(l0, k, spectral, tol) + projected_hamiltonian(k1, spectral);
}

GammaMatrices gamma_matrices(std::span<const Operator> b_ops, const SuperOperator& l_bath,
                             const Tolerances& tol) {
    for (const auto& b : b_ops) {
        if (!(b.space() == l_bath.space())) {
            throw DimensionError("gamma_matrices: B operator does not act on the bath space");
        }
    }
    const BathAnalysis bath = analyze_bath(l_bath, tol);
    const auto m = static_cast<Eigen::Index>(b_ops.size());
    const ComplexMatrix& rho = bath.rho0.matrix();
    const ComplexMatrix& sb = bath.spectral.s;
    GammaMatrices g{ComplexMatrix::Zero(m, m), ComplexMatrix::Zero(m, m), bath.rho0};
    const HilbertSpace& space = l_bath.space();
    for (Eigen::Index i = 0; i < m; ++i) {
        const ComplexMatrix& bi = b_ops[static_cast<std::size_t>(i)].matrix();
        const Operator left = devectorize(sb * vectorize(Operator(space, bi * rho)), space);
        const Operator right = devectorize(sb * vectorize(Operator(space, rho * bi)), space);
        for (Eigen::Index j = 0; j < m; ++j) {
            const ComplexMatrix& bj = b_ops[static_cast<std::size_t>(j)].matrix();
            g.a(i, j) = -(left.matrix() * bj).trace();
            g.b(i, j) = -(right.matrix() * bj).trace();
        }
    }
    return g;
}

SuperOperator effective_from_gamma(std::span<const Operator> l_ops, const ComplexMatrix& gamma_a,
                                   const ComplexMatrix& gamma_b) {
    const auto m = static_cast<Eigen::Index>(l_ops.size());
    if (gamma_a.rows() != m || gamma_a.cols() != m || gamma_b.rows() != m || gamma_b.cols() != m) {
        throw DimensionError("effective_from_gamma: Γ matrices do not match the number of operators");
    }
    if (l_ops.empty()) throw ValidationError("effective_from_gamma: empty operator list");
    require_same_space(l_ops, "effective_from_gamma");
    const HilbertSpace& space = l_ops[0].space();
    const auto d = static_cast<Eigen::Index>(space.total_dim());
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    ComplexMatrix out = ComplexMatrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < m; ++i) {
        const ComplexMatrix& li = l_ops[static_cast<std::size_t>(i)].matrix();
        for (Eigen::Index j = 0; j < m; ++j) {
            const ComplexMatrix& lj = l_ops[static_cast<std::size_t>(j)].matrix();
            const Complex ga = gamma_a(i, j);
            const Complex gb = gamma_b(i, j);
            if (ga != Complex(0.0)) {
                // L_i ρ L_j − L_j L_i ρ
                out += ga * (kron(lj.transpose(), li) - kron(id, lj * li));
            }
            if (gb != Complex(0.0)) {
                // L_j ρ L_i − ρ L_i L_j
                out += gb * (kron(li.transpose(), lj) - kron((li * lj).transpose(), id));
            }
        }
    }
    return {space, std::move(out)};
}

Operator gamma_hamiltonian(std::span<const Operator> l_ops, const ComplexMatrix& gamma_a) {
    if (l_ops.empty()) throw ValidationError("gamma_hamiltonian: empty operator list");
    require_same_space(l_ops, "gamma_hamiltonian");
    const ComplexMatrix anti = gamma_a - gamma_a.adjoint();
    Operator h = Operator::zero(l_ops[0].space());
    for (std::size_t i = 0; i < l_ops.size(); ++i) {
        for (std::size_t j = 0; j < l_ops.size(); ++j) {
            const Complex c = anti(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) / (2.0 * kI);
            h += c * (l_ops[j] * l_ops[i]);
        }
    }
    return h;
}

SuperOperator effective_hermitian_form(std::span<const Operator> l_ops, const ComplexMatrix& gamma_a) {
    const auto m = static_cast<Eigen::Index>(l_ops.size());
    if (gamma_a.rows() != m || gamma_a.cols() != m) {
        throw DimensionError("effective_hermitian_form: Γ^(A) does not match the number of operators");
    }
    const Operator h = gamma_hamiltonian(l_ops, gamma_a);
    const ComplexMatrix gamma = 0.5 * (gamma_a + gamma_a.adjoint());
    const auto d = static_cast<Eigen::Index>(h.dim());
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    ComplexMatrix out = commutator_matrix(h.matrix());
    for (Eigen::Index i = 0; i < m; ++i) {
        const ComplexMatrix& li = l_ops[static_cast<std::size_t>(i)].matrix();
        for (Eigen::Index j = 0; j < m; ++j) {
            const ComplexMatrix& lj = l_ops[static_cast<std::size_t>(j)].matrix();
            const ComplexMatrix ljli = lj * li;
            out += 2.0 * gamma(i, j) *
                   (kron(lj.transpose(), li) - 0.5 * kron(id, ljli) - 0.5 * kron(ljli.transpose(), id));
        }
    }
    return {h.space(), std::move(out)};
}

SuperOperator prop3_closed_form(std::span<const Operator> l_ops, std::span<const double> couplings,
                                std::span<const double> damping_times) {
    if (l_ops.size() != couplings.size() || l_ops.size() != damping_times.size()) {
        throw DimensionError("prop3_closed_form: list lengths differ");
    }
    if (l_ops.empty()) throw ValidationError("prop3_closed_form: empty operator list");
    require_same_space(l_ops, "prop3_closed_form");
    SuperOperator total = SuperOperator::zero(l_ops[0].space());
    for (std::size_t i = 0; i < l_ops.size(); ++i) {
        if (!(damping_times[i] > 0.0)) {
            throw ValidationError("prop3_closed_form: damping time " + std::to_string(i) +
                                  " must be > 0");
        }
        total += dissipator(l_ops[i], 4.0 * couplings[i] * couplings[i] * damping_times[i]);
    }
    return total;
}

SystemReduction reduce_to_system(const SuperOperator& l_full, const Operator& rho0,
                                 const HilbertSpace& system_space) {
    require_split(l_full.space(), system_space, rho0.space());
    const SectorMaps maps = sector_maps(system_space.total_dim(), rho0);
    const ComplexMatrix image = l_full.matrix() * maps.embed;  // columns L(E ⊗ ρ0)
    ComplexMatrix sys = maps.trace_b * image;
    const ComplexMatrix diff = image - maps.embed * sys;
    double residual = 0.0;
    for (Eigen::Index c = 0; c < diff.cols(); ++c) residual = std::max(residual, diff.col(c).norm());
    return {SuperOperator(system_space, std::move(sys)), residual};
}

SuperOperator lift_to_steady_sector(const SuperOperator& l_sys, const Operator& rho0) {
    const SectorMaps maps = sector_maps(l_sys.dim(), rho0);
    ComplexMatrix full = maps.embed * l_sys.matrix() * maps.trace_b;
    return {l_sys.space().tensor(rho0.space()), std::move(full)};
}

std::vector<ComplexMatrix> hermitian_basis(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    std::vector<ComplexMatrix> basis;
    basis.reserve(dim * dim);
    basis.push_back(ComplexMatrix::Identity(d, d) / std::sqrt(static_cast<double>(d)));
    const double r2 = std::sqrt(2.0);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = j + 1; k < d; ++k) {
            ComplexMatrix sym = ComplexMatrix::Zero(d, d);
            sym(j, k) = 1.0 / r2;
            sym(k, j) = 1.0 / r2;
            basis.push_back(sym);
            ComplexMatrix asym = ComplexMatrix::Zero(d, d);
            asym(j, k) = -kI / r2;
            asym(k, j) = kI / r2;
            basis.push_back(asym);
        }
    }
    for (Eigen::Index l = 1; l < d; ++l) {
        ComplexMatrix diag = ComplexMatrix::Zero(d, d);
        const double norm = std::sqrt(static_cast<double>(l * (l + 1)));
        for (Eigen::Index m = 0; m < l; ++m) diag(m, m) = 1.0 / norm;
        diag(l, l) = -static_cast<double>(l) / norm;
        basis.push_back(diag);
    }
    return basis;
}

LindbladSpec GksDecomposition::to_spec() const {
    LindbladSpec spec{hamiltonian.space(), hamiltonian, {}};
    for (const auto& j : jumps) {
        if (j.rate < 0.0) {
            throw ValidationError("GksDecomposition::to_spec: negative rate " + std::to_string(j.rate));
        }
        spec.jumps.push_back({j.op, j.rate});
    }
    return spec;
}

GksDecomposition gks_decompose(const SuperOperator& l_sys, const Tolerances& tol) {
    const HilbertSpace& space = l_sys.space();
    const auto d = static_cast<Eigen::Index>(space.total_dim());
    const ComplexMatrix& lm = l_sys.matrix();
    const double scale = std::max(1.0, lm.norm());

    // Trace annihilation: the functional vec(1)† must annihilate every column.
    double trace_defect = 0.0;
    for (Eigen::Index c = 0; c < lm.cols(); ++c) {
        Complex s = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) s += lm(i + d * i, c);
        trace_defect = std::max(trace_defect, std::abs(s));
    }
    if (trace_defect > tol.oracle_abs * scale) {
        throw ValidationError("gks_decompose: generator is not trace annihilating (defect " +
                              std::to_string(trace_defect) + ")");
    }

    const std::vector<ComplexMatrix> basis = hermitian_basis(space.total_dim());
    const Eigen::Index nb = d * d;
    ComplexMatrix fmat(nb, nb);  // columns: row-stacked basis elements
    for (Eigen::Index m = 0; m < nb; ++m) {
        const ComplexMatrix& f = basis[static_cast<std::size_t>(m)];
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) fmat(i * d + j, m) = f(i, j);
    }
    // Λ[(i,j),(k,l)] = L(|j⟩⟨l|)_{ik} so that L(ρ) = Σ c_mn F_m ρ F_n† with c = F† Λ F.
    ComplexMatrix lambda(nb, nb);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            for (Eigen::Index k = 0; k < d; ++k)
                for (Eigen::Index l = 0; l < d; ++l) lambda(i * d + j, k * d + l) = lm(i + d * k, j + d * l);
    ComplexMatrix c = fmat.adjoint() * lambda * fmat;

    const double herm_defect = (c - c.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > tol.oracle_abs * scale) {
        throw ValidationError("gks_decompose: generator is not Hermiticity preserving (defect " +
                              std::to_string(herm_defect) + ")");
    }
    c = 0.5 * (c + c.adjoint());

    const double sqrt_d = std::sqrt(static_cast<double>(d));
    ComplexMatrix f = (c(0, 0) / (2.0 * static_cast<double>(d))) * ComplexMatrix::Identity(d, d);
    for (Eigen::Index m = 1; m < nb; ++m) f += (c(m, 0) / sqrt_d) * basis[static_cast<std::size_t>(m)];
    const ComplexMatrix h = (f.adjoint() - f) / (2.0 * kI);

    GksDecomposition out;
    out.hamiltonian = Operator(space, 0.5 * (h + h.adjoint()));
    out.kossakowski = c.bottomRightCorner(nb - 1, nb - 1);

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(out.kossakowski);
    if (es.info() != Eigen::Success) throw ConvergenceError("gks_decompose: eigensolver failed");
    const Eigen::VectorXd& rates = es.eigenvalues();
    const double rate_scale = std::max(1.0, rates.cwiseAbs().maxCoeff());

    SuperOperator rebuilt = hamiltonian_superop(out.hamiltonian, tol, HermiticityCheck::Skip);
    out.is_lindblad = true;
    for (Eigen::Index m = rates.size() - 1; m >= 0; --m) {
        const double rate = rates(m);
        if (std::abs(rate) <= tol.psd_abs * rate_scale) continue;
        ComplexMatrix jump = ComplexMatrix::Zero(d, d);
        for (Eigen::Index k = 0; k < nb - 1; ++k) {
            jump += es.eigenvectors()(k, m) * basis[static_cast<std::size_t>(k + 1)];
        }
        // Fix the global phase: largest-magnitude entry real and positive.
        Eigen::Index r = 0, col = 0;
        jump.cwiseAbs().maxCoeff(&r, &col);
        const Complex z = jump(r, col);
        if (std::abs(z) > 0.0) jump *= std::conj(z) / std::abs(z);
        const Operator op(space, jump);
        // Negative rates enter the rebuilt map with their sign.
        const ComplexMatrix id = ComplexMatrix::Identity(d, d);
        const ComplexMatrix jdj = jump.adjoint() * jump;
        rebuilt = rebuilt + SuperOperator(space, rate * (kron(jump.conjugate(), jump) - 0.5 * kron(id, jdj) -
                                                         0.5 * kron(jdj.transpose(), id)));
        if (rate < -tol.psd_abs) out.is_lindblad = false;
        out.jumps.push_back({op, rate});
    }
    out.residual = (rebuilt.matrix() - lm).norm();
    out.is_generator = out.residual <= tol.oracle_abs * scale;
    out.is_lindblad = out.is_lindblad && out.is_generator;
    return out;
}

CouplingTerms hermitian_coupling_terms(const Operator& k, const HilbertSpace& system_space,
                                       const HilbertSpace& bath_space, double drop_below) {
    const std::size_t ds = system_space.total_dim();
    const std::size_t db = bath_space.total_dim();
    if (k.dim() != ds * db) {
        throw DimensionError("hermitian_coupling_terms: K does not act on system x bath");
    }
    const auto dse = static_cast<Eigen::Index>(ds);
    CouplingTerms terms;
    for (const ComplexMatrix& b : hermitian_basis(db)) {
        // With Tr(B_α B_β) = δ_αβ, K = Σ_α Tr_B(K (1 ⊗ B_α)) ⊗ B_α.
        const ComplexMatrix weighted = k.matrix() * kron(ComplexMatrix::Identity(dse, dse), b);
        ComplexMatrix l = partial_trace_right(weighted, ds, db);
        if (l.norm() <= drop_below) continue;
        terms.l_ops.emplace_back(system_space, std::move(l));
        terms.b_ops.emplace_back(bath_space, b);
    }
    return terms;
}

EffectiveGenerator build_effective(const Operator& k, const SuperOperator& l_bath,
                                   const HilbertSpace& system_space, const Tolerances& tol) {
    const HilbertSpace full_space = system_space.tensor(l_bath.space());
    if (k.dim() != full_space.total_dim()) {
        throw DimensionError("build_effective: K does not act on system x bath");
    }
    const Operator kk(full_space, k.matrix());
    if (!kk.is_hermitian(tol.hermiticity_abs)) {
        throw ValidationError("build_effective: K is not Hermitian");
    }

    const SpectralData spectral = analyze_product(l_bath, system_space, tol);
    const Operator& rho0 = spectral.product->rho0;

    EffectiveGenerator eg;
    eg.full = second_order(full_space, kk, spectral, tol, FirstOrderPolicy::Reject);
    SystemReduction red = reduce_to_system(eg.full, rho0, system_space);
    eg.system_sector = std::move(red.system);
    eg.factorization_residual = red.residual;

    eg.terms = hermitian_coupling_terms(kk, system_space, l_bath.space(),
                                        1e-14 * std::max(1.0, kk.matrix().norm()));
    if (eg.terms.l_ops.empty()) {
        eg.gamma_a = eg.gamma_b = eg.gamma = ComplexMatrix::Zero(0, 0);
        eg.h_eff = Operator::zero(system_space);
        eg.gamma_min_eig = 0.0;
        eg.is_lindblad = true;
        return eg;
    }
    const GammaMatrices gm = gamma_matrices(eg.terms.b_ops, l_bath, tol);
    eg.gamma_a = gm.a;
    eg.gamma_b = gm.b;
    eg.gamma = 0.5 * (gm.a + gm.a.adjoint());
    eg.h_eff = gamma_hamiltonian(eg.terms.l_ops, gm.a);
    eg.gamma_min_eig = eig_hermitian_values(eg.gamma).minCoeff();
    eg.is_lindblad = eg.gamma_min_eig >= -tol.psd_abs;
    return eg;
}

}  // namespace lindsim
