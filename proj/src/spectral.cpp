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

#include "lindsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace lindsim {

namespace {

SpectralData from_projector_factors(const ComplexMatrix& l0, ComplexMatrix range, ComplexMatrix corange,
                                    ComplexVector eigenvalues, const Tolerances& tol) {
    const Eigen::Index n = l0.rows();
    SpectralData sd;
    sd.p0_range = std::move(range);
    sd.p0_corange = std::move(corange);
    sd.kernel_dim = static_cast<std::size_t>(sd.p0_range.cols());
    sd.p0 = sd.p0_range * sd.p0_corange;
    sd.q0 = ComplexMatrix::Identity(n, n) - sd.p0;
    sd.eigenvalues = std::move(eigenvalues);

    double max_abs = 0.0;
    for (Eigen::Index k = 0; k < sd.eigenvalues.size(); ++k) {
        max_abs = std::max(max_abs, std::abs(sd.eigenvalues(k)));
    }
    const double thr = tol.zero_eig_rel * max_abs;
    sd.gap = 0.0;
    bool have_gap = false;
    for (Eigen::Index k = 0; k < sd.eigenvalues.size(); ++k) {
        const double m = std::abs(sd.eigenvalues(k));
        if (m > thr && (!have_gap || m < sd.gap)) {
            sd.gap = m;
            have_gap = true;
        }
    }
    if (sd.kernel_dim == static_cast<std::size_t>(n)) {
        sd.s = ComplexMatrix::Zero(n, n);
        sd.tau_r = 0.0;
    } else {
        sd.s = solve(l0 + sd.p0, sd.q0);
        sd.tau_r = spectral_norm(sd.s);
    }
    return sd;
}

}  // namespace

double SpectralIdentityReport::worst() const {
    return std::max({p0_idempotent, p0_annihilates, s_inverts, s_complement});
}

SpectralIdentityReport check_spectral_identities(const ComplexMatrix& l0, const SpectralData& sd) {
    // Frobenius norms bound the spectral norm from above, so these are conservative.
    const double l_norm = std::max(1.0, l0.norm());
    const double s_norm = std::max(1.0, sd.s.norm());
    SpectralIdentityReport r;
    r.p0_idempotent = (sd.p0 * sd.p0 - sd.p0).norm();
    r.p0_annihilates = std::max((sd.p0 * l0).norm(), (l0 * sd.p0).norm()) / l_norm;
    r.s_inverts = std::max((sd.s * l0 - sd.q0).norm(), (l0 * sd.s - sd.q0).norm());
    r.s_complement = std::max((sd.p0 * sd.s).norm(), (sd.s * sd.p0).norm()) / s_norm;
    return r;
}

SpectralData analyze(const ComplexMatrix& l0, const Tolerances& tol) {
    require_square(l0, "analyze");
    const Eigen::Index n = l0.rows();
    const EigenDecomposition ed = eig_general(l0);

    double max_abs = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) max_abs = std::max(max_abs, std::abs(ed.eigenvalues(k)));

    if (l0.isZero(0.0)) {
        // The zero generator: everything is stationary.
        return from_projector_factors(l0, ComplexMatrix::Identity(n, n), ComplexMatrix::Identity(n, n),
                                      ed.eigenvalues, tol);
    }
    if (max_abs == 0.0) {
        throw DegeneracyError("analyze: generator is nilpotent; the zero eigenvalue is defective");
    }

    const double thr = tol.zero_eig_rel * max_abs;
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex lam = ed.eigenvalues(i);
        if (std::abs(lam) <= thr) {
            ++k;
        } else if (lam.real() >= -thr) {
            throw NotRelaxingError("analyze: eigenvalue (" + std::to_string(lam.real()) + ", " +
                                   std::to_string(lam.imag()) +
                                   ") is nonzero without a negative real part");
        }
    }

    if (k == 0) {
        return from_projector_factors(l0, ComplexMatrix::Zero(n, 0), ComplexMatrix::Zero(0, n),
                                      ed.eigenvalues, tol);
    }

    // Right and left null spaces from the k smallest singular triplets.
    Eigen::BDCSVD<ComplexMatrix> svd(l0, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double l_norm = sv(0);
    const double null_thr = std::sqrt(tol.zero_eig_rel) * l_norm;
    if (sv(n - k) > null_thr) {
        throw DegeneracyError("analyze: zero eigenvalue has algebraic multiplicity " +
                              std::to_string(k) + " but a smaller geometric multiplicity");
    }
    const ComplexMatrix right = svd.matrixV().rightCols(k);
    const ComplexMatrix left = svd.matrixU().rightCols(k);
    const ComplexMatrix overlap = left.adjoint() * right;
    Eigen::PartialPivLU<ComplexMatrix> lu(overlap);
    if (!(lu.rcond() >= 1e-8)) {
        throw DegeneracyError("analyze: left and right kernels are (nearly) orthogonal; "
                              "the zero eigenvalue is defective");
    }
    ComplexMatrix corange = lu.solve(ComplexMatrix(left.adjoint()));

    SpectralData sd = from_projector_factors(l0, right, std::move(corange), ed.eigenvalues, tol);

    const double idem = (sd.p0 * sd.p0 - sd.p0).norm();
    const double annihilate = std::max((l0 * sd.p0).norm(), (sd.p0 * l0).norm()) / l_norm;
    const double limit = tol.oracle_abs * std::max(1.0, sd.p0.norm());
    if (idem > limit || annihilate > limit) {
        throw DegeneracyError("analyze: spectral projector residual too large (idempotency " +
                              std::to_string(idem) + ", annihilation " + std::to_string(annihilate) +
                              ")");
    }
    return sd;
}

SpectralData analyze(const SuperOperator& l0, const Tolerances& tol) {
    return analyze(l0.matrix(), tol);
}

BathAnalysis analyze_bath(const SuperOperator& l_bath, const Tolerances& tol) {
    const HilbertSpace& space = l_bath.space();
    const auto d = static_cast<Eigen::Index>(space.total_dim());
    const ComplexMatrix& lb = l_bath.matrix();

    // The explicit formula P0(X) = Tr(X) ρ0 presumes a trace-preserving generator.
    ComplexVector vec_id = ComplexVector::Zero(d * d);
    for (Eigen::Index i = 0; i < d; ++i) vec_id(i + d * i) = 1.0;
    const double trace_defect = (vec_id.adjoint() * lb).norm();
    if (trace_defect > tol.oracle_abs * std::max(1.0, lb.norm())) {
        throw ValidationError("analyze_bath: bath generator is not trace preserving (defect " +
                              std::to_string(trace_defect) + ")");
    }

    SpectralData generic = analyze(lb, tol);
    if (generic.kernel_dim != 1) {
        throw UniquenessError("analyze_bath: bath steady state is not unique (kernel dimension " +
                              std::to_string(generic.kernel_dim) + ")");
    }

    ComplexMatrix rho = Eigen::Map<const ComplexMatrix>(generic.p0_range.col(0).data(), d, d);
    rho /= rho.trace();
    rho = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
    Eigen::VectorXd w = es.eigenvalues();
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w(i) < 0.0) {
            if (w(i) < -tol.psd_abs) {
                throw NumericError("analyze_bath: steady state has eigenvalue " +
                                   std::to_string(w(i)) + " below -psd_abs");
            }
            w(i) = 0.0;
        }
    }
    rho = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    rho /= rho.trace().real();
    Operator rho0(space, rho);

    // Rebuild P0_B = vec(ρ0) vec(1)† and S_B = (L_B + P0_B)⁻¹ Q0_B from the cleaned state.
    ComplexMatrix range = vectorize(rho0);
    ComplexMatrix corange = vec_id.adjoint();
    SpectralData sd = from_projector_factors(lb, std::move(range), std::move(corange),
                                             std::move(generic.eigenvalues), tol);
    return {std::move(rho0), std::move(sd)};
}

SpectralData analyze_product(const SuperOperator& l_bath, const HilbertSpace& system_space,
                             const Tolerances& tol) {
    BathAnalysis bath = analyze_bath(l_bath, tol);
    const auto ds = static_cast<Eigen::Index>(system_space.total_dim());
    const auto db = static_cast<Eigen::Index>(l_bath.dim());
    const Eigen::Index n = ds * db;
    const ComplexMatrix& rho = bath.rho0.matrix();

    SpectralData sd;
    // Columns vec(E_ab ⊗ ρ0); rows of the corange take (Tr_B X)_{ab}.
    sd.p0_range = ComplexMatrix::Zero(n * n, ds * ds);
    sd.p0_corange = ComplexMatrix::Zero(ds * ds, n * n);
    for (Eigen::Index a = 0; a < ds; ++a) {
        for (Eigen::Index b = 0; b < ds; ++b) {
            const Eigen::Index e = a + ds * b;
            for (Eigen::Index i = 0; i < db; ++i) {
                for (Eigen::Index j = 0; j < db; ++j) {
                    sd.p0_range((a * db + i) + n * (b * db + j), e) = rho(i, j);
                }
                sd.p0_corange(e, (a * db + i) + n * (b * db + i)) = 1.0;
            }
        }
    }
    sd.kernel_dim = static_cast<std::size_t>(ds * ds);
    sd.p0 = sd.p0_range * sd.p0_corange;
    sd.q0 = ComplexMatrix::Identity(n * n, n * n) - sd.p0;
    const ComplexMatrix id_sys = ComplexMatrix::Identity(ds * ds, ds * ds);
    sd.s = superop_tensor(id_sys, static_cast<std::size_t>(ds), bath.spectral.s,
                          static_cast<std::size_t>(db));
    // ‖1 ⊗ S_B‖ = ‖S_B‖ and the spectrum of 1 ⊗ L_B is that of L_B repeated.
    sd.tau_r = bath.spectral.tau_r;
    sd.gap = bath.spectral.gap;
    sd.eigenvalues = ComplexVector(n * n);
    for (Eigen::Index r = 0; r < ds * ds; ++r) {
        sd.eigenvalues.segment(r * db * db, db * db) = bath.spectral.eigenvalues;
    }
    sd.product = ProductStructure{system_space, l_bath.space(), bath.rho0, bath.spectral.s,
                                  l_bath.matrix()};
    return sd;
}

ComplexMatrix resolvent_integral_oracle(const ComplexMatrix& l0, double t_max, std::size_t n_steps) {
    require_square(l0, "resolvent_integral_oracle");
    if (!(t_max > 0.0)) throw ValidationError("resolvent_integral_oracle: t_max must be > 0");
    if (n_steps < 2) n_steps = 2;
    if (n_steps % 2 == 1) ++n_steps;
    const Eigen::Index n = l0.rows();
    const double h = t_max / static_cast<double>(n_steps);
    const ComplexMatrix step = expm(h * l0);

    ComplexMatrix current = ComplexMatrix::Identity(n, n);
    ComplexMatrix integral = current;  // weight 1 at t = 0
    for (std::size_t k = 1; k <= n_steps; ++k) {
        current = step * current;
        const double w = (k == n_steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        integral += w * current;
    }
    integral *= h / 3.0;
    // current = e^{t_max L0} ≈ P0, and ∫ e^{tL0} P0 dt = t_max P0.
    return -(integral - t_max * current);
}

}  // namespace lindsim
