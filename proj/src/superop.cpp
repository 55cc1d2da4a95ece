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

#include "lindsim/superop.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace lindsim {

SuperOperator::SuperOperator(HilbertSpace space, ComplexMatrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(space_.total_dim());
    if (matrix_.rows() != d * d || matrix_.cols() != d * d) {
        throw DimensionError("SuperOperator: matrix is " + std::to_string(matrix_.rows()) + "x" +
                             std::to_string(matrix_.cols()) + ", expected " +
                             std::to_string(d * d) + "x" + std::to_string(d * d));
    }
}

SuperOperator SuperOperator::identity(const HilbertSpace& space) {
    const auto n = static_cast<Eigen::Index>(space.total_dim() * space.total_dim());
    return {space, ComplexMatrix::Identity(n, n)};
}

SuperOperator SuperOperator::zero(const HilbertSpace& space) {
    const auto n = static_cast<Eigen::Index>(space.total_dim() * space.total_dim());
    return {space, ComplexMatrix::Zero(n, n)};
}

Operator SuperOperator::apply(const Operator& x) const {
    if (!(x.space() == space_)) throw DimensionError("SuperOperator::apply: spaces differ");
    return devectorize(matrix_ * vectorize(x), space_);
}

SuperOperator& SuperOperator::operator+=(const SuperOperator& o) {
    if (!(space_ == o.space_)) throw DimensionError("SuperOperator +: spaces differ");
    matrix_ += o.matrix_;
    return *this;
}

SuperOperator& SuperOperator::operator-=(const SuperOperator& o) {
    if (!(space_ == o.space_)) throw DimensionError("SuperOperator -: spaces differ");
    matrix_ -= o.matrix_;
    return *this;
}

SuperOperator& SuperOperator::operator*=(Complex c) {
    matrix_ *= c;
    return *this;
}

SuperOperator operator*(const SuperOperator& a, const SuperOperator& b) {
    if (!(a.space() == b.space())) throw DimensionError("SuperOperator *: spaces differ");
    return {a.space(), a.matrix() * b.matrix()};
}

void LindbladSpec::validate(const Tolerances& tol) const {
    if (!(hamiltonian.space() == space)) {
        throw DimensionError("LindbladSpec: hamiltonian does not act on the declared space");
    }
    const double defect = hermiticity_defect(hamiltonian.matrix());
    if (defect > tol.hermiticity_abs) {
        throw ValidationError("LindbladSpec: hamiltonian is not Hermitian (defect " +
                              std::to_string(defect) + ")");
    }
    for (std::size_t i = 0; i < jumps.size(); ++i) {
        if (!(jumps[i].op.space() == space)) {
            throw DimensionError("LindbladSpec: jump " + std::to_string(i) +
                                 " does not act on the declared space");
        }
        if (!(jumps[i].rate >= 0.0) || !std::isfinite(jumps[i].rate)) {
            throw ValidationError("LindbladSpec: jump " + std::to_string(i) +
                                  " has invalid rate " + std::to_string(jumps[i].rate));
        }
    }
}

ComplexVector vectorize(const Operator& x) {
    const ComplexMatrix& m = x.matrix();
    return Eigen::Map<const ComplexVector>(m.data(), m.size());  // Eigen storage is column-major
}

Operator devectorize(const ComplexVector& v, const HilbertSpace& space) {
    const auto d = static_cast<Eigen::Index>(space.total_dim());
    if (v.size() != d * d) {
        throw DimensionError("devectorize: vector length " + std::to_string(v.size()) +
                             " does not match dimension " + std::to_string(d));
    }
    return {space, Eigen::Map<const ComplexMatrix>(v.data(), d, d)};
}

SuperOperator hamiltonian_superop(const Operator& h, const Tolerances& tol, HermiticityCheck check) {
    if (check == HermiticityCheck::Enforce) {
        const double defect = hermiticity_defect(h.matrix());
        if (defect > tol.hermiticity_abs) {
            throw ValidationError("hamiltonian_superop: operator is not Hermitian (defect " +
                                  std::to_string(defect) + ")");
        }
    }
    const auto d = static_cast<Eigen::Index>(h.dim());
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    ComplexMatrix m = -kI * (kron(id, h.matrix()) - kron(h.matrix().transpose(), id));
    return {h.space(), std::move(m)};
}

SuperOperator dissipator(const Operator& l, double rate) {
    if (!(rate >= 0.0)) throw ValidationError("dissipator: rate must be >= 0");
    const auto d = static_cast<Eigen::Index>(l.dim());
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    const ComplexMatrix& lm = l.matrix();
    const ComplexMatrix ldl = lm.adjoint() * lm;
    ComplexMatrix m = kron(lm.conjugate(), lm) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id);
    m *= rate;
    return {l.space(), std::move(m)};
}

SuperOperator liouvillian(const LindbladSpec& spec, const Tolerances& tol) {
    spec.validate(tol);
    SuperOperator total = hamiltonian_superop(spec.hamiltonian, tol);
    for (const auto& j : spec.jumps) {
        total += dissipator(j.op, j.rate);
    }
    return total;
}

ComplexMatrix choi_matrix(const ComplexMatrix& map, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    if (map.rows() != d * d || map.cols() != d * d) {
        throw DimensionError("choi_matrix: map size does not match dimension");
    }
    // C[(a,i),(b,j)] = Φ(|a⟩⟨b|)_{ij}
    ComplexMatrix c(d * d, d * d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            const Eigen::Index col = a + d * b;
            for (Eigen::Index i = 0; i < d; ++i) {
                for (Eigen::Index j = 0; j < d; ++j) {
                    c(a * d + i, b * d + j) = map(i + d * j, col);
                }
            }
        }
    }
    return c;
}

CptpReport check_cptp_propagator(const SuperOperator& l, double t) {
    if (!(t >= 0.0)) throw ValidationError("check_cptp_propagator: t must be >= 0");
    const auto d = static_cast<Eigen::Index>(l.dim());
    const ComplexMatrix prop = expm(t * l.matrix());
    CptpReport report;
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            Complex tr = 0.0;
            for (Eigen::Index i = 0; i < d; ++i) tr += prop(i + d * i, a + d * b);
            const Complex expected = (a == b) ? Complex(1.0) : Complex(0.0);
            report.trace_defect = std::max(report.trace_defect, std::abs(tr - expected));
        }
    }
    const Eigen::VectorXd ev = eig_hermitian_values(choi_matrix(prop, l.dim()));
    report.choi_min_eigenvalue = ev.minCoeff();
    const double cutoff = 1e-9 * std::max(std::abs(ev.maxCoeff()), 1e-300);
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        if (ev(k) > cutoff) ++report.choi_rank;
    }
    return report;
}

Complex trace_of_image(const SuperOperator& l, const Operator& rho) {
    return l.apply(rho).matrix().trace();
}

ComplexMatrix superop_tensor(const ComplexMatrix& a, std::size_t dim_a, const ComplexMatrix& b,
                             std::size_t dim_b) {
    const auto da = static_cast<Eigen::Index>(dim_a);
    const auto db = static_cast<Eigen::Index>(dim_b);
    const Eigen::Index n = da * db;
    if (a.rows() != da * da || a.cols() != da * da || b.rows() != db * db || b.cols() != db * db) {
        throw DimensionError("superop_tensor: factor sizes do not match dimensions");
    }
    // Index of vec(E_{ij} ⊗ F_{kl}) in the composite column-stacked vector,
    // as a function of (vec index of E, vec index of F).
    auto composite = [&](Eigen::Index ea, Eigen::Index fb) {
        const Eigen::Index i = ea % da, j = ea / da;
        const Eigen::Index k = fb % db, l = fb / db;
        return (i * db + k) + n * (j * db + l);
    };
    ComplexMatrix out = ComplexMatrix::Zero(n * n, n * n);
    for (Eigen::Index ac = 0; ac < da * da; ++ac) {
        for (Eigen::Index ar = 0; ar < da * da; ++ar) {
            const Complex av = a(ar, ac);
            if (av == Complex(0.0)) continue;
            for (Eigen::Index bc = 0; bc < db * db; ++bc) {
                const Eigen::Index col = composite(ac, bc);
                for (Eigen::Index br = 0; br < db * db; ++br) {
                    const Complex bv = b(br, bc);
                    if (bv == Complex(0.0)) continue;
                    out(composite(ar, br), col) = av * bv;
                }
            }
        }
    }
    return out;
}

ComplexMatrix partial_trace_right(const ComplexMatrix& x, std::size_t dim_a, std::size_t dim_b) {
    const auto da = static_cast<Eigen::Index>(dim_a);
    const auto db = static_cast<Eigen::Index>(dim_b);
    if (x.rows() != da * db || x.cols() != da * db) {
        throw DimensionError("partial_trace_right: operator size does not match dimensions");
    }
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index j = 0; j < da; ++j) {
            Complex s = 0.0;
            for (Eigen::Index k = 0; k < db; ++k) s += x(i * db + k, j * db + k);
            out(i, j) = s;
        }
    }
    return out;
}

void write_superop_csv(const SuperOperator& l, std::ostream& out) {
    const ComplexMatrix& m = l.matrix();
    out << "# superoperator dim=" << m.rows()
        << "; vectorization=column-stacking vec(X)[i+d*j]=X(i,j); entries=re,im\n";
    char buf[64];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out << ',';
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", m(r, c).real(), m(r, c).imag());
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace lindsim
