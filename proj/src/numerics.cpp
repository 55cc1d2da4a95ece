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

#include "lindsim/numerics.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace lindsim {

namespace {

constexpr double kMinRcond = 1e-12;
constexpr double kEigResidualRel = 1e-9;

}  // namespace

void Tolerances::validate() const {
    for (const auto& name : names()) {
        const double v = get(name);
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ValidationError("tolerance '" + name + "' must be strictly positive, got " +
                                  std::to_string(v));
        }
    }
}

const std::vector<std::string>& Tolerances::names() {
    static const std::vector<std::string> kNames = {"zero_eig_rel", "hermiticity_abs", "oracle_abs",
                                                    "psd_abs"};
    return kNames;
}

double Tolerances::get(const std::string& name) const {
    if (name == "zero_eig_rel") return zero_eig_rel;
    if (name == "hermiticity_abs") return hermiticity_abs;
    if (name == "oracle_abs") return oracle_abs;
    if (name == "psd_abs") return psd_abs;
    throw ValidationError("unknown tolerance '" + name + "'");
}

void Tolerances::set(const std::string& name, double value) {
    if (name == "zero_eig_rel") {
        zero_eig_rel = value;
    } else if (name == "hermiticity_abs") {
        hermiticity_abs = value;
    } else if (name == "oracle_abs") {
        oracle_abs = value;
    } else if (name == "psd_abs") {
        psd_abs = value;
    } else {
        throw ValidationError("unknown tolerance '" + name + "'");
    }
}

bool all_finite(const ComplexMatrix& a) {
    return a.allFinite();
}

bool is_square(const ComplexMatrix& a) {
    return a.rows() == a.cols();
}

void require_square(const ComplexMatrix& a, const char* what) {
    if (!is_square(a)) {
        throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

double hermiticity_defect(const ComplexMatrix& a) {
    require_square(a, "hermiticity_defect");
    if (a.size() == 0) return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix expm(const ComplexMatrix& a) {
    require_square(a, "expm");
    if (a.rows() == 0) return a;
    ComplexMatrix out = a.exp();
    if (!out.allFinite()) {
        throw NumericError("expm: result is not finite (input norm too large?)");
    }
    return out;
}

double spectral_norm(const ComplexMatrix& a) {
    if (a.size() == 0) return 0.0;
    // Largest eigenvalue of the smaller Gram matrix.
    ComplexMatrix gram = a.rows() >= a.cols() ? ComplexMatrix(a.adjoint() * a)
                                              : ComplexMatrix(a * a.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        Eigen::BDCSVD<ComplexMatrix> svd(a);
        return svd.singularValues()(0);
    }
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

EigenDecomposition eig_general(const ComplexMatrix& a) {
    require_square(a, "eig_general");
    Eigen::ComplexEigenSolver<ComplexMatrix> es(a, true);
    if (es.info() != Eigen::Success) {
        throw ConvergenceError("eig_general: QR iteration did not converge");
    }
    EigenDecomposition out{es.eigenvalues(), es.eigenvectors()};
    const double scale = std::max(spectral_norm(a), 1e-300);
    for (Eigen::Index k = 0; k < out.eigenvalues.size(); ++k) {
        const ComplexVector v = out.right_eigenvectors.col(k);
        const double residual = (a * v - out.eigenvalues(k) * v).norm() / std::max(v.norm(), 1e-300);
        if (residual > kEigResidualRel * scale) {
            throw ConvergenceError("eig_general: eigenpair residual " + std::to_string(residual) +
                                   " exceeds tolerance");
        }
    }
    return out;
}

Eigen::VectorXd eig_hermitian_values(const ComplexMatrix& a) {
    require_square(a, "eig_hermitian_values");
    const ComplexMatrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw ConvergenceError("eig_hermitian_values: solver did not converge");
    }
    return es.eigenvalues();
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_square(a, "solve");
    if (a.rows() != b.rows()) {
        throw DimensionError("solve: right-hand side has " + std::to_string(b.rows()) +
                             " rows, expected " + std::to_string(a.rows()));
    }
    Eigen::PartialPivLU<ComplexMatrix> lu(a);
    // rcond is an estimate and is unreliable once a pivot is exactly zero.
    const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
    const double rcond = pivots.minCoeff() > 0.0 ? lu.rcond() : 0.0;
    if (!(rcond >= kMinRcond)) {
        throw SingularMatrixError("solve: matrix is singular or ill-conditioned (rcond = " +
                                  std::to_string(rcond) + ")");
    }
    return lu.solve(b);
}

}  // namespace lindsim
