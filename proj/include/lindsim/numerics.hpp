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

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lindsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: wrong shapes, invalid parameters, failed preconditions
/// on user-provided data.
class ValidationError : public Error {
  public:
    using Error::Error;
};

class DimensionError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// A numerical procedure failed or its result violated a checked identity.
class NumericError : public Error {
  public:
    using Error::Error;
};

class SingularMatrixError : public NumericError {
  public:
    using NumericError::NumericError;
};

class ConvergenceError : public NumericError {
  public:
    using NumericError::NumericError;
};

/// Thresholds shared by every module. Call sites never hard-code these.
struct Tolerances {
    double zero_eig_rel = 1e-9;
    double hermiticity_abs = 1e-10;
    double oracle_abs = 1e-8;
    double psd_abs = 1e-10;

    /// Throws ValidationError unless all fields are strictly positive and finite.
    void validate() const;

    /// Sets a field by name; throws ValidationError on unknown names.
    void set(const std::string& name, double value);

    static const std::vector<std::string>& names();
    double get(const std::string& name) const;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Matrix exponential (scaling and squaring with Padé approximants).
ComplexMatrix expm(const ComplexMatrix& a);

/// Largest singular value.
double spectral_norm(const ComplexMatrix& a);

struct EigenDecomposition {
    ComplexVector eigenvalues;
    ComplexMatrix right_eigenvectors;  // columns
};

/// Full eigendecomposition of a general complex matrix. Throws ConvergenceError
/// when the QR iteration fails or a residual ‖A v − λ v‖ exceeds 1e-9·‖A‖.
EigenDecomposition eig_general(const ComplexMatrix& a);

/// Hermitian eigenvalues in ascending order.
Eigen::VectorXd eig_hermitian_values(const ComplexMatrix& a);

/// Solves a·X = b. Throws SingularMatrixError when the reciprocal condition
/// estimate of a is below 1e-12.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);

bool all_finite(const ComplexMatrix& a);
bool is_square(const ComplexMatrix& a);
double hermiticity_defect(const ComplexMatrix& a);

void require_square(const ComplexMatrix& a, const char* what);

}  // namespace lindsim
