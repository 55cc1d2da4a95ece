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
#include <string>
#include <vector>

#include "lindsim/protocol.hpp"

namespace lindsim {

/// {0} ∪ {t_min·10^{k/per_decade}} up to t_max, with t_max itself as the last point.
std::vector<double> log_grid(double t_min, double t_max, std::size_t per_decade, bool include_zero = true);

/// t ↦ e^{tL}·B for a fixed generator L and a fixed block of columns B.
///
/// Uses the eigendecomposition of L when it reproduces expm at `t_check` to
/// 1e-10 (relative to ‖B‖), otherwise falls back to expm at every t.
class Propagator {
  public:
    Propagator(const ComplexMatrix& generator, const ComplexMatrix& basis, double t_check);

    ComplexMatrix apply(double t) const;
    bool uses_eigenbasis() const { return eigen_route_; }

  private:
    ComplexMatrix generator_;
    ComplexMatrix basis_;
    bool stationary_ = false;  // L·B = 0 exactly
    bool eigen_route_ = false;
    ComplexMatrix vecs_;
    ComplexVector vals_;
    ComplexMatrix coeffs_;  // V⁻¹ B
};

struct ErrorCurve {
    double t_scale = 0.0;          // T
    std::vector<double> t_grid;
    std::vector<double> distances; // ‖(e^{tL_T} − e^{(t/T)L̃_eff}) P0‖
    double sup_error = 0.0;        // max over the grid
    double endpoint_error = 0.0;   // distance at the last grid point
};

/// Distances on the given grid (nonnegative, sorted). The norm is the spectral norm
/// of the full-space map; P0 enters through its range/corange factors.
ErrorCurve error_curve(const ScaledModel& model, const SpectralData& spectral, const std::vector<double>& t_grid);

enum class ErrorMetric { Sup, Endpoint };

struct SweepOptions {
    double theta = 1.0;
    std::size_t per_decade = 40;
    std::optional<double> t_min;   // default τ_R / 100
    ErrorMetric metric = ErrorMetric::Sup;
    std::size_t threads = 1;
    bool keep_curves = false;
    bool validate_span = true;     // ≥ 4 points spanning ≥ 1.5 decades
    Tolerances tol;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    bool degenerate = false;       // the fitted values have no spread
};

/// Ordinary least squares y ≈ slope·x + intercept.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct SweepResult {
    std::vector<double> t_values;
    std::vector<double> inv_sqrt_t;
    std::vector<double> sup_errors;
    std::vector<double> endpoint_errors;
    ErrorMetric metric = ErrorMetric::Sup;
    std::vector<double> errors;    // the metric's column; what the fit uses
    LinearFit fit;
    std::vector<double> tau_r;     // per T (constant for a protocol)
    std::vector<ErrorCurve> curves;

    double prediction(std::size_t i) const { return fit.slope * inv_sqrt_t[i] + fit.intercept; }
};

/// One T: the scaled model's error curve on a log grid [t_min, θT].
ErrorCurve evaluate_t(const SimulationProtocol& protocol, const ProtocolAnalysis& analysis, double t_scale,
                      const SweepOptions& options);

SweepResult sweep_T(const SimulationProtocol& protocol, const std::vector<double>& t_values,
                    const SweepOptions& options = {});

struct TraceOptions {
    std::optional<double> t_min;   // default τ_R / 100
    double t_max_factor = 1.0;     // t_max = factor·T; may exceed θ
    std::size_t per_decade = 40;
    std::size_t threads = 1;
    Tolerances tol;
};

/// One curve per T on a shared-shape grid.
std::vector<ErrorCurve> trace_curves(const SimulationProtocol& protocol, const std::vector<double>& t_values,
                                     const TraceOptions& options = {});

struct LeakageReport {
    double max_population = 0.0;
    bool warned = false;
    std::string message;
};

/// Population of the top two Fock levels of the boson factor at `boson_site` of the
/// full space, maximized over t_samples and over initial states |a⟩⟨a| ⊗ ρ0 and
/// |a+b⟩⟨a+b|/2 ⊗ ρ0.
LeakageReport leakage_check(const ScaledModel& model, const SpectralData& spectral, std::size_t boson_site,
                            const std::vector<double>& t_samples, double threshold = 1e-8);

struct HierarchyLevel {
    std::size_t level = 0;
    SuperOperator l_eff;           // generator at this level (level 0: the base model)
    ComplexMatrix p0;              // nested projector P0^(n)
    std::size_t p0_dim = 0;
    double tau_r = 0.0;            // ‖S^(n)‖
    double k_norm = 0.0;           // ‖K_n‖ of the coupling applied at this level (0 if none)
    double epsilon = 0.0;          // k_norm · tau_r
    double first_order_norm = 0.0; // ‖P0^(n) K_n P0^(n)‖_F
    bool hamiltonian_level = false;
    std::string stop_reason;       // set on the last level
};

/// Projection hierarchy. couplings[n] is used at level n (the last one is reused);
/// each is rescaled so that ‖K_n‖·τ_R^(n) = epsilon. Stops on a one-dimensional
/// kernel, a nonzero first-order term (returned as a Hamiltonian-level entry whose
/// l_eff is P0 K P0) or after max_levels new levels.
std::vector<HierarchyLevel> hierarchy_iterate(const SuperOperator& base, const std::vector<Operator>& couplings,
                                              double epsilon, std::size_t max_levels,
                                              const Tolerances& tol = {});

struct HierarchyInstance {
    SuperOperator base;
    std::vector<Operator> couplings;
};

/// Qubits (A, B, C) with C damped: L0 = D[σ⁻_C]; K0 = σ⁺_B σ⁻_C + h.c.,
/// K1 = σ^x_A σ^x_B, K2 = σ^z_A.
HierarchyInstance nested_damping_instance();

struct RegressionEntry {
    std::string name;
    double distance = 0.0;               // ‖L^(S) − expected‖ (spectral)
    std::vector<double> expected_rates;  // Kossakowski spectrum, descending
    std::vector<double> extracted_rates;
    double rate_residual = 0.0;
    double hamiltonian_residual = 0.0;   // traceless parts, Frobenius
    double gamma_min_eig = 0.0;
    bool passed = false;
};

struct RegressionReport {
    std::vector<RegressionEntry> entries;
    double threshold = 1e-8;
    bool all_passed() const;
};

RegressionEntry regress_protocol(const SimulationProtocol& protocol, double g, double threshold = 1e-8,
                                 const Tolerances& tol = {});

RegressionReport regression_scenarios(double g = 1.0, double threshold = 1e-8, const Tolerances& tol = {});

}  // namespace lindsim
