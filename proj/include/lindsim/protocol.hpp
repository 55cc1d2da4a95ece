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

#include "lindsim/effective.hpp"

namespace lindsim {

/// How the coupling strength follows the scaling parameter T.
///
/// Library: the protocol's K already realizes the target rates; the scaled model
/// uses T^{-1/2} K, so the effective dynamics reproduces the target on the time
/// scale T. Figure: the protocol's K has unit coupling and g = (τ_R T)^{-1/2}
/// with τ_R the protocol's caption relaxation time.
enum class CouplingMode { Library, Figure };

/// System coupled to a bank of ancillas with L0 = 1_S ⊗ L_B.
struct SimulationProtocol {
    std::string name;
    HilbertSpace system_space;
    HilbertSpace bath_space;
    std::size_t n_ancillas = 0;
    std::vector<double> couplings;      // g_i, 1/time
    std::vector<double> damping_times;  // τ_i, time
    Operator k;                         // on system ⊗ bath
    Operator k1;                        // on the system; injected at strength 1/T
    LindbladSpec bath;                  // L_B in Lindblad form on bath_space
    CouplingMode mode = CouplingMode::Library;
    double theta = 1.0;
    std::optional<double> tau_r_caption;
    /// System-sector generator the protocol is meant to produce (library: the
    /// target without H; figure: the closed form at unit coupling).
    std::optional<LindbladSpec> expected;

    HilbertSpace full_space() const { return system_space.tensor(bath_space); }
    SuperOperator l_bath(const Tolerances& tol = {}) const;
    /// 1_S ⊗ L_B on the full space.
    SuperOperator l0(const Tolerances& tol = {}) const;
};

/// One damped ancilla per target jump: g_i = √(γ_i / (4 τ_i)),
/// K = Σ_i g_i (L_i† ⊗ σ_i⁻ + L_i ⊗ σ_i⁺), L_B = Σ_i τ_i⁻¹ D[σ_i⁻]. The target
/// Hamiltonian is kept as k1. `damping_times` may be empty (all 1), a single
/// value (uniform) or one value per jump.
SimulationProtocol compile(const LindbladSpec& target, const std::vector<double>& damping_times = {},
                           const Tolerances& tol = {});

/// T-independent pieces of a protocol's analysis, shared across a sweep.
struct ProtocolAnalysis {
    SuperOperator l0;
    SpectralData spectral;           // product-structure fast path
    SuperOperator k_superop;         // −i[K, •]
    SuperOperator k1_superop;        // −i[K1 ⊗ 1_B, •]
    SuperOperator l_eff_base;        // −P0 K S K P0 for the protocol's K
    SuperOperator k1_projected;      // P0 (−i[K1 ⊗ 1_B, •]) P0
    double first_order_norm = 0.0;   // ‖Tr_B(K ρ0)‖_F
};

ProtocolAnalysis prepare(const SimulationProtocol& protocol, const Tolerances& tol = {});

struct ScaledModel {
    double t_scale = 0.0;               // T
    double tau_r = 0.0;                 // time scale used for g and the time grid
    double coupling_scale = 0.0;        // multiplier applied to the protocol's K
    std::vector<double> effective_couplings;  // coupling_scale · g_i
    SuperOperator l_t;                  // L0 + coupling_scale K + T⁻¹ K1
    SuperOperator l_eff_dimensionless;  // T · L_eff + P0 K1 P0
    double k_part_norm = 0.0;           // ‖coupling_scale K‖ (superoperator, spectral)
    double k1_part_norm = 0.0;          // ‖T⁻¹ K1‖ (superoperator, spectral)
    std::string k1_normalization;
};

ScaledModel scale(const SimulationProtocol& protocol, const ProtocolAnalysis& analysis, double t_scale);
ScaledModel scale(const SimulationProtocol& protocol, double t_scale, const Tolerances& tol = {});

/// τ₊τ₋ / (τ₊ + τ₋).
double caption_relaxation_time(double tau_plus, double tau_minus);

struct ThermalRates {
    double rate_plus = 0.0;   // 1/τ_eff,+ for the jump S⁺
    double rate_minus = 0.0;  // 1/τ_eff,− for the jump S⁻
};

/// 1/τ_eff,± = 4 g² τ₋τ₊ / (τ₋ + τ₊)² · τ∓.
ThermalRates thermal_rates(double g, double tau_plus, double tau_minus);

/// T_eff / T_B = ω_eff / ω_B.
double temperature_ratio(double omega_eff, double omega_b);

/// N qubits coupled to one damped cavity mode: K = S⁻ a† + S⁺ a,
/// L_B = −iω[a†a, •] + τ_R⁻¹ D[a].
SimulationProtocol collective_damping_cavity(std::size_t n_qubits, double omega, double tau_r,
                                             std::size_t cutoff = 8);

/// N qubits coupled to one thermal ancilla: K = S⁺ σ⁻ + S⁻ σ⁺,
/// L_B = τ₋⁻¹ D[σ⁻] + τ₊⁻¹ D[σ⁺].
SimulationProtocol collective_thermal(std::size_t n_qubits, double tau_plus, double tau_minus);

/// N qubits coupled to one thermal ancilla: K = S^x σ^x.
SimulationProtocol collective_dephasing(std::size_t n_qubits, double tau_plus, double tau_minus);

/// Default-parameter instances of the three scenarios above.
std::vector<SimulationProtocol> builtin_scenarios();

/// Looks up a scenario by name ("collective-damping-cavity", "collective-thermal",
/// "collective-dephasing") with the given parameters; missing ones take defaults.
struct ScenarioParams {
    std::size_t n_qubits = 1;
    double tau_plus = 2.0;
    double tau_minus = 1.0;
    double omega = 0.0;
    double tau_r = 1.0;
    std::size_t cutoff = 8;
};

SimulationProtocol builtin_scenario(const std::string& name, const ScenarioParams& params);

}  // namespace lindsim
