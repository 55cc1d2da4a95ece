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

#include "lindsim/protocol.hpp"

#include <cmath>
#include <string>

namespace lindsim {

namespace {

LindbladSpec thermal_bath(double tau_plus, double tau_minus) {
    const HilbertSpace qubit({2});
    return {qubit, Operator::zero(qubit),
            {{pauli(PauliKind::Minus), 1.0 / tau_minus}, {pauli(PauliKind::Plus), 1.0 / tau_plus}}};
}

void require_positive(double v, const std::string& what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError(what + " must be > 0, got " + std::to_string(v));
    }
}

}  // namespace

SuperOperator SimulationProtocol::l_bath(const Tolerances& tol) const {
    return liouvillian(bath, tol);
}

SuperOperator SimulationProtocol::l0(const Tolerances& tol) const {
    const HilbertSpace full = full_space();
    const auto ds = static_cast<Eigen::Index>(system_space.total_dim());
    const ComplexMatrix id_s = ComplexMatrix::Identity(ds, ds);
    LindbladSpec lifted{full, Operator(full, kron(id_s, bath.hamiltonian.matrix())), {}};
    for (const auto& j : bath.jumps) {
        lifted.jumps.push_back({Operator(full, kron(id_s, j.op.matrix())), j.rate});
    }
    return liouvillian(lifted, tol);
}

SimulationProtocol compile(const LindbladSpec& target, const std::vector<double>& damping_times,
                           const Tolerances& tol) {
    target.validate(tol);
    const std::size_t m = target.jumps.size();
    if (m == 0) throw ValidationError("compile: target has no jump operators");
    for (std::size_t i = 0; i < m; ++i) {
        if (target.jumps[i].op.matrix().norm() == 0.0) {
            throw ValidationError("compile: jump " + std::to_string(i) + " is the zero operator");
        }
    }

    std::vector<double> taus;
    if (damping_times.empty()) {
        taus.assign(m, 1.0);
    } else if (damping_times.size() == 1) {
        taus.assign(m, damping_times[0]);
    } else if (damping_times.size() == m) {
        taus = damping_times;
    } else {
        throw ValidationError("compile: expected 0, 1 or " + std::to_string(m) +
                              " damping times, got " + std::to_string(damping_times.size()));
    }
    for (std::size_t i = 0; i < m; ++i) require_positive(taus[i], "damping time " + std::to_string(i));

    SimulationProtocol p;
    p.name = "compiled";
    p.system_space = target.space;
    p.bath_space = HilbertSpace(std::vector<std::size_t>(m, 2));
    p.n_ancillas = m;
    p.damping_times = taus;
    p.mode = CouplingMode::Library;
    p.k1 = target.hamiltonian;

    const HilbertSpace full = p.full_space();
    const std::size_t n_sys_factors = target.space.num_factors();
    const auto ds = static_cast<Eigen::Index>(target.space.total_dim());
    const ComplexMatrix id_s = ComplexMatrix::Identity(ds, ds);
    const Operator sm = pauli(PauliKind::Minus);
    const Operator sp = pauli(PauliKind::Plus);

    Operator k = Operator::zero(full);
    p.bath = LindbladSpec{p.bath_space, Operator::zero(p.bath_space), {}};
    for (std::size_t i = 0; i < m; ++i) {
        const double g = std::sqrt(target.jumps[i].rate / (4.0 * taus[i]));
        p.couplings.push_back(g);
        const Operator& l = target.jumps[i].op;
        // L_i acts on the system block; embed places it against identities on the bank.
        const auto db = static_cast<Eigen::Index>(p.bath_space.total_dim());
        const ComplexMatrix id_b = ComplexMatrix::Identity(db, db);
        const Operator l_full(full, kron(l.matrix(), id_b));
        const Operator ldag_full(full, kron(l.matrix().adjoint(), id_b));
        const std::size_t site = n_sys_factors + i;
        k += g * (ldag_full * embed(sm, site, full) + l_full * embed(sp, site, full));
        p.bath.jumps.push_back({embed(sm, i, p.bath_space), 1.0 / taus[i]});
    }
    // Symmetrize away rounding in the products.
    p.k = Operator(full, 0.5 * (k.matrix() + k.matrix().adjoint()));
    (void)id_s;

    LindbladSpec expected{target.space, Operator::zero(target.space), target.jumps};
    p.expected = expected;
    return p;
}

ProtocolAnalysis prepare(const SimulationProtocol& protocol, const Tolerances& tol) {
    const HilbertSpace full = protocol.full_space();
    const SuperOperator l_b = protocol.l_bath(tol);
    ProtocolAnalysis a{protocol.l0(tol),
                       analyze_product(l_b, protocol.system_space, tol),
                       hamiltonian_superop(protocol.k, tol),
                       {},
                       {},
                       {},
                       0.0};
    const auto db = static_cast<Eigen::Index>(protocol.bath_space.total_dim());
    const Operator k1_full(full, kron(protocol.k1.matrix(), ComplexMatrix::Identity(db, db)));
    a.k1_superop = hamiltonian_superop(k1_full, tol);
    a.first_order_norm =
        first_order_hamiltonian(protocol.k, a.spectral.product->rho0, protocol.system_space).matrix().norm();
    a.l_eff_base = effective_generator_generic(a.l0, protocol.k, a.spectral, tol);
    a.k1_projected = projected_hamiltonian(k1_full, a.spectral);
    return a;
}

ScaledModel scale(const SimulationProtocol& protocol, const ProtocolAnalysis& analysis, double t_scale) {
    require_positive(t_scale, "scale: T");
    ScaledModel m;
    m.t_scale = t_scale;
    double eff_factor = 1.0;  // T · coupling_scale²
    if (protocol.mode == CouplingMode::Figure) {
        if (!protocol.tau_r_caption) {
            throw ValidationError("scale: figure mode requires the protocol's caption relaxation time");
        }
        m.tau_r = *protocol.tau_r_caption;
        m.coupling_scale = 1.0 / std::sqrt(m.tau_r * t_scale);
        eff_factor = 1.0 / m.tau_r;
    } else {
        m.tau_r = analysis.spectral.tau_r;
        m.coupling_scale = 1.0 / std::sqrt(t_scale);
    }
    for (double g : protocol.couplings) m.effective_couplings.push_back(m.coupling_scale * g);

    const SuperOperator k_part = m.coupling_scale * analysis.k_superop;
    const SuperOperator k1_part = (1.0 / t_scale) * analysis.k1_superop;
    m.l_t = analysis.l0 + k_part + k1_part;
    m.l_eff_dimensionless = eff_factor * analysis.l_eff_base + analysis.k1_projected;
    m.k_part_norm = spectral_norm(k_part.matrix());
    m.k1_part_norm = spectral_norm(k1_part.matrix());
    m.k1_normalization = "K1 enters L_T as T^-1 (-i[K1, .]); its projection adds to the dimensionless "
                         "effective generator with unit weight";
    return m;
}

ScaledModel scale(const SimulationProtocol& protocol, double t_scale, const Tolerances& tol) {
    return scale(protocol, prepare(protocol, tol), t_scale);
}

double caption_relaxation_time(double tau_plus, double tau_minus) {
    return tau_plus * tau_minus / (tau_plus + tau_minus);
}

ThermalRates thermal_rates(double g, double tau_plus, double tau_minus) {
    require_positive(tau_plus, "thermal_rates: tau_plus");
    require_positive(tau_minus, "thermal_rates: tau_minus");
    const double sum = tau_plus + tau_minus;
    const double common = 4.0 * g * g * tau_minus * tau_plus / (sum * sum);
    return {common * tau_minus, common * tau_plus};
}

double temperature_ratio(double omega_eff, double omega_b) {
    if (omega_b == 0.0) throw ValidationError("temperature_ratio: omega_b must be nonzero");
    return omega_eff / omega_b;
}

SimulationProtocol collective_damping_cavity(std::size_t n_qubits, double omega, double tau_r,
                                             std::size_t cutoff) {
    require_positive(tau_r, "collective_damping_cavity: tau_r");
    SimulationProtocol p;
    p.name = "collective-damping-cavity";
    p.system_space = HilbertSpace(std::vector<std::size_t>(n_qubits, 2));
    p.bath_space = HilbertSpace({cutoff});
    p.n_ancillas = 1;
    p.couplings = {1.0};
    p.damping_times = {tau_r};
    p.mode = CouplingMode::Figure;
    p.tau_r_caption = tau_r;

    const Operator sm = collective_spin(n_qubits, CollectiveKind::Minus);
    const Operator spl = collective_spin(n_qubits, CollectiveKind::Plus);
    const Operator a = boson(cutoff, BosonKind::Annihilate);
    const Operator ad = boson(cutoff, BosonKind::Create);
    p.k = tensor(sm, ad) + tensor(spl, a);
    p.k1 = Operator::zero(p.system_space);
    p.bath = LindbladSpec{p.bath_space, omega * boson(cutoff, BosonKind::Number), {{a, 1.0 / tau_r}}};

    // Unit coupling: rate 4τ/(1 + 4ω²τ²) on S⁻ and shift −4ωτ²/(1 + 4ω²τ²) S⁺S⁻.
    const double denom = 1.0 + 4.0 * omega * omega * tau_r * tau_r;
    const double rate = 4.0 * tau_r / denom;
    const double shift = -4.0 * omega * tau_r * tau_r / denom;
    p.expected = LindbladSpec{p.system_space, shift * (spl * sm), {{sm, rate}}};
    return p;
}

SimulationProtocol collective_thermal(std::size_t n_qubits, double tau_plus, double tau_minus) {
    require_positive(tau_plus, "collective_thermal: tau_plus");
    require_positive(tau_minus, "collective_thermal: tau_minus");
    SimulationProtocol p;
    p.name = "collective-thermal";
    p.system_space = HilbertSpace(std::vector<std::size_t>(n_qubits, 2));
    p.bath_space = HilbertSpace({2});
    p.n_ancillas = 1;
    p.couplings = {1.0};
    p.damping_times = {tau_minus};
    p.mode = CouplingMode::Figure;
    p.tau_r_caption = caption_relaxation_time(tau_plus, tau_minus);

    const Operator sm = collective_spin(n_qubits, CollectiveKind::Minus);
    const Operator spl = collective_spin(n_qubits, CollectiveKind::Plus);
    p.k = tensor(spl, pauli(PauliKind::Minus)) + tensor(sm, pauli(PauliKind::Plus));
    p.k1 = Operator::zero(p.system_space);
    p.bath = thermal_bath(tau_plus, tau_minus);

    const ThermalRates r = thermal_rates(1.0, tau_plus, tau_minus);
    p.expected = LindbladSpec{p.system_space, Operator::zero(p.system_space),
                              {{sm, r.rate_minus}, {spl, r.rate_plus}}};
    return p;
}

SimulationProtocol collective_dephasing(std::size_t n_qubits, double tau_plus, double tau_minus) {
    require_positive(tau_plus, "collective_dephasing: tau_plus");
    require_positive(tau_minus, "collective_dephasing: tau_minus");
    SimulationProtocol p;
    p.name = "collective-dephasing";
    p.system_space = HilbertSpace(std::vector<std::size_t>(n_qubits, 2));
    p.bath_space = HilbertSpace({2});
    p.n_ancillas = 1;
    p.couplings = {1.0};
    p.damping_times = {tau_minus};
    p.mode = CouplingMode::Figure;
    p.tau_r_caption = caption_relaxation_time(tau_plus, tau_minus);

    const Operator sx = collective_spin(n_qubits, CollectiveKind::X);
    p.k = tensor(sx, pauli(PauliKind::X));
    p.k1 = Operator::zero(p.system_space);
    p.bath = thermal_bath(tau_plus, tau_minus);

    const double rate = 4.0 * tau_minus * tau_plus / (tau_plus + tau_minus);
    p.expected = LindbladSpec{p.system_space, Operator::zero(p.system_space), {{sx, rate}}};
    return p;
}

std::vector<SimulationProtocol> builtin_scenarios() {
    return {collective_damping_cavity(1, 0.0, 1.0, 8), collective_thermal(3, 2.0, 1.0),
            collective_dephasing(1, 2.0, 1.0)};
}

SimulationProtocol builtin_scenario(const std::string& name, const ScenarioParams& params) {
    if (name == "collective-damping-cavity") {
        return collective_damping_cavity(params.n_qubits, params.omega, params.tau_r, params.cutoff);
    }
    if (name == "collective-thermal") {
        return collective_thermal(params.n_qubits, params.tau_plus, params.tau_minus);
    }
    if (name == "collective-dephasing") {
        return collective_dephasing(params.n_qubits, params.tau_plus, params.tau_minus);
    }
    throw ValidationError("unknown scenario '" + name + "'");
}

}  // namespace lindsim
