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

#include <doctest.h>

#include "lindsim/protocol.hpp"
#include "oracles.hpp"

using namespace lindsim;

namespace {

LindbladSpec random_target(std::mt19937_64& rng, int d, int n_jumps) {
    const HilbertSpace s({static_cast<std::size_t>(d)});
    LindbladSpec spec{s, Operator(s, oracle::random_hermitian(rng, d)), {}};
    std::uniform_real_distribution<double> rate(0.1, 2.0);
    for (int k = 0; k < n_jumps; ++k) spec.jumps.push_back({Operator(s, oracle::random_matrix(rng, d)), rate(rng)});
    return spec;
}

oracle::Mat dissipative_part(const LindbladSpec& spec) {
    const int d = static_cast<int>(spec.space.total_dim());
    return oracle::matrix_of(
        [&](const oracle::Mat& x) -> oracle::Mat {
            oracle::Mat out = oracle::Mat::Zero(d, d);
            for (const auto& j : spec.jumps) out += oracle::dissipate(j.op.matrix(), j.rate, x);
            return out;
        },
        d);
}

}  // namespace

TEST_CASE("compile: one jump at rate 1 with τ = 1/4 gives g = 1") {
    const HilbertSpace q({2});
    const LindbladSpec target{q, Operator::zero(q), {{pauli(PauliKind::Minus), 1.0}}};
    const SimulationProtocol p = compile(target, {0.25});
    CHECK(p.n_ancillas == 1);
    REQUIRE(p.couplings.size() == 1);
    CHECK(p.couplings[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.full_space().total_dim() == 4);
    const ComplexMatrix k_ref = oracle::kron(oracle::sigma_minus().adjoint(), oracle::sigma_minus()) +
                                oracle::kron(oracle::sigma_minus(), oracle::sigma_minus().adjoint());
    CHECK((p.k.matrix() - k_ref).norm() < 1e-15);
}

TEST_CASE("compile: damping-time forms and validation") {
    std::mt19937_64 rng(61);
    const LindbladSpec target = random_target(rng, 2, 3);
    CHECK(compile(target).damping_times == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(compile(target, {0.5}).damping_times == std::vector<double>{0.5, 0.5, 0.5});
    CHECK(compile(target, {0.5, 1.0, 2.0}).damping_times == std::vector<double>{0.5, 1.0, 2.0});
    CHECK_THROWS_AS(compile(target, {0.5, 1.0}), ValidationError);
    CHECK_THROWS_AS(compile(target, {0.0}), ValidationError);
    CHECK_THROWS_AS(compile(target, {-1.0}), ValidationError);
    LindbladSpec zero_jump = target;
    zero_jump.jumps[1].op = Operator::zero(target.space);
    CHECK_THROWS_AS(compile(zero_jump), ValidationError);
}

TEST_CASE("compiled protocols reproduce the dissipative part of random targets") {
    std::mt19937_64 rng(62);
    for (int trial = 0; trial < 5; ++trial) {
        const int d = 2 + trial % 2;
        const LindbladSpec target = random_target(rng, d, 1 + trial % 2);
        std::vector<double> taus;
        for (std::size_t i = 0; i < target.jumps.size(); ++i) taus.push_back(0.3 + 0.4 * double(i));
        const SimulationProtocol p = compile(target, taus);
        const EffectiveGenerator eg = build_effective(p.k, p.l_bath(), p.system_space);
        const oracle::Mat ref = dissipative_part(target);
        CHECK((eg.system_sector.matrix() - ref).norm() < 1e-10 * std::max(1.0, ref.norm()));
        CHECK((p.k1.matrix() - target.hamiltonian.matrix()).norm() == 0.0);
        REQUIRE(p.expected.has_value());
        CHECK((liouvillian(*p.expected).matrix() - ref).norm() < 1e-12 * std::max(1.0, ref.norm()));
    }
}

TEST_CASE("prepare: the K1 projection is the lifted target Hamiltonian") {
    std::mt19937_64 rng(63);
    const LindbladSpec target = random_target(rng, 2, 1);
    const SimulationProtocol p = compile(target, {0.5});
    const ProtocolAnalysis a = prepare(p);
    CHECK(a.first_order_norm < 1e-14);
    const SuperOperator h_sys = hamiltonian_superop(target.hamiltonian);
    const Operator rho0 = analyze_bath(p.l_bath()).rho0;
    const SuperOperator lifted = lift_to_steady_sector(h_sys, rho0);
    CHECK((a.k1_projected.matrix() - lifted.matrix()).norm() < 1e-12);
}

TEST_CASE("library scaling: K part shrinks by √2 and K1 part by 2 when T doubles") {
    std::mt19937_64 rng(64);
    const SimulationProtocol p = compile(random_target(rng, 2, 1), {0.5});
    const ProtocolAnalysis a = prepare(p);
    const ScaledModel m1 = scale(p, a, 10.0);
    const ScaledModel m2 = scale(p, a, 20.0);
    CHECK(m1.k_part_norm / m2.k_part_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(m1.k1_part_norm / m2.k1_part_norm == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(m1.coupling_scale == doctest::Approx(1.0 / std::sqrt(10.0)));
    CHECK(m1.tau_r == doctest::Approx(a.spectral.tau_r));
    // The dimensionless effective generator does not depend on T.
    CHECK((m1.l_eff_dimensionless.matrix() - m2.l_eff_dimensionless.matrix()).norm() < 1e-14);
    const ComplexMatrix lt_ref = a.l0.matrix() + a.k_superop.matrix() / std::sqrt(10.0) + a.k1_superop.matrix() / 10.0;
    CHECK((m1.l_t.matrix() - lt_ref).norm() < 1e-13);
    CHECK_THROWS_AS(scale(p, a, 0.0), ValidationError);
}

TEST_CASE("figure scaling: g = (τ_R T)^{-1/2} with the caption relaxation time") {
    const SimulationProtocol p = collective_thermal(1, 2.0, 1.0);
    REQUIRE(p.tau_r_caption.has_value());
    CHECK(*p.tau_r_caption == doctest::Approx(2.0 / 3.0));
    const ScaledModel m = scale(p, 100.0);
    CHECK(m.coupling_scale == doctest::Approx(1.0 / std::sqrt(200.0 / 3.0)).epsilon(1e-14));
    CHECK(m.effective_couplings[0] == doctest::Approx(m.coupling_scale));
}

TEST_CASE("thermal rates") {
    const ThermalRates r = thermal_rates(1.0, 2.0, 1.0);
    CHECK(r.rate_plus == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
    CHECK(r.rate_minus == doctest::Approx(16.0 / 9.0).epsilon(1e-14));
    // Equal times: both rates equal g² τ.
    const ThermalRates eq = thermal_rates(0.5, 3.0, 3.0);
    CHECK(eq.rate_plus == doctest::Approx(0.25 * 3.0));
    CHECK(eq.rate_minus == doctest::Approx(0.25 * 3.0));
    // Detailed balance carries over from the bath.
    const ThermalRates r2 = thermal_rates(0.7, 5.0, 1.5);
    CHECK(r2.rate_plus / r2.rate_minus == doctest::Approx(1.5 / 5.0));
    CHECK_THROWS_AS(thermal_rates(1.0, 0.0, 1.0), ValidationError);
    CHECK(temperature_ratio(2.0, 4.0) == 0.5);
    CHECK_THROWS_AS(temperature_ratio(1.0, 0.0), ValidationError);
}

TEST_CASE("built-in scenarios match their expected generators") {
    for (const SimulationProtocol& p : builtin_scenarios()) {
        INFO(p.name);
        REQUIRE(p.expected.has_value());
        const EffectiveGenerator eg = build_effective(p.k, p.l_bath(), p.system_space);
        const ComplexMatrix ref = liouvillian(*p.expected).matrix();
        CHECK((eg.system_sector.matrix() - ref).norm() < 1e-9 * std::max(1.0, ref.norm()));
        CHECK(eg.is_lindblad);
    }
}

TEST_CASE("detuned cavity: Lorentzian rate and a frequency shift") {
    const double omega = 0.8, tau = 0.5;
    const SimulationProtocol p = collective_damping_cavity(1, omega, tau, 6);
    const EffectiveGenerator eg = build_effective(p.k, p.l_bath(), p.system_space);
    const double denom = 1.0 + 4.0 * omega * omega * tau * tau;
    const oracle::Mat sm = oracle::sigma_minus();
    const oracle::Mat h = (-4.0 * omega * tau * tau / denom) * sm.adjoint() * sm;
    const oracle::Mat ref = oracle::lindblad_matrix(h, {{sm, 4.0 * tau / denom}});
    CHECK((eg.system_sector.matrix() - ref).norm() < 1e-9);
}

TEST_CASE("scenario lookup") {
    ScenarioParams params;
    params.n_qubits = 2;
    CHECK(builtin_scenario("collective-thermal", params).system_space.total_dim() == 4);
    CHECK(builtin_scenario("collective-dephasing", params).name == "collective-dephasing");
    CHECK_THROWS_AS(builtin_scenario("nope", params), ValidationError);
    CHECK_THROWS_AS(collective_damping_cavity(1, 0.0, -1.0), ValidationError);
}
