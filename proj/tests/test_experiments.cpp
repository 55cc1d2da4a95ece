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

#include "lindsim/experiments.hpp"
#include "oracles.hpp"

using namespace lindsim;

namespace {

SimulationProtocol damped_qubit_protocol() {
    const HilbertSpace q({2});
    return compile(LindbladSpec{q, Operator::zero(q), {{pauli(PauliKind::Minus), 1.0}}}, {0.25});
}

}  // namespace

TEST_CASE("log grid") {
    const std::vector<double> g = log_grid(0.01, 10.0, 4);
    CHECK(g.front() == 0.0);
    CHECK(g[1] == doctest::Approx(0.01));
    CHECK(g.back() == 10.0);
    CHECK(g.size() == 14);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    CHECK(log_grid(0.01, 10.0, 4, false).front() == doctest::Approx(0.01));
    CHECK_THROWS_AS(log_grid(1.0, 0.5, 4), ValidationError);
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 4), ValidationError);
}

TEST_CASE("propagator agrees with expm") {
    std::mt19937_64 rng(71);
    const HilbertSpace s({3});
    const LindbladSpec spec{s, Operator(s, oracle::random_hermitian(rng, 3)), {{Operator(s, oracle::random_matrix(rng, 3)), 0.5}}};
    const ComplexMatrix l = liouvillian(spec).matrix();
    const ComplexMatrix basis = oracle::random_matrix(rng, 9).leftCols(3);
    const Propagator prop(l, basis, 5.0);
    for (double t : {0.0, 0.01, 1.0, 5.0}) {
        CHECK((prop.apply(t) - oracle::expm_taylor(t * l) * basis).norm() < 1e-9);
    }
}

TEST_CASE("error curve: zero at t = 0 and spectral norm of the full map") {
    const SimulationProtocol p = damped_qubit_protocol();
    const ProtocolAnalysis a = prepare(p);
    const ScaledModel m = scale(p, a, 50.0);
    const std::vector<double> grid{0.0, 1.0, 10.0};
    const ErrorCurve c = error_curve(m, a.spectral, grid);
    CHECK(c.distances[0] < 1e-14);
    // Direct dense evaluation of ‖(e^{tL_T} − e^{(t/T)L̃}) P0‖.
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double t = grid[i];
        const oracle::Mat diff = (oracle::expm_taylor(t * m.l_t.matrix()) -
                                  oracle::expm_taylor((t / 50.0) * m.l_eff_dimensionless.matrix())) *
                                 a.spectral.p0;
        CHECK(c.distances[i] == doctest::Approx(oracle::norm2(diff)).epsilon(1e-8));
    }
    CHECK(c.sup_error == doctest::Approx(*std::max_element(c.distances.begin(), c.distances.end())));
    CHECK(c.endpoint_error == c.distances.back());
}

TEST_CASE("zero coupling: zero errors and a degenerate fit") {
    SimulationProtocol p = damped_qubit_protocol();
    p.k = Operator::zero(p.full_space());
    p.k1 = Operator::zero(p.system_space);
    SweepOptions opt;
    opt.per_decade = 5;
    const SweepResult r = sweep_T(p, {10.0, 100.0, 1000.0, 10000.0}, opt);
    for (double e : r.errors) CHECK(e == 0.0);
    CHECK(r.fit.degenerate);
    CHECK(r.fit.r_squared == 0.0);
}

TEST_CASE("sweep validation and ordering") {
    const SimulationProtocol p = damped_qubit_protocol();
    SweepOptions opt;
    opt.per_decade = 5;
    CHECK_THROWS_AS(sweep_T(p, {10.0, 20.0}, opt), ValidationError);
    CHECK_THROWS_AS(sweep_T(p, {10.0, 20.0, 30.0, 40.0}, opt), ValidationError);
    opt.validate_span = false;
    opt.threads = 2;
    const SweepResult r = sweep_T(p, {10.0, 20.0}, opt);
    CHECK(r.t_values == std::vector<double>{10.0, 20.0});
    CHECK(r.inv_sqrt_t[0] == doctest::Approx(1.0 / std::sqrt(10.0)));
}

TEST_CASE("the error decreases pointwise in t/T from T to 100T") {
    const SimulationProtocol p = collective_dephasing(1, 2.0, 1.0);
    TraceOptions opt;
    opt.per_decade = 10;
    opt.t_min = 1.0;
    const std::vector<ErrorCurve> curves = trace_curves(p, {100.0, 10000.0}, opt);
    REQUIRE(curves.size() == 2);
    // Same grid in units of T once t_min scales with T.
    TraceOptions opt2 = opt;
    opt2.t_min = 100.0;
    const ErrorCurve hi = trace_curves(p, {10000.0}, opt2)[0];
    REQUIRE(hi.t_grid.size() == curves[0].t_grid.size());
    for (std::size_t i = 1; i < hi.t_grid.size(); ++i) {
        CHECK(hi.t_grid[i] / 10000.0 == doctest::Approx(curves[0].t_grid[i] / 100.0));
        CHECK(hi.distances[i] < curves[0].distances[i]);
    }
}

TEST_CASE("fit_line") {
    const LinearFit f = fit_line({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK_FALSE(f.degenerate);
    CHECK_THROWS_AS(fit_line({1.0}, {1.0}), ValidationError);
    CHECK_THROWS_AS(fit_line({1.0, 2.0, 3.0}, {1.0, 2.0}), DimensionError);
}

TEST_CASE("leakage in a truncated cavity") {
    const SimulationProtocol p = collective_damping_cavity(1, 0.0, 1.0, 8);
    const ProtocolAnalysis a = prepare(p);
    const ScaledModel m = scale(p, a, 100.0);
    const LeakageReport ok = leakage_check(m, a.spectral, 1, {1.0, 10.0, 100.0});
    CHECK(ok.max_population <= 1e-8);
    CHECK_FALSE(ok.warned);

    const SimulationProtocol small = collective_damping_cavity(1, 0.0, 1.0, 2);
    const ProtocolAnalysis as = prepare(small);
    const ScaledModel ms = scale(small, as, 0.5);
    const LeakageReport bad = leakage_check(ms, as.spectral, 1, {0.5, 1.0, 2.0});
    CHECK(bad.max_population > 1e-8);
    CHECK(bad.warned);
    CHECK_FALSE(bad.message.empty());

    SimulationProtocol none = p;
    none.k = Operator::zero(p.full_space());
    const ProtocolAnalysis an = prepare(none);
    CHECK(leakage_check(scale(none, an, 100.0), an.spectral, 1, {1.0, 10.0}).max_population == 0.0);
    CHECK_THROWS_AS(leakage_check(m, a.spectral, 5, {1.0}), ValidationError);
}

TEST_CASE("hierarchy: a unique steady state ends at level 0") {
    const SuperOperator base = dissipator(pauli(PauliKind::Minus), 1.0);
    const auto levels = hierarchy_iterate(base, {pauli(PauliKind::X)}, 0.1, 3);
    REQUIRE(levels.size() == 1);
    CHECK(levels[0].p0_dim == 1);
    CHECK_FALSE(levels[0].stop_reason.empty());
}

TEST_CASE("hierarchy: nested damping stretches τ_R by at least 0.1/ε² per level") {
    const HierarchyInstance inst = nested_damping_instance();
    const double eps = 0.1;
    const auto levels = hierarchy_iterate(inst.base, inst.couplings, eps, 3);
    REQUIRE(levels.size() >= 3);
    CHECK(levels[0].p0_dim == 16);
    CHECK(levels[1].p0_dim == 4);
    for (std::size_t n = 0; n + 1 < levels.size(); ++n) {
        if (levels[n + 1].hamiltonian_level || levels[n + 1].tau_r == 0.0) continue;
        CHECK(levels[n].epsilon == doctest::Approx(eps).epsilon(1e-10));
        CHECK(levels[n + 1].tau_r / levels[n].tau_r >= 0.1 / (eps * eps));
    }
    // Each generator is a valid Lindbladian on its sector: it preserves trace.
    for (const auto& lv : levels) {
        ComplexVector vec_id = ComplexVector::Zero(64);
        for (int i = 0; i < 8; ++i) vec_id(i + 8 * i) = 1.0;
        CHECK((vec_id.adjoint() * lv.l_eff.matrix()).norm() < 1e-10);
    }
}

TEST_CASE("hierarchy: a first-order term gives a Hamiltonian level") {
    // The second qubit relaxes to |0⟩; any system Hamiltonian survives the projection.
    const HilbertSpace s({2, 2});
    const SuperOperator base = dissipator(embed(pauli(PauliKind::Minus), 1, s), 1.0);
    const auto levels = hierarchy_iterate(base, {embed(pauli(PauliKind::X), 0, s)}, 0.1, 3);
    REQUIRE(levels.size() == 2);
    CHECK(levels[1].hamiltonian_level);
    CHECK(levels[0].first_order_norm > 0.0);
}

TEST_CASE("regression of the built-in scenarios") {
    const RegressionReport r = regression_scenarios();
    CHECK(r.entries.size() == 3);
    CHECK(r.all_passed());
    for (const auto& e : r.entries) {
        INFO(e.name);
        CHECK(e.distance < 1e-8);
        CHECK(e.gamma_min_eig >= -1e-10);
        CHECK(e.expected_rates.size() == e.extracted_rates.size());
    }
    // Tight threshold: a wrong g fails.
    SimulationProtocol p = collective_thermal(1, 2.0, 1.0);
    p.expected->jumps[0].rate *= 1.01;
    CHECK_FALSE(regress_protocol(p, 1.0).passed);
}
