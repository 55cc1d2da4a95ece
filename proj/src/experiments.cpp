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

#include "lindsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <numeric>
#include <thread>

namespace lindsim {

namespace {

// Runs job(i) for i in [0, n) on up to `threads` workers. The first failure by
// index is rethrown after all workers finish.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& job) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    std::vector<std::exception_ptr> errors(n);
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                job(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        job(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

ComplexMatrix hermitian_sqrt(const ComplexMatrix& g) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g);
    Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<double> sorted_desc(std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

}  // namespace

std::vector<double> log_grid(double t_min, double t_max, std::size_t per_decade, bool include_zero) {
    if (!(t_min > 0.0) || !(t_max >= t_min) || per_decade == 0) {
        throw ValidationError("log_grid: need 0 < t_min <= t_max and per_decade > 0");
    }
    std::vector<double> grid;
    if (include_zero) grid.push_back(0.0);
    const double step = 1.0 / static_cast<double>(per_decade);
    for (std::size_t k = 0;; ++k) {
        const double t = t_min * std::pow(10.0, step * static_cast<double>(k));
        if (t >= t_max * (1.0 - 1e-12)) break;
        grid.push_back(t);
    }
    grid.push_back(t_max);
    return grid;
}

Propagator::Propagator(const ComplexMatrix& generator, const ComplexMatrix& basis, double t_check)
    : generator_(generator), basis_(basis) {
    require_square(generator, "Propagator");
    if (generator.cols() != basis.rows()) {
        throw DimensionError("Propagator: basis rows do not match the generator");
    }
    if ((generator * basis).isZero(0.0)) {
        stationary_ = true;
        return;
    }
    try {
        const EigenDecomposition ed = eig_general(generator);
        Eigen::PartialPivLU<ComplexMatrix> lu(ed.right_eigenvectors);
        if (lu.rcond() < 1e-12) return;
        vecs_ = ed.right_eigenvectors;
        vals_ = ed.eigenvalues;
        coeffs_ = lu.solve(basis);
    } catch (const NumericError&) {
        return;
    }
    eigen_route_ = true;
    const double limit = 1e-10 * std::max(1.0, basis.norm());
    for (double t : {t_check, t_check / 10.0, t_check / 1000.0}) {
        if (!(t > 0.0)) continue;
        const ComplexMatrix ref = expm(t * generator) * basis;
        if ((apply(t) - ref).norm() > limit) {
            eigen_route_ = false;
            break;
        }
    }
}

ComplexMatrix Propagator::apply(double t) const {
    if (t == 0.0 || stationary_) return basis_;
    if (eigen_route_) {
        const ComplexVector phases = (t * vals_).array().exp();
        return vecs_ * (phases.asDiagonal() * coeffs_);
    }
    return expm(t * generator_) * basis_;
}

ErrorCurve error_curve(const ScaledModel& model, const SpectralData& spectral, const std::vector<double>& t_grid) {
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 0.0) || (i > 0 && t_grid[i] < t_grid[i - 1])) {
            throw ValidationError("error_curve: t grid must be nonnegative and sorted");
        }
    }
    ErrorCurve curve;
    curve.t_scale = model.t_scale;
    curve.t_grid = t_grid;
    if (t_grid.empty()) return curve;

    const ComplexMatrix& range = spectral.p0_range;
    const ComplexMatrix& corange = spectral.p0_corange;
    // L̃_eff = P0 L̃_eff P0, so e^{sL̃_eff} P0 = range · e^{sC} · corange with C below.
    const ComplexMatrix core = corange * model.l_eff_dimensionless.matrix() * range;
    // ‖Y · corange‖ = ‖Y · G^{1/2}‖ with G = corange corange†.
    const ComplexMatrix g_half = hermitian_sqrt(corange * corange.adjoint());
    const Propagator exact(model.l_t.matrix(), range, t_grid.back());

    curve.distances.reserve(t_grid.size());
    for (double t : t_grid) {
        if (t == 0.0) {
            curve.distances.push_back(0.0);
            continue;
        }
        const ComplexMatrix diff = exact.apply(t) - range * expm((t / model.t_scale) * core);
        curve.distances.push_back(spectral_norm(diff * g_half));
    }
    curve.sup_error = *std::max_element(curve.distances.begin(), curve.distances.end());
    curve.endpoint_error = curve.distances.back();
    return curve;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw DimensionError("fit_line: " + std::to_string(x.size()) + " x values but " +
                             std::to_string(y.size()) + " y values");
    }
    if (x.size() < 2) throw ValidationError("fit_line: need at least two (x, y) pairs");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit fit;
    if (sxx == 0.0) throw ValidationError("fit_line: all x values coincide");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double scale = std::max(std::abs(my), *std::max_element(y.begin(), y.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b);
    }));
    if (syy <= 1e-30 * std::max(1.0, scale * scale) * n) {
        fit.degenerate = true;
        fit.r_squared = 0.0;
        return fit;
    }
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        ss_res += r * r;
    }
    fit.r_squared = 1.0 - ss_res / syy;
    return fit;
}

ErrorCurve evaluate_t(const SimulationProtocol& protocol, const ProtocolAnalysis& analysis, double t_scale,
                      const SweepOptions& options) {
    const ScaledModel model = scale(protocol, analysis, t_scale);
    const double t_min = options.t_min.value_or(model.tau_r / 100.0);
    const double t_max = options.theta * t_scale;
    return error_curve(model, analysis.spectral, log_grid(t_min, t_max, options.per_decade));
}

SweepResult sweep_T(const SimulationProtocol& protocol, const std::vector<double>& t_values,
                    const SweepOptions& options) {
    if (t_values.empty()) throw ValidationError("sweep_T: no T values");
    for (double t : t_values) {
        if (!(t > 0.0)) throw ValidationError("sweep_T: T values must be positive");
    }
    if (!(options.theta > 0.0)) throw ValidationError("sweep_T: theta must be positive");
    if (options.validate_span) {
        const auto [lo, hi] = std::minmax_element(t_values.begin(), t_values.end());
        if (t_values.size() < 4 || std::log10(*hi / *lo) < 1.5) {
            throw ValidationError("sweep_T: need at least 4 T values spanning 1.5 decades");
        }
    }
    const ProtocolAnalysis analysis = prepare(protocol, options.tol);

    SweepResult r;
    r.t_values = t_values;
    r.metric = options.metric;
    std::vector<ErrorCurve> curves(t_values.size());
    parallel_for(t_values.size(), options.threads,
                 [&](std::size_t i) { curves[i] = evaluate_t(protocol, analysis, t_values[i], options); });

    const double tau_r = scale(protocol, analysis, t_values.front()).tau_r;
    for (std::size_t i = 0; i < t_values.size(); ++i) {
        r.inv_sqrt_t.push_back(1.0 / std::sqrt(t_values[i]));
        r.sup_errors.push_back(curves[i].sup_error);
        r.endpoint_errors.push_back(curves[i].endpoint_error);
        r.tau_r.push_back(tau_r);
    }
    r.errors = options.metric == ErrorMetric::Sup ? r.sup_errors : r.endpoint_errors;
    if (t_values.size() >= 2 && *std::min_element(t_values.begin(), t_values.end()) !=
                                    *std::max_element(t_values.begin(), t_values.end())) {
        r.fit = fit_line(r.inv_sqrt_t, r.errors);
    } else {
        r.fit.degenerate = true;
        r.fit.intercept = r.errors.front();
    }
    if (options.keep_curves) r.curves = std::move(curves);
    return r;
}

std::vector<ErrorCurve> trace_curves(const SimulationProtocol& protocol, const std::vector<double>& t_values,
                                     const TraceOptions& options) {
    if (t_values.empty()) throw ValidationError("trace_curves: no T values");
    if (!(options.t_max_factor > 0.0)) throw ValidationError("trace_curves: t_max_factor must be positive");
    const ProtocolAnalysis analysis = prepare(protocol, options.tol);
    std::vector<ErrorCurve> curves(t_values.size());
    parallel_for(t_values.size(), options.threads, [&](std::size_t i) {
        const ScaledModel model = scale(protocol, analysis, t_values[i]);
        const double t_min = options.t_min.value_or(model.tau_r / 100.0);
        const double t_max = options.t_max_factor * t_values[i];
        curves[i] = error_curve(model, analysis.spectral, log_grid(t_min, t_max, options.per_decade));
    });
    return curves;
}

LeakageReport leakage_check(const ScaledModel& model, const SpectralData& spectral, std::size_t boson_site,
                            const std::vector<double>& t_samples, double threshold) {
    const HilbertSpace& full = model.l_t.space();
    if (boson_site >= full.num_factors()) {
        throw ValidationError("leakage_check: boson site out of range");
    }
    const std::size_t cutoff = full.factors()[boson_site];
    const auto n = static_cast<Eigen::Index>(full.total_dim());
    const Operator top = basis_projector(cutoff, cutoff - 1) + basis_projector(cutoff, cutoff - 2);
    const ComplexMatrix pi = embed(top, boson_site, full).matrix();
    // Tr(Π X) = Σ_ij Π(j, i) X(i, j).
    ComplexVector weight(n * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) weight(i + n * j) = pi(j, i);
    }

    const auto ds = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(spectral.p0_range.cols()))));
    std::vector<ComplexVector> initial;
    for (Eigen::Index a = 0; a < ds; ++a) {
        ComplexVector c = ComplexVector::Zero(ds * ds);
        c(a + ds * a) = 1.0;
        initial.push_back(c);
        for (Eigen::Index b = a + 1; b < ds; ++b) {
            ComplexVector m = ComplexVector::Zero(ds * ds);
            m(a + ds * a) = m(b + ds * b) = m(a + ds * b) = m(b + ds * a) = 0.5;
            initial.push_back(m);
        }
    }

    double t_check = 0.0;
    for (double t : t_samples) t_check = std::max(t_check, t);
    const Propagator prop(model.l_t.matrix(), spectral.p0_range, t_check);
    LeakageReport rep;
    for (double t : t_samples) {
        const ComplexMatrix x = prop.apply(t);
        const ComplexVector projected = (weight.transpose() * x).transpose();
        for (const auto& c : initial) {
            const double pop = std::abs(projected.dot(c.conjugate()));
            rep.max_population = std::max(rep.max_population, pop);
        }
    }
    if (rep.max_population > threshold) {
        rep.warned = true;
        rep.message = "boson truncation: top-level population " + std::to_string(rep.max_population) +
                      " exceeds " + std::to_string(threshold) + "; increase the cutoff";
    }
    return rep;
}

std::vector<HierarchyLevel> hierarchy_iterate(const SuperOperator& base, const std::vector<Operator>& couplings,
                                              double epsilon, std::size_t max_levels, const Tolerances& tol) {
    if (!(epsilon > 0.0)) throw ValidationError("hierarchy_iterate: epsilon must be positive");
    const ComplexMatrix& l0 = base.matrix();
    const Eigen::Index n = l0.rows();

    SpectralData sd = analyze(l0, tol);
    std::vector<HierarchyLevel> levels;
    HierarchyLevel first;
    first.level = 0;
    first.l_eff = base;
    first.p0 = sd.p0;
    first.p0_dim = sd.kernel_dim;
    first.tau_r = sd.tau_r;
    levels.push_back(std::move(first));
    ComplexMatrix s = sd.s;

    for (std::size_t step = 0;; ++step) {
        HierarchyLevel& cur = levels.back();
        if (cur.p0_dim <= 1) {
            cur.stop_reason = "one-dimensional kernel";
            break;
        }
        if (step >= max_levels) {
            cur.stop_reason = "max_levels reached";
            break;
        }
        if (couplings.empty()) {
            cur.stop_reason = "no coupling supplied";
            break;
        }
        const Operator& k_raw = couplings[std::min(step, couplings.size() - 1)];
        const double k_raw_norm = spectral_norm(k_raw.matrix());
        if (k_raw_norm == 0.0) {
            cur.stop_reason = "zero coupling";
            break;
        }
        if (cur.tau_r == 0.0) {
            cur.stop_reason = "generator vanishes on this level";
            break;
        }
        const double factor = epsilon / (k_raw_norm * cur.tau_r);
        const SuperOperator kh = hamiltonian_superop(factor * k_raw, tol);
        cur.k_norm = k_raw_norm * factor;
        cur.epsilon = cur.k_norm * cur.tau_r;

        const ComplexMatrix p = cur.p0;
        const ComplexMatrix pkp = p * kh.matrix() * p;
        cur.first_order_norm = pkp.norm();
        if (cur.first_order_norm > tol.oracle_abs * std::max(1.0, kh.matrix().norm())) {
            cur.stop_reason = "first-order term nonzero; next level is Hamiltonian";
            HierarchyLevel h;
            h.level = cur.level + 1;
            h.l_eff = SuperOperator(base.space(), pkp);
            h.p0 = p;
            h.p0_dim = cur.p0_dim;
            h.hamiltonian_level = true;
            h.stop_reason = "Hamiltonian level";
            levels.push_back(std::move(h));
            break;
        }

        const ComplexMatrix next = -(p * kh.matrix() * s * kh.matrix() * p);
        const SpectralData nsd = analyze(next, tol);
        HierarchyLevel lv;
        lv.level = cur.level + 1;
        lv.l_eff = SuperOperator(base.space(), next);
        lv.p0 = nsd.p0 * p;
        lv.p0_dim = static_cast<std::size_t>(std::llround(lv.p0.trace().real()));
        lv.tau_r = nsd.tau_r;
        s = nsd.s;
        levels.push_back(std::move(lv));
    }
    (void)n;
    return levels;
}

HierarchyInstance nested_damping_instance() {
    const HilbertSpace space({2, 2, 2});
    const Operator sm = pauli(PauliKind::Minus);
    const Operator sp = pauli(PauliKind::Plus);
    const Operator sx = pauli(PauliKind::X);
    const Operator sz = pauli(PauliKind::Z);
    HierarchyInstance inst;
    inst.base = dissipator(embed(sm, 2, space), 1.0);
    inst.couplings.push_back(embed(sp, 1, space) * embed(sm, 2, space) + embed(sm, 1, space) * embed(sp, 2, space));
    inst.couplings.push_back(embed(sx, 0, space) * embed(sx, 1, space));
    inst.couplings.push_back(embed(sz, 0, space));
    return inst;
}

bool RegressionReport::all_passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const RegressionEntry& e) { return e.passed; });
}

RegressionEntry regress_protocol(const SimulationProtocol& protocol, double g, double threshold,
                                 const Tolerances& tol) {
    if (!protocol.expected) {
        throw ValidationError("regress: protocol '" + protocol.name + "' has no expected generator");
    }
    RegressionEntry e;
    e.name = protocol.name;
    const EffectiveGenerator eff = build_effective(g * protocol.k, protocol.l_bath(tol), protocol.system_space, tol);

    LindbladSpec expected = *protocol.expected;
    expected.hamiltonian = (g * g) * expected.hamiltonian;
    for (auto& j : expected.jumps) j.rate *= g * g;
    const SuperOperator expected_l = liouvillian(expected, tol);
    e.distance = spectral_norm(eff.system_sector.matrix() - expected_l.matrix());

    // The expected jumps are traceless and mutually Hilbert–Schmidt orthogonal, so
    // the Kossakowski spectrum is {γ_α ‖L_α‖²_F}.
    for (const auto& j : expected.jumps) e.expected_rates.push_back(j.rate * j.op.matrix().squaredNorm());
    e.expected_rates = sorted_desc(e.expected_rates);

    const GksDecomposition gks = gks_decompose(eff.system_sector, tol);
    for (const auto& j : gks.jumps) e.extracted_rates.push_back(j.rate);
    e.extracted_rates = sorted_desc(e.extracted_rates);

    if (e.expected_rates.size() == e.extracted_rates.size()) {
        for (std::size_t i = 0; i < e.expected_rates.size(); ++i) {
            e.rate_residual = std::max(e.rate_residual, std::abs(e.expected_rates[i] - e.extracted_rates[i]));
        }
    } else {
        e.rate_residual = std::numeric_limits<double>::infinity();
    }
    const auto d = static_cast<Eigen::Index>(protocol.system_space.total_dim());
    ComplexMatrix h_exp = expected.hamiltonian.matrix();
    h_exp -= (h_exp.trace() / static_cast<double>(d)) * ComplexMatrix::Identity(d, d);
    e.hamiltonian_residual = (gks.hamiltonian.matrix() - h_exp).norm();
    e.gamma_min_eig = eff.gamma_min_eig;

    double max_rate = 1.0;
    for (double r : e.expected_rates) max_rate = std::max(max_rate, std::abs(r));
    e.passed = e.distance <= threshold && e.rate_residual <= threshold * max_rate &&
               e.hamiltonian_residual <= threshold * max_rate && eff.is_lindblad;
    return e;
}

RegressionReport regression_scenarios(double g, double threshold, const Tolerances& tol) {
    RegressionReport rep;
    rep.threshold = threshold;
    for (const auto& p : builtin_scenarios()) rep.entries.push_back(regress_protocol(p, g, threshold, tol));
    return rep;
}

}  // namespace lindsim
