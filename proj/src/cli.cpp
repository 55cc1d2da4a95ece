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

#include "lindsim/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "lindsim/config.hpp"
#include "lindsim/report.hpp"

namespace lindsim {

namespace {

struct Options {
    std::string config;
    std::string out = ".";
    bool svg = false;
    std::vector<std::string> tols;
    std::size_t threads = 0;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LF_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        throw ValidationError("LF_THREADS: expected a positive integer, got '" + std::string(env) + "'");
    }
    return 1;
}

void apply_tolerance_overrides(Tolerances& tol, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw ValidationError("--tol: expected name=value, got '" + o + "'");
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(o.substr(eq + 1), &used);
            if (used != o.size() - eq - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ValidationError("--tol: bad value in '" + o + "'");
        }
        try {
            tol.set(o.substr(0, eq), v);
        } catch (const ValidationError& e) {
            throw ValidationError(std::string("--tol: ") + e.what());
        }
    }
    tol.validate();
}

struct Context {
    Mode mode;
    ExperimentConfig config;
    std::string hash;
    std::filesystem::path out_dir;
    bool svg = false;
    std::size_t threads = 1;
    std::vector<Assertion> assertions;
    std::vector<std::string> outputs;
    std::ostream& out;
    std::ostream& err;

    std::string path(const std::string& name) {
        outputs.push_back(name);
        return (out_dir / name).string();
    }
};

void assert_le(Context& c, const std::string& name, double value, double limit) {
    c.assertions.push_back({name, value <= limit, value, "<= " + num(limit)});
}

void assert_ge(Context& c, const std::string& name, double value, double limit) {
    c.assertions.push_back({name, value >= limit, value, ">= " + num(limit)});
}

int do_build(Context& c) {
    const SimulationProtocol p = build_protocol(c.config);
    const ProtocolAnalysis a = prepare(p, c.config.tol);
    c.out << "protocol: " << p.name << "\n";
    c.out << "M = " << p.n_ancillas << "\n";
    for (std::size_t i = 0; i < p.couplings.size(); ++i) {
        c.out << "g[" << i << "] = " << num(p.couplings[i]) << "\n";
    }
    for (std::size_t i = 0; i < p.damping_times.size(); ++i) {
        c.out << "tau[" << i << "] = " << num(p.damping_times[i]) << "\n";
    }
    c.out << "coupling_mode = " << (p.mode == CouplingMode::Figure ? "figure" : "library") << "\n";
    c.out << "tau_r (||S||) = " << num(a.spectral.tau_r) << "\n";
    c.out << "first_order_norm = " << num(a.first_order_norm) << "\n";
    assert_le(c, "first_order_vanishes", a.first_order_norm, c.config.tol.oracle_abs);
    assert_le(c, "k_hermitian", hermiticity_defect(p.k.matrix()), c.config.tol.hermiticity_abs);
    const std::string text = protocol_to_json(p).dump(2) + "\n";
    write_text(text, c.path("protocol.json"));
    c.out << text;
    return 0;
}

int do_evolve(Context& c) {
    if (c.config.t_list.empty()) throw ValidationError("T_list: evolve needs one T value");
    const SimulationProtocol p = build_protocol(c.config);
    const ProtocolAnalysis a = prepare(p, c.config.tol);
    const double t_scale = c.config.t_list.front();
    const ScaledModel m = scale(p, a, t_scale);
    const double t_min = c.config.t_min.value_or(m.tau_r / 100.0);
    const ErrorCurve curve =
        error_curve(m, a.spectral, log_grid(t_min, p.theta * t_scale, c.config.per_decade));
    write_csv(trace_table(curve), c.hash, c.path("evolve.csv"));
    c.out << "T = " << num(t_scale) << "  sup_error = " << num(curve.sup_error)
          << "  endpoint_error = " << num(curve.endpoint_error) << "\n";
    assert_le(c, "distance_at_t0", curve.distances.front(), 0.0);
    if (c.config.leakage_site) {
        std::vector<double> samples = c.config.leakage_t_samples;
        if (samples.empty()) samples = {m.tau_r, 0.1 * t_scale, t_scale};
        const LeakageReport lk = leakage_check(m, a.spectral, *c.config.leakage_site, samples,
                                               c.config.leakage_threshold);
        c.out << "leakage = " << num(lk.max_population) << "\n";
        if (lk.warned) c.err << "warning: " << lk.message << "\n";
        assert_le(c, "leakage", lk.max_population, c.config.leakage_threshold);
    }
    if (c.svg) {
        PlotSpec plot{"error curve, T = " + num(t_scale), "log10 t", "distance", {}, curve.distances, {}, true};
        for (double t : curve.t_grid) plot.x.push_back(std::log10(t));
        write_svg(plot, c.path("evolve.svg"));
    }
    return 0;
}

int do_sweep(Context& c) {
    const SimulationProtocol p = build_protocol(c.config);
    SweepOptions o;
    o.theta = p.theta;
    o.per_decade = c.config.per_decade;
    o.t_min = c.config.t_min;
    o.metric = c.config.metric;
    o.threads = c.threads;
    o.tol = c.config.tol;
    const SweepResult r = sweep_T(p, c.config.t_list, o);
    write_csv(sweep_table(r), c.hash, c.path("sweep.csv"));
    double max_err = 0.0;
    for (double e : r.errors) max_err = std::max(max_err, e);
    c.out << "slope = " << num(r.fit.slope) << "  intercept = " << num(r.fit.intercept)
          << "  r_squared = " << num(r.fit.r_squared) << (r.fit.degenerate ? "  (degenerate)" : "") << "\n";
    assert_ge(c, "r_squared", r.fit.r_squared, c.config.assert_r_squared_min);
    assert_le(c, "intercept_fraction", max_err > 0 ? std::abs(r.fit.intercept) / max_err : 0.0,
              c.config.assert_intercept_frac_max);
    if (c.svg) {
        std::vector<double> pred;
        for (std::size_t i = 0; i < r.t_values.size(); ++i) pred.push_back(r.prediction(i));
        write_svg({"error vs 1/sqrt(T)", "1/sqrt(T)", "error", r.inv_sqrt_t, r.errors, pred, false},
                  c.path("sweep.svg"));
    }
    return 0;
}

int do_trace(Context& c) {
    if (c.config.t_list.empty()) throw ValidationError("T_list: trace needs at least one T value");
    const SimulationProtocol p = build_protocol(c.config);
    TraceOptions o;
    o.t_min = c.config.t_min;
    o.t_max_factor = c.config.t_max_factor;
    o.per_decade = c.config.per_decade;
    o.threads = c.threads;
    o.tol = c.config.tol;
    const std::vector<ErrorCurve> curves = trace_curves(p, c.config.t_list, o);
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const std::string name = "trace_" + std::to_string(i);
        write_csv(trace_table(curves[i]), c.hash, c.path(name + ".csv"));
        c.out << "T = " << num(curves[i].t_scale) << "  max_distance = " << num(curves[i].sup_error) << "\n";
        if (c.svg) {
            PlotSpec plot{"distance, T = " + num(curves[i].t_scale), "log10 t", "distance", {},
                          curves[i].distances, {}, true};
            for (double t : curves[i].t_grid) plot.x.push_back(std::log10(t));
            write_svg(plot, c.path(name + ".svg"));
        }
    }
    if (curves.size() == 2) {
        const bool first_small = curves[0].t_scale < curves[1].t_scale;
        const double hi = first_small ? curves[0].sup_error : curves[1].sup_error;
        const double lo = first_small ? curves[1].sup_error : curves[0].sup_error;
        const double ratio = lo > 0 ? hi / lo : 0.0;
        c.out << "ratio = " << num(ratio) << "\n";
        assert_ge(c, "ratio_min", ratio, c.config.assert_ratio_min);
        assert_le(c, "ratio_max", ratio, c.config.assert_ratio_max);
    }
    return 0;
}

int do_regress(Context& c) {
    RegressionReport rep;
    rep.threshold = c.config.regress_threshold;
    if (c.config.scenario || c.config.target || c.config.protocol) {
        rep.entries.push_back(
            regress_protocol(build_protocol(c.config), c.config.regress_g, rep.threshold, c.config.tol));
    } else {
        rep = regression_scenarios(c.config.regress_g, c.config.regress_threshold, c.config.tol);
    }
    write_csv(regression_table(rep), c.hash, c.path("regress.csv"));
    for (const auto& e : rep.entries) {
        c.out << e.name << ": distance = " << num(e.distance) << "  rate_residual = " << num(e.rate_residual)
              << "  hamiltonian_residual = " << num(e.hamiltonian_residual) << "  "
              << (e.passed ? "PASS" : "FAIL") << "\n";
        c.assertions.push_back({e.name, e.passed, e.distance, "<= " + num(rep.threshold)});
    }
    return rep.all_passed() ? 0 : 4;
}

int do_hierarchy(Context& c) {
    const HierarchyInstance inst = nested_damping_instance();
    const auto levels = hierarchy_iterate(inst.base, inst.couplings, c.config.hierarchy_epsilon,
                                          c.config.hierarchy_max_levels, c.config.tol);
    write_csv(hierarchy_table(levels), c.hash, c.path("hierarchy.csv"));
    for (const auto& l : levels) {
        c.out << "level " << l.level << ": p0_dim = " << l.p0_dim << "  tau_r = " << num(l.tau_r)
              << "  epsilon = " << num(l.epsilon) << (l.hamiltonian_level ? "  (Hamiltonian)" : "")
              << (l.stop_reason.empty() ? "" : "  stop: " + l.stop_reason) << "\n";
    }
    if (levels.size() >= 2 && !levels[1].hamiltonian_level && levels[0].tau_r > 0) {
        const double eps = c.config.hierarchy_epsilon;
        assert_ge(c, "tau_r_stretch", levels[1].tau_r / levels[0].tau_r, 0.1 / (eps * eps));
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"lindsim"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    CLI::App app{"Dissipative Lindbladian simulation: build protocols, propagate, sweep and regress"};
    app.require_subcommand(1);
    Options opts;
    for (const char* name : {"build", "evolve", "sweep", "trace", "regress", "hierarchy"}) {
        CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
        sub->add_option("--config", opts.config, "JSON experiment config")->required();
        sub->add_option("--out", opts.out, "output directory");
        sub->add_flag("--svg", opts.svg, "also write SVG plots");
        sub->add_option("--tol", opts.tols, "tolerance override name=value");
        sub->add_option("--threads", opts.threads, "worker threads (fallback: LF_THREADS)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        const Mode mode = parse_mode(app.get_subcommands().front()->get_name());
        ExperimentConfig config = load_config(opts.config);
        if (config.mode && *config.mode != mode) {
            throw ValidationError("mode: config is for '" + mode_name(*config.mode) + "' but the command is '" +
                                  mode_name(mode) + "'");
        }
        apply_tolerance_overrides(config.tol, opts.tols);

        nlohmann::json hashed = config.raw;
        hashed["mode"] = mode_name(mode);
        for (const auto& name : Tolerances::names()) hashed["tolerances"][name] = config.tol.get(name);

        Context c{mode, std::move(config), config_hash(hashed), opts.out, opts.svg, resolve_threads(opts.threads),
                  {}, {}, out, err};
        std::filesystem::create_directories(c.out_dir);

        int code = 0;
        switch (mode) {
            case Mode::Build: code = do_build(c); break;
            case Mode::Evolve: code = do_evolve(c); break;
            case Mode::Sweep: code = do_sweep(c); break;
            case Mode::Trace: code = do_trace(c); break;
            case Mode::Regress: code = do_regress(c); break;
            case Mode::Hierarchy: code = do_hierarchy(c); break;
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        c.outputs.push_back("summary.json");
        const auto summary = summary_json(c.hash, mode_name(mode), c.config.tol, c.assertions, secs, c.outputs);
        write_text(summary.dump(2) + "\n", (c.out_dir / "summary.json").string());
        for (const auto& a : c.assertions) {
            out << (a.passed ? "PASS " : "FAIL ") << a.name << " = " << num(a.value) << " (" << a.threshold << ")\n";
        }
        return code;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace lindsim
