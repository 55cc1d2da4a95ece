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

#include "lindsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace lindsim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ValidationError(path + ": " + msg);
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
    }
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
}

double get_positive(const json& j, const std::string& path) {
    const double v = get_number(j, path);
    if (!(v > 0.0)) fail(path, "must be > 0");
    return v;
}

std::size_t get_count(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], index(path, i)));
    return out;
}

Complex get_complex(const json& j, const std::string& path) {
    if (j.is_number()) return {get_number(j, path), 0.0};
    if (!j.is_array() || j.size() != 2) fail(path, "expected a complex number as [re, im]");
    return {get_number(j[0], index(path, 0)), get_number(j[1], index(path, 1))};
}

std::vector<std::size_t> get_dims(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of dimensions");
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::size_t d = get_count(j[i], index(path, i));
        if (d < 2) fail(index(path, i), "dimension must be >= 2");
        dims.push_back(d);
    }
    return dims;
}

json dims_to_json(const HilbertSpace& s) { return json(s.factors()); }

// Splits "a:b:c" into parts.
std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

Operator fit_to_space(const Operator& op, const HilbertSpace& space, std::optional<std::size_t> site,
                      const std::string& path) {
    if (site) {
        if (*site >= space.num_factors()) fail(path, "site " + std::to_string(*site) + " out of range");
        if (op.dim() != space.factors()[*site]) {
            fail(path, "operator dimension " + std::to_string(op.dim()) + " does not match factor " +
                           std::to_string(*site) + " of dimension " + std::to_string(space.factors()[*site]));
        }
        return embed(op, *site, space);
    }
    if (op.dim() != space.total_dim()) {
        fail(path, "operator dimension " + std::to_string(op.dim()) + " does not match space dimension " +
                       std::to_string(space.total_dim()) + " (use site=<i> to embed)");
    }
    return Operator(space, op.matrix());
}

Operator parse_named(const std::string& spec, const HilbertSpace& space, const std::string& path) {
    const auto parts = split(spec, ':');
    if (parts.empty()) fail(path, "empty operator name");
    const std::string& kind = parts[0];
    std::optional<std::size_t> site;
    std::optional<std::size_t> count;
    std::optional<std::size_t> cutoff;
    std::vector<std::string> positional;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto eq = parts[i].find('=');
        if (eq == std::string::npos) {
            positional.push_back(parts[i]);
            continue;
        }
        const std::string key = parts[i].substr(0, eq);
        std::size_t value = 0;
        try {
            std::size_t used = 0;
            value = std::stoul(parts[i].substr(eq + 1), &used);
            if (used != parts[i].size() - eq - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            fail(path, "bad integer in '" + parts[i] + "'");
        }
        if (key == "site") {
            site = value;
        } else if (key == "N") {
            count = value;
        } else if (key == "cutoff") {
            cutoff = value;
        } else {
            fail(path, "unknown builder parameter '" + key + "'");
        }
    }
    auto one_positional = [&](const std::string& what) {
        if (positional.size() != 1) fail(path, what + " needs exactly one kind, e.g. '" + what + ":x'");
        return positional[0];
    };
    auto spin_kind = [&](const std::string& k) {
        if (k == "x") return 0;
        if (k == "y") return 1;
        if (k == "z") return 2;
        if (k == "plus") return 3;
        if (k == "minus") return 4;
        fail(path, "unknown spin component '" + k + "'");
    };

    if (kind == "identity" || kind == "zero") {
        if (!positional.empty() || count || cutoff) fail(path, "'" + kind + "' takes no arguments");
        const Operator op = kind == "identity" ? Operator::identity(space) : Operator::zero(space);
        if (site) fail(path, "'" + kind + "' acts on the whole space; drop site=");
        return op;
    }
    if (kind == "pauli") {
        if (count || cutoff) fail(path, "pauli takes only site=");
        static const PauliKind kinds[] = {PauliKind::X, PauliKind::Y, PauliKind::Z, PauliKind::Plus,
                                          PauliKind::Minus};
        return fit_to_space(pauli(kinds[spin_kind(one_positional("pauli"))]), space, site, path);
    }
    if (kind == "collective_spin") {
        if (!count) fail(path, "collective_spin needs N=<qubits>");
        if (cutoff) fail(path, "collective_spin takes N= and site=");
        static const CollectiveKind kinds[] = {CollectiveKind::X, CollectiveKind::Y, CollectiveKind::Z,
                                               CollectiveKind::Plus, CollectiveKind::Minus};
        if (*count == 0) fail(path, "N must be >= 1");
        return fit_to_space(collective_spin(*count, kinds[spin_kind(one_positional("collective_spin"))]), space,
                            site, path);
    }
    if (kind == "boson") {
        if (!cutoff) fail(path, "boson needs cutoff=<levels>");
        if (count) fail(path, "boson takes cutoff= and site=");
        if (*cutoff < 2) fail(path, "cutoff must be >= 2");
        const std::string k = one_positional("boson");
        BosonKind bk;
        if (k == "a") {
            bk = BosonKind::Annihilate;
        } else if (k == "adag") {
            bk = BosonKind::Create;
        } else if (k == "n") {
            bk = BosonKind::Number;
        } else {
            fail(path, "unknown boson operator '" + k + "' (a, adag, n)");
        }
        return fit_to_space(boson(*cutoff, bk), space, site, path);
    }
    fail(path, "unknown operator builder '" + kind + "'");
}

}  // namespace

Mode parse_mode(const std::string& name) {
    if (name == "build") return Mode::Build;
    if (name == "evolve") return Mode::Evolve;
    if (name == "sweep") return Mode::Sweep;
    if (name == "trace") return Mode::Trace;
    if (name == "regress") return Mode::Regress;
    if (name == "hierarchy") return Mode::Hierarchy;
    throw ValidationError("mode: unknown mode '" + name + "'");
}

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::Build: return "build";
        case Mode::Evolve: return "evolve";
        case Mode::Sweep: return "sweep";
        case Mode::Trace: return "trace";
        case Mode::Regress: return "regress";
        case Mode::Hierarchy: return "hierarchy";
    }
    return "?";
}

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
    const std::size_t n = j.size();
    ComplexMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const std::string rp = index(path, i);
        if (!j[i].is_array() || j[i].size() != n) {
            fail(rp, "matrix must be square: expected " + std::to_string(n) + " entries");
        }
        for (std::size_t k = 0; k < n; ++k) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = get_complex(j[i][k], index(rp, k));
        }
    }
    return m;
}

Operator parse_operator(const json& j, const HilbertSpace& space, const std::string& path) {
    if (j.is_string()) return parse_named(j.get<std::string>(), space, path);
    if (!j.is_object()) fail(path, "expected a builder name, {\"matrix\": ...} or {\"terms\": ...}");
    if (j.contains("matrix")) {
        check_keys(j, {"matrix"}, path);
        const ComplexMatrix m = matrix_from_json(j["matrix"], join(path, "matrix"));
        if (static_cast<std::size_t>(m.rows()) != space.total_dim()) {
            fail(join(path, "matrix"), "expected " + std::to_string(space.total_dim()) + "x" +
                                           std::to_string(space.total_dim()) + ", got " +
                                           std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
        }
        return Operator(space, m);
    }
    if (j.contains("terms")) {
        check_keys(j, {"terms"}, path);
        const json& terms = j["terms"];
        const std::string tp = join(path, "terms");
        if (!terms.is_array() || terms.empty()) fail(tp, "expected a nonempty array");
        Operator sum = Operator::zero(space);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string ip = index(tp, i);
            check_keys(terms[i], {"coef", "op"}, ip);
            if (!terms[i].contains("op")) fail(ip, "missing 'op'");
            const Complex c = terms[i].contains("coef") ? get_complex(terms[i]["coef"], join(ip, "coef"))
                                                        : Complex(1.0, 0.0);
            sum += c * parse_operator(terms[i]["op"], space, join(ip, "op"));
        }
        return sum;
    }
    fail(path, "expected key 'matrix' or 'terms'");
}

json spec_to_json(const LindbladSpec& spec) {
    json jumps = json::array();
    for (const auto& jmp : spec.jumps) jumps.push_back({{"op", {{"matrix", matrix_to_json(jmp.op.matrix())}}}, {"rate", jmp.rate}});
    return {{"dims", dims_to_json(spec.space)},
            {"hamiltonian", {{"matrix", matrix_to_json(spec.hamiltonian.matrix())}}},
            {"jumps", jumps}};
}

LindbladSpec spec_from_json(const json& j, const HilbertSpace& space, const std::string& path) {
    check_keys(j, {"dims", "hamiltonian", "jumps"}, path);
    if (j.contains("dims")) {
        const HilbertSpace declared(get_dims(j["dims"], join(path, "dims")));
        if (!(declared == space)) fail(join(path, "dims"), "does not match the enclosing space");
    }
    LindbladSpec spec{space, Operator::zero(space), {}};
    if (j.contains("hamiltonian")) {
        spec.hamiltonian = parse_operator(j["hamiltonian"], space, join(path, "hamiltonian"));
    }
    if (j.contains("jumps")) {
        const json& js = j["jumps"];
        const std::string jp = join(path, "jumps");
        if (!js.is_array()) fail(jp, "expected an array");
        for (std::size_t i = 0; i < js.size(); ++i) {
            const std::string ip = index(jp, i);
            check_keys(js[i], {"op", "rate"}, ip);
            if (!js[i].contains("op") || !js[i].contains("rate")) fail(ip, "needs 'op' and 'rate'");
            const double rate = get_number(js[i]["rate"], join(ip, "rate"));
            if (rate < 0.0) fail(join(ip, "rate"), "must be >= 0, got " + std::to_string(rate));
            spec.jumps.push_back({parse_operator(js[i]["op"], space, join(ip, "op")), rate});
        }
    }
    if (hermiticity_defect(spec.hamiltonian.matrix()) > Tolerances{}.hermiticity_abs) {
        fail(join(path, "hamiltonian"), "must be Hermitian");
    }
    return spec;
}

json protocol_to_json(const SimulationProtocol& p) {
    json j = {{"name", p.name},
              {"system_dims", dims_to_json(p.system_space)},
              {"bath_dims", dims_to_json(p.bath_space)},
              {"n_ancillas", p.n_ancillas},
              {"couplings", p.couplings},
              {"damping_times", p.damping_times},
              {"k", matrix_to_json(p.k.matrix())},
              {"k1", matrix_to_json(p.k1.matrix())},
              {"bath", spec_to_json(p.bath)},
              {"coupling_mode", p.mode == CouplingMode::Figure ? "figure" : "library"},
              {"theta", p.theta}};
    if (p.tau_r_caption) j["tau_r_caption"] = *p.tau_r_caption;
    if (p.expected) j["expected"] = spec_to_json(*p.expected);
    return j;
}

SimulationProtocol protocol_from_json(const json& j, const std::string& path) {
    check_keys(j,
               {"name", "system_dims", "bath_dims", "n_ancillas", "couplings", "damping_times", "k", "k1", "bath",
                "coupling_mode", "theta", "tau_r_caption", "expected"},
               path);
    for (const char* key : {"system_dims", "bath_dims", "k", "bath"}) {
        if (!j.contains(key)) fail(join(path, key), "missing");
    }
    SimulationProtocol p;
    p.name = j.contains("name") ? get_string(j["name"], join(path, "name")) : "protocol";
    p.system_space = HilbertSpace(get_dims(j["system_dims"], join(path, "system_dims")));
    p.bath_space = HilbertSpace(get_dims(j["bath_dims"], join(path, "bath_dims")));
    p.n_ancillas = j.contains("n_ancillas") ? get_count(j["n_ancillas"], join(path, "n_ancillas"))
                                            : p.bath_space.num_factors();
    if (j.contains("couplings")) p.couplings = get_numbers(j["couplings"], join(path, "couplings"));
    if (j.contains("damping_times")) {
        p.damping_times = get_numbers(j["damping_times"], join(path, "damping_times"));
        for (std::size_t i = 0; i < p.damping_times.size(); ++i) {
            if (!(p.damping_times[i] > 0.0)) fail(index(join(path, "damping_times"), i), "must be > 0");
        }
    }
    const HilbertSpace full = p.full_space();
    const ComplexMatrix k = matrix_from_json(j["k"], join(path, "k"));
    if (static_cast<std::size_t>(k.rows()) != full.total_dim()) {
        fail(join(path, "k"), "expected dimension " + std::to_string(full.total_dim()));
    }
    p.k = Operator(full, k);
    if (j.contains("k1")) {
        const ComplexMatrix k1 = matrix_from_json(j["k1"], join(path, "k1"));
        if (static_cast<std::size_t>(k1.rows()) != p.system_space.total_dim()) {
            fail(join(path, "k1"), "expected dimension " + std::to_string(p.system_space.total_dim()));
        }
        p.k1 = Operator(p.system_space, k1);
    } else {
        p.k1 = Operator::zero(p.system_space);
    }
    p.bath = spec_from_json(j["bath"], p.bath_space, join(path, "bath"));
    if (j.contains("coupling_mode")) {
        const std::string m = get_string(j["coupling_mode"], join(path, "coupling_mode"));
        if (m == "figure") {
            p.mode = CouplingMode::Figure;
        } else if (m == "library") {
            p.mode = CouplingMode::Library;
        } else {
            fail(join(path, "coupling_mode"), "expected 'library' or 'figure'");
        }
    }
    if (j.contains("theta")) p.theta = get_positive(j["theta"], join(path, "theta"));
    if (j.contains("tau_r_caption")) p.tau_r_caption = get_positive(j["tau_r_caption"], join(path, "tau_r_caption"));
    if (j.contains("expected")) p.expected = spec_from_json(j["expected"], p.system_space, join(path, "expected"));
    if (hermiticity_defect(p.k.matrix()) > Tolerances{}.hermiticity_abs) fail(join(path, "k"), "must be Hermitian");
    return p;
}

ExperimentConfig parse_config(const json& j) {
    check_keys(j,
               {"description", "mode", "scenario", "model", "protocol", "coupling_mode", "T_list", "theta", "t_grid",
                "error_metric", "tolerances", "hierarchy", "regress", "leakage", "assertions"},
               "");
    ExperimentConfig c;
    c.raw = j;
    if (j.contains("description")) get_string(j["description"], "description");
    if (j.contains("mode")) c.mode = parse_mode(get_string(j["mode"], "mode"));

    int sources = 0;
    if (j.contains("scenario")) {
        ++sources;
        const json& s = j["scenario"];
        check_keys(s, {"name", "n_qubits", "tau_plus", "tau_minus", "omega", "tau_r", "cutoff"}, "scenario");
        if (!s.contains("name")) fail("scenario.name", "missing");
        c.scenario = get_string(s["name"], "scenario.name");
        ScenarioParams& sp = c.scenario_params;
        if (s.contains("n_qubits")) sp.n_qubits = get_count(s["n_qubits"], "scenario.n_qubits");
        if (sp.n_qubits == 0) fail("scenario.n_qubits", "must be >= 1");
        if (s.contains("tau_plus")) sp.tau_plus = get_positive(s["tau_plus"], "scenario.tau_plus");
        if (s.contains("tau_minus")) sp.tau_minus = get_positive(s["tau_minus"], "scenario.tau_minus");
        if (s.contains("omega")) sp.omega = get_number(s["omega"], "scenario.omega");
        if (s.contains("tau_r")) sp.tau_r = get_positive(s["tau_r"], "scenario.tau_r");
        if (s.contains("cutoff")) sp.cutoff = get_count(s["cutoff"], "scenario.cutoff");
        if (sp.cutoff < 2) fail("scenario.cutoff", "must be >= 2");
        builtin_scenario(*c.scenario, sp);  // rejects unknown names early
    }
    if (j.contains("model")) {
        ++sources;
        const json& m = j["model"];
        check_keys(m, {"system_dims", "hamiltonian", "jumps", "damping_times"}, "model");
        if (!m.contains("system_dims")) fail("model.system_dims", "missing");
        const HilbertSpace space(get_dims(m["system_dims"], "model.system_dims"));
        json spec = json::object();
        for (const char* key : {"hamiltonian", "jumps"}) {
            if (m.contains(key)) spec[key] = m[key];
        }
        c.target = spec_from_json(spec, space, "model");
        if (m.contains("damping_times")) {
            c.damping_times = get_numbers(m["damping_times"], "model.damping_times");
            for (std::size_t i = 0; i < c.damping_times.size(); ++i) {
                if (!(c.damping_times[i] > 0.0)) fail(index("model.damping_times", i), "must be > 0");
            }
        }
    }
    if (j.contains("protocol")) {
        ++sources;
        c.protocol = protocol_from_json(j["protocol"], "protocol");
    }
    if (sources > 1) fail("scenario", "give only one of 'scenario', 'model', 'protocol'");

    if (j.contains("coupling_mode")) {
        const std::string m = get_string(j["coupling_mode"], "coupling_mode");
        if (m == "figure") {
            c.coupling_mode = CouplingMode::Figure;
        } else if (m == "library") {
            c.coupling_mode = CouplingMode::Library;
        } else {
            fail("coupling_mode", "expected 'library' or 'figure'");
        }
    }
    if (j.contains("T_list")) {
        c.t_list = get_numbers(j["T_list"], "T_list");
        for (std::size_t i = 0; i < c.t_list.size(); ++i) {
            if (!(c.t_list[i] > 0.0)) fail(index("T_list", i), "must be > 0");
        }
    }
    if (j.contains("theta")) c.theta = get_positive(j["theta"], "theta");
    if (j.contains("t_grid")) {
        const json& g = j["t_grid"];
        check_keys(g, {"per_decade", "t_min", "t_max_factor"}, "t_grid");
        if (g.contains("per_decade")) c.per_decade = get_count(g["per_decade"], "t_grid.per_decade");
        if (c.per_decade == 0) fail("t_grid.per_decade", "must be >= 1");
        if (g.contains("t_min")) c.t_min = get_positive(g["t_min"], "t_grid.t_min");
        if (g.contains("t_max_factor")) c.t_max_factor = get_positive(g["t_max_factor"], "t_grid.t_max_factor");
    }
    if (j.contains("error_metric")) {
        const std::string m = get_string(j["error_metric"], "error_metric");
        if (m == "sup") {
            c.metric = ErrorMetric::Sup;
        } else if (m == "endpoint") {
            c.metric = ErrorMetric::Endpoint;
        } else {
            fail("error_metric", "expected 'sup' or 'endpoint'");
        }
    }
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        if (!t.is_object()) fail("tolerances", "expected an object");
        for (const auto& [key, value] : t.items()) {
            const std::string p = "tolerances." + key;
            const double v = get_number(value, p);
            try {
                c.tol.set(key, v);
            } catch (const ValidationError& e) {
                fail(p, e.what());
            }
        }
        try {
            c.tol.validate();
        } catch (const ValidationError& e) {
            fail("tolerances", e.what());
        }
    }
    if (j.contains("hierarchy")) {
        const json& h = j["hierarchy"];
        check_keys(h, {"epsilon", "max_levels"}, "hierarchy");
        if (h.contains("epsilon")) c.hierarchy_epsilon = get_positive(h["epsilon"], "hierarchy.epsilon");
        if (h.contains("max_levels")) c.hierarchy_max_levels = get_count(h["max_levels"], "hierarchy.max_levels");
    }
    if (j.contains("regress")) {
        const json& r = j["regress"];
        check_keys(r, {"g", "threshold"}, "regress");
        if (r.contains("g")) c.regress_g = get_positive(r["g"], "regress.g");
        if (r.contains("threshold")) c.regress_threshold = get_positive(r["threshold"], "regress.threshold");
    }
    if (j.contains("leakage")) {
        const json& l = j["leakage"];
        check_keys(l, {"boson_site", "t_samples", "threshold"}, "leakage");
        if (!l.contains("boson_site")) fail("leakage.boson_site", "missing");
        c.leakage_site = get_count(l["boson_site"], "leakage.boson_site");
        if (l.contains("t_samples")) {
            c.leakage_t_samples = get_numbers(l["t_samples"], "leakage.t_samples");
            for (std::size_t i = 0; i < c.leakage_t_samples.size(); ++i) {
                if (c.leakage_t_samples[i] < 0.0) fail(index("leakage.t_samples", i), "must be >= 0");
            }
        }
        if (l.contains("threshold")) c.leakage_threshold = get_positive(l["threshold"], "leakage.threshold");
    }
    if (j.contains("assertions")) {
        const json& a = j["assertions"];
        check_keys(a, {"r_squared_min", "intercept_frac_max", "ratio_min", "ratio_max"}, "assertions");
        if (a.contains("r_squared_min")) c.assert_r_squared_min = get_number(a["r_squared_min"], "assertions.r_squared_min");
        if (a.contains("intercept_frac_max")) {
            c.assert_intercept_frac_max = get_number(a["intercept_frac_max"], "assertions.intercept_frac_max");
        }
        if (a.contains("ratio_min")) c.assert_ratio_min = get_number(a["ratio_min"], "assertions.ratio_min");
        if (a.contains("ratio_max")) c.assert_ratio_max = get_number(a["ratio_max"], "assertions.ratio_max");
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path + ": cannot open config file");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": invalid JSON: " + e.what());
    }
    try {
        return parse_config(j);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

SimulationProtocol build_protocol(const ExperimentConfig& config) {
    SimulationProtocol p;
    if (config.scenario) {
        p = builtin_scenario(*config.scenario, config.scenario_params);
    } else if (config.target) {
        p = compile(*config.target, config.damping_times, config.tol);
    } else if (config.protocol) {
        p = *config.protocol;
    } else {
        throw ValidationError("scenario: config names no model (give 'scenario', 'model' or 'protocol')");
    }
    if (config.coupling_mode) {
        if (*config.coupling_mode == CouplingMode::Figure && !p.tau_r_caption) {
            throw ValidationError("coupling_mode: figure mode needs a protocol with a caption relaxation time");
        }
        p.mode = *config.coupling_mode;
    }
    if (config.raw.contains("theta")) p.theta = config.theta;
    return p;
}

std::string config_hash(const json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace lindsim
