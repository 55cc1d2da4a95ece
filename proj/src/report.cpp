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

#include "lindsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lindsim {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

std::string format_csv(const Table& table, const std::string& config_hash) {
    std::string cols;
    for (std::size_t i = 0; i < table.columns.size(); ++i) cols += (i ? "," : "") + table.columns[i];
    std::string out = "# config_hash=" + config_hash + "; columns=" + cols +
                      "; vectorization=column-stacking; norm=max-singular-value\n";
    out += cols + "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + fmt17(row[i]);
        out += "\n";
    }
    return out;
}

void write_text(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(path + ": cannot open for writing");
    out << text;
    if (!out) throw Error(path + ": write failed");
}

void write_csv(const Table& table, const std::string& config_hash, const std::string& path) {
    write_text(format_csv(table, config_hash), path);
}

Table sweep_table(const SweepResult& r) {
    Table t{{"T", "inv_sqrt_T", "sup_error", "fit_prediction"}, {}};
    for (std::size_t i = 0; i < r.t_values.size(); ++i) {
        t.rows.push_back({r.t_values[i], r.inv_sqrt_t[i], r.errors[i], r.prediction(i)});
    }
    return t;
}

Table trace_table(const ErrorCurve& c) {
    Table t{{"t", "log10_t", "distance"}, {}};
    for (std::size_t i = 0; i < c.t_grid.size(); ++i) {
        t.rows.push_back({c.t_grid[i], std::log10(c.t_grid[i]), c.distances[i]});
    }
    return t;
}

Table hierarchy_table(const std::vector<HierarchyLevel>& levels) {
    Table t{{"level", "p0_dim", "tau_r", "k_norm", "epsilon", "first_order_norm", "hamiltonian_level"}, {}};
    for (const auto& l : levels) {
        t.rows.push_back({static_cast<double>(l.level), static_cast<double>(l.p0_dim), l.tau_r, l.k_norm, l.epsilon,
                          l.first_order_norm, l.hamiltonian_level ? 1.0 : 0.0});
    }
    return t;
}

Table regression_table(const RegressionReport& r) {
    Table t{{"scenario", "distance", "rate_residual", "hamiltonian_residual", "gamma_min_eig", "passed"}, {}};
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
        const auto& e = r.entries[i];
        t.rows.push_back({static_cast<double>(i), e.distance, e.rate_residual, e.hamiltonian_residual,
                          e.gamma_min_eig, e.passed ? 1.0 : 0.0});
    }
    return t;
}

void write_svg(const PlotSpec& plot, const std::string& path) {
    const double w = 640, h = 420, ml = 70, mr = 20, mt = 40, mb = 50;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < plot.x.size(); ++i) {
        if (std::isfinite(plot.x[i]) && std::isfinite(plot.y[i])) {
            xs.push_back(plot.x[i]);
            ys.push_back(plot.y[i]);
        }
    }
    std::vector<double> all_y = ys;
    for (double v : plot.fit_y) {
        if (std::isfinite(v)) all_y.push_back(v);
    }
    double x0 = xs.empty() ? 0 : *std::min_element(xs.begin(), xs.end());
    double x1 = xs.empty() ? 1 : *std::max_element(xs.begin(), xs.end());
    double y0 = std::min(0.0, all_y.empty() ? 0 : *std::min_element(all_y.begin(), all_y.end()));
    double y1 = all_y.empty() ? 1 : *std::max_element(all_y.begin(), all_y.end());
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb); };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << plot.title << "</text>\n";
    s << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\"" << h - mb
      << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\" font-size=\"13\">" << plot.x_label
      << "</text>\n";
    s << "<text x=\"16\" y=\"" << h / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << h / 2 << ")\">" << plot.y_label << "</text>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
        s << "<text x=\"" << px(xv) << "\" y=\"" << h - mb + 16 << "\" text-anchor=\"middle\" font-size=\"10\">"
          << fmt_short(xv) << "</text>\n";
        s << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 3 << "\" text-anchor=\"end\" font-size=\"10\">"
          << fmt_short(yv) << "</text>\n";
    }
    if (plot.connect && xs.size() > 1) {
        s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) s << px(xs[i]) << "," << py(ys[i]) << " ";
        s << "\"/>\n";
    } else {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            s << "<circle cx=\"" << px(xs[i]) << "\" cy=\"" << py(ys[i]) << "\" r=\"3.5\" fill=\"steelblue\"/>\n";
        }
    }
    if (!plot.fit_y.empty() && plot.fit_y.size() == plot.x.size()) {
        s << "<polyline fill=\"none\" stroke=\"firebrick\" stroke-dasharray=\"5,3\" points=\"";
        for (std::size_t i = 0; i < plot.x.size(); ++i) {
            if (std::isfinite(plot.x[i]) && std::isfinite(plot.fit_y[i])) {
                s << px(plot.x[i]) << "," << py(plot.fit_y[i]) << " ";
            }
        }
        s << "\"/>\n";
    }
    s << "</svg>\n";
    write_text(s.str(), path);
}

nlohmann::json summary_json(const std::string& config_hash, const std::string& mode, const Tolerances& tol,
                            const std::vector<Assertion>& assertions, double wall_seconds,
                            const std::vector<std::string>& outputs) {
    nlohmann::json tols = nlohmann::json::object();
    for (const auto& name : Tolerances::names()) tols[name] = tol.get(name);
    nlohmann::json asserts = nlohmann::json::array();
    bool all = true;
    for (const auto& a : assertions) {
        asserts.push_back({{"name", a.name}, {"passed", a.passed}, {"value", a.value}, {"threshold", a.threshold}});
        all = all && a.passed;
    }
    return {{"config_hash", config_hash},
            {"mode", mode},
            {"tolerances", tols},
            {"assertions", asserts},
            {"all_passed", all},
            {"wall_clock_seconds", wall_seconds},
            {"outputs", outputs}};
}

}  // namespace lindsim
