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

#include <string>
#include <vector>

#include <json.hpp>

#include "lindsim/experiments.hpp"

namespace lindsim {

/// Column-oriented numeric table. Values print with 17 significant digits.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// First line: "# config_hash=<h>; columns=<c1,c2,...>; vectorization=column-stacking;
/// norm=max-singular-value", then the header row, then the data.
void write_csv(const Table& table, const std::string& config_hash, const std::string& path);
std::string format_csv(const Table& table, const std::string& config_hash);

Table sweep_table(const SweepResult& r);
Table trace_table(const ErrorCurve& c);
Table hierarchy_table(const std::vector<HierarchyLevel>& levels);
Table regression_table(const RegressionReport& r);

/// Scatter of (x, y) with an optional fitted line, log-scaled x when requested.
struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> fit_y;  // empty: no line
    bool connect = false;       // draw y as a polyline
};

void write_svg(const PlotSpec& plot, const std::string& path);

struct Assertion {
    std::string name;
    bool passed = false;
    double value = 0.0;
    std::string threshold;
};

nlohmann::json summary_json(const std::string& config_hash, const std::string& mode, const Tolerances& tol,
                            const std::vector<Assertion>& assertions, double wall_seconds,
                            const std::vector<std::string>& outputs);

void write_text(const std::string& text, const std::string& path);

}  // namespace lindsim
