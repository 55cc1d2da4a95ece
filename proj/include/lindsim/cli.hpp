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

#include <iosfwd>
#include <string>
#include <vector>

namespace lindsim {

/// Exit codes: 0 success, 1 other failure (I/O), 2 validation, 3 numeric,
/// 4 regression threshold failed (regress mode). Other modes report PASS/FAIL lines
/// and record assertions in summary.json without changing the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lindsim
