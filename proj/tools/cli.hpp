// Copyright 2026 The geoind Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GEOIND_TOOLS_CLI_HPP_
#define GEOIND_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace geoind::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `geoind` invocation. `args` excludes the program name.
/// Returns 0 on success, 1 on a validation failure, 2 on a usage error.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace geoind::cli

#endif  // GEOIND_TOOLS_CLI_HPP_
