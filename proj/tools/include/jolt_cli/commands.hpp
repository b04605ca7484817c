// Copyright 2026 The Jolt Authors.
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

#ifndef JOLT_CLI_COMMANDS_HPP_
#define JOLT_CLI_COMMANDS_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace jolt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitBackend = 2;
inline constexpr int kExitPartial = 3;

inline constexpr const char* kBackendUrlEnv = "JOLT_BACKEND_URL";

// Entry point behind the `jolt` binary. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jolt::cli

#endif  // JOLT_CLI_COMMANDS_HPP_
