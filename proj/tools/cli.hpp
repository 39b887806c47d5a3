/*
 * Copyright 2026 The aitd Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AITD_TOOLS_CLI_HPP_
#define AITD_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace aitd::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitLeakage = 3;
inline constexpr int kExitDegenerate = 4;

// Entry point shared by the executable and the tests. args[0] is the program
// name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aitd::cli

#endif  // AITD_TOOLS_CLI_HPP_
