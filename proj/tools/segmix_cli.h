// Copyright 2026 The SegMix Authors
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

#ifndef SEGMIX_TOOLS_SEGMIX_CLI_H_
#define SEGMIX_TOOLS_SEGMIX_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace segmix::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one command. `args` excludes the program name, e.g.
// {"augment", "--input", "train.conll", ...}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace segmix::cli

#endif  // SEGMIX_TOOLS_SEGMIX_CLI_H_
