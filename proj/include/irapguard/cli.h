/* Copyright 2026 The irapguard Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef IRAPGUARD_CLI_H_
#define IRAPGUARD_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace irapguard {
namespace cli {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

//! Runs one CLI invocation. `args` excludes the program name.
int dispatch(const std::vector<std::string> &args, std::ostream &out,
             std::ostream &err);

}  // namespace cli
}  // namespace irapguard

#endif  // IRAPGUARD_CLI_H_
