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

// Internal helpers shared by the JSON/CSV writers.

#ifndef IRAPGUARD_SRC_JSON_UTIL_H_
#define IRAPGUARD_SRC_JSON_UTIL_H_

#include <cmath>
#include <cstdio>
#include <string>

namespace irapguard {

// Percentages are published with 4 decimal places.
inline double round4(double v) { return std::round(v * 1e4) / 1e4; }

inline std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace irapguard

#endif  // IRAPGUARD_SRC_JSON_UTIL_H_
