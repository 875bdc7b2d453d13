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

#ifndef IRAPGUARD_ERROR_H_
#define IRAPGUARD_ERROR_H_

#include <stdexcept>
#include <string>

namespace irapguard {

enum class ErrorCode {
  // bitstream
  EMPTY_INPUT,
  NO_START_CODE,
  MALFORMED_UNIT,
  FORBIDDEN_BIT_SET,
  TOO_SHORT,
  OUT_OF_RANGE,
  // streamgen / packetizer
  INVALID_SPEC,
  INVALID_PAYLOAD_SIZE,
  // simulator
  INVALID_CONFIG,
  EMPTY_STREAM,
  // schedule
  INVALID_PERIOD,
  INVALID_PARAMS,
  UNREACHABLE,
  // report / io
  IO_ERROR,
  PARSE_ERROR,
};

const char *error_code_name(ErrorCode code);

// All library failures surface as this exception; code() identifies the
// contract violation so callers (and the CLI exit-status mapping) can branch.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) { }

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace irapguard

#endif  // IRAPGUARD_ERROR_H_
