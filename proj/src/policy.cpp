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

#include "irapguard/policy.h"

#include <algorithm>

#include "irapguard/error.h"

namespace irapguard {

PolicyState on_congestion_start(PolicyState state,
                                const CongestionNotice &notice) {
  // A renewed notice overwrites whatever is left of the previous one.
  state.timer_remaining = notice.duration_ticks;
  return state;
}

PolicyState on_tick(PolicyState state) {
  state.timer_remaining = std::max<std::int64_t>(state.timer_remaining - 1, 0);
  return state;
}

DropDecision recommend_content_aware(const PolicyState &state,
                                     const PacketDescriptor &packet,
                                     const BufferState &buffer,
                                     const PolicyOptions &options) {
  if (state.timer_remaining <= 0) return {};
  if (packet.cls == NalClass::IRAP_VCL) return {};
  if (packet.cls == NalClass::NON_VCL && options.protect_non_vcl) return {};

  const std::int64_t expected_remaining =
      state.input_rate * state.timer_remaining;
  if (buffer.free() < expected_remaining) {
    return {true, DropReason::PREEMPTIVE_NON_IRAP};
  }
  return {};
}

const char *policy_name(PolicyKind kind) {
  return kind == PolicyKind::CONTENT_AWARE ? "content-aware" : "tail-drop";
}

PolicyKind policy_kind_from_name(std::string_view name) {
  if (name == "content-aware") return PolicyKind::CONTENT_AWARE;
  if (name == "tail-drop") return PolicyKind::TAIL_DROP;
  throw Error(ErrorCode::PARSE_ERROR,
              "unknown policy '" + std::string(name) +
                  "' (expected content-aware or tail-drop)");
}

std::unique_ptr<DropPolicy> make_policy(PolicyKind kind,
                                        std::int64_t input_rate,
                                        PolicyOptions options) {
  if (kind == PolicyKind::CONTENT_AWARE)
    return std::make_unique<ContentAwarePolicy>(input_rate, options);
  return std::make_unique<TailDropPolicy>(input_rate);
}

}  // namespace irapguard
