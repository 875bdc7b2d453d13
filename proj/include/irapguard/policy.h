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

//! @file policy.h
//! Drop-recommendation engines. The forwarding device (the simulator) asks
//! the policy about every arriving packet; a recommendation is advisory and
//! overflow handling stays with the device.
//!
//! The content-aware policy keeps a congestion timer armed by a congestion
//! notice and decremented once per tick. While the timer runs it projects
//! how many packets will still arrive before congestion ends
//! (input_rate * timer_remaining) and, if the free buffer space cannot hold
//! them, recommends dropping non-IRAP packets so the space is left for IRAP
//! ones.

#ifndef IRAPGUARD_POLICY_H_
#define IRAPGUARD_POLICY_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "irapguard/packetizer.h"

namespace irapguard {

struct CongestionNotice {
  std::int64_t start_tick{0};
  std::int64_t duration_ticks{1};  // >= 1
};

struct BufferState {
  std::int64_t capacity{0};
  std::int64_t occupied{0};

  std::int64_t free() const { return capacity - occupied; }
};

struct PolicyState {
  std::int64_t timer_remaining{0};  // ticks of congestion left
  std::int64_t input_rate{1};       // packets per tick

  bool operator==(const PolicyState &) const = default;
};

enum class DropReason { NONE, PREEMPTIVE_NON_IRAP };

struct DropDecision {
  bool recommend_drop{false};
  DropReason reason{DropReason::NONE};
};

struct PolicyOptions {
  // Parameter sets and other non-VCL units are not picture data; dropping
  // them breaks decoding of everything that follows.
  bool protect_non_vcl{true};
};

// State transitions, usable without a policy object.
PolicyState on_congestion_start(PolicyState state,
                                const CongestionNotice &notice);
PolicyState on_tick(PolicyState state);
DropDecision recommend_content_aware(const PolicyState &state,
                                     const PacketDescriptor &packet,
                                     const BufferState &buffer,
                                     const PolicyOptions &options = {});

enum class PolicyKind { CONTENT_AWARE, TAIL_DROP };

const char *policy_name(PolicyKind kind);
//! Accepts "content-aware" and "tail-drop"; throws Error{PARSE_ERROR}.
PolicyKind policy_kind_from_name(std::string_view name);

class DropPolicy {
 public:
  explicit DropPolicy(std::int64_t input_rate) { state_.input_rate = input_rate; }
  virtual ~DropPolicy() = default;

  virtual PolicyKind kind() const = 0;
  virtual DropDecision recommend(const PacketDescriptor &packet,
                                 const BufferState &buffer) const = 0;

  void on_congestion_start(const CongestionNotice &notice) {
    state_ = irapguard::on_congestion_start(state_, notice);
  }
  void on_tick() { state_ = irapguard::on_tick(state_); }

  const PolicyState &state() const { return state_; }

 protected:
  PolicyState state_;
};

class ContentAwarePolicy final : public DropPolicy {
 public:
  ContentAwarePolicy(std::int64_t input_rate, PolicyOptions options)
      : DropPolicy(input_rate), options_(options) { }

  PolicyKind kind() const override { return PolicyKind::CONTENT_AWARE; }
  DropDecision recommend(const PacketDescriptor &packet,
                         const BufferState &buffer) const override {
    return recommend_content_aware(state_, packet, buffer, options_);
  }

 private:
  PolicyOptions options_;
};

// Baseline: never recommends anything; the device tail-drops on overflow.
class TailDropPolicy final : public DropPolicy {
 public:
  using DropPolicy::DropPolicy;

  PolicyKind kind() const override { return PolicyKind::TAIL_DROP; }
  DropDecision recommend(const PacketDescriptor &,
                         const BufferState &) const override {
    return {};
  }
};

std::unique_ptr<DropPolicy> make_policy(PolicyKind kind,
                                        std::int64_t input_rate,
                                        PolicyOptions options = {});

}  // namespace irapguard

#endif  // IRAPGUARD_POLICY_H_
