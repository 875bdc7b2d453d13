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

#ifndef IRAPGUARD_STREAMGEN_H_
#define IRAPGUARD_STREAMGEN_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "irapguard/bitstream.h"

namespace irapguard {

//! Recipe for a synthetic Annex-B stream. Payload bytes are filler, so the
//! result is not decodable video; only framing, types and sizes are real.
struct SynthSpec {
  Codec codec{Codec::H265};
  int frame_count{1};
  int irap_period{1};             // frame i is IRAP iff i % irap_period == 0
  std::size_t irap_nal_bytes{2};  // header included
  std::size_t non_irap_nal_bytes{2};
  bool include_parameter_sets{false};
  std::uint64_t seed{0};
  double jitter_pct{0.0};  // [0, 100)
};

struct SynthStream {
  std::vector<std::uint8_t> bytes;
  std::vector<NalUnit> units;
};

//! Throws Error{INVALID_SPEC}.
SynthStream generate_stream(const SynthSpec &spec);

//! Number of IRAP pictures generate_stream() emits for `spec`.
int expected_irap_count(const SynthSpec &spec);

//! One entry of a named synthetic corpus; tags mirror the metadata a real
//! corpus would carry (resolution, QP).
struct CorpusEntry {
  std::string id;
  SynthSpec spec;
  std::map<std::string, std::string> tags;
};

//! Twelve streams spanning 2..10 packets per IRAP picture at 1400-byte
//! payloads; used by `sweep --synthetic` and the acceptance suite.
std::vector<CorpusEntry> default_synthetic_corpus();

//! Streams with the given packets-per-IRAP sizes (at `payload_size`), with
//! inter pictures scaled in proportion, like one sequence encoded at
//! increasing resolutions.
std::vector<CorpusEntry> resolution_ladder_corpus(
    const std::vector<int> &packets_per_irap, std::size_t payload_size);

std::string synth_spec_json(const SynthSpec &spec);
SynthSpec synth_spec_from_json(const std::string &text);
std::string unit_manifest_json(const std::vector<NalUnit> &units);

}  // namespace irapguard

#endif  // IRAPGUARD_STREAMGEN_H_
