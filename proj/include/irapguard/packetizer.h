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

#ifndef IRAPGUARD_PACKETIZER_H_
#define IRAPGUARD_PACKETIZER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "irapguard/bitstream.h"

namespace irapguard {

constexpr std::size_t kDefaultPayloadSize = 1400;

//! One simulated packet. Carries what the in-network drop module would see:
//! the protocol (codec), the NAL type and the derived class.
struct PacketDescriptor {
  std::uint64_t packet_id{0};
  std::uint64_t nal_index{0};  // NAL instance, counting across repeats
  std::uint32_t fragment_index{0};
  std::uint32_t size_bytes{0};
  NalClass cls{NalClass::NON_VCL};
  Codec codec{Codec::H265};
  std::uint8_t nal_type{0};
  bool is_last_of_nal{false};

  bool operator==(const PacketDescriptor &) const = default;
};

//! Fragments every NAL into ceil(byte_len / payload_size) packets, never
//! mixing two NALs in one packet, and repeats the whole unit list `repeat`
//! times with continuous ids.
//! Throws Error{INVALID_PAYLOAD_SIZE | INVALID_CONFIG}.
std::vector<PacketDescriptor> packetize(std::span<const NalUnit> units,
                                        std::size_t payload_size,
                                        int repeat = 1);

std::size_t packets_for_nal(std::size_t byte_len, std::size_t payload_size);

//! Fills stats.packets_per_nal from stats.bytes_per_nal.
void fill_packets_per_nal(StreamStats &stats, std::size_t payload_size);

//! Mean packet count over the IRAP units (0 when there are none).
double packets_per_irap_nal_mean(std::span<const NalUnit> units,
                                 std::size_t payload_size);

}  // namespace irapguard

#endif  // IRAPGUARD_PACKETIZER_H_
