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

#include "irapguard/packetizer.h"

#include <string>

#include "irapguard/error.h"

namespace irapguard {

std::size_t packets_for_nal(std::size_t byte_len, std::size_t payload_size) {
  return (byte_len + payload_size - 1) / payload_size;
}

std::vector<PacketDescriptor> packetize(std::span<const NalUnit> units,
                                        std::size_t payload_size, int repeat) {
  if (payload_size < 1) {
    throw Error(ErrorCode::INVALID_PAYLOAD_SIZE, "payload_size must be >= 1");
  }
  if (repeat < 1) {
    throw Error(ErrorCode::INVALID_CONFIG,
                "repeat must be >= 1, got " + std::to_string(repeat));
  }

  std::size_t per_pass = 0;
  for (const NalUnit &u : units) per_pass += packets_for_nal(u.byte_len, payload_size);

  std::vector<PacketDescriptor> packets;
  packets.reserve(per_pass * static_cast<std::size_t>(repeat));
  std::uint64_t nal_instance = 0;
  for (int r = 0; r < repeat; ++r) {
    for (const NalUnit &u : units) {
      std::size_t remaining = u.byte_len;
      std::uint32_t fragment = 0;
      while (remaining > 0) {
        const std::size_t chunk = std::min(remaining, payload_size);
        remaining -= chunk;
        PacketDescriptor p;
        p.packet_id = packets.size();
        p.nal_index = nal_instance;
        p.fragment_index = fragment++;
        p.size_bytes = static_cast<std::uint32_t>(chunk);
        p.cls = u.cls;
        p.codec = u.codec;
        p.nal_type = static_cast<std::uint8_t>(u.nal_type);
        p.is_last_of_nal = remaining == 0;
        packets.push_back(p);
      }
      ++nal_instance;
    }
  }
  return packets;
}

void fill_packets_per_nal(StreamStats &stats, std::size_t payload_size) {
  if (payload_size < 1) {
    throw Error(ErrorCode::INVALID_PAYLOAD_SIZE, "payload_size must be >= 1");
  }
  stats.packets_per_nal.clear();
  stats.packets_per_nal.reserve(stats.bytes_per_nal.size());
  for (std::size_t len : stats.bytes_per_nal)
    stats.packets_per_nal.push_back(packets_for_nal(len, payload_size));
}

double packets_per_irap_nal_mean(std::span<const NalUnit> units,
                                 std::size_t payload_size) {
  std::size_t irap = 0, packets = 0;
  for (const NalUnit &u : units) {
    if (u.cls != NalClass::IRAP_VCL) continue;
    ++irap;
    packets += packets_for_nal(u.byte_len, payload_size);
  }
  return irap == 0 ? 0.0
                   : static_cast<double>(packets) / static_cast<double>(irap);
}

}  // namespace irapguard
