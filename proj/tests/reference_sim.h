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

// Straight-line reference model of the forwarding device, written without
// any of the library's simulator or policy code. Tests compare its event
// traces against irapguard::run().
//
// Device model per tick t:
//   a window starting at t arms the drop timer with its duration;
//   if t is not congested, up to out_rate buffered packets leave;
//   up to in_rate packets arrive; a non-IRAP packet (non-VCL only when
//   unprotected) is dropped while timer > 0 and free < in_rate * timer;
//   otherwise a full buffer drops it, else it is queued;
//   unused egress slots of this tick then forward queued packets;
//   the timer counts down by one (not below zero).

#ifndef IRAPGUARD_TESTS_REFERENCE_SIM_H_
#define IRAPGUARD_TESTS_REFERENCE_SIM_H_

#include <cstdint>
#include <vector>

namespace refsim {

enum Kind { ARRIVE = 0, ENQUEUE = 1, DROP_PRE = 2, DROP_OVF = 3, DEPART = 4 };

struct Ev {
  long tick;
  int kind;
  long id;
  bool operator==(const Ev &o) const {
    return tick == o.tick && kind == o.kind && id == o.id;
  }
};

// cls: 0 = IRAP, 1 = non-IRAP VCL, 2 = non-VCL
struct Input {
  std::vector<int> cls;
  long in_rate;
  long out_rate;
  long capacity;
  std::vector<long> win_start;
  std::vector<long> win_len;
  bool content_aware;
  bool protect_non_vcl;
};

inline std::vector<Ev> simulate(const Input &in) {
  long last_tick_of_windows = 0;
  for (size_t w = 0; w < in.win_start.size(); ++w)
    if (in.win_start[w] + in.win_len[w] > last_tick_of_windows)
      last_tick_of_windows = in.win_start[w] + in.win_len[w];

  std::vector<Ev> out;
  std::vector<long> queue;  // packet ids, front at index `head`
  size_t head = 0;
  long timer = 0;
  long n = static_cast<long>(in.cls.size());
  long next = 0;

  for (long t = 0;; ++t) {
    bool congested = false;
    for (size_t w = 0; w < in.win_start.size(); ++w) {
      if (in.win_start[w] == t) timer = in.win_len[w];
      if (t >= in.win_start[w] && t < in.win_start[w] + in.win_len[w])
        congested = true;
    }

    long slots = congested ? 0 : in.out_rate;
    while (slots > 0 && head < queue.size()) {
      out.push_back({t, DEPART, queue[head]});
      ++head;
      --slots;
    }

    for (long k = 0; k < in.in_rate && next < n; ++k, ++next) {
      out.push_back({t, ARRIVE, next});
      long occupied = static_cast<long>(queue.size() - head);
      long free_space = in.capacity - occupied;
      int c = in.cls[next];
      bool droppable = c == 1 || (c == 2 && !in.protect_non_vcl);
      if (in.content_aware && timer > 0 && droppable &&
          free_space < in.in_rate * timer) {
        out.push_back({t, DROP_PRE, next});
      } else if (occupied == in.capacity) {
        out.push_back({t, DROP_OVF, next});
      } else {
        out.push_back({t, ENQUEUE, next});
        queue.push_back(next);
      }
    }

    while (slots > 0 && head < queue.size()) {
      out.push_back({t, DEPART, queue[head]});
      ++head;
      --slots;
    }

    if (timer > 0) --timer;

    bool drained = head == queue.size();
    if (next == n && (drained || in.out_rate == 0)) break;
    // Guard against a malformed input looping forever.
    if (t > n + last_tick_of_windows + 1000000) break;
  }
  return out;
}

}  // namespace refsim

#endif  // IRAPGUARD_TESTS_REFERENCE_SIM_H_
