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

#include <gtest/gtest.h>

#include <random>

#include "irapguard/bitstream.h"
#include "irapguard/error.h"
#include "irapguard/packetizer.h"
#include "irapguard/streamgen.h"

namespace irapguard {
namespace {

TEST(GenerateStream, AlternatingGop) {
  SynthSpec spec;
  spec.codec = Codec::H265;
  spec.frame_count = 4;
  spec.irap_period = 2;
  spec.irap_nal_bytes = 3000;
  spec.non_irap_nal_bytes = 1000;
  const SynthStream s = generate_stream(spec);
  ASSERT_EQ(s.units.size(), 4u);
  const NalClass expected[] = {NalClass::IRAP_VCL, NalClass::NON_IRAP_VCL,
                               NalClass::IRAP_VCL, NalClass::NON_IRAP_VCL};
  const std::size_t lengths[] = {3000, 1000, 3000, 1000};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(s.units[i].cls, expected[i]);
    EXPECT_EQ(s.units[i].byte_len, lengths[i]);
  }
}

TEST(GenerateStream, SingleFrame) {
  SynthSpec spec;
  spec.irap_nal_bytes = 50;
  const SynthStream s = generate_stream(spec);
  ASSERT_EQ(s.units.size(), 1u);
  EXPECT_EQ(s.units[0].cls, NalClass::IRAP_VCL);
}

TEST(GenerateStream, DeterministicPerSeed) {
  SynthSpec spec;
  spec.frame_count = 50;
  spec.irap_period = 8;
  spec.irap_nal_bytes = 5000;
  spec.non_irap_nal_bytes = 700;
  spec.include_parameter_sets = true;
  spec.jitter_pct = 30;
  spec.seed = 99;
  EXPECT_EQ(generate_stream(spec).bytes, generate_stream(spec).bytes);
  SynthSpec other = spec;
  other.seed = 100;
  EXPECT_NE(generate_stream(spec).bytes, generate_stream(other).bytes);
}

TEST(GenerateStream, ParameterSetsLeadTheStream) {
  SynthSpec spec;
  spec.frame_count = 3;
  spec.irap_nal_bytes = 100;
  spec.non_irap_nal_bytes = 40;
  spec.include_parameter_sets = true;
  const auto h265 = generate_stream(spec).units;
  ASSERT_EQ(h265.size(), 6u);
  EXPECT_EQ(h265[0].nal_type, 32);
  EXPECT_EQ(h265[1].nal_type, 33);
  EXPECT_EQ(h265[2].nal_type, 34);
  spec.codec = Codec::H264;
  const auto h264 = generate_stream(spec).units;
  ASSERT_EQ(h264.size(), 5u);
  EXPECT_EQ(h264[0].nal_type, 7);
  EXPECT_EQ(h264[1].nal_type, 8);
  EXPECT_EQ(h264[2].nal_type, 5);
}

TEST(GenerateStream, InvalidSpecs) {
  auto code = [](SynthSpec spec) {
    try {
      generate_stream(spec);
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::IO_ERROR;
  };
  SynthSpec base;
  base.irap_nal_bytes = 10;
  base.non_irap_nal_bytes = 10;
  SynthSpec s = base;
  s.frame_count = 0;
  EXPECT_EQ(code(s), ErrorCode::INVALID_SPEC);
  s = base;
  s.irap_period = 0;
  EXPECT_EQ(code(s), ErrorCode::INVALID_SPEC);
  s = base;
  s.non_irap_nal_bytes = 1;  // below the H.265 header
  EXPECT_EQ(code(s), ErrorCode::INVALID_SPEC);
  s = base;
  s.jitter_pct = 100;
  EXPECT_EQ(code(s), ErrorCode::INVALID_SPEC);
}

SynthSpec random_spec(std::mt19937_64 &rng) {
  SynthSpec spec;
  spec.codec = rng() % 2 ? Codec::H264 : Codec::H265;
  spec.frame_count = 1 + static_cast<int>(rng() % 80);
  spec.irap_period = 1 + static_cast<int>(rng() % 40);
  spec.irap_nal_bytes = nal_header_size(spec.codec) + rng() % 6000;
  spec.non_irap_nal_bytes = nal_header_size(spec.codec) + rng() % 2000;
  spec.include_parameter_sets = rng() % 2;
  spec.seed = rng();
  spec.jitter_pct = static_cast<double>(rng() % 99);
  return spec;
}

TEST(GenerateStream, ScanRecoversUnits) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 300; ++round) {
    const SynthSpec spec = random_spec(rng);
    const SynthStream s = generate_stream(spec);
    EXPECT_EQ(scan_annexb(s.bytes, spec.codec), s.units);
  }
}

TEST(GenerateStream, IrapFractionExact) {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 300; ++round) {
    const SynthSpec spec = random_spec(rng);
    std::size_t irap = 0, vcl = 0;
    for (const NalUnit &u : generate_stream(spec).units) {
      if (u.cls == NalClass::NON_VCL) continue;
      ++vcl;
      if (u.cls == NalClass::IRAP_VCL) ++irap;
    }
    EXPECT_EQ(vcl, static_cast<std::size_t>(spec.frame_count));
    // ceil(frame_count / irap_period), counted independently
    const std::size_t ceil_div =
        static_cast<std::size_t>(spec.frame_count / spec.irap_period +
                                 (spec.frame_count % spec.irap_period != 0));
    EXPECT_EQ(irap, ceil_div);
  }
}

TEST(GenerateStream, JitterNeverShrinksBelowHeader) {
  SynthSpec spec;
  spec.frame_count = 500;
  spec.irap_nal_bytes = 3;
  spec.non_irap_nal_bytes = 2;
  spec.jitter_pct = 99;
  spec.seed = 5;
  for (const NalUnit &u : generate_stream(spec).units) EXPECT_GE(u.byte_len, 2u);
}

TEST(SyntheticCorpus, MeanPacketsPerIrapWithinTen) {
  const auto corpus = default_synthetic_corpus();
  ASSERT_EQ(corpus.size(), 12u);
  double sum = 0.0;
  for (const auto &e : corpus) {
    const auto units = generate_stream(e.spec).units;
    sum += packets_per_irap_nal_mean(units, kDefaultPayloadSize);
    EXPECT_TRUE(e.tags.count("resolution"));
    EXPECT_TRUE(e.tags.count("qp"));
  }
  EXPECT_LE(sum / 12.0, 10.0);
}

TEST(SyntheticCorpus, LadderHitsRequestedPacketCounts) {
  for (const auto &e : resolution_ladder_corpus({5, 20, 60, 120}, 1400)) {
    const auto units = generate_stream(e.spec).units;
    EXPECT_DOUBLE_EQ(packets_per_irap_nal_mean(units, 1400),
                     std::stod(e.tags.at("packets_per_irap")));
  }
}

TEST(SynthSpecJson, RoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const SynthSpec spec = random_spec(rng);
    const SynthSpec back = synth_spec_from_json(synth_spec_json(spec));
    EXPECT_EQ(generate_stream(back).bytes, generate_stream(spec).bytes);
  }
}

}  // namespace
}  // namespace irapguard
