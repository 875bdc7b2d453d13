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

#include "irapguard/cli.h"

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "irapguard/bitstream.h"
#include "irapguard/calibrate.h"
#include "irapguard/error.h"
#include "irapguard/packetizer.h"
#include "irapguard/report.h"
#include "irapguard/schedule.h"
#include "irapguard/simulator.h"
#include "irapguard/streamgen.h"
#include "irapguard/sweep.h"

namespace irapguard {
namespace cli {

namespace {

// A flag value that parses but makes no sense; reported as a usage error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename F>
auto as_usage(F &&f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error &e) {
    throw UsageError(e.what());
  }
}

std::vector<std::uint8_t> read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IO_ERROR, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text(const std::string &path) {
  const auto bytes = read_file(path);
  return {bytes.begin(), bytes.end()};
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IO_ERROR, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IO_ERROR, "write failed: " + path);
}

// Knobs shared by simulate, sweep and calibrate.
struct DeviceFlags {
  std::int64_t buffer{60};
  std::int64_t in_rate{60};
  std::int64_t out_rate{120};
  std::size_t payload_size{kDefaultPayloadSize};
  int repeat{1};
  bool protect_non_vcl{true};
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App *app) {
    app->add_option("--buffer", buffer, "Buffer capacity in packets")
        ->capture_default_str()->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
    app->add_option("--in-rate", in_rate, "Input rate, packets per tick")
        ->capture_default_str()->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
    app->add_option("--out-rate", out_rate, "Output rate, packets per tick")
        ->capture_default_str()->check(CLI::Range(std::int64_t{0}, std::int64_t{1} << 40));
    app->add_option("--payload-size", payload_size, "Payload bytes per packet")
        ->capture_default_str()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
    app->add_option("--repeat", repeat, "Concatenate the stream this many times")
        ->capture_default_str()->check(CLI::Range(1, 1 << 20));
    app->add_option("--protect-non-vcl", protect_non_vcl,
                    "Never preemptively drop parameter sets / non-VCL units")
        ->capture_default_str();
    app->add_option("--seed", seed, "Seed (falls back to $IRAPGUARD_SEED, then 0)");
  }

  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char *env = std::getenv("IRAPGUARD_SEED")) {
      try {
        return std::stoull(env);
      } catch (const std::exception &) {
        throw UsageError(std::string("IRAPGUARD_SEED is not an integer: ") + env);
      }
    }
    return 0;
  }

  SimulationConfig config() const {
    SimulationConfig c;
    c.buffer_capacity = buffer;
    c.input_rate = in_rate;
    c.output_rate = out_rate;
    c.payload_size = payload_size;
    c.repeat = repeat;
    c.policy_options.protect_non_vcl = protect_non_vcl;
    c.seed = resolved_seed();
    return c;
  }
};

std::vector<NalUnit> load_units(const std::string &path, Codec codec) {
  const auto bytes = read_file(path);
  return scan_annexb(bytes, codec);
}

// --schedule accepts a JSON file, "periodic:P,D", "random:G,D" or "none".
CongestionSchedule resolve_schedule(const std::string &arg, std::int64_t horizon,
                                    std::uint64_t seed) {
  if (arg.empty() || arg == "none") {
    CongestionSchedule s;
    s.horizon_ticks = horizon;
    return s;
  }
  auto two_numbers = [&](const std::string &body) {
    const auto comma = body.find(',');
    if (comma == std::string::npos) {
      throw UsageError("--schedule " + arg + ": expected two comma-separated numbers");
    }
    try {
      return std::pair<double, double>{std::stod(body.substr(0, comma)),
                                       std::stod(body.substr(comma + 1))};
    } catch (const std::exception &) {
      throw UsageError("--schedule " + arg + ": bad number");
    }
  };
  if (arg.rfind("periodic:", 0) == 0) {
    const auto [p, d] = two_numbers(arg.substr(9));
    return periodic_schedule(static_cast<std::int64_t>(p),
                             static_cast<std::int64_t>(d), horizon);
  }
  if (arg.rfind("random:", 0) == 0) {
    const auto [g, d] = two_numbers(arg.substr(7));
    return as_usage([&] { return random_schedule(g, d, horizon, seed); });
  }
  return schedule_from_json(read_text(arg));
}

int cmd_inspect(const std::string &file, const std::string &codec_arg,
                std::size_t payload_size, std::ostream &out) {
  const Codec codec = as_usage([&] { return codec_from_name(codec_arg); });
  const auto units = load_units(file, codec);
  StreamStats stats = stream_stats(units);
  fill_packets_per_nal(stats, payload_size);
  out << stream_stats_json(stats) << '\n';
  return kExitOk;
}

struct SynthFlags {
  std::string spec_file;
  std::string out_path;
  std::string manifest_path;
  std::string codec{"h265"};
  int frames{0};
  int irap_period{0};
  std::size_t irap_bytes{0};
  std::size_t non_irap_bytes{0};
  bool params{false};
  std::uint64_t seed{0};
  double jitter{0.0};
};

int cmd_synth(const SynthFlags &f, CLI::App *sub, std::ostream &out) {
  SynthSpec spec;
  if (!f.spec_file.empty()) spec = synth_spec_from_json(read_text(f.spec_file));
  if (sub->count("--codec")) spec.codec = as_usage([&] { return codec_from_name(f.codec); });
  if (sub->count("--frames")) spec.frame_count = f.frames;
  if (sub->count("--irap-period")) spec.irap_period = f.irap_period;
  if (sub->count("--irap-bytes")) spec.irap_nal_bytes = f.irap_bytes;
  if (sub->count("--non-irap-bytes")) spec.non_irap_nal_bytes = f.non_irap_bytes;
  if (sub->count("--params")) spec.include_parameter_sets = f.params;
  if (sub->count("--seed")) spec.seed = f.seed;
  if (sub->count("--jitter")) spec.jitter_pct = f.jitter;

  const SynthStream stream = as_usage([&] { return generate_stream(spec); });
  const std::string manifest =
      f.manifest_path.empty() ? f.out_path + ".units.json" : f.manifest_path;
  write_text(f.out_path, std::string(stream.bytes.begin(), stream.bytes.end()));
  write_text(manifest, unit_manifest_json(stream.units) + "\n");

  nlohmann::ordered_json j;
  j["bitstream"] = f.out_path;
  j["manifest"] = manifest;
  j["bytes"] = stream.bytes.size();
  j["nal_count"] = stream.units.size();
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct SimulateFlags {
  std::string file;
  std::string codec;
  std::string policy{"content-aware"};
  std::string schedule;
  std::string events_path;
  std::string report_path;
};

int cmd_simulate(const SimulateFlags &f, const DeviceFlags &dev, std::ostream &out) {
  const Codec codec = as_usage([&] { return codec_from_name(f.codec); });
  SimulationConfig cfg = dev.config();
  cfg.policy = as_usage([&] { return policy_kind_from_name(f.policy); });

  const auto units = load_units(f.file, codec);
  const auto packets = packetize(units, cfg.payload_size, cfg.repeat);
  cfg.schedule = resolve_schedule(
      f.schedule, arrival_span_ticks(packets.size(), cfg.input_rate), cfg.seed);

  const RunResult result = run(cfg, packets, {.record_events = !f.events_path.empty()});
  const std::string report = run_report_json(result.report);
  if (!f.events_path.empty()) {
    std::ofstream ev(f.events_path, std::ios::binary | std::ios::trunc);
    if (!ev) throw Error(ErrorCode::IO_ERROR, "cannot open " + f.events_path);
    write_events_csv(ev, result.events);
    if (!ev) throw Error(ErrorCode::IO_ERROR, "write failed: " + f.events_path);
  }
  if (!f.report_path.empty()) write_text(f.report_path, report + "\n");
  out << report << '\n';
  return kExitOk;
}

struct SweepFlags {
  std::vector<std::string> files;
  std::string codec;
  std::string corpus_path;
  bool synthetic{false};
  std::string targets{"5:50:5"};
  std::string policies{"both"};
  std::string out_dir{"sweep_out"};
  std::int64_t period{100};
  int jobs{1};
  bool verify_replay{false};
};

std::vector<SweepStream> sweep_streams(const SweepFlags &f, const SimulationConfig &cfg,
                                       bool repeat_given) {
  std::vector<SweepStream> streams;
  if (f.synthetic) {
    // The synthetic streams are short; repeat them enough for the calibrated
    // schedule to cycle many times unless the user chose a factor.
    const int repeat = repeat_given ? cfg.repeat : 200;
    for (const CorpusEntry &e : default_synthetic_corpus()) {
      const SynthStream s = generate_stream(e.spec);
      streams.push_back(make_sweep_stream(e.id, s.units, cfg.payload_size, repeat, e.tags));
    }
  }
  if (!f.corpus_path.empty()) {
    nlohmann::json corpus;
    try {
      corpus = nlohmann::json::parse(read_text(f.corpus_path));
      for (const auto &entry : corpus.at("streams")) {
        const std::string path = entry.at("path").get<std::string>();
        const Codec codec = codec_from_name(entry.value("codec", f.codec));
        std::map<std::string, std::string> tags;
        if (entry.contains("tags")) {
          for (const auto &[k, v] : entry["tags"].items())
            tags[k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
        const auto units = load_units(path, codec);
        streams.push_back(make_sweep_stream(entry.value("id", path), units,
                                            cfg.payload_size, cfg.repeat, tags));
      }
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::PARSE_ERROR, "corpus " + f.corpus_path + ": " + e.what());
    }
  }
  if (!f.files.empty()) {
    if (f.codec.empty()) throw UsageError("sweep: --codec is required with input files");
    const Codec codec = as_usage([&] { return codec_from_name(f.codec); });
    for (const std::string &path : f.files) {
      const auto units = load_units(path, codec);
      streams.push_back(make_sweep_stream(path, units, cfg.payload_size, cfg.repeat));
    }
  }
  if (streams.empty()) {
    throw UsageError("sweep: give input files, --corpus or --synthetic");
  }
  return streams;
}

int cmd_sweep(const SweepFlags &f, const DeviceFlags &dev, bool repeat_given,
              std::ostream &out) {
  SweepOptions opts;
  opts.base = dev.config();
  opts.targets = as_usage([&] { return parse_targets(f.targets); });
  if (f.policies == "both") {
    opts.policy = PolicyKind::CONTENT_AWARE;
  } else {
    opts.policy = as_usage([&] { return policy_kind_from_name(f.policies); });
  }
  opts.calibration.period = f.period;
  opts.jobs = f.jobs;
  opts.verify_replay = f.verify_replay;

  const auto streams = sweep_streams(f, opts.base, repeat_given);
  const auto cells = run_sweep(streams, opts);
  const SweepSummary summary = aggregate(cells);
  write_outputs(summary, cells, f.out_dir);
  out << summary_json(summary) << '\n';
  if (f.verify_replay) {
    for (const SweepCell &c : cells) {
      if (c.replay_ok && !*c.replay_ok) {
        throw Error(ErrorCode::INVALID_CONFIG,
                    "replay check failed for " + c.stream.stream_id);
      }
    }
  }
  return kExitOk;
}

int cmd_calibrate(const std::string &file, const std::string &codec_arg, double target,
                  std::int64_t period, const std::string &out_path,
                  const DeviceFlags &dev, std::ostream &out) {
  const Codec codec = as_usage([&] { return codec_from_name(codec_arg); });
  const SimulationConfig cfg = dev.config();
  const auto units = load_units(file, codec);
  const auto packets = packetize(units, cfg.payload_size, cfg.repeat);
  CalibrationOptions opts;
  opts.period = period;
  const CalibrationResult result = calibrate(target, cfg, packets, opts);
  const std::string json = calibration_json(result);
  if (!out_path.empty()) write_text(out_path, json + "\n");
  out << json << '\n';
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string> &args, std::ostream &out,
             std::ostream &err) {
  CLI::App app{"Content-aware packet drop toolkit: NAL inspection, synthetic "
               "streams and a congestion simulator",
               "irapguard"};
  app.require_subcommand(1);

  // inspect
  std::string inspect_file, inspect_codec;
  std::size_t inspect_payload = kDefaultPayloadSize;
  CLI::App *inspect = app.add_subcommand("inspect", "NAL unit statistics as JSON");
  inspect->add_option("file", inspect_file, "Annex-B bitstream")->required();
  inspect->add_option("--codec", inspect_codec, "h264 or h265")->required();
  inspect->add_option("--payload-size", inspect_payload, "Payload bytes per packet")
      ->capture_default_str()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));

  // synth
  SynthFlags synth_flags;
  CLI::App *synth = app.add_subcommand("synth", "Generate a synthetic Annex-B stream");
  synth->add_option("--spec", synth_flags.spec_file, "SynthSpec JSON file");
  synth->add_option("--out", synth_flags.out_path, "Output bitstream path")->required();
  synth->add_option("--manifest", synth_flags.manifest_path,
                    "Unit manifest path (default <out>.units.json)");
  synth->add_option("--codec", synth_flags.codec, "h264 or h265");
  synth->add_option("--frames", synth_flags.frames, "Frame count");
  synth->add_option("--irap-period", synth_flags.irap_period, "Frames between IRAP pictures");
  synth->add_option("--irap-bytes", synth_flags.irap_bytes, "IRAP NAL size in bytes");
  synth->add_option("--non-irap-bytes", synth_flags.non_irap_bytes, "Non-IRAP NAL size in bytes");
  synth->add_option("--params", synth_flags.params, "Emit parameter sets first");
  synth->add_option("--seed", synth_flags.seed, "Jitter seed");
  synth->add_option("--jitter", synth_flags.jitter, "Size jitter in percent, [0, 100)");

  // simulate
  SimulateFlags sim_flags;
  DeviceFlags sim_dev;
  CLI::App *simulate = app.add_subcommand("simulate", "Run one congestion simulation");
  simulate->add_option("file", sim_flags.file, "Annex-B bitstream")->required();
  simulate->add_option("--codec", sim_flags.codec, "h264 or h265")->required();
  simulate->add_option("--policy", sim_flags.policy, "content-aware or tail-drop")
      ->capture_default_str();
  simulate->add_option("--schedule", sim_flags.schedule,
                       "Schedule JSON file, periodic:P,D, random:G,D or none");
  simulate->add_option("--events", sim_flags.events_path, "Write the event log CSV here");
  simulate->add_option("--report", sim_flags.report_path, "Also write the report JSON here");
  sim_dev.add_to(simulate);

  // sweep
  SweepFlags sweep_flags;
  DeviceFlags sweep_dev;
  CLI::App *sweep = app.add_subcommand("sweep", "Calibrated loss-target sweep, both policies");
  sweep->add_option("files", sweep_flags.files, "Annex-B bitstreams");
  sweep->add_option("--codec", sweep_flags.codec, "h264 or h265 (for positional files)");
  sweep->add_option("--corpus", sweep_flags.corpus_path,
                    "JSON {\"streams\": [{\"path\", \"codec\", \"id\", \"tags\"}]}");
  sweep->add_flag("--synthetic", sweep_flags.synthetic, "Include the built-in synthetic corpus");
  sweep->add_option("--targets", sweep_flags.targets, "start:stop:step or a,b,c (percent)")
      ->capture_default_str();
  sweep->add_option("--policies", sweep_flags.policies,
                    "both (tail-drop vs content-aware) or the policy to compare")
      ->capture_default_str();
  sweep->add_option("--out-dir", sweep_flags.out_dir, "Output directory")->capture_default_str();
  sweep->add_option("--period", sweep_flags.period, "Calibration period in ticks")
      ->capture_default_str()->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
  sweep->add_option("--jobs", sweep_flags.jobs, "Parallel cells")
      ->capture_default_str()->check(CLI::Range(1, 1024));
  sweep->add_flag("--verify-replay", sweep_flags.verify_replay,
                  "Record and re-validate every event log");
  sweep_dev.add_to(sweep);

  // calibrate
  std::string cal_file, cal_codec, cal_out;
  double cal_target = 0.0;
  std::int64_t cal_period = 100;
  DeviceFlags cal_dev;
  CLI::App *calib = app.add_subcommand("calibrate", "Find a schedule hitting a baseline loss");
  calib->add_option("file", cal_file, "Annex-B bitstream")->required();
  calib->add_option("--codec", cal_codec, "h264 or h265")->required();
  calib->add_option("--target", cal_target, "Target total loss, percent")
      ->required()->check(CLI::Range(0.0, 100.0));
  calib->add_option("--period", cal_period, "Period in ticks")
      ->capture_default_str()->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
  calib->add_option("--out", cal_out, "Also write the schedule JSON here");
  cal_dev.add_to(calib);

  std::vector<const char *> argv{"irapguard"};
  for (const auto &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "irapguard: " << e.what() << '\n';
    err << app.help();
    return kExitUsage;
  }

  try {
    if (*inspect) return cmd_inspect(inspect_file, inspect_codec, inspect_payload, out);
    if (*synth) return cmd_synth(synth_flags, synth, out);
    if (*simulate) return cmd_simulate(sim_flags, sim_dev, out);
    if (*sweep) return cmd_sweep(sweep_flags, sweep_dev, sweep->count("--repeat") > 0, out);
    if (*calib) {
      return cmd_calibrate(cal_file, cal_codec, cal_target, cal_period, cal_out, cal_dev, out);
    }
  } catch (const UsageError &e) {
    err << "irapguard: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error &e) {
    err << "irapguard: " << error_code_name(e.code()) << ": " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception &e) {
    err << "irapguard: " << e.what() << '\n';
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace cli
}  // namespace irapguard
