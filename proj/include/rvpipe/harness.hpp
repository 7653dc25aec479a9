/*
 * Copyright 2026 The rvpipe Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file harness.hpp
 * @brief Program loading, run statistics, occupancy traces and co-simulation.
 *
 * Trace lines have the form
 *
 *   cyc 12 | IF 0000002c | ID bubble | EX 00000020 | MEM ----- | WB 00000018
 *
 * with one column per stage of the configuration. A pc is printed as eight
 * lowercase hex digits, "bubble" marks a slot emptied by a stall or flush,
 * and "-----" marks a stage that holds nothing (pipeline fill or drain).
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rvpipe/golden.hpp"
#include "rvpipe/pipeline.hpp"

namespace rvpipe {

struct RunConfig {
  Stages stages = Stages::FIVE;
  std::string image_path;
  /// In-memory image; takes precedence over image_path when set.
  std::optional<std::vector<std::uint8_t>> image;
  std::uint32_t load_offset = 0;
  Word entry = 0;
  std::uint64_t max_cycles = 10'000'000;
  bool trace = false;
  std::uint64_t seed = 0;
  std::uint32_t imem_size = 64 * 1024;
  std::uint32_t dmem_size = 64 * 1024;
  bool unified = false;
  ForwardingMask forwarding_mask{};  // test hook, not exposed on the CLI
};

struct RunStats {
  std::uint64_t cycles = 0;
  std::uint64_t retired = 0;
  std::uint64_t taken_branch_flush_bubbles = 0;
  std::uint64_t load_use_stalls = 0;
  Word exit_code = 0;
  FaultKind halt_reason = FaultKind::kNone;
  Word fault_pc = 0;
  std::uint64_t fault_cycle = 0;

  /// cycles / retired, or nullopt before the first retirement.
  std::optional<double> cpi() const;
  std::string cpi_rational() const;
  std::string to_json() const;
  static std::string csv_header();
  std::string to_csv() const;

  bool operator==(const RunStats&) const = default;
};

/// Reads cfg.image or the file at cfg.image_path. Throws std::runtime_error
/// when the file cannot be read.
std::vector<std::uint8_t> load_program(const RunConfig& cfg);

/// Builds the scratchpads for cfg and places `image` at load_offset in the
/// instruction scratchpad. Data memory starts zeroed.
MemorySet build_memory(const RunConfig& cfg, const std::vector<std::uint8_t>& image);

std::string format_trace_line(const CycleReport& report);
std::uint64_t trace_hash(const std::vector<std::string>& lines);

/// Recomputes cycles, retirements, flush bubbles and stalls from trace text
/// alone. Exact for runs that end in ECALL/EBREAK or hit the cycle limit.
RunStats stats_from_trace(const std::vector<std::string>& lines);

struct ProgramRun {
  RunStats stats;
  PipelineRun pipeline;
  std::vector<std::string> trace;  // filled when cfg.trace
};

/// Load and run the configured pipeline. Faults and the cycle limit are
/// reported in stats.halt_reason; only I/O and configuration problems throw.
ProgramRun run_program(const RunConfig& cfg);

struct Divergence {
  std::size_t index = 0;
  std::string field;
  std::string golden;
  std::string pipeline;
};

struct CosimVerdict {
  bool pass = false;
  std::size_t matched = 0;
  std::size_t golden_retired = 0;
  std::size_t pipeline_retired = 0;
  FaultKind golden_halt = FaultKind::kNone;
  FaultKind pipeline_halt = FaultKind::kNone;
  std::optional<Divergence> divergence;
  RunStats stats;  // of the pipeline run

  std::string to_json() const;
};

/// First difference between two retirement streams, if any.
std::optional<Divergence> compare_streams(const std::vector<RetireEvent>& golden,
                                          const std::vector<RetireEvent>& pipeline);

/// Run the golden model and the configured pipeline on the same image and
/// compare their retirement streams element by element, then the halt
/// reasons and exit codes.
CosimVerdict cosim(const RunConfig& cfg);

}  // namespace rvpipe
