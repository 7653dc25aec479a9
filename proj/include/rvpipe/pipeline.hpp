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
 * @file pipeline.hpp
 * @brief Cycle-accurate in-order RV32I pipeline with 3, 4 or 5 stages.
 *
 * Stage roles per configuration:
 *
 *   THREE  IF | ID (+ address adder, memory request) | EX (+ MEM + WB)
 *   FOUR   IF | ID | EX (memory request)             | MEM (+ WB)
 *   FIVE   IF | ID | EX (memory request)             | MEM | WB
 *
 * Instruction and data memories are synchronous: a request registered at the
 * end of one stage is answered in the next. Branches and jumps resolve in EX
 * and flush IF and ID when taken. FOUR and FIVE interlock one cycle on a
 * load-use dependency; THREE reads memory in parallel with the ALU and
 * forwards the load data, so it has no load-use stall.
 *
 * Forwarding is modeled as two legs:
 *  - the ID leg, where the instruction retiring this cycle bypasses the
 *    register-file read of the instruction in ID (read-during-write), and
 *  - the EX leg, where results still in flight downstream override the
 *    operands captured in ID. Youngest producer wins.
 *
 *   config  ID leg (retiring)       EX leg (youngest first)
 *   THREE   EX   FROM_EXWB_3STAGE   -
 *   FOUR    MEM  FROM_MEMWB         MEM FROM_EXMEM
 *   FIVE    WB   FROM_MEMWB         MEM FROM_EXMEM, WB FROM_MEMWB
 *
 * Register-file writes commit at the end of the cycle.
 */

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rvpipe/errors.hpp"
#include "rvpipe/golden.hpp"
#include "rvpipe/isa.hpp"
#include "rvpipe/memory.hpp"

namespace rvpipe {

enum class Stages : std::uint8_t { THREE = 3, FOUR = 4, FIVE = 5 };

struct PipelineConfig {
  Stages stages = Stages::FIVE;

  int depth() const { return static_cast<int>(stages); }
  bool has_load_use_hazard() const { return stages != Stages::THREE; }
};

/// Stage positions. Only the first depth() entries exist in a configuration;
/// the last existing one is the retiring stage.
enum Stage : std::uint8_t { kIF = 0, kID = 1, kEX = 2, kMEM = 3, kWB = 4 };
inline constexpr int kMaxStages = 5;
const char* stage_name(Stage s);

enum class ForwardSource : std::uint8_t { REGFILE, FROM_EXMEM, FROM_MEMWB, FROM_EXWB_3STAGE, IMMEDIATE, PC };
const char* source_name(ForwardSource s);

/// Source of each ALU-side operand: `rs1` is the A input (register or pc),
/// `rs2` is the register rs2 value or, when rs2 is unused, the immediate.
struct ForwardSel {
  ForwardSource rs1 = ForwardSource::REGFILE;
  ForwardSource rs2 = ForwardSource::REGFILE;
  bool operator==(const ForwardSel&) const = default;
};

struct Redirect {
  bool taken = false;
  Word target = 0;
};

enum class SlotState : std::uint8_t { kEmpty, kBubble, kValid };

struct StageSlot {
  SlotState state = SlotState::kEmpty;
  Word pc = 0;
  bool decoded = false;
  DecodedInstr instr{};
  Word operand_a = 0;  // rs1 value after forwarding
  Word operand_b = 0;  // rs2 value after forwarding
  Word alu_result = 0;
  Word mem_addr = 0;
  Word store_data = 0;
  Word load_data = 0;
  bool result_ready = false;  // value to write to rd is known
  std::uint8_t bypassed = 0;  // register operands served by a bypass
  Redirect redirect{};
  FaultKind fault = FaultKind::kNone;
  Word fault_addr = 0;

  bool valid() const { return state == SlotState::kValid; }
  bool is_bubble() const { return state == SlotState::kBubble; }
  bool faulted() const { return fault != FaultKind::kNone; }
  Word result() const { return instr.kind == InstrKind::LOAD ? load_data : alu_result; }

  static StageSlot fetch(Word pc) {
    StageSlot s;
    s.state = SlotState::kValid;
    s.pc = pc;
    return s;
  }
  static StageSlot bubble() {
    StageSlot s;
    s.state = SlotState::kBubble;
    return s;
  }
};

struct PerfCounters {
  std::uint64_t cycles = 0;
  std::uint64_t retired = 0;
  std::uint64_t taken_branch_flushes = 0;  // bubbles injected by taken redirects
  std::uint64_t load_use_stalls = 0;
  std::uint64_t forwarded_operands = 0;  // register operands served by a bypass

  std::optional<double> cpi() const {
    if (retired == 0) return std::nullopt;
    return static_cast<double>(cycles) / static_cast<double>(retired);
  }
  bool operator==(const PerfCounters&) const = default;
};

/// What one stage held during a cycle.
struct Occupant {
  SlotState state = SlotState::kEmpty;
  Word pc = 0;
  bool operator==(const Occupant&) const = default;
};

struct CycleReport {
  std::uint64_t cycle = 0;
  int depth = 0;
  std::array<Occupant, kMaxStages> stages{};
  std::optional<RetireEvent> retired;
  bool load_use_stall = false;
  bool taken_redirect = false;
  FaultKind fault = FaultKind::kNone;

  bool operator==(const CycleReport&) const = default;
};

/// Test hook: forwarding legs that are switched off. A disabled source
/// behaves as if the wire were cut; the consumer keeps its register-file
/// value.
struct ForwardingMask {
  std::array<bool, 6> disabled{};

  void disable(ForwardSource s) { disabled[static_cast<std::size_t>(s)] = true; }
  bool is_disabled(ForwardSource s) const { return disabled[static_cast<std::size_t>(s)]; }
};

struct LabeledProducer {
  const StageSlot* slot = nullptr;
  ForwardSource source = ForwardSource::REGFILE;
};

/// Operand sources for `consumer`, given in-flight producers ordered youngest
/// first. Producers without a nonzero destination never match.
ForwardSel forward_select(PipelineConfig config, const StageSlot& consumer,
                          std::span<const LabeledProducer> producers);

/// True iff the configuration interlocks on loads and `ex` holds a load whose
/// destination feeds a register operand of the instruction in `id`.
bool detect_load_use(PipelineConfig config, const StageSlot& id, const StageSlot& ex);

/// Branch/jump outcome for a decoded control instruction with its operands
/// resolved. JALR targets have bit 0 cleared.
Redirect resolve_redirect(const StageSlot& ex);

/// Dedicated address adder used by THREE in ID: operand_a + imm.
Word compute_mem_addr_in_id(const StageSlot& id);

/// Architectural effects of a slot in the retiring stage, or nothing for a
/// bubble or empty slot.
std::optional<RetireEvent> retire(const StageSlot& slot);

/// Thrown by step_cycle() when a faulting instruction reaches the retiring
/// stage. Carries the report of that final cycle.
class PipelineFault : public SimError {
 public:
  PipelineFault(const SimError& cause, std::uint64_t cycle, CycleReport report)
      : SimError(cause.kind(), cause.pc(), cause.what()), cycle_(cycle), report_(std::move(report)) {}

  std::uint64_t cycle() const { return cycle_; }
  const CycleReport& report() const { return report_; }

 private:
  std::uint64_t cycle_;
  CycleReport report_;
};

struct PipelineState {
  PipelineConfig config;
  Word fetch_pc = 0;
  bool fetch_enabled = true;
  std::array<StageSlot, kMaxStages> slots{};
  RegFile regfile{};
  PerfCounters counters;
  bool halted = false;
  Word exit_code = 0;
  FaultKind fault = FaultKind::kNone;
  Word fault_pc = 0;
};

class Pipeline {
 public:
  Pipeline(PipelineConfig config, MemorySet mem, Word entry = 0, ForwardingMask mask = {});
  Pipeline(const Pipeline&) = delete;
  Pipeline& operator=(const Pipeline&) = delete;

  /// Advance one clock. Requires !halted(). Throws PipelineFault when a
  /// faulting instruction reaches the retiring stage.
  CycleReport step_cycle();

  const PipelineState& state() const { return state_; }
  const PerfCounters& counters() const { return state_.counters; }
  const MemorySet& memory() const { return mem_; }
  bool halted() const { return state_.halted; }

 private:
  Stage last() const { return static_cast<Stage>(state_.config.depth() - 1); }
  void kill_younger(Stage s);
  void tag_fault(StageSlot& slot, FaultKind kind, Word addr, Stage where);
  void collect_data(StageSlot& slot, Stage where);
  void execute(StageSlot& slot);
  void issue_data(StageSlot& slot);
  void read_operands(StageSlot& slot);
  void forward_in_ex(StageSlot& slot);
  std::uint64_t count_forwarded(const ForwardSel& sel) const;

  PipelineState state_;
  MemorySet mem_;
  MemPort iport_;
  MemPort dport_;
  ForwardingMask mask_;
};

struct PipelineRun {
  std::vector<RetireEvent> events;
  std::vector<CycleReport> reports;  // only when requested
  PerfCounters counters;
  RegFile regfile{};
  MemorySet memory;
  bool halted = false;
  Word exit_code = 0;
  FaultKind halt_reason = FaultKind::kNone;
  Word fault_pc = 0;
  std::uint64_t fault_cycle = 0;
};

/// Clock the pipeline until it halts, faults, or max_cycles elapse
/// (halt_reason kStepLimitExceeded).
PipelineRun run_pipeline(PipelineConfig config, MemorySet mem, Word entry, std::uint64_t max_cycles,
                         bool keep_reports = false, ForwardingMask mask = {});

}  // namespace rvpipe
