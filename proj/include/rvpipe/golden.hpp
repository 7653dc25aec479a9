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
 * @file golden.hpp
 * @brief Instruction-at-a-time RV32I reference simulator.
 *
 * The golden model defines architectural correctness. It executes one
 * instruction per step with combinational memory, and reports every
 * retirement as a RetireEvent; the pipeline emits the same records so the
 * two streams can be compared element by element.
 */

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "rvpipe/errors.hpp"
#include "rvpipe/isa.hpp"
#include "rvpipe/memory.hpp"

namespace rvpipe {

/// Instruction and data scratchpads. Split (Harvard) by default; when
/// `dmem` is empty, data accesses go to the instruction scratchpad.
struct MemorySet {
  Scratchpad imem{0, 4};
  std::optional<Scratchpad> dmem;

  Scratchpad& data() { return dmem ? *dmem : imem; }
  const Scratchpad& data() const { return dmem ? *dmem : imem; }
  bool unified() const { return !dmem.has_value(); }

  bool operator==(const MemorySet&) const = default;
};

struct RegWrite {
  RegIndex rd = 0;
  Word value = 0;
  bool operator==(const RegWrite&) const = default;
};

struct MemWrite {
  Word addr = 0;
  MemWidth width = MemWidth::WORD;
  Word data = 0;  // truncated to width
  bool operator==(const MemWrite&) const = default;
};

struct RetireEvent {
  Word pc = 0;
  Word raw = 0;
  std::optional<RegWrite> wrote_rd;  // absent for rd == x0 or no destination
  std::optional<MemWrite> mem_write;
  Word next_pc = 0;

  bool operator==(const RetireEvent&) const = default;
};

using RegFile = std::array<Word, kNumRegs>;

struct ArchState {
  Word pc = 0;
  RegFile regs{};
  MemorySet mem;
  bool halted = false;
  Word exit_code = 0;
  FaultKind fault = FaultKind::kNone;
  Word fault_pc = 0;

  explicit ArchState(MemorySet m, Word entry = 0) : pc(entry), mem(std::move(m)) {}
};

/// Execute the instruction at state.pc. On IllegalInstruction or MemoryFault
/// the state is marked halted with `fault` set, left otherwise unmodified,
/// and the exception is rethrown. Requires !state.halted.
RetireEvent step(ArchState& state);

struct GoldenRun {
  std::vector<RetireEvent> events;
  ArchState state;
  /// kNone when halted by ECALL/EBREAK; kStepLimitExceeded when max_steps
  /// ran out; otherwise the fault that stopped execution.
  FaultKind halt_reason = FaultKind::kNone;
};

GoldenRun run(ArchState state, std::size_t max_steps);

}  // namespace rvpipe
