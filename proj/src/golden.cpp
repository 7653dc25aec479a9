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

#include "rvpipe/golden.hpp"

#include <stdexcept>

namespace rvpipe {

namespace {

constexpr Word kA0 = 10;

Word truncate(Word v, MemWidth w) {
  return w == MemWidth::WORD ? v : v & ((1u << (8 * static_cast<unsigned>(w))) - 1u);
}

RetireEvent execute(ArchState& s) {
  const Word pc = s.pc;
  const Word raw = s.mem.imem.read_now(pc, {MemWidth::WORD, false});
  const DecodedInstr d = decode(raw);
  const Word a = s.regs[d.rs1];
  const Word b = s.regs[d.rs2];

  RetireEvent ev{pc, raw, std::nullopt, std::nullopt, pc + 4};
  std::optional<Word> result;

  auto jump_to = [&](Word target) {
    if (target & 3u) throw MemoryFault(FaultKind::kMisaligned, target);
    ev.next_pc = target;
  };

  switch (d.kind) {
    case InstrKind::ALU_REG: result = alu_eval(d.alu_op, a, b); break;
    case InstrKind::ALU_IMM: result = alu_eval(d.alu_op, a, d.imm); break;
    case InstrKind::LUI: result = d.imm; break;
    case InstrKind::AUIPC: result = pc + d.imm; break;
    case InstrKind::JAL:
      jump_to(pc + d.imm);
      result = pc + 4;
      break;
    case InstrKind::JALR:
      jump_to((a + d.imm) & ~1u);
      result = pc + 4;
      break;
    case InstrKind::BRANCH:
      if (branch_taken(d.branch_op, a, b)) jump_to(pc + d.imm);
      break;
    case InstrKind::LOAD:
      result = s.mem.data().read_now(a + d.imm, d.mem);
      break;
    case InstrKind::STORE: {
      const Word addr = a + d.imm;
      s.mem.data().write_now(addr, d.mem.width, b);
      ev.mem_write = MemWrite{addr, d.mem.width, truncate(b, d.mem.width)};
      break;
    }
    case InstrKind::FENCE: break;
    case InstrKind::ECALL:
    case InstrKind::EBREAK:
      s.halted = true;
      s.exit_code = s.regs[kA0];
      break;
  }

  if (result && d.has_dest()) {
    s.regs[d.rd] = *result;
    ev.wrote_rd = RegWrite{d.rd, *result};
  }
  s.pc = ev.next_pc;
  return ev;
}

}  // namespace

RetireEvent step(ArchState& state) {
  if (state.halted) throw std::logic_error("step on a halted state");
  try {
    return execute(state);
  } catch (const IllegalInstruction& e) {
    state.halted = true;
    state.fault = e.kind();
    state.fault_pc = state.pc;
    throw IllegalInstruction(e.raw(), state.pc);
  } catch (const MemoryFault& e) {
    state.halted = true;
    state.fault = e.kind();
    state.fault_pc = state.pc;
    throw MemoryFault(e.kind(), e.addr(), state.pc);
  }
}

GoldenRun run(ArchState state, std::size_t max_steps) {
  if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
  GoldenRun out{{}, std::move(state), FaultKind::kNone};
  while (!out.state.halted) {
    if (out.events.size() == max_steps) {
      out.halt_reason = FaultKind::kStepLimitExceeded;
      return out;
    }
    try {
      out.events.push_back(step(out.state));
    } catch (const SimError& e) {
      out.halt_reason = e.kind();
    }
  }
  return out;
}

}  // namespace rvpipe
