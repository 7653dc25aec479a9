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

#include "rvpipe/pipeline.hpp"

#include <stdexcept>

namespace rvpipe {

namespace {

constexpr RegIndex kA0 = 10;

bool is_bypass(ForwardSource s) {
  return s == ForwardSource::FROM_EXMEM || s == ForwardSource::FROM_MEMWB || s == ForwardSource::FROM_EXWB_3STAGE;
}

bool in_network(PipelineConfig config, ForwardSource s) {
  switch (config.stages) {
    case Stages::THREE: return s == ForwardSource::FROM_EXWB_3STAGE;
    case Stages::FOUR:
    case Stages::FIVE: return s == ForwardSource::FROM_EXMEM || s == ForwardSource::FROM_MEMWB;
  }
  return false;
}

bool produces(const StageSlot& p, RegIndex reg) {
  return p.valid() && p.decoded && !p.faulted() && p.instr.has_dest() && p.instr.rd == reg;
}

Word truncate(Word v, MemWidth w) {
  return w == MemWidth::WORD ? v : v & ((1u << (8 * static_cast<unsigned>(w))) - 1u);
}

/// Value carried by the producer selected with `source`.
Word bypass_value(std::span<const LabeledProducer> producers, ForwardSource source) {
  for (const auto& p : producers) {
    if (p.source != source) continue;
    if (!p.slot->result_ready) throw std::logic_error("bypass from a load whose data is not ready");
    return p.slot->result();
  }
  throw std::logic_error("forward source without a producer");
}

SimError make_error(const StageSlot& slot) {
  if (slot.fault == FaultKind::kIllegalInstruction) return IllegalInstruction(slot.instr.raw, slot.pc);
  return MemoryFault(slot.fault, slot.fault_addr, slot.pc);
}

}  // namespace

const char* stage_name(Stage s) {
  static const char* const kNames[] = {"IF", "ID", "EX", "MEM", "WB"};
  return kNames[s];
}

const char* source_name(ForwardSource s) {
  switch (s) {
    case ForwardSource::REGFILE: return "REGFILE";
    case ForwardSource::FROM_EXMEM: return "FROM_EXMEM";
    case ForwardSource::FROM_MEMWB: return "FROM_MEMWB";
    case ForwardSource::FROM_EXWB_3STAGE: return "FROM_EXWB_3STAGE";
    case ForwardSource::IMMEDIATE: return "IMMEDIATE";
    case ForwardSource::PC: return "PC";
  }
  return "?";
}

ForwardSel forward_select(PipelineConfig config, const StageSlot& consumer,
                          std::span<const LabeledProducer> producers) {
  const DecodedInstr& d = consumer.instr;
  ForwardSel sel;
  if (!d.uses_rs1 && (d.kind == InstrKind::AUIPC || d.kind == InstrKind::JAL)) sel.rs1 = ForwardSource::PC;
  if (!d.uses_rs2) {
    switch (d.kind) {
      case InstrKind::ALU_IMM:
      case InstrKind::LUI:
      case InstrKind::AUIPC:
      case InstrKind::JAL:
      case InstrKind::JALR:
      case InstrKind::LOAD:
        sel.rs2 = ForwardSource::IMMEDIATE;
        break;
      default:
        break;
    }
  }

  auto pick = [&](RegIndex reg) {
    for (const auto& p : producers) {
      if (!in_network(config, p.source)) throw std::logic_error("forward source not present in this pipeline");
      if (produces(*p.slot, reg)) return p.source;
    }
    return ForwardSource::REGFILE;
  };
  if (d.uses_rs1 && d.rs1 != 0) sel.rs1 = pick(d.rs1);
  if (d.uses_rs2 && d.rs2 != 0) sel.rs2 = pick(d.rs2);
  return sel;
}

bool detect_load_use(PipelineConfig config, const StageSlot& id, const StageSlot& ex) {
  if (!config.has_load_use_hazard()) return false;
  if (!id.valid() || !id.decoded || id.faulted()) return false;
  if (!ex.valid() || !ex.decoded || ex.faulted() || ex.instr.kind != InstrKind::LOAD) return false;
  const RegIndex rd = ex.instr.rd;
  if (rd == 0) return false;
  return (id.instr.uses_rs1 && id.instr.rs1 == rd) || (id.instr.uses_rs2 && id.instr.rs2 == rd);
}

Redirect resolve_redirect(const StageSlot& ex) {
  const DecodedInstr& d = ex.instr;
  switch (d.kind) {
    case InstrKind::BRANCH:
      if (branch_taken(d.branch_op, ex.operand_a, ex.operand_b)) return {true, ex.pc + d.imm};
      return {false, 0};
    case InstrKind::JAL: return {true, ex.pc + d.imm};
    case InstrKind::JALR: return {true, (ex.operand_a + d.imm) & ~1u};
    default: return {false, 0};
  }
}

Word compute_mem_addr_in_id(const StageSlot& id) { return id.operand_a + id.instr.imm; }

std::optional<RetireEvent> retire(const StageSlot& slot) {
  if (!slot.valid()) return std::nullopt;
  const DecodedInstr& d = slot.instr;
  RetireEvent ev;
  ev.pc = slot.pc;
  ev.raw = d.raw;
  if (d.has_dest()) ev.wrote_rd = RegWrite{d.rd, slot.result()};
  if (d.kind == InstrKind::STORE) ev.mem_write = MemWrite{slot.mem_addr, d.mem.width, truncate(slot.store_data, d.mem.width)};
  ev.next_pc = slot.redirect.taken ? slot.redirect.target : slot.pc + 4;
  return ev;
}

Pipeline::Pipeline(PipelineConfig config, MemorySet mem, Word entry, ForwardingMask mask)
    : mem_(std::move(mem)), iport_(mem_.imem, false), dport_(mem_.data(), true), mask_(mask) {
  state_.config = config;
  state_.fetch_pc = entry;
  state_.slots[kIF] = StageSlot::fetch(entry);
}

void Pipeline::kill_younger(Stage s) {
  for (int i = 0; i < s; ++i) state_.slots[i] = StageSlot{};
  state_.fetch_enabled = false;
}

void Pipeline::tag_fault(StageSlot& slot, FaultKind kind, Word addr, Stage where) {
  slot.fault = kind;
  slot.fault_addr = addr;
  kill_younger(where);
}

void Pipeline::collect_data(StageSlot& slot, Stage where) {
  const auto resp = dport_.collect();
  if (!resp) throw std::logic_error("memory stage without a data response");
  if (!resp->ok()) {
    tag_fault(slot, resp->fault, resp->addr, where);
    return;
  }
  if (slot.instr.kind == InstrKind::LOAD) {
    slot.load_data = resp->data;
    slot.result_ready = true;
  }
}

void Pipeline::execute(StageSlot& slot) {
  const DecodedInstr& d = slot.instr;
  switch (d.kind) {
    case InstrKind::ALU_REG: slot.alu_result = alu_eval(d.alu_op, slot.operand_a, slot.operand_b); break;
    case InstrKind::ALU_IMM: slot.alu_result = alu_eval(d.alu_op, slot.operand_a, d.imm); break;
    case InstrKind::LUI: slot.alu_result = d.imm; break;
    case InstrKind::AUIPC: slot.alu_result = slot.pc + d.imm; break;
    case InstrKind::JAL:
    case InstrKind::JALR: slot.alu_result = slot.pc + 4; break;
    case InstrKind::LOAD:
    case InstrKind::STORE:
      if (state_.config.stages != Stages::THREE) {
        slot.mem_addr = alu_eval(AluOp::ADD, slot.operand_a, d.imm);
        slot.store_data = slot.operand_b;
      }
      break;
    default: break;
  }
  if (d.kind != InstrKind::LOAD) slot.result_ready = true;
}

void Pipeline::issue_data(StageSlot& slot) {
  const DecodedInstr& d = slot.instr;
  if (d.kind == InstrKind::LOAD) {
    dport_.issue(MemRequest{slot.mem_addr, d.mem, false, 0});
  } else if (d.kind == InstrKind::STORE) {
    dport_.issue(MemRequest{slot.mem_addr, d.mem, true, slot.store_data});
  }
}

void Pipeline::read_operands(StageSlot& slot) {
  slot.operand_a = state_.regfile[slot.instr.rs1];
  slot.operand_b = state_.regfile[slot.instr.rs2];

  const StageSlot& retiring = state_.slots[last()];
  const ForwardSource leg =
      state_.config.stages == Stages::THREE ? ForwardSource::FROM_EXWB_3STAGE : ForwardSource::FROM_MEMWB;
  std::array<LabeledProducer, 1> producers{LabeledProducer{&retiring, leg}};
  std::span<const LabeledProducer> live = producers;
  if (mask_.is_disabled(leg)) live = live.first(0);

  const ForwardSel sel = forward_select(state_.config, slot, live);
  if (is_bypass(sel.rs1)) slot.operand_a = bypass_value(live, sel.rs1);
  if (is_bypass(sel.rs2)) slot.operand_b = bypass_value(live, sel.rs2);
  slot.bypassed = static_cast<std::uint8_t>(is_bypass(sel.rs1) + is_bypass(sel.rs2));
}

void Pipeline::forward_in_ex(StageSlot& slot) {
  std::array<LabeledProducer, 2> all{};
  std::size_t n = 0;
  auto add = [&](Stage s, ForwardSource src) {
    if (!mask_.is_disabled(src)) all[n++] = LabeledProducer{&state_.slots[s], src};
  };
  add(kMEM, ForwardSource::FROM_EXMEM);
  if (state_.config.stages == Stages::FIVE) add(kWB, ForwardSource::FROM_MEMWB);
  const std::span<const LabeledProducer> live(all.data(), n);

  const ForwardSel sel = forward_select(state_.config, slot, live);
  if (is_bypass(sel.rs1)) slot.operand_a = bypass_value(live, sel.rs1);
  if (is_bypass(sel.rs2)) slot.operand_b = bypass_value(live, sel.rs2);
  slot.bypassed = static_cast<std::uint8_t>(slot.bypassed + is_bypass(sel.rs1) + is_bypass(sel.rs2));
}

CycleReport Pipeline::step_cycle() {
  if (state_.halted) throw std::logic_error("step_cycle on a halted pipeline");
  auto& s = state_.slots;
  const PipelineConfig cfg = state_.config;
  const Stage fin = last();
  const bool three = cfg.stages == Stages::THREE;

  CycleReport rep;
  rep.cycle = ++state_.counters.cycles;
  rep.depth = cfg.depth();
  for (int i = 0; i < cfg.depth(); ++i) rep.stages[i] = Occupant{s[i].state, s[i].pc};

  // Oldest stage first, so that flushes and kills are decided before any
  // younger stage produces side effects.
  if (!three && s[kMEM].valid() && !s[kMEM].faulted() && s[kMEM].instr.is_mem()) collect_data(s[kMEM], kMEM);

  Redirect redirect{};
  StageSlot& ex = s[kEX];
  if (ex.valid() && !ex.faulted()) {
    if (three) {
      if (ex.instr.is_mem()) collect_data(ex, kEX);
    } else {
      forward_in_ex(ex);
    }
    if (!ex.faulted()) {
      execute(ex);
      if (!three) issue_data(ex);
      if (ex.instr.is_control()) {
        const Redirect r = resolve_redirect(ex);
        if (r.taken && (r.target & 3u) != 0) {
          tag_fault(ex, FaultKind::kMisaligned, r.target, kEX);
        } else {
          ex.redirect = r;
          redirect = r;
        }
      }
    }
  }

  // Retiring stage.
  StageSlot& out = s[fin];
  std::optional<RetireEvent> retired;
  if (out.valid()) {
    if (out.faulted()) {
      state_.halted = true;
      state_.fault = out.fault;
      state_.fault_pc = out.pc;
      state_.fetch_enabled = false;
      rep.fault = out.fault;
      const SimError cause = make_error(out);
      throw PipelineFault(cause, rep.cycle, rep);
    }
    retired = retire(out);
  }

  bool stall = false;
  if (!redirect.taken) {
    StageSlot& id = s[kID];
    if (id.valid()) {
      if (!id.decoded) {
        id.decoded = true;
        const auto resp = iport_.collect();
        if (!resp) throw std::logic_error("decode stage without a fetch response");
        if (!resp->ok()) {
          tag_fault(id, resp->fault, resp->addr, kID);
        } else {
          id.instr.raw = resp->data;
          try {
            id.instr = decode(resp->data);
            if (id.instr.is_halt()) kill_younger(kID);
          } catch (const IllegalInstruction&) {
            tag_fault(id, FaultKind::kIllegalInstruction, id.pc, kID);
          }
        }
      }
      if (!id.faulted()) {
        read_operands(id);
        stall = detect_load_use(cfg, id, s[kEX]);
        if (three && id.instr.is_mem()) {
          id.mem_addr = compute_mem_addr_in_id(id);
          id.store_data = id.operand_b;
          issue_data(id);
        }
      }
    }
    if (s[kIF].valid()) iport_.issue(MemRequest{s[kIF].pc, {MemWidth::WORD, false}, false, 0});
  }

  // Clock edge.
  if (retired) {
    if (retired->wrote_rd) state_.regfile[retired->wrote_rd->rd] = retired->wrote_rd->value;
    ++state_.counters.retired;
    state_.counters.forwarded_operands += out.bypassed;
    if (out.instr.is_halt()) {
      state_.halted = true;
      state_.exit_code = state_.regfile[kA0];
      state_.fetch_enabled = false;
    }
  }
  MemPort* ports[] = {&iport_, &dport_};
  clock_ports(ports);

  std::array<StageSlot, kMaxStages> next{};
  for (int i = kID; i < fin; ++i) next[i + 1] = s[i];
  if (redirect.taken) {
    next[kEX] = StageSlot::bubble();
    next[kID] = StageSlot::bubble();
    state_.fetch_pc = redirect.target;
    if (state_.fetch_enabled) next[kIF] = StageSlot::fetch(redirect.target);
    state_.counters.taken_branch_flushes += 2;
    rep.taken_redirect = true;
  } else if (stall) {
    next[kEX] = StageSlot::bubble();
    next[kID] = s[kID];
    next[kIF] = s[kIF];
    ++state_.counters.load_use_stalls;
    rep.load_use_stall = true;
  } else {
    next[kID] = s[kIF];
    if (s[kIF].valid()) state_.fetch_pc = s[kIF].pc + 4;
    if (state_.fetch_enabled) next[kIF] = StageSlot::fetch(state_.fetch_pc);
  }
  if (state_.halted) next = {};
  s = next;

  rep.retired = retired;
  return rep;
}

PipelineRun run_pipeline(PipelineConfig config, MemorySet mem, Word entry, std::uint64_t max_cycles,
                         bool keep_reports, ForwardingMask mask) {
  if (max_cycles == 0) throw std::invalid_argument("max_cycles must be positive");
  Pipeline p(config, std::move(mem), entry, mask);
  PipelineRun out;
  while (!p.halted() && p.counters().cycles < max_cycles) {
    try {
      CycleReport rep = p.step_cycle();
      if (rep.retired) out.events.push_back(*rep.retired);
      if (keep_reports) out.reports.push_back(std::move(rep));
    } catch (const PipelineFault& f) {
      if (keep_reports) out.reports.push_back(f.report());
      out.halt_reason = f.kind();
      out.fault_pc = f.pc();
      out.fault_cycle = f.cycle();
    }
  }
  const PipelineState& st = p.state();
  if (!p.halted()) out.halt_reason = FaultKind::kStepLimitExceeded;
  out.halted = p.halted();
  out.counters = st.counters;
  out.regfile = st.regfile;
  out.exit_code = st.exit_code;
  out.memory = p.memory();
  return out;
}

}  // namespace rvpipe
