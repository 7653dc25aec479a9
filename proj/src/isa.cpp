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

#include "rvpipe/isa.hpp"

#include <cstdio>

#include "rvpipe/errors.hpp"

namespace rvpipe {

namespace {

constexpr Word bits(Word v, unsigned hi, unsigned lo) { return (v >> lo) & ((1u << (hi - lo + 1)) - 1u); }

constexpr Word sign_extend(Word v, unsigned width) {
  const Word m = 1u << (width - 1);
  return (v ^ m) - m;
}

AluOp alu_from_funct3(Word funct3, bool alt) {
  switch (funct3) {
    case 0: return alt ? AluOp::SUB : AluOp::ADD;
    case 1: return AluOp::SLL;
    case 2: return AluOp::SLT;
    case 3: return AluOp::SLTU;
    case 4: return AluOp::XOR;
    case 5: return alt ? AluOp::SRA : AluOp::SRL;
    case 6: return AluOp::OR;
    default: return AluOp::AND;
  }
}

}  // namespace

Word extract_imm(Word raw, ImmFormat format) {
  switch (format) {
    case ImmFormat::I:
      return sign_extend(bits(raw, 31, 20), 12);
    case ImmFormat::S:
      return sign_extend((bits(raw, 31, 25) << 5) | bits(raw, 11, 7), 12);
    case ImmFormat::B:
      return sign_extend((bits(raw, 31, 31) << 12) | (bits(raw, 7, 7) << 11) | (bits(raw, 30, 25) << 5) |
                             (bits(raw, 11, 8) << 1),
                         13);
    case ImmFormat::U:
      return raw & 0xFFFFF000u;
    case ImmFormat::J:
      return sign_extend((bits(raw, 31, 31) << 20) | (bits(raw, 19, 12) << 12) | (bits(raw, 20, 20) << 11) |
                             (bits(raw, 30, 21) << 1),
                         21);
  }
  return 0;
}

Word alu_eval(AluOp op, Word a, Word b) {
  const unsigned shamt = b & 0x1Fu;
  switch (op) {
    case AluOp::ADD: return a + b;
    case AluOp::SUB: return a - b;
    case AluOp::SLL: return a << shamt;
    case AluOp::SLT: return static_cast<SWord>(a) < static_cast<SWord>(b) ? 1u : 0u;
    case AluOp::SLTU: return a < b ? 1u : 0u;
    case AluOp::XOR: return a ^ b;
    case AluOp::SRL: return a >> shamt;
    case AluOp::SRA: return static_cast<Word>(static_cast<SWord>(a) >> shamt);
    case AluOp::OR: return a | b;
    case AluOp::AND: return a & b;
  }
  return 0;
}

bool branch_taken(BranchOp op, Word a, Word b) {
  switch (op) {
    case BranchOp::BEQ: return a == b;
    case BranchOp::BNE: return a != b;
    case BranchOp::BLT: return static_cast<SWord>(a) < static_cast<SWord>(b);
    case BranchOp::BGE: return static_cast<SWord>(a) >= static_cast<SWord>(b);
    case BranchOp::BLTU: return a < b;
    case BranchOp::BGEU: return a >= b;
  }
  return false;
}

DecodedInstr decode(Word raw) {
  DecodedInstr d;
  d.raw = raw;
  const Word opcode = bits(raw, 6, 0);
  const Word funct3 = bits(raw, 14, 12);
  const Word funct7 = bits(raw, 31, 25);
  const auto rd = static_cast<RegIndex>(bits(raw, 11, 7));
  const auto rs1 = static_cast<RegIndex>(bits(raw, 19, 15));
  const auto rs2 = static_cast<RegIndex>(bits(raw, 24, 20));

  auto illegal = [raw]() -> DecodedInstr { throw IllegalInstruction(raw); };

  switch (opcode) {
    case opc::kLui:
    case opc::kAuipc:
      d.kind = opcode == opc::kLui ? InstrKind::LUI : InstrKind::AUIPC;
      d.rd = rd;
      d.imm = extract_imm(raw, ImmFormat::U);
      d.writes_rd = true;
      return d;

    case opc::kJal:
      d.kind = InstrKind::JAL;
      d.rd = rd;
      d.imm = extract_imm(raw, ImmFormat::J);
      d.writes_rd = true;
      return d;

    case opc::kJalr:
      if (funct3 != 0) return illegal();
      d.kind = InstrKind::JALR;
      d.rd = rd;
      d.rs1 = rs1;
      d.imm = extract_imm(raw, ImmFormat::I);
      d.uses_rs1 = d.writes_rd = true;
      return d;

    case opc::kBranch:
      switch (funct3) {
        case 0: d.branch_op = BranchOp::BEQ; break;
        case 1: d.branch_op = BranchOp::BNE; break;
        case 4: d.branch_op = BranchOp::BLT; break;
        case 5: d.branch_op = BranchOp::BGE; break;
        case 6: d.branch_op = BranchOp::BLTU; break;
        case 7: d.branch_op = BranchOp::BGEU; break;
        default: return illegal();
      }
      d.kind = InstrKind::BRANCH;
      d.rs1 = rs1;
      d.rs2 = rs2;
      d.imm = extract_imm(raw, ImmFormat::B);
      d.uses_rs1 = d.uses_rs2 = true;
      return d;

    case opc::kLoad:
      switch (funct3) {
        case 0: d.mem = {MemWidth::BYTE, true}; break;
        case 1: d.mem = {MemWidth::HALF, true}; break;
        case 2: d.mem = {MemWidth::WORD, true}; break;
        case 4: d.mem = {MemWidth::BYTE, false}; break;
        case 5: d.mem = {MemWidth::HALF, false}; break;
        default: return illegal();
      }
      d.kind = InstrKind::LOAD;
      d.rd = rd;
      d.rs1 = rs1;
      d.imm = extract_imm(raw, ImmFormat::I);
      d.uses_rs1 = d.writes_rd = true;
      return d;

    case opc::kStore:
      switch (funct3) {
        case 0: d.mem = {MemWidth::BYTE, false}; break;
        case 1: d.mem = {MemWidth::HALF, false}; break;
        case 2: d.mem = {MemWidth::WORD, false}; break;
        default: return illegal();
      }
      d.kind = InstrKind::STORE;
      d.rs1 = rs1;
      d.rs2 = rs2;
      d.imm = extract_imm(raw, ImmFormat::S);
      d.uses_rs1 = d.uses_rs2 = true;
      return d;

    case opc::kOpImm:
      if (funct3 == 1 && funct7 != 0) return illegal();
      if (funct3 == 5 && funct7 != 0 && funct7 != opc::kFunct7Alt) return illegal();
      d.kind = InstrKind::ALU_IMM;
      d.alu_op = alu_from_funct3(funct3, funct3 == 5 && funct7 == opc::kFunct7Alt);
      d.rd = rd;
      d.rs1 = rs1;
      d.imm = extract_imm(raw, ImmFormat::I);
      // shift immediates carry only shamt
      if (funct3 == 1 || funct3 == 5) d.imm &= 0x1Fu;
      d.uses_rs1 = d.writes_rd = true;
      return d;

    case opc::kOp:
      if (funct7 == opc::kFunct7Alt) {
        if (funct3 != 0 && funct3 != 5) return illegal();
      } else if (funct7 != 0) {
        return illegal();
      }
      d.kind = InstrKind::ALU_REG;
      d.alu_op = alu_from_funct3(funct3, funct7 == opc::kFunct7Alt);
      d.rd = rd;
      d.rs1 = rs1;
      d.rs2 = rs2;
      d.uses_rs1 = d.uses_rs2 = d.writes_rd = true;
      return d;

    case opc::kMiscMem:
      if (funct3 != 0) return illegal();  // FENCE.I is Zifencei, not base
      d.kind = InstrKind::FENCE;
      return d;

    case opc::kSystem:
      if (raw == opc::kEcall) {
        d.kind = InstrKind::ECALL;
        return d;
      }
      if (raw == opc::kEbreak) {
        d.kind = InstrKind::EBREAK;
        return d;
      }
      return illegal();

    default:
      return illegal();
  }
}

const char* kind_name(InstrKind kind) {
  switch (kind) {
    case InstrKind::ALU_REG: return "ALU_REG";
    case InstrKind::ALU_IMM: return "ALU_IMM";
    case InstrKind::LUI: return "LUI";
    case InstrKind::AUIPC: return "AUIPC";
    case InstrKind::JAL: return "JAL";
    case InstrKind::JALR: return "JALR";
    case InstrKind::BRANCH: return "BRANCH";
    case InstrKind::LOAD: return "LOAD";
    case InstrKind::STORE: return "STORE";
    case InstrKind::FENCE: return "FENCE";
    case InstrKind::ECALL: return "ECALL";
    case InstrKind::EBREAK: return "EBREAK";
  }
  return "?";
}

std::string disassemble(const DecodedInstr& d) {
  static const char* const kAlu[] = {"add", "sub", "sll", "slt", "sltu", "xor", "srl", "sra", "or", "and"};
  static const char* const kBr[] = {"beq", "bne", "blt", "bge", "bltu", "bgeu"};
  const auto imm = static_cast<SWord>(d.imm);
  const auto op = static_cast<unsigned>(d.alu_op);
  char buf[64];
  switch (d.kind) {
    case InstrKind::ALU_REG:
      std::snprintf(buf, sizeof buf, "%s x%u, x%u, x%u", kAlu[op], d.rd, d.rs1, d.rs2);
      break;
    case InstrKind::ALU_IMM: {
      const std::string name = d.alu_op == AluOp::SLTU ? "sltiu" : std::string(kAlu[op]) + "i";
      std::snprintf(buf, sizeof buf, "%s x%u, x%u, %d", name.c_str(), d.rd, d.rs1, imm);
      break;
    }
    case InstrKind::LUI:
    case InstrKind::AUIPC:
      std::snprintf(buf, sizeof buf, "%s x%u, 0x%x", d.kind == InstrKind::LUI ? "lui" : "auipc", d.rd,
                    d.imm >> 12);
      break;
    case InstrKind::JAL:
      std::snprintf(buf, sizeof buf, "jal x%u, %d", d.rd, imm);
      break;
    case InstrKind::JALR:
      std::snprintf(buf, sizeof buf, "jalr x%u, %d(x%u)", d.rd, imm, d.rs1);
      break;
    case InstrKind::BRANCH:
      std::snprintf(buf, sizeof buf, "%s x%u, x%u, %d", kBr[static_cast<unsigned>(d.branch_op)], d.rs1, d.rs2,
                    imm);
      break;
    case InstrKind::LOAD: {
      static const char* const kLd[] = {"", "lb", "lh", "", "lw"};
      std::snprintf(buf, sizeof buf, "%s%s x%u, %d(x%u)", kLd[d.mem.bytes()],
                    d.mem.is_signed || d.mem.width == MemWidth::WORD ? "" : "u", d.rd, imm, d.rs1);
      break;
    }
    case InstrKind::STORE: {
      static const char* const kSt[] = {"", "sb", "sh", "", "sw"};
      std::snprintf(buf, sizeof buf, "%s x%u, %d(x%u)", kSt[d.mem.bytes()], d.rs2, imm, d.rs1);
      break;
    }
    case InstrKind::FENCE: return "fence";
    case InstrKind::ECALL: return "ecall";
    case InstrKind::EBREAK: return "ebreak";
  }
  return buf;
}

}  // namespace rvpipe
