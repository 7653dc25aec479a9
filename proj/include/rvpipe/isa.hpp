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
 * @file isa.hpp
 * @brief RV32I decode, immediate generation, ALU and branch evaluation.
 *
 * These are the pieces shared by the golden model and every pipeline
 * configuration. Everything here is a pure function on value types.
 */

#pragma once

#include <cstdint>
#include <string>

#include "rvpipe/errors.hpp"

namespace rvpipe {

using Word = std::uint32_t;
using SWord = std::int32_t;
using RegIndex = std::uint8_t;

inline constexpr int kNumRegs = 32;

/// Opcode / funct constants, shared by the decoder, the encoder and the
/// simulators.
namespace opc {
inline constexpr Word kLoad = 0x03;
inline constexpr Word kMiscMem = 0x0F;
inline constexpr Word kOpImm = 0x13;
inline constexpr Word kAuipc = 0x17;
inline constexpr Word kStore = 0x23;
inline constexpr Word kOp = 0x33;
inline constexpr Word kLui = 0x37;
inline constexpr Word kBranch = 0x63;
inline constexpr Word kJalr = 0x67;
inline constexpr Word kJal = 0x6F;
inline constexpr Word kSystem = 0x73;

inline constexpr Word kFunct7Alt = 0x20;  // SUB / SRA / SRAI
inline constexpr Word kEcall = 0x00000073;
inline constexpr Word kEbreak = 0x00100073;
inline constexpr Word kNop = 0x00000013;
}  // namespace opc

enum class AluOp : std::uint8_t { ADD, SUB, SLL, SLT, SLTU, XOR, SRL, SRA, OR, AND };
enum class BranchOp : std::uint8_t { BEQ, BNE, BLT, BGE, BLTU, BGEU };
enum class InstrKind : std::uint8_t {
  ALU_REG,
  ALU_IMM,
  LUI,
  AUIPC,
  JAL,
  JALR,
  BRANCH,
  LOAD,
  STORE,
  FENCE,
  ECALL,
  EBREAK,
};
enum class ImmFormat : std::uint8_t { I, S, B, U, J };
enum class MemWidth : std::uint8_t { BYTE = 1, HALF = 2, WORD = 4 };

struct MemAccess {
  MemWidth width = MemWidth::WORD;
  bool is_signed = false;  // loads only

  unsigned bytes() const { return static_cast<unsigned>(width); }
  bool operator==(const MemAccess&) const = default;
};

struct DecodedInstr {
  Word raw = opc::kNop;
  InstrKind kind = InstrKind::ALU_IMM;
  RegIndex rd = 0;
  RegIndex rs1 = 0;
  RegIndex rs2 = 0;
  Word imm = 0;  // already sign-extended
  AluOp alu_op = AluOp::ADD;
  BranchOp branch_op = BranchOp::BEQ;  // valid iff kind == BRANCH
  MemAccess mem{};                     // valid iff LOAD / STORE
  bool uses_rs1 = false;
  bool uses_rs2 = false;
  bool writes_rd = false;

  bool is_control() const {
    return kind == InstrKind::BRANCH || kind == InstrKind::JAL || kind == InstrKind::JALR;
  }
  bool is_mem() const { return kind == InstrKind::LOAD || kind == InstrKind::STORE; }
  bool is_halt() const { return kind == InstrKind::ECALL || kind == InstrKind::EBREAK; }
  /// Writes a register other than x0.
  bool has_dest() const { return writes_rd && rd != 0; }

  bool operator==(const DecodedInstr&) const = default;
};

/// Throws IllegalInstruction for anything outside the RV32I base set.
DecodedInstr decode(Word raw);

Word extract_imm(Word raw, ImmFormat format);
Word alu_eval(AluOp op, Word a, Word b);
bool branch_taken(BranchOp op, Word a, Word b);

const char* kind_name(InstrKind kind);
/// Short assembly-like rendering, e.g. "addi x1, x0, 10".
std::string disassemble(const DecodedInstr& d);

}  // namespace rvpipe
