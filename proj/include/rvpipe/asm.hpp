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

// RV32I instruction encoder. Written against the encoding tables directly,
// with no code shared with the decoder, so the two can check each other.

#pragma once

#include <cstdint>
#include <vector>

namespace rvpipe::enc {

using u32 = std::uint32_t;
using i32 = std::int32_t;

u32 r_type(u32 opcode, u32 funct3, u32 funct7, unsigned rd, unsigned rs1, unsigned rs2);
u32 i_type(u32 opcode, u32 funct3, unsigned rd, unsigned rs1, i32 imm);
u32 s_type(u32 opcode, u32 funct3, unsigned rs1, unsigned rs2, i32 imm);
u32 b_type(u32 funct3, unsigned rs1, unsigned rs2, i32 offset);
u32 u_type(u32 opcode, unsigned rd, u32 imm20);
u32 j_type(unsigned rd, i32 offset);

inline u32 add(unsigned rd, unsigned a, unsigned b) { return r_type(0x33, 0, 0x00, rd, a, b); }
inline u32 sub(unsigned rd, unsigned a, unsigned b) { return r_type(0x33, 0, 0x20, rd, a, b); }
inline u32 sll(unsigned rd, unsigned a, unsigned b) { return r_type(0x33, 1, 0x00, rd, a, b); }
inline u32 slt(unsigned rd, unsigned a, unsigned b) { return r_type(0x33, 2, 0x00, rd, a, b); }
inline u32 sltu(unsigned rd, unsigned a, unsigned b) { return r_type(0x33, 3, 0x00, rd, a, b); }
inline u32 xor_(unsigned rd, unsigned a, unsigned b) { return r_type(0x33, 4, 0x00, rd, a, b); }
inline u32 srl(unsigned rd, unsigned a, unsigned b) { return r_type(0x33, 5, 0x00, rd, a, b); }
inline u32 sra(unsigned rd, unsigned a, unsigned b) { return r_type(0x33, 5, 0x20, rd, a, b); }
inline u32 or_(unsigned rd, unsigned a, unsigned b) { return r_type(0x33, 6, 0x00, rd, a, b); }
inline u32 and_(unsigned rd, unsigned a, unsigned b) { return r_type(0x33, 7, 0x00, rd, a, b); }

inline u32 addi(unsigned rd, unsigned a, i32 imm) { return i_type(0x13, 0, rd, a, imm); }
inline u32 slti(unsigned rd, unsigned a, i32 imm) { return i_type(0x13, 2, rd, a, imm); }
inline u32 sltiu(unsigned rd, unsigned a, i32 imm) { return i_type(0x13, 3, rd, a, imm); }
inline u32 xori(unsigned rd, unsigned a, i32 imm) { return i_type(0x13, 4, rd, a, imm); }
inline u32 ori(unsigned rd, unsigned a, i32 imm) { return i_type(0x13, 6, rd, a, imm); }
inline u32 andi(unsigned rd, unsigned a, i32 imm) { return i_type(0x13, 7, rd, a, imm); }
inline u32 slli(unsigned rd, unsigned a, unsigned sh) { return r_type(0x13, 1, 0x00, rd, a, sh & 31); }
inline u32 srli(unsigned rd, unsigned a, unsigned sh) { return r_type(0x13, 5, 0x00, rd, a, sh & 31); }
inline u32 srai(unsigned rd, unsigned a, unsigned sh) { return r_type(0x13, 5, 0x20, rd, a, sh & 31); }

inline u32 lui(unsigned rd, u32 imm20) { return u_type(0x37, rd, imm20); }
inline u32 auipc(unsigned rd, u32 imm20) { return u_type(0x17, rd, imm20); }
inline u32 jal(unsigned rd, i32 offset) { return j_type(rd, offset); }
inline u32 jalr(unsigned rd, unsigned a, i32 imm) { return i_type(0x67, 0, rd, a, imm); }

inline u32 beq(unsigned a, unsigned b, i32 off) { return b_type(0, a, b, off); }
inline u32 bne(unsigned a, unsigned b, i32 off) { return b_type(1, a, b, off); }
inline u32 blt(unsigned a, unsigned b, i32 off) { return b_type(4, a, b, off); }
inline u32 bge(unsigned a, unsigned b, i32 off) { return b_type(5, a, b, off); }
inline u32 bltu(unsigned a, unsigned b, i32 off) { return b_type(6, a, b, off); }
inline u32 bgeu(unsigned a, unsigned b, i32 off) { return b_type(7, a, b, off); }

inline u32 lb(unsigned rd, unsigned a, i32 imm) { return i_type(0x03, 0, rd, a, imm); }
inline u32 lh(unsigned rd, unsigned a, i32 imm) { return i_type(0x03, 1, rd, a, imm); }
inline u32 lw(unsigned rd, unsigned a, i32 imm) { return i_type(0x03, 2, rd, a, imm); }
inline u32 lbu(unsigned rd, unsigned a, i32 imm) { return i_type(0x03, 4, rd, a, imm); }
inline u32 lhu(unsigned rd, unsigned a, i32 imm) { return i_type(0x03, 5, rd, a, imm); }
inline u32 sb(unsigned src, unsigned a, i32 imm) { return s_type(0x23, 0, a, src, imm); }
inline u32 sh(unsigned src, unsigned a, i32 imm) { return s_type(0x23, 1, a, src, imm); }
inline u32 sw(unsigned src, unsigned a, i32 imm) { return s_type(0x23, 2, a, src, imm); }

inline u32 fence() { return 0x0FF0000Fu; }
inline u32 ecall() { return 0x00000073u; }
inline u32 ebreak() { return 0x00100073u; }
inline u32 nop() { return addi(0, 0, 0); }

/// Load an arbitrary 32-bit constant (lui + addi, or a single addi).
std::vector<u32> li(unsigned rd, u32 value);

/// Flat little-endian image of a word sequence.
std::vector<std::uint8_t> to_bytes(const std::vector<u32>& words);

}  // namespace rvpipe::enc
