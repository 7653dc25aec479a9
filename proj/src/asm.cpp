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

#include "rvpipe/asm.hpp"

#include <stdexcept>

namespace rvpipe::enc {

namespace {

void check_range(i32 v, i32 lo, i32 hi, const char* what) {
  if (v < lo || v > hi) throw std::out_of_range(what);
}

u32 field(u32 v, unsigned width, unsigned pos) { return (v & ((1u << width) - 1u)) << pos; }

}  // namespace

u32 r_type(u32 opcode, u32 funct3, u32 funct7, unsigned rd, unsigned rs1, unsigned rs2) {
  return field(funct7, 7, 25) | field(rs2, 5, 20) | field(rs1, 5, 15) | field(funct3, 3, 12) | field(rd, 5, 7) |
         field(opcode, 7, 0);
}

u32 i_type(u32 opcode, u32 funct3, unsigned rd, unsigned rs1, i32 imm) {
  check_range(imm, -2048, 2047, "I-immediate out of range");
  return field(static_cast<u32>(imm), 12, 20) | field(rs1, 5, 15) | field(funct3, 3, 12) | field(rd, 5, 7) |
         field(opcode, 7, 0);
}

u32 s_type(u32 opcode, u32 funct3, unsigned rs1, unsigned rs2, i32 imm) {
  check_range(imm, -2048, 2047, "S-immediate out of range");
  const u32 u = static_cast<u32>(imm);
  return field(u >> 5, 7, 25) | field(rs2, 5, 20) | field(rs1, 5, 15) | field(funct3, 3, 12) | field(u, 5, 7) |
         field(opcode, 7, 0);
}

u32 b_type(u32 funct3, unsigned rs1, unsigned rs2, i32 offset) {
  check_range(offset, -4096, 4094, "branch offset out of range");
  if (offset & 1) throw std::invalid_argument("branch offset must be even");
  const u32 u = static_cast<u32>(offset);
  return field(u >> 12, 1, 31) | field(u >> 5, 6, 25) | field(rs2, 5, 20) | field(rs1, 5, 15) |
         field(funct3, 3, 12) | field(u >> 1, 4, 8) | field(u >> 11, 1, 7) | 0x63u;
}

u32 u_type(u32 opcode, unsigned rd, u32 imm20) {
  return field(imm20, 20, 12) | field(rd, 5, 7) | field(opcode, 7, 0);
}

u32 j_type(unsigned rd, i32 offset) {
  check_range(offset, -(1 << 20), (1 << 20) - 2, "jump offset out of range");
  if (offset & 1) throw std::invalid_argument("jump offset must be even");
  const u32 u = static_cast<u32>(offset);
  return field(u >> 20, 1, 31) | field(u >> 1, 10, 21) | field(u >> 11, 1, 20) | field(u >> 12, 8, 12) |
         field(rd, 5, 7) | 0x6Fu;
}

std::vector<u32> li(unsigned rd, u32 value) {
  const auto sv = static_cast<i32>(value);
  if (sv >= -2048 && sv <= 2047) return {addi(rd, 0, sv)};
  // addi sign-extends its immediate, so round the upper part.
  const u32 lo = value & 0xFFFu;
  const u32 hi = (value + (lo >= 0x800 ? 0x1000u : 0u)) >> 12;
  const i32 lo_s = lo >= 0x800 ? static_cast<i32>(lo) - 0x1000 : static_cast<i32>(lo);
  if (lo_s == 0) return {lui(rd, hi)};
  return {lui(rd, hi), addi(rd, rd, lo_s)};
}

std::vector<std::uint8_t> to_bytes(const std::vector<u32>& words) {
  std::vector<std::uint8_t> out;
  out.reserve(words.size() * 4);
  for (u32 w : words) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(w >> (8 * i)));
  }
  return out;
}

}  // namespace rvpipe::enc
