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

#include <cstdint>
#include <random>

#include "doctest.h"
#include "rvpipe/asm.hpp"
#include "rvpipe/isa.hpp"

using namespace rvpipe;

namespace {

// Reference ALU on 64-bit integers, independent of the 32-bit implementation.
Word alu_oracle(AluOp op, Word a, Word b) {
  const std::int64_t sa = static_cast<std::int32_t>(a);
  const std::int64_t sb = static_cast<std::int32_t>(b);
  const std::uint64_t ua = a;
  const std::uint64_t ub = b;
  const unsigned sh = static_cast<unsigned>(ub % 32);
  switch (op) {
    case AluOp::ADD: return static_cast<Word>((ua + ub) % (1ull << 32));
    case AluOp::SUB: return static_cast<Word>((ua + (1ull << 32) - ub) % (1ull << 32));
    case AluOp::SLL: return static_cast<Word>((ua * (1ull << sh)) % (1ull << 32));
    case AluOp::SLT: return sa < sb ? 1 : 0;
    case AluOp::SLTU: return ua < ub ? 1 : 0;
    case AluOp::XOR: return a ^ b;
    case AluOp::SRL: return static_cast<Word>(ua / (1ull << sh));
    case AluOp::SRA: {
      // floor division of the signed value
      std::int64_t q = sa / static_cast<std::int64_t>(1ll << sh);
      if (sa < 0 && sa % static_cast<std::int64_t>(1ll << sh) != 0) --q;
      return static_cast<Word>(static_cast<std::uint64_t>(q) & 0xFFFFFFFFull);
    }
    case AluOp::OR: return a | b;
    case AluOp::AND: return a & b;
  }
  return 0;
}

// Arithmetic right shift built bit by bit.
Word sra_bits(Word a, unsigned sh) {
  Word out = 0;
  const Word sign = (a >> 31) & 1u;
  for (unsigned i = 0; i < 32; ++i) {
    const unsigned src = i + sh;
    const Word bit = src < 32 ? (a >> src) & 1u : sign;
    out |= bit << i;
  }
  return out;
}

}  // namespace

TEST_CASE("decode: canonical nop") {
  const DecodedInstr d = decode(0x00000013);
  CHECK(d.kind == InstrKind::ALU_IMM);
  CHECK(d.alu_op == AluOp::ADD);
  CHECK(d.rd == 0);
  CHECK(d.rs1 == 0);
  CHECK(d.imm == 0);
  CHECK_FALSE(d.has_dest());
}

TEST_CASE("decode: addi x1, x0, 10") {
  const DecodedInstr d = decode(0x00A00093);
  CHECK(d.kind == InstrKind::ALU_IMM);
  CHECK(d.rd == 1);
  CHECK(d.rs1 == 0);
  CHECK(d.imm == 10);
  CHECK(d.uses_rs1);
  CHECK_FALSE(d.uses_rs2);
  CHECK(disassemble(d) == "addi x1, x0, 10");
}

TEST_CASE("disassemble: mnemonics") {
  CHECK(disassemble(decode(enc::sltiu(3, 4, -1))) == "sltiu x3, x4, -1");
  CHECK(disassemble(decode(enc::srai(3, 4, 7))) == "srai x3, x4, 7");
  CHECK(disassemble(decode(enc::lhu(3, 4, 8))) == "lhu x3, 8(x4)");
  CHECK(disassemble(decode(enc::lw(3, 4, -8))) == "lw x3, -8(x4)");
  CHECK(disassemble(decode(enc::sb(5, 6, 1))) == "sb x5, 1(x6)");
  CHECK(disassemble(decode(enc::bltu(1, 2, -16))) == "bltu x1, x2, -16");
  CHECK(disassemble(decode(enc::jalr(0, 1, 4))) == "jalr x0, 4(x1)");
  CHECK(disassemble(decode(enc::lui(7, 0xABCDE))) == "lui x7, 0xabcde");
}

TEST_CASE("decode: all-ones word is illegal") {
  CHECK_THROWS_AS(decode(0xFFFFFFFF), IllegalInstruction);
  CHECK_THROWS_AS(decode(0x00000000), IllegalInstruction);
  try {
    decode(0xFFFFFFFF);
  } catch (const IllegalInstruction& e) {
    CHECK(e.raw() == 0xFFFFFFFF);
    CHECK(e.kind() == FaultKind::kIllegalInstruction);
  }
}

TEST_CASE("decode: beq x0, x0, -4") {
  const Word raw = enc::beq(0, 0, -4);
  CHECK(raw == 0xFE000EE3);
  const DecodedInstr d = decode(raw);
  CHECK(d.kind == InstrKind::BRANCH);
  CHECK(d.branch_op == BranchOp::BEQ);
  CHECK(d.imm == 0xFFFFFFFC);
  CHECK(extract_imm(raw, ImmFormat::B) == 0xFFFFFFFC);
}

TEST_CASE("decode: immediates of every format against hand-encoded words") {
  CHECK(extract_imm(0x80000037, ImmFormat::U) == 0x80000000);         // lui x0, 0x80000
  CHECK(extract_imm(0x0080006F, ImmFormat::J) == 8);                  // jal x0, 8
  CHECK(extract_imm(0x800000EF, ImmFormat::J) == 0xFFF00000);         // jal x1, -1 MiB
  CHECK(extract_imm(0xFE112E23, ImmFormat::S) == 0xFFFFFFFC);         // sw x1, -4(x2)
  CHECK(extract_imm(0x7FF00013, ImmFormat::I) == 2047);
  CHECK(extract_imm(0x80000013, ImmFormat::I) == 0xFFFFF800);
  CHECK(extract_imm(0x7E000FE3, ImmFormat::B) == 4094);
}

TEST_CASE("decode: strictness") {
  CHECK_THROWS_AS(decode(0x0000100F), IllegalInstruction);                // fence.i
  CHECK_THROWS_AS(decode(0x00200073), IllegalInstruction);                // uret-like system word
  CHECK_THROWS_AS(decode(0x40001013 | (1u << 7)), IllegalInstruction);    // slli with funct7 0x20
  CHECK_THROWS_AS(decode(enc::r_type(0x33, 0, 0x01, 1, 2, 3)), IllegalInstruction);  // mul
  CHECK_THROWS_AS(decode(enc::i_type(0x03, 3, 1, 2, 0)), IllegalInstruction);        // ld
  CHECK_THROWS_AS(decode(enc::i_type(0x67, 1, 1, 2, 0)), IllegalInstruction);        // jalr funct3 != 0
  CHECK_THROWS_AS(decode(enc::b_type(2, 1, 2, 8)), IllegalInstruction);
  CHECK_THROWS_AS(decode(enc::s_type(0x23, 3, 1, 2, 0)), IllegalInstruction);
  CHECK(decode(enc::fence()).kind == InstrKind::FENCE);
  CHECK(decode(enc::ecall()).kind == InstrKind::ECALL);
  CHECK(decode(enc::ebreak()).kind == InstrKind::EBREAK);
}

TEST_CASE("decode: register fields survive the encoder round trip") {
  std::mt19937 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const unsigned rd = rng() % 32, a = rng() % 32, b = rng() % 32;
    const int imm12 = static_cast<int>(rng() % 4096) - 2048;

    DecodedInstr r = decode(enc::sub(rd, a, b));
    CHECK(r.kind == InstrKind::ALU_REG);
    CHECK(r.alu_op == AluOp::SUB);
    CHECK((r.rd == rd && r.rs1 == a && r.rs2 == b));

    DecodedInstr li = decode(enc::xori(rd, a, imm12));
    CHECK(li.alu_op == AluOp::XOR);
    CHECK(static_cast<SWord>(li.imm) == imm12);

    DecodedInstr ld = decode(enc::lh(rd, a, imm12));
    CHECK(ld.kind == InstrKind::LOAD);
    CHECK(ld.mem == MemAccess{MemWidth::HALF, true});
    CHECK(static_cast<SWord>(ld.imm) == imm12);

    DecodedInstr st = decode(enc::sb(b, a, imm12));
    CHECK(st.kind == InstrKind::STORE);
    CHECK((st.rs1 == a && st.rs2 == b));
    CHECK_FALSE(st.writes_rd);
    CHECK(static_cast<SWord>(st.imm) == imm12);

    const int boff = (static_cast<int>(rng() % 4096) - 2048) * 2;
    DecodedInstr br = decode(enc::bgeu(a, b, boff));
    CHECK(br.branch_op == BranchOp::BGEU);
    CHECK(static_cast<SWord>(br.imm) == boff);

    const int joff = (static_cast<int>(rng() % (1 << 20)) - (1 << 19)) * 2;
    DecodedInstr j = decode(enc::jal(rd, joff));
    CHECK(j.kind == InstrKind::JAL);
    CHECK(static_cast<SWord>(j.imm) == joff);

    const Word up = rng() % (1u << 20);
    CHECK(decode(enc::lui(rd, up)).imm == up << 12);
    CHECK(decode(enc::auipc(rd, up)).imm == up << 12);

    const unsigned sh = rng() % 32;
    DecodedInstr s = decode(enc::srai(rd, a, sh));
    CHECK(s.alu_op == AluOp::SRA);
    CHECK(s.imm == sh);
  }
}

TEST_CASE("decode: operand usage flags by kind") {
  CHECK(decode(enc::lui(5, 1)).uses_rs1 == false);
  CHECK(decode(enc::auipc(5, 1)).uses_rs1 == false);
  CHECK(decode(enc::jal(1, 8)).uses_rs1 == false);
  CHECK(decode(enc::jalr(1, 2, 0)).uses_rs1);
  CHECK(decode(enc::sw(3, 2, 0)).uses_rs2);
  CHECK(decode(enc::beq(3, 2, 8)).uses_rs2);
  CHECK_FALSE(decode(enc::beq(3, 2, 8)).writes_rd);
  CHECK_FALSE(decode(enc::ecall()).uses_rs1);
  CHECK_FALSE(decode(enc::fence()).writes_rd);
}

TEST_CASE("alu: matches the 64-bit oracle on random and edge operands") {
  std::mt19937 rng(1234);
  const Word edges[] = {0, 1, 2, 31, 32, 0x7FFFFFFF, 0x80000000, 0x80000001, 0xFFFFFFFE, 0xFFFFFFFF};
  const AluOp ops[] = {AluOp::ADD, AluOp::SUB, AluOp::SLL, AluOp::SLT, AluOp::SLTU,
                       AluOp::XOR, AluOp::SRL, AluOp::SRA, AluOp::OR,  AluOp::AND};
  for (AluOp op : ops) {
    for (Word a : edges)
      for (Word b : edges) REQUIRE(alu_eval(op, a, b) == alu_oracle(op, a, b));
    for (int i = 0; i < 100000; ++i) {
      const Word a = rng(), b = rng();
      if (alu_eval(op, a, b) != alu_oracle(op, a, b)) {
        FAIL("op " << static_cast<int>(op) << " a=" << a << " b=" << b);
      }
    }
  }
}

TEST_CASE("alu: arithmetic shift matches the bit-level construction") {
  std::mt19937 rng(99);
  for (int i = 0; i < 20000; ++i) {
    const Word a = rng();
    const unsigned sh = rng() % 32;
    REQUIRE(alu_eval(AluOp::SRA, a, sh) == sra_bits(a, sh));
    // only the low five bits of the shift amount count
    REQUIRE(alu_eval(AluOp::SRA, a, sh | 0xFFFFFFE0u) == sra_bits(a, sh));
  }
}

TEST_CASE("branches: complementary pairs and orderings") {
  std::mt19937 rng(5);
  for (int i = 0; i < 20000; ++i) {
    Word a = rng(), b = rng();
    if (i % 4 == 0) b = a;
    CHECK(branch_taken(BranchOp::BEQ, a, b) != branch_taken(BranchOp::BNE, a, b));
    CHECK(branch_taken(BranchOp::BLT, a, b) != branch_taken(BranchOp::BGE, a, b));
    CHECK(branch_taken(BranchOp::BLTU, a, b) != branch_taken(BranchOp::BGEU, a, b));
    CHECK(branch_taken(BranchOp::BLT, a, b) ==
          (static_cast<std::int64_t>(static_cast<SWord>(a)) < static_cast<SWord>(b)));
    CHECK(branch_taken(BranchOp::BLTU, a, b) == (static_cast<std::uint64_t>(a) < b));
  }
  CHECK(branch_taken(BranchOp::BLT, 0x80000000, 0));
  CHECK_FALSE(branch_taken(BranchOp::BLTU, 0x80000000, 0));
}
