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

#include "rvpipe/generators.hpp"

#include <array>
#include <random>
#include <set>
#include <stdexcept>

#include "rvpipe/asm.hpp"

namespace rvpipe {

namespace {

using enc::u32;

// Destination pool for microbenchmarks: everything but x0 and a0.
constexpr std::array<unsigned, 29> kBenchRegs = {1,  2,  3,  4,  5,  6,  7,  8,  9,  11, 12, 13, 14, 15, 16,
                                                 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 30};

class RandomProgram {
 public:
  RandomProgram(std::uint64_t seed, double density) : rng_(seed), density_(density) { last_write_.fill(kNever); }

  std::vector<u32> build(std::uint32_t n) {
    while (words_.size() < n) emit_one();
    while (words_.size() < max_target_) emit(enc::nop(), 0);
    emit(coin(0.9) ? enc::ecall() : enc::ebreak(), 0);
    return words_;
  }

 private:
  static constexpr long kNever = -1'000'000;

  std::size_t here() const { return words_.size(); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  unsigned uniform(unsigned lo, unsigned hi) { return std::uniform_int_distribution<unsigned>(lo, hi)(rng_); }
  int simm12() { return std::uniform_int_distribution<int>(-2048, 2047)(rng_); }

  unsigned dest() { return coin(1.0 / 16) ? 0 : uniform(1, 31); }

  /// Register written at least kColdDistance instructions ago (x0 always is).
  unsigned cold() {
    std::vector<unsigned> pool;
    for (unsigned r = 0; r < 32; ++r) {
      if (static_cast<long>(here()) - last_write_[r] >= kColdDistance) pool.push_back(r);
    }
    return pool[uniform(0, static_cast<unsigned>(pool.size() - 1))];
  }

  /// Register written two or three instructions ago, if any.
  unsigned warm() {
    std::vector<unsigned> pool;
    for (unsigned r = 1; r < 32; ++r) {
      const long d = static_cast<long>(here()) - last_write_[r];
      if (d >= 2 && d < kColdDistance) pool.push_back(r);
    }
    if (pool.empty()) return cold();
    return pool[uniform(0, static_cast<unsigned>(pool.size() - 1))];
  }

  bool dependent() { return density_ > 0 && prev_rd_ != 0 && coin(density_); }

  unsigned source() {
    if (dependent()) return prev_rd_;
    if (density_ > 0 && coin(density_)) return warm();
    return cold();
  }

  /// `written_at` lets jumps pretend the link was written just before the
  /// jump target, so the cold-distance rule holds on the taken path.
  void emit(u32 word, unsigned rd, long written_at = -1) {
    words_.push_back(word);
    if (rd != 0) {
      last_write_[rd] = written_at >= 0 ? written_at : static_cast<long>(here() - 1);
      prev_rd_ = rd;
    }
  }

  /// Two-instruction sequences must not be entered in the middle.
  void align_pair() {
    while (targets_.count(here() + 1) != 0) emit(enc::nop(), 0);
  }

  unsigned forward_skip() { return uniform(0, 3); }

  void emit_one() {
    const unsigned pick = uniform(0, 99);
    if (pick < 25) return alu_reg();
    if (pick < 50) return alu_imm();
    if (pick < 58) return upper(pick < 54);
    if (pick < 70) return load();
    if (pick < 80) return store();
    if (pick < 90) return branch();
    if (pick < 94) return jal();
    if (pick < 98) return jalr();
    return emit(enc::fence(), 0);
  }

  void upper(bool is_lui) {
    const unsigned rd = dest();
    const u32 imm20 = uniform(0, 0xFFFFF);
    emit(is_lui ? enc::lui(rd, imm20) : enc::auipc(rd, imm20), rd);
  }

  void alu_reg() {
    static u32 (*const kOps[])(unsigned, unsigned, unsigned) = {enc::add, enc::sub, enc::sll,  enc::slt, enc::sltu,
                                                                 enc::xor_, enc::srl, enc::sra, enc::or_, enc::and_};
    const unsigned a = source();
    const unsigned b = source();
    const unsigned rd = dest();
    emit(kOps[uniform(0, 9)](rd, a, b), rd);
  }

  void alu_imm() {
    const unsigned a = source();
    const unsigned rd = dest();
    const unsigned op = uniform(0, 8);
    u32 w = 0;
    switch (op) {
      case 0: w = enc::addi(rd, a, simm12()); break;
      case 1: w = enc::slti(rd, a, simm12()); break;
      case 2: w = enc::sltiu(rd, a, simm12()); break;
      case 3: w = enc::xori(rd, a, simm12()); break;
      case 4: w = enc::ori(rd, a, simm12()); break;
      case 5: w = enc::andi(rd, a, simm12()); break;
      case 6: w = enc::slli(rd, a, uniform(0, 31)); break;
      case 7: w = enc::srli(rd, a, uniform(0, 31)); break;
      default: w = enc::srai(rd, a, uniform(0, 31)); break;
    }
    emit(w, rd);
  }

  /// Base register and offset for an access of `bytes` inside the scratch
  /// region. Either x0 plus a constant, or an ANDI-masked dependent value.
  std::pair<unsigned, int> address(unsigned bytes) {
    if (dependent()) {
      align_pair();
      const unsigned base = uniform(1, 31);
      emit(enc::andi(base, prev_rd_, static_cast<int>(kScratchBytes - 4)), base);
      return {base, static_cast<int>(uniform(0, 4 / bytes - 1) * bytes)};
    }
    return {0, static_cast<int>(uniform(0, kScratchBytes / bytes - 1) * bytes)};
  }

  void load() {
    static u32 (*const kOps[])(unsigned, unsigned, int) = {enc::lb, enc::lh, enc::lw, enc::lbu, enc::lhu};
    static constexpr unsigned kBytes[] = {1, 2, 4, 1, 2};
    const unsigned op = uniform(0, 4);
    const auto [base, off] = address(kBytes[op]);
    const unsigned rd = dest();
    emit(kOps[op](rd, base, off), rd);
  }

  void store() {
    static u32 (*const kOps[])(unsigned, unsigned, int) = {enc::sb, enc::sh, enc::sw};
    const unsigned op = uniform(0, 2);
    const unsigned data = source();
    const auto [base, off] = address(1u << op);
    emit(kOps[op](data, base, off), 0);
  }

  void add_target(std::size_t t) {
    targets_.insert(t);
    if (t > max_target_) max_target_ = t;
  }

  void branch() {
    static u32 (*const kOps[])(unsigned, unsigned, int) = {enc::beq, enc::bne,  enc::blt,
                                                             enc::bge, enc::bltu, enc::bgeu};
    const unsigned a = source();
    const unsigned b = source();
    const unsigned skip = forward_skip();
    add_target(here() + 1 + skip);
    emit(kOps[uniform(0, 5)](a, b, static_cast<int>(4 * (1 + skip))), 0);
  }

  void jal() {
    const unsigned skip = forward_skip();
    const std::size_t target = here() + 1 + skip;
    add_target(target);
    const unsigned rd = dest();
    emit(enc::jal(rd, static_cast<int>(4 * (1 + skip))), rd, static_cast<long>(target) - 1);
  }

  void jalr() {
    const unsigned skip = forward_skip();
    const int odd = coin(0.5) ? 1 : 0;  // bit 0 of the sum is dropped
    const unsigned rd = dest();
    if (dependent()) {
      // auipc t, 0 ; jalr rd, off(t)
      align_pair();
      const unsigned t = uniform(1, 31);
      const std::size_t auipc_at = here();
      const std::size_t target = auipc_at + 2 + skip;
      add_target(target);
      emit(enc::auipc(t, 0), t);
      emit(enc::jalr(rd, t, static_cast<int>(4 * (target - auipc_at)) + odd), rd, static_cast<long>(target) - 1);
      return;
    }
    const std::size_t target = here() + 1 + skip;
    if (4 * target + odd > 2047) return jal();
    add_target(target);
    emit(enc::jalr(rd, 0, static_cast<int>(4 * target) + odd), rd, static_cast<long>(target) - 1);
  }

  std::mt19937_64 rng_;
  double density_;
  std::vector<u32> words_;
  std::array<long, 32> last_write_{};
  unsigned prev_rd_ = 0;
  std::set<std::size_t> targets_;
  std::size_t max_target_ = 0;
};

}  // namespace

BenchKind parse_bench_kind(std::string_view name) {
  if (name == "straightline") return BenchKind::kStraightline;
  if (name == "load_use_pairs") return BenchKind::kLoadUsePairs;
  if (name == "taken_branch_loop") return BenchKind::kTakenBranchLoop;
  throw std::invalid_argument("unknown microbenchmark kind: " + std::string(name));
}

const char* bench_name(BenchKind kind) {
  switch (kind) {
    case BenchKind::kStraightline: return "straightline";
    case BenchKind::kLoadUsePairs: return "load_use_pairs";
    case BenchKind::kTakenBranchLoop: return "taken_branch_loop";
  }
  return "?";
}

std::vector<std::uint32_t> gen_microbench_words(BenchKind kind, std::uint32_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("microbenchmark size must be positive");
  std::mt19937_64 rng(seed);
  auto reg = [&] { return kBenchRegs[std::uniform_int_distribution<std::size_t>(0, kBenchRegs.size() - 1)(rng)]; };
  auto imm = [&] { return std::uniform_int_distribution<int>(-2048, 2047)(rng); };
  std::vector<u32> w;

  switch (kind) {
    case BenchKind::kStraightline:
      // Every source is x0, so no instruction depends on another.
      for (std::uint32_t i = 0; i < n; ++i) {
        switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
          case 0: w.push_back(enc::addi(reg(), 0, imm())); break;
          case 1: w.push_back(enc::xori(reg(), 0, imm())); break;
          case 2: w.push_back(enc::ori(reg(), 0, imm())); break;
          default: w.push_back(enc::add(reg(), 0, 0)); break;
        }
      }
      break;

    case BenchKind::kLoadUsePairs:
      for (std::uint32_t i = 0; i < n; ++i) {
        const unsigned loaded = reg();
        const int off = 4 * std::uniform_int_distribution<int>(0, kScratchBytes / 4 - 1)(rng);
        w.push_back(enc::lw(loaded, 0, off));
        w.push_back(enc::add(reg(), loaded, 0));
      }
      break;

    case BenchKind::kTakenBranchLoop: {
      // counter = n + 1; do { --counter; } while (counter != 0);
      const unsigned counter = reg();
      for (u32 word : enc::li(counter, n + 1)) w.push_back(word);
      w.push_back(enc::addi(counter, counter, -1));
      w.push_back(enc::bne(counter, 0, -4));
      break;
    }
  }
  w.push_back(enc::ecall());
  return w;
}

std::vector<std::uint8_t> gen_microbench(BenchKind kind, std::uint32_t n, std::uint64_t seed) {
  return enc::to_bytes(gen_microbench_words(kind, n, seed));
}

std::vector<std::uint32_t> gen_random_words(std::uint32_t n, std::uint64_t seed, double hazard_density) {
  if (n == 0) throw std::invalid_argument("program size must be positive");
  if (!(hazard_density >= 0.0 && hazard_density <= 1.0)) {
    throw std::invalid_argument("hazard density must be in [0, 1]");
  }
  return RandomProgram(seed, hazard_density).build(n);
}

std::vector<std::uint8_t> gen_random(std::uint32_t n, std::uint64_t seed, double hazard_density) {
  return enc::to_bytes(gen_random_words(n, seed, hazard_density));
}

}  // namespace rvpipe
