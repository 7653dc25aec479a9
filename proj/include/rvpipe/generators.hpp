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
 * @file generators.hpp
 * @brief Self-halting RV32I program generators.
 *
 * Microbenchmarks isolate one timing effect each:
 *  - straightline:      n independent ALU instructions
 *  - load_use_pairs:    n (load, dependent use) pairs
 *  - taken_branch_loop: a countdown loop whose back edge is taken n times
 *
 * Random programs are differential-testing fuel: every RV32I base
 * instruction class, forward-only control flow, and data accesses confined to
 * the first kScratchBytes of data memory. `hazard_density` is the
 * probability that an instruction reads the result of the most recent
 * register-writing instruction; otherwise it reads only registers whose last
 * write is at least kColdDistance instructions back.
 *
 * All programs end with ECALL (or EBREAK) and run from address 0.
 */

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rvpipe {

enum class BenchKind : std::uint8_t { kStraightline, kLoadUsePairs, kTakenBranchLoop };

inline constexpr std::uint32_t kScratchBytes = 2048;
inline constexpr int kColdDistance = 4;

BenchKind parse_bench_kind(std::string_view name);
const char* bench_name(BenchKind kind);

std::vector<std::uint32_t> gen_microbench_words(BenchKind kind, std::uint32_t n, std::uint64_t seed);
std::vector<std::uint8_t> gen_microbench(BenchKind kind, std::uint32_t n, std::uint64_t seed);

std::vector<std::uint32_t> gen_random_words(std::uint32_t n, std::uint64_t seed, double hazard_density);
std::vector<std::uint8_t> gen_random(std::uint32_t n, std::uint64_t seed, double hazard_density);

}  // namespace rvpipe
