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

#include <cstdio>
#include <fstream>

#include "directed.hpp"
#include "doctest.h"
#include "json.hpp"
#include "rvpipe/asm.hpp"
#include "rvpipe/generators.hpp"
#include "rvpipe/harness.hpp"

using namespace rvpipe;
namespace enc = rvpipe::enc;
using testing::config_for;
using testing::kAllStages;

TEST_CASE("run_program: straightline n=1000") {
  RunConfig cfg;
  cfg.image = gen_microbench(BenchKind::kStraightline, 1000, 1);
  cfg.stages = Stages::THREE;
  RunStats s = run_program(cfg).stats;
  CHECK(s.retired == 1001);
  CHECK(s.cycles == 1003);
  CHECK(s.cpi_rational() == "1003/1001");
  cfg.stages = Stages::FIVE;
  s = run_program(cfg).stats;
  CHECK(s.cycles == 1005);
  CHECK(s.halt_reason == FaultKind::kNone);
}

TEST_CASE("run_program: unreadable image is an I/O error") {
  RunConfig cfg;
  cfg.image_path = "/nonexistent/dir/image.bin";
  CHECK_THROWS_AS(run_program(cfg), std::runtime_error);
}

TEST_CASE("run_program: image file at an offset with an entry point") {
  const std::vector<Word> prog = {enc::addi(10, 0, 33), enc::ecall()};
  const std::string path = "rvpipe_test_image.bin";
  {
    const auto bytes = enc::to_bytes(prog);
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  RunConfig cfg;
  cfg.image_path = path;
  cfg.load_offset = 0x200;
  cfg.entry = 0x200;
  cfg.stages = Stages::FOUR;
  const ProgramRun r = run_program(cfg);
  CHECK(r.stats.exit_code == 33);
  CHECK(r.pipeline.events.front().pc == 0x200);
  std::remove(path.c_str());
}

TEST_CASE("build_memory: split by default, unified on request") {
  RunConfig cfg;
  MemorySet split = build_memory(cfg, {1, 2, 3, 4});
  CHECK_FALSE(split.unified());
  CHECK(split.imem.read_now(0, {MemWidth::WORD, false}) == 0x04030201);
  CHECK(split.data().read_now(0, {MemWidth::WORD, false}) == 0);
  cfg.unified = true;
  MemorySet uni = build_memory(cfg, {1, 2, 3, 4});
  CHECK(uni.unified());
  CHECK(uni.data().read_now(0, {MemWidth::WORD, false}) == 0x04030201);

  cfg.imem_size = 16;
  CHECK_THROWS_AS(build_memory(cfg, std::vector<std::uint8_t>(32, 0)), MemoryFault);
}

TEST_CASE("unified memory: a program can read its own code") {
  const std::vector<Word> prog = {enc::lw(10, 0, 4), enc::ecall()};
  for (Stages s : kAllStages) {
    RunConfig cfg = config_for(prog, s);
    cfg.unified = true;
    const CosimVerdict v = cosim(cfg);
    CHECK(v.pass);
    CHECK(v.stats.exit_code == enc::ecall());
  }
}

TEST_CASE("stats json and csv") {
  RunConfig cfg = config_for({enc::addi(10, 0, 7), enc::ecall()}, Stages::THREE);
  const RunStats s = run_program(cfg).stats;
  const auto j = nlohmann::json::parse(s.to_json());
  CHECK(j["cycles"] == 4);
  CHECK(j["retired"] == 2);
  CHECK(j["cpi"] == doctest::Approx(2.0));
  CHECK(j["cpi_rational"] == "4/2");
  CHECK(j["exit_code"] == 7);
  CHECK(j["halt_reason"] == "halted");
  CHECK(s.to_csv() == "4,2,2,4/2,0,0,7,halted");
  CHECK(RunStats::csv_header().find("cycles,retired") == 0);

  RunStats empty;
  CHECK_FALSE(empty.cpi().has_value());
  CHECK(nlohmann::json::parse(empty.to_json())["cpi"].is_null());
}

TEST_CASE("trace: line format") {
  CycleReport r;
  r.cycle = 7;
  r.depth = 4;
  r.stages[kIF] = {SlotState::kValid, 0x1c};
  r.stages[kID] = {SlotState::kBubble, 0};
  r.stages[kEX] = {SlotState::kValid, 0xabc};
  CHECK(format_trace_line(r) == "cyc 7 | IF 0000001c | ID bubble | EX 00000abc | MEM -----");
  r.depth = 3;
  CHECK(format_trace_line(r) == "cyc 7 | IF 0000001c | ID bubble | EX 00000abc");
}

TEST_CASE("trace: hash is FNV-1a over the text") {
  CHECK(trace_hash({}) == 0xcbf29ce484222325ull);
  // FNV-1a("a\n"): computed by hand from the published offset basis and prime
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : std::string("a\n")) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  CHECK(trace_hash({"a"}) == h);
  CHECK(trace_hash({"ab"}) != trace_hash({"a", "b"}));
}

TEST_CASE("property: stats recomputed from the trace match the counters") {
  std::vector<std::vector<std::uint8_t>> images = {
      gen_microbench(BenchKind::kStraightline, 50, 1),
      gen_microbench(BenchKind::kLoadUsePairs, 40, 2),
      gen_microbench(BenchKind::kTakenBranchLoop, 30, 3),
  };
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
    for (double d : {0.0, 0.5, 1.0}) images.push_back(gen_random(200, seed, d));

  for (const auto& img : images) {
    for (Stages s : kAllStages) {
      RunConfig cfg;
      cfg.image = img;
      cfg.stages = s;
      cfg.trace = true;
      const ProgramRun r = run_program(cfg);
      REQUIRE(r.stats.halt_reason == FaultKind::kNone);
      const RunStats t = stats_from_trace(r.trace);
      CHECK(t.cycles == r.stats.cycles);
      CHECK(t.retired == r.stats.retired);
      CHECK(t.taken_branch_flush_bubbles == r.stats.taken_branch_flush_bubbles);
      CHECK(t.load_use_stalls == r.stats.load_use_stalls);
      CHECK(r.trace.size() == r.stats.cycles);
    }
  }
}

TEST_CASE("cosim: correct programs pass") {
  RunConfig cfg;
  cfg.image = gen_random(300, 42, 1.0);
  for (Stages s : kAllStages) {
    cfg.stages = s;
    const CosimVerdict v = cosim(cfg);
    CHECK(v.pass);
    CHECK(v.matched == v.golden_retired);
    CHECK(v.matched == v.pipeline_retired);
    CHECK(nlohmann::json::parse(v.to_json())["verdict"] == "PASS");
  }
}

TEST_CASE("cosim: empty program faults identically on both sides") {
  for (Stages s : kAllStages) {
    const CosimVerdict v = cosim(config_for({}, s));
    CHECK(v.pass);
    CHECK(v.matched == 0);
    CHECK(v.golden_halt == FaultKind::kIllegalInstruction);
    CHECK(v.pipeline_halt == FaultKind::kIllegalInstruction);
  }
}

TEST_CASE("cosim: a cut forwarding leg shows up as a wrote_rd divergence") {
  const std::vector<Word> raw_pair = {enc::addi(1, 0, 5), enc::add(2, 1, 1), enc::ecall()};

  struct Case {
    Stages stages;
    ForwardSource cut;
  };
  const Case cases[] = {{Stages::FIVE, ForwardSource::FROM_EXMEM},
                        {Stages::FOUR, ForwardSource::FROM_EXMEM},
                        {Stages::THREE, ForwardSource::FROM_EXWB_3STAGE}};
  for (const Case& c : cases) {
    CAPTURE(static_cast<int>(c.stages));
    RunConfig cfg = config_for(raw_pair, c.stages);
    CHECK(cosim(cfg).pass);
    cfg.forwarding_mask.disable(c.cut);
    const CosimVerdict v = cosim(cfg);
    CHECK_FALSE(v.pass);
    REQUIRE(v.divergence.has_value());
    CHECK(v.divergence->index == 1);
    CHECK(v.divergence->field == "wrote_rd");
    CHECK(v.divergence->golden == "x2=0x0000000a");
    CHECK(v.divergence->pipeline == "x2=0x00000000");
  }

  // distance-two dependency in FIVE travels over the other leg
  const std::vector<Word> gap = {enc::addi(1, 0, 5), enc::nop(), enc::add(2, 1, 1), enc::ecall()};
  RunConfig cfg = config_for(gap, Stages::FIVE);
  cfg.forwarding_mask.disable(ForwardSource::FROM_EXMEM);
  CHECK(cosim(cfg).pass);
  cfg.forwarding_mask.disable(ForwardSource::FROM_MEMWB);
  CHECK_FALSE(cosim(cfg).pass);
}

TEST_CASE("cosim: the cycle limit compares the common prefix") {
  RunConfig cfg = config_for({enc::addi(1, 1, 1), enc::jal(0, -4)}, Stages::FIVE);
  cfg.max_cycles = 100;
  const CosimVerdict v = cosim(cfg);
  CHECK(v.pass);
  CHECK(v.pipeline_halt == FaultKind::kStepLimitExceeded);
  CHECK(v.matched == v.pipeline_retired);
}

TEST_CASE("compare_streams: first differing field") {
  RetireEvent a{0, enc::addi(1, 0, 1), RegWrite{1, 1}, std::nullopt, 4};
  RetireEvent b = a;
  CHECK_FALSE(compare_streams({a}, {b}).has_value());
  b.next_pc = 8;
  CHECK(compare_streams({a}, {b})->field == "next_pc");
  b = a;
  b.mem_write = MemWrite{0, MemWidth::BYTE, 1};
  CHECK(compare_streams({a}, {b})->field == "mem_write");
  b = a;
  b.pc = 4;
  CHECK(compare_streams({a}, {b})->field == "pc");
  const auto len = compare_streams({a, a}, {a});
  CHECK(len->field == "length");
  CHECK(len->index == 1);
}
