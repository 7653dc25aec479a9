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

#include "rvpipe/harness.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rvpipe {

namespace {

using nlohmann::json;

std::string hex8(Word v) {
  char buf[12];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

std::string occupant_text(const Occupant& o) {
  switch (o.state) {
    case SlotState::kValid: return hex8(o.pc);
    case SlotState::kBubble: return "bubble";
    case SlotState::kEmpty: break;
  }
  return "-----";
}

bool is_pc(const std::string& s) { return s.size() == 8 && s.find_first_not_of("0123456789abcdef") == std::string::npos; }

/// "cyc 3 | IF 0000000c | ID ..." -> {"cyc 3", "IF 0000000c", ...}
std::vector<std::string> split_columns(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t bar = line.find(" | ", pos);
    out.push_back(line.substr(pos, bar - pos));
    if (bar == std::string::npos) break;
    pos = bar + 3;
  }
  return out;
}

std::string column_value(const std::string& col) {
  const std::size_t sp = col.find(' ');
  return sp == std::string::npos ? std::string() : col.substr(sp + 1);
}

std::string write_text(const std::optional<RegWrite>& w) {
  if (!w) return "none";
  return "x" + std::to_string(w->rd) + "=0x" + hex8(w->value);
}

std::string write_text(const std::optional<MemWrite>& w) {
  if (!w) return "none";
  return std::to_string(static_cast<unsigned>(w->width)) + "B@0x" + hex8(w->addr) + "=0x" + hex8(w->data);
}

json stats_json(const RunStats& s) {
  json j;
  j["cycles"] = s.cycles;
  j["retired"] = s.retired;
  const auto cpi = s.cpi();
  j["cpi"] = cpi ? json(*cpi) : json(nullptr);
  j["cpi_rational"] = s.cpi_rational();
  j["taken_branch_flush_bubbles"] = s.taken_branch_flush_bubbles;
  j["load_use_stalls"] = s.load_use_stalls;
  j["exit_code"] = s.exit_code;
  j["halt_reason"] = s.halt_reason == FaultKind::kNone ? "halted" : fault_name(s.halt_reason);
  if (s.halt_reason != FaultKind::kNone && s.halt_reason != FaultKind::kStepLimitExceeded) {
    j["fault_pc"] = "0x" + hex8(s.fault_pc);
    j["fault_cycle"] = s.fault_cycle;
  }
  return j;
}

}  // namespace

std::optional<double> RunStats::cpi() const {
  if (retired == 0) return std::nullopt;
  return static_cast<double>(cycles) / static_cast<double>(retired);
}

std::string RunStats::cpi_rational() const { return std::to_string(cycles) + "/" + std::to_string(retired); }

std::string RunStats::to_json() const { return stats_json(*this).dump(); }

std::string RunStats::csv_header() {
  return "cycles,retired,cpi,cpi_rational,taken_branch_flush_bubbles,load_use_stalls,exit_code,halt_reason";
}

std::string RunStats::to_csv() const {
  std::ostringstream os;
  const auto c = cpi();
  os << cycles << ',' << retired << ',';
  if (c) os << *c;
  os << ',' << cpi_rational() << ',' << taken_branch_flush_bubbles << ',' << load_use_stalls << ',' << exit_code
     << ',' << (halt_reason == FaultKind::kNone ? "halted" : fault_name(halt_reason));
  return os.str();
}

std::vector<std::uint8_t> load_program(const RunConfig& cfg) {
  if (cfg.image) return *cfg.image;
  std::ifstream in(cfg.image_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open image '" + cfg.image_path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

MemorySet build_memory(const RunConfig& cfg, const std::vector<std::uint8_t>& image) {
  MemorySet mem{Scratchpad(0, cfg.imem_size), std::nullopt};
  if (!cfg.unified) mem.dmem.emplace(0, cfg.dmem_size);
  mem.imem.load_image(image, cfg.load_offset);
  return mem;
}

std::string format_trace_line(const CycleReport& r) {
  std::string line = "cyc " + std::to_string(r.cycle);
  for (int i = 0; i < r.depth; ++i) {
    line += " | ";
    line += stage_name(static_cast<Stage>(i));
    line += ' ';
    line += occupant_text(r.stages[i]);
  }
  return line;
}

std::uint64_t trace_hash(const std::vector<std::string>& lines) {
  // FNV-1a, 64 bit
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ull;
  };
  for (const auto& line : lines) {
    for (char c : line) mix(static_cast<unsigned char>(c));
    mix('\n');
  }
  return h;
}

RunStats stats_from_trace(const std::vector<std::string>& lines) {
  RunStats s;
  std::string prev_id;
  for (const auto& line : lines) {
    const auto cols = split_columns(line);
    if (cols.size() < 4) throw std::invalid_argument("malformed trace line: " + line);
    ++s.cycles;
    const std::string id = column_value(cols[2]);
    if (is_pc(column_value(cols.back()))) ++s.retired;
    if (id == "bubble") s.taken_branch_flush_bubbles += 2;
    if (is_pc(id) && id == prev_id) ++s.load_use_stalls;
    prev_id = id;
  }
  return s;
}

ProgramRun run_program(const RunConfig& cfg) {
  const auto image = load_program(cfg);
  ProgramRun out;
  out.pipeline = run_pipeline(PipelineConfig{cfg.stages}, build_memory(cfg, image), cfg.entry, cfg.max_cycles,
                              cfg.trace, cfg.forwarding_mask);
  const PipelineRun& p = out.pipeline;
  out.stats.cycles = p.counters.cycles;
  out.stats.retired = p.counters.retired;
  out.stats.taken_branch_flush_bubbles = p.counters.taken_branch_flushes;
  out.stats.load_use_stalls = p.counters.load_use_stalls;
  out.stats.exit_code = p.exit_code;
  out.stats.halt_reason = p.halt_reason;
  out.stats.fault_pc = p.fault_pc;
  out.stats.fault_cycle = p.fault_cycle;
  if (cfg.trace) {
    out.trace.reserve(p.reports.size());
    for (const auto& r : p.reports) out.trace.push_back(format_trace_line(r));
  }
  return out;
}

std::optional<Divergence> compare_streams(const std::vector<RetireEvent>& golden,
                                          const std::vector<RetireEvent>& pipeline) {
  const std::size_t n = std::min(golden.size(), pipeline.size());
  for (std::size_t i = 0; i < n; ++i) {
    const RetireEvent& g = golden[i];
    const RetireEvent& p = pipeline[i];
    if (g.pc != p.pc) return Divergence{i, "pc", hex8(g.pc), hex8(p.pc)};
    if (g.raw != p.raw) return Divergence{i, "raw", hex8(g.raw), hex8(p.raw)};
    if (g.wrote_rd != p.wrote_rd) return Divergence{i, "wrote_rd", write_text(g.wrote_rd), write_text(p.wrote_rd)};
    if (g.mem_write != p.mem_write) {
      return Divergence{i, "mem_write", write_text(g.mem_write), write_text(p.mem_write)};
    }
    if (g.next_pc != p.next_pc) return Divergence{i, "next_pc", hex8(g.next_pc), hex8(p.next_pc)};
  }
  if (golden.size() != pipeline.size()) {
    return Divergence{n, "length", std::to_string(golden.size()), std::to_string(pipeline.size())};
  }
  return std::nullopt;
}

CosimVerdict cosim(const RunConfig& cfg) {
  const auto image = load_program(cfg);
  RunConfig pcfg = cfg;
  pcfg.image = image;
  pcfg.trace = false;

  auto golden_future = std::async(std::launch::async, [&] {
    return run(ArchState(build_memory(cfg, image), cfg.entry), static_cast<std::size_t>(cfg.max_cycles));
  });
  const ProgramRun prun = run_program(pcfg);
  GoldenRun grun = golden_future.get();

  CosimVerdict v;
  v.stats = prun.stats;
  v.golden_halt = grun.halt_reason;
  v.pipeline_halt = prun.stats.halt_reason;
  v.golden_retired = grun.events.size();
  v.pipeline_retired = prun.pipeline.events.size();

  // A pipeline cut off by the cycle limit is compared on the prefix it got to.
  std::vector<RetireEvent>& gev = grun.events;
  const bool cut = v.pipeline_halt == FaultKind::kStepLimitExceeded;
  if (cut && gev.size() > prun.pipeline.events.size()) gev.resize(prun.pipeline.events.size());

  v.divergence = compare_streams(gev, prun.pipeline.events);
  v.matched = v.divergence ? v.divergence->index : gev.size();
  if (!v.divergence && !cut) {
    if (v.golden_halt != v.pipeline_halt) {
      v.divergence = Divergence{gev.size(), "halt_reason", fault_name(v.golden_halt), fault_name(v.pipeline_halt)};
    } else if (v.golden_halt == FaultKind::kNone && grun.state.exit_code != prun.stats.exit_code) {
      v.divergence = Divergence{gev.size(), "exit_code", std::to_string(grun.state.exit_code),
                                std::to_string(prun.stats.exit_code)};
    } else if (v.golden_halt != FaultKind::kNone && v.golden_halt != FaultKind::kStepLimitExceeded &&
               grun.state.fault_pc != prun.stats.fault_pc) {
      v.divergence = Divergence{gev.size(), "fault_pc", hex8(grun.state.fault_pc), hex8(prun.stats.fault_pc)};
    }
  }
  v.pass = !v.divergence.has_value();
  return v;
}

std::string CosimVerdict::to_json() const {
  json j;
  j["verdict"] = pass ? "PASS" : "FAIL";
  j["matched"] = matched;
  j["golden_retired"] = golden_retired;
  j["pipeline_retired"] = pipeline_retired;
  j["golden_halt"] = golden_halt == FaultKind::kNone ? "halted" : fault_name(golden_halt);
  j["pipeline_halt"] = pipeline_halt == FaultKind::kNone ? "halted" : fault_name(pipeline_halt);
  if (divergence) {
    j["divergence"] = {{"index", divergence->index},
                       {"field", divergence->field},
                       {"golden", divergence->golden},
                       {"pipeline", divergence->pipeline}};
  }
  j["stats"] = stats_json(stats);
  return j.dump();
}

}  // namespace rvpipe
