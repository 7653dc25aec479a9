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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "rvpipe/generators.hpp"
#include "rvpipe/golden.hpp"
#include "rvpipe/harness.hpp"
#include "rvpipe/isa.hpp"

namespace py = pybind11;
using namespace rvpipe;

namespace {

std::vector<std::uint8_t> to_vector(const py::bytes& b) {
  const std::string s = b;
  return {s.begin(), s.end()};
}

py::bytes to_bytes(const std::vector<std::uint8_t>& v) {
  return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

RunConfig make_config(const py::bytes& image, int stages, Word offset, Word entry, std::uint64_t max_cycles,
                      bool trace, bool unified, std::uint32_t imem_size, std::uint32_t dmem_size) {
  if (stages < 3 || stages > 5) throw py::value_error("stages must be 3, 4 or 5");
  RunConfig cfg;
  cfg.image = to_vector(image);
  cfg.stages = static_cast<Stages>(stages);
  cfg.load_offset = offset;
  cfg.entry = entry;
  cfg.max_cycles = max_cycles;
  cfg.trace = trace;
  cfg.unified = unified;
  cfg.imem_size = imem_size;
  cfg.dmem_size = dmem_size;
  return cfg;
}

const char* halt_text(FaultKind k) { return k == FaultKind::kNone ? "halted" : fault_name(k); }

py::dict event_dict(const RetireEvent& e) {
  py::dict d;
  d["pc"] = e.pc;
  d["raw"] = e.raw;
  d["wrote_rd"] = e.wrote_rd ? py::object(py::make_tuple(e.wrote_rd->rd, e.wrote_rd->value)) : py::none();
  d["mem_write"] = e.mem_write ? py::object(py::make_tuple(e.mem_write->addr, static_cast<int>(e.mem_write->width),
                                                           e.mem_write->data))
                               : py::none();
  d["next_pc"] = e.next_pc;
  return d;
}

py::dict stats_dict(const RunStats& s) {
  py::dict d;
  d["cycles"] = s.cycles;
  d["retired"] = s.retired;
  d["cpi"] = s.cpi() ? py::object(py::float_(*s.cpi())) : py::none();
  d["taken_branch_flush_bubbles"] = s.taken_branch_flush_bubbles;
  d["load_use_stalls"] = s.load_use_stalls;
  d["exit_code"] = s.exit_code;
  d["halt_reason"] = halt_text(s.halt_reason);
  return d;
}

}  // namespace

PYBIND11_MODULE(_rvpipe, m) {
  m.doc() = "Cycle-accurate 3/4/5-stage RV32I pipeline simulator";

  py::register_exception<IllegalInstruction>(m, "IllegalInstruction", PyExc_ValueError);

  m.def(
      "decode",
      [](Word raw) {
        const DecodedInstr d = decode(raw);
        py::dict out;
        out["kind"] = kind_name(d.kind);
        out["rd"] = d.rd;
        out["rs1"] = d.rs1;
        out["rs2"] = d.rs2;
        out["imm"] = d.imm;
        out["text"] = disassemble(d);
        return out;
      },
      py::arg("raw"), "Decode one instruction word; raises IllegalInstruction.");

  m.def(
      "golden_run",
      [](const py::bytes& image, std::size_t max_steps, Word entry) {
        RunConfig cfg;
        const GoldenRun r = run(ArchState(build_memory(cfg, to_vector(image)), entry), max_steps);
        py::list events;
        for (const auto& e : r.events) events.append(event_dict(e));
        py::dict out;
        out["events"] = events;
        out["regs"] = std::vector<Word>(r.state.regs.begin(), r.state.regs.end());
        out["exit_code"] = r.state.exit_code;
        out["halt_reason"] = halt_text(r.halt_reason);
        return out;
      },
      py::arg("image"), py::arg("max_steps") = 10'000'000, py::arg("entry") = 0,
      "Run the instruction-level reference model.");

  m.def(
      "run_program",
      [](const py::bytes& image, int stages, Word offset, Word entry, std::uint64_t max_cycles, bool trace,
         bool unified, std::uint32_t imem_size, std::uint32_t dmem_size) {
        const RunConfig cfg = make_config(image, stages, offset, entry, max_cycles, trace, unified, imem_size, dmem_size);
        ProgramRun r;
        {
          py::gil_scoped_release release;
          r = run_program(cfg);
        }
        py::dict out = stats_dict(r.stats);
        out["regs"] = std::vector<Word>(r.pipeline.regfile.begin(), r.pipeline.regfile.end());
        if (trace) {
          out["trace"] = r.trace;
          out["trace_hash"] = trace_hash(r.trace);
        }
        return out;
      },
      py::arg("image"), py::arg("stages") = 5, py::arg("offset") = 0, py::arg("entry") = 0,
      py::arg("max_cycles") = 10'000'000, py::arg("trace") = false, py::arg("unified") = false,
      py::arg("imem_size") = 64 * 1024, py::arg("dmem_size") = 64 * 1024, "Run one pipeline configuration.");

  m.def(
      "cosim",
      [](const py::bytes& image, int stages, Word offset, Word entry, std::uint64_t max_cycles) {
        const RunConfig cfg =
            make_config(image, stages, offset, entry, max_cycles, false, false, 64 * 1024, 64 * 1024);
        CosimVerdict v;
        {
          py::gil_scoped_release release;
          v = cosim(cfg);
        }
        py::dict out;
        out["pass"] = v.pass;
        out["matched"] = v.matched;
        out["golden_retired"] = v.golden_retired;
        out["pipeline_retired"] = v.pipeline_retired;
        if (v.divergence) {
          out["divergence"] = py::dict(py::arg("index") = v.divergence->index, py::arg("field") = v.divergence->field,
                                       py::arg("golden") = v.divergence->golden,
                                       py::arg("pipeline") = v.divergence->pipeline);
        } else {
          out["divergence"] = py::none();
        }
        out["stats"] = stats_dict(v.stats);
        return out;
      },
      py::arg("image"), py::arg("stages") = 5, py::arg("offset") = 0, py::arg("entry") = 0,
      py::arg("max_cycles") = 10'000'000, "Compare a pipeline configuration against the reference model.");

  m.def(
      "gen_microbench",
      [](const std::string& kind, std::uint32_t n, std::uint64_t seed) {
        return to_bytes(gen_microbench(parse_bench_kind(kind), n, seed));
      },
      py::arg("kind"), py::arg("n"), py::arg("seed") = 0);

  m.def(
      "gen_random",
      [](std::uint32_t n, std::uint64_t seed, double density) { return to_bytes(gen_random(n, seed, density)); },
      py::arg("n"), py::arg("seed"), py::arg("hazard_density") = 0.5);
}
