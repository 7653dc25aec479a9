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

// rvpipe: run a flat RV32I image on the 3/4/5-stage pipeline model.
//
// Exit status: the simulated exit code (a0 at ECALL/EBREAK, low 8 bits) for
// a clean halt; 101 illegal instruction, 102 out-of-range access, 103
// misaligned access, 104 cycle limit, 105 co-simulation mismatch, 64 bad
// arguments, 66 unreadable image.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rvpipe/generators.hpp"
#include "rvpipe/harness.hpp"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitNoInput = 66;
constexpr int kExitCosimFail = 105;

int fault_exit(rvpipe::FaultKind k) { return 100 + static_cast<int>(k); }

std::uint32_t parse_number(const std::string& s, int base) {
  std::size_t used = 0;
  const unsigned long v = std::stoul(s, &used, base);
  if (used != s.size() || v > 0xFFFFFFFFul) throw std::invalid_argument("bad number: " + s);
  return static_cast<std::uint32_t>(v);
}

/// kind:n:seed, or random:n:seed[:density]
std::vector<std::uint8_t> generate(const std::string& arg) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t colon = arg.find(':', pos);
    parts.push_back(arg.substr(pos, colon - pos));
    if (colon == std::string::npos) break;
    pos = colon + 1;
  }
  if (parts.size() < 3) throw std::invalid_argument("--gen expects <kind>:<n>:<seed>");
  const std::uint32_t n = parse_number(parts[1], 10);
  const std::uint64_t seed = std::stoull(parts[2], nullptr, 0);
  if (parts[0] == "random") {
    const double density = parts.size() > 3 ? std::stod(parts[3]) : 0.5;
    return rvpipe::gen_random(n, seed, density);
  }
  if (parts.size() != 3) throw std::invalid_argument("--gen expects <kind>:<n>:<seed>");
  return rvpipe::gen_microbench(rvpipe::parse_bench_kind(parts[0]), n, seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-accurate 3/4/5-stage RV32I pipeline simulator"};

  int stages = 5;
  std::string image_path, offset = "0", entry = "0", gen, stats_format = "json", write_image;
  std::uint64_t max_cycles = 10'000'000;
  std::vector<std::string> trace;
  bool cosim = false, unified = false;
  std::string imem_size = "65536", dmem_size = "65536";

  app.add_option("--stages", stages, "Pipeline depth")->check(CLI::IsMember({3, 4, 5}));
  app.add_option("--image", image_path, "Flat little-endian RV32I binary");
  app.add_option("--offset", offset, "Load offset in the instruction scratchpad (hex)");
  app.add_option("--entry", entry, "Entry pc (hex)");
  app.add_option("--max-cycles", max_cycles, "Cycle limit")->check(CLI::PositiveNumber);
  app.add_option("--trace", trace, "Emit one occupancy line per cycle (stderr, or to the given file)")
      ->expected(0, 1)
      ->allow_extra_args(false);
  app.add_flag("--cosim", cosim, "Compare the pipeline against the golden model");
  app.add_option("--gen", gen, "Generate the program: straightline|load_use_pairs|taken_branch_loop:<n>:<seed> or "
                               "random:<n>:<seed>[:<density>]");
  app.add_option("--imem-size", imem_size, "Instruction scratchpad bytes (power of two)");
  app.add_option("--dmem-size", dmem_size, "Data scratchpad bytes (power of two)");
  app.add_flag("--unified", unified, "Single scratchpad for instructions and data");
  app.add_option("--stats-format", stats_format, "Statistics format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--write-image", write_image, "Also write the loaded/generated image to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  rvpipe::RunConfig cfg;
  try {
    cfg.stages = static_cast<rvpipe::Stages>(stages);
    cfg.load_offset = parse_number(offset, 16);
    cfg.entry = parse_number(entry, 16);
    cfg.max_cycles = max_cycles;
    cfg.imem_size = parse_number(imem_size, 0);
    cfg.dmem_size = parse_number(dmem_size, 0);
    cfg.unified = unified;
    cfg.trace = app.count("--trace") > 0;
    if (!gen.empty()) {
      cfg.image = generate(gen);
    } else if (image_path.empty()) {
      std::cerr << "error: one of --image or --gen is required\n";
      return kExitUsage;
    } else {
      cfg.image_path = image_path;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (!write_image.empty()) {
      const auto bytes = rvpipe::load_program(cfg);
      std::ofstream out(write_image, std::ios::binary);
      out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
      if (!out) throw std::runtime_error("cannot write '" + write_image + "'");
    }

    if (cosim) {
      const rvpipe::CosimVerdict v = rvpipe::cosim(cfg);
      std::cout << v.to_json() << '\n';
      return v.pass ? 0 : kExitCosimFail;
    }

    const rvpipe::ProgramRun run = rvpipe::run_program(cfg);
    if (cfg.trace) {
      std::ofstream file;
      if (!trace.empty() && !trace.front().empty()) {
        file.open(trace.front());
        if (!file) throw std::runtime_error("cannot open trace file '" + trace.front() + "'");
      }
      std::ostream& os = file.is_open() ? static_cast<std::ostream&>(file) : std::cerr;
      for (const auto& line : run.trace) os << line << '\n';
    }
    if (stats_format == "csv") {
      std::cout << rvpipe::RunStats::csv_header() << '\n' << run.stats.to_csv() << '\n';
    } else {
      std::cout << run.stats.to_json() << '\n';
    }
    if (run.stats.halt_reason != rvpipe::FaultKind::kNone) {
      if (run.stats.halt_reason != rvpipe::FaultKind::kStepLimitExceeded) {
        std::fprintf(stderr, "fault: %s at pc 0x%08x, cycle %llu\n", rvpipe::fault_name(run.stats.halt_reason),
                     run.stats.fault_pc, static_cast<unsigned long long>(run.stats.fault_cycle));
      }
      return fault_exit(run.stats.halt_reason);
    }
    return static_cast<int>(run.stats.exit_code & 0xFFu);
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
