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

#include "rvpipe/errors.hpp"

#include <cstdio>

namespace rvpipe {

namespace {

std::string hex(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08x", v);
  return buf;
}

}  // namespace

const char* fault_name(FaultKind kind) {
  switch (kind) {
    case FaultKind::kNone: return "none";
    case FaultKind::kIllegalInstruction: return "illegal_instruction";
    case FaultKind::kOutOfRange: return "memory_out_of_range";
    case FaultKind::kMisaligned: return "memory_misaligned";
    case FaultKind::kStepLimitExceeded: return "step_limit_exceeded";
  }
  return "unknown";
}

IllegalInstruction::IllegalInstruction(std::uint32_t raw, std::uint32_t pc)
    : SimError(FaultKind::kIllegalInstruction, pc, "illegal instruction " + hex(raw) + " at pc " + hex(pc)),
      raw_(raw) {}

MemoryFault::MemoryFault(FaultKind kind, std::uint32_t addr, std::uint32_t pc)
    : SimError(kind, pc,
               std::string(kind == FaultKind::kMisaligned ? "misaligned" : "out-of-range") + " access at " +
                   hex(addr) + " (pc " + hex(pc) + ")"),
      addr_(addr) {}

}  // namespace rvpipe
