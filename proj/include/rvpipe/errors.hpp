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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rvpipe {

/// Fault classes raised by the simulators. The numeric values double as the
/// CLI exit codes for faulted runs (offset by 100, see tools/rvpipe.cpp).
enum class FaultKind : std::uint8_t {
  kNone = 0,
  kIllegalInstruction,
  kOutOfRange,
  kMisaligned,
  kStepLimitExceeded,
};

const char* fault_name(FaultKind kind);

class SimError : public std::runtime_error {
 public:
  SimError(FaultKind kind, std::uint32_t pc, const std::string& what)
      : std::runtime_error(what), kind_(kind), pc_(pc) {}

  FaultKind kind() const { return kind_; }
  std::uint32_t pc() const { return pc_; }

 private:
  FaultKind kind_;
  std::uint32_t pc_;
};

class IllegalInstruction : public SimError {
 public:
  IllegalInstruction(std::uint32_t raw, std::uint32_t pc = 0);
  std::uint32_t raw() const { return raw_; }

 private:
  std::uint32_t raw_;
};

/// Out-of-range or misaligned access. `pc` is filled in by whoever knows it.
class MemoryFault : public SimError {
 public:
  MemoryFault(FaultKind kind, std::uint32_t addr, std::uint32_t pc = 0);
  std::uint32_t addr() const { return addr_; }

 private:
  std::uint32_t addr_;
};

}  // namespace rvpipe
