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
 * @file memory.hpp
 * @brief Scratchpad memories and synchronous memory ports.
 *
 * A Scratchpad is a flat little-endian byte array. The golden model uses the
 * combinational read_now()/write_now() view. The pipeline talks to memory
 * through MemPort, which models a synchronous memory: a request registered in
 * cycle t is answered in cycle t+1, and writes land at the clock edge that
 * ends the issuing cycle.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rvpipe/errors.hpp"
#include "rvpipe/isa.hpp"

namespace rvpipe {

class Scratchpad {
 public:
  /// `size` must be a power of two and a multiple of 4.
  Scratchpad(Word base, std::uint32_t size);

  Word base() const { return base_; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(bytes_.size()); }
  std::span<const std::uint8_t> bytes() const { return bytes_; }

  /// Throws MemoryFault (kOutOfRange / kMisaligned) without touching memory.
  void check(Word addr, MemWidth width) const;
  Word read_now(Word addr, MemAccess access) const;
  void write_now(Word addr, MemWidth width, Word data);

  /// Zero-fills the whole scratchpad, then copies `image` to base+offset.
  void load_image(std::span<const std::uint8_t> image, std::uint32_t offset = 0);

  bool operator==(const Scratchpad&) const = default;

 private:
  Word base_;
  std::vector<std::uint8_t> bytes_;
};

struct MemRequest {
  Word addr = 0;
  MemAccess access{};
  bool is_write = false;
  Word write_data = 0;
};

struct MemResponse {
  Word addr = 0;
  Word data = 0;
  FaultKind fault = FaultKind::kNone;

  bool ok() const { return fault == FaultKind::kNone; }
  /// Data, or throws the recorded MemoryFault.
  Word value() const;
};

/// One synchronous port onto a scratchpad. Two ports may share a scratchpad
/// (unified memory); clock_ports() orders writes before reads so a read
/// issued in the same cycle as a write to the same address sees new data.
class MemPort {
 public:
  MemPort(Scratchpad& mem, bool writable) : mem_(&mem), writable_(writable) {}

  /// At most one request per cycle; write requests on a read-only port are
  /// rejected with std::logic_error.
  void issue(const MemRequest& req);
  bool busy() const { return pending_.has_value(); }

  /// Response to the request issued in the previous cycle, if any.
  std::optional<MemResponse> collect() const { return response_; }

  Scratchpad& memory() { return *mem_; }

 private:
  friend void clock_ports(std::span<MemPort* const> ports);

  Scratchpad* mem_;
  bool writable_;
  std::optional<MemRequest> pending_;
  std::optional<MemResponse> response_;
};

/// Clock edge: commit every pending write, then serve every pending read.
void clock_ports(std::span<MemPort* const> ports);

}  // namespace rvpipe
