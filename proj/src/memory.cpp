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

#include "rvpipe/memory.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace rvpipe {

Scratchpad::Scratchpad(Word base, std::uint32_t size) : base_(base) {
  if (size < 4 || !std::has_single_bit(size)) {
    throw std::invalid_argument("scratchpad size must be a power of two >= 4");
  }
  if (static_cast<std::uint64_t>(base) + size > (std::uint64_t{1} << 32)) {
    throw std::invalid_argument("scratchpad exceeds the 32-bit address space");
  }
  bytes_.assign(size, 0);
}

void Scratchpad::check(Word addr, MemWidth width) const {
  const unsigned n = static_cast<unsigned>(width);
  if (addr % n != 0) throw MemoryFault(FaultKind::kMisaligned, addr);
  if (addr < base_ || static_cast<std::uint64_t>(addr) + n > static_cast<std::uint64_t>(base_) + bytes_.size()) {
    throw MemoryFault(FaultKind::kOutOfRange, addr);
  }
}

Word Scratchpad::read_now(Word addr, MemAccess access) const {
  check(addr, access.width);
  const std::size_t off = addr - base_;
  Word v = 0;
  for (unsigned i = 0; i < access.bytes(); ++i) v |= Word{bytes_[off + i]} << (8 * i);
  if (access.is_signed && access.width != MemWidth::WORD) {
    const Word m = 1u << (8 * access.bytes() - 1);
    v = (v ^ m) - m;
  }
  return v;
}

void Scratchpad::write_now(Word addr, MemWidth width, Word data) {
  check(addr, width);
  const std::size_t off = addr - base_;
  for (unsigned i = 0; i < static_cast<unsigned>(width); ++i) {
    bytes_[off + i] = static_cast<std::uint8_t>(data >> (8 * i));
  }
}

void Scratchpad::load_image(std::span<const std::uint8_t> image, std::uint32_t offset) {
  if (static_cast<std::uint64_t>(offset) + image.size() > bytes_.size()) {
    throw MemoryFault(FaultKind::kOutOfRange, base_ + offset);
  }
  std::fill(bytes_.begin(), bytes_.end(), 0);
  std::copy(image.begin(), image.end(), bytes_.begin() + offset);
}

Word MemResponse::value() const {
  if (!ok()) throw MemoryFault(fault, addr);
  return data;
}

void MemPort::issue(const MemRequest& req) {
  if (pending_) throw std::logic_error("memory port already has a request this cycle");
  if (req.is_write && !writable_) throw std::logic_error("write issued on a read-only port");
  pending_ = req;
}

void clock_ports(std::span<MemPort* const> ports) {
  auto fault_of = [](const Scratchpad& mem, const MemRequest& req) {
    try {
      mem.check(req.addr, req.access.width);
      return FaultKind::kNone;
    } catch (const MemoryFault& f) {
      return f.kind();
    }
  };

  for (MemPort* p : ports) {
    p->response_.reset();
    if (p->pending_ && p->pending_->is_write) {
      const MemRequest& req = *p->pending_;
      const FaultKind fault = fault_of(*p->mem_, req);
      if (fault == FaultKind::kNone) p->mem_->write_now(req.addr, req.access.width, req.write_data);
      p->response_ = MemResponse{req.addr, 0, fault};
    }
  }
  for (MemPort* p : ports) {
    if (p->pending_ && !p->pending_->is_write) {
      const MemRequest& req = *p->pending_;
      const FaultKind fault = fault_of(*p->mem_, req);
      const Word data = fault == FaultKind::kNone ? p->mem_->read_now(req.addr, req.access) : 0;
      p->response_ = MemResponse{req.addr, data, fault};
    }
    p->pending_.reset();
  }
}

}  // namespace rvpipe
