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

#include <array>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"
#include "rvpipe/memory.hpp"

using namespace rvpipe;

namespace {

void clock(std::initializer_list<MemPort*> ports) {
  std::vector<MemPort*> v(ports);
  clock_ports(v);
}

MemRequest rd(Word addr, MemWidth w = MemWidth::WORD, bool is_signed = false) {
  return MemRequest{addr, MemAccess{w, is_signed}, false, 0};
}
MemRequest wr(Word addr, Word data, MemWidth w = MemWidth::WORD) {
  return MemRequest{addr, MemAccess{w, false}, true, data};
}

}  // namespace

TEST_CASE("scratchpad: construction rules") {
  CHECK_THROWS_AS(Scratchpad(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(Scratchpad(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(Scratchpad(0, 96), std::invalid_argument);
  CHECK_NOTHROW(Scratchpad(0x1000, 4096));
  Scratchpad s(0x1000, 4096);
  CHECK(s.size() == 4096);
  CHECK(s.base() == 0x1000);
}

TEST_CASE("scratchpad: little-endian byte order and sign extension") {
  Scratchpad s(0, 1024);
  s.write_now(0x100, MemWidth::WORD, 0x11223344);
  CHECK(s.read_now(0x100, {MemWidth::BYTE, false}) == 0x44);
  CHECK(s.read_now(0x103, {MemWidth::BYTE, false}) == 0x11);
  CHECK(s.read_now(0x102, {MemWidth::HALF, false}) == 0x1122);

  s.write_now(0x100, MemWidth::HALF, 0x8000);
  CHECK(s.read_now(0x100, {MemWidth::HALF, true}) == 0xFFFF8000);
  CHECK(s.read_now(0x100, {MemWidth::HALF, false}) == 0x8000);
  s.write_now(0x104, MemWidth::BYTE, 0x80);
  CHECK(s.read_now(0x104, {MemWidth::BYTE, true}) == 0xFFFFFF80);
  CHECK(s.read_now(0x104, {MemWidth::BYTE, false}) == 0x80);
}

TEST_CASE("scratchpad: bounds and alignment faults") {
  Scratchpad s(0x2000, 256);
  auto fault_of = [&](Word addr, MemWidth w) {
    try {
      s.read_now(addr, {w, false});
    } catch (const MemoryFault& f) {
      CHECK(f.addr() == addr);
      return f.kind();
    }
    return FaultKind::kNone;
  };
  CHECK(fault_of(0x2000 + 256, MemWidth::WORD) == FaultKind::kOutOfRange);
  CHECK(fault_of(0x1FFC, MemWidth::WORD) == FaultKind::kOutOfRange);
  CHECK(fault_of(0x20FC, MemWidth::WORD) == FaultKind::kNone);
  CHECK(fault_of(0x20FF, MemWidth::BYTE) == FaultKind::kNone);
  CHECK(fault_of(0x2002, MemWidth::WORD) == FaultKind::kMisaligned);
  CHECK(fault_of(0x2001, MemWidth::HALF) == FaultKind::kMisaligned);
  CHECK(fault_of(0x2002, MemWidth::HALF) == FaultKind::kNone);
  CHECK_THROWS_AS(s.write_now(0x2100, MemWidth::BYTE, 1), MemoryFault);
}

TEST_CASE("scratchpad: load_image") {
  Scratchpad s(0, 64);
  s.write_now(60, MemWidth::WORD, 0xDEADBEEF);
  const std::vector<std::uint8_t> img = {1, 2, 3, 4, 5, 6, 7, 8};
  s.load_image(img, 0);
  for (std::size_t i = 0; i < img.size(); ++i) CHECK(s.bytes()[i] == img[i]);
  CHECK(s.read_now(60, {MemWidth::WORD, false}) == 0);

  s.load_image(img, 8);
  CHECK(s.bytes()[0] == 0);
  CHECK(s.bytes()[8] == 1);

  CHECK_THROWS_AS(s.load_image(img, 60), MemoryFault);
  CHECK_THROWS_AS(s.load_image(img, 1000), MemoryFault);

  s.load_image({}, 0);
  for (auto b : s.bytes()) REQUIRE(b == 0);
}

TEST_CASE("port: read data arrives one cycle after issue") {
  Scratchpad s(0, 256);
  s.write_now(0x40, MemWidth::WORD, 0xCAFEF00D);
  MemPort p(s, false);
  p.issue(rd(0x40));
  CHECK_FALSE(p.collect().has_value());
  clock({&p});
  REQUIRE(p.collect().has_value());
  CHECK(p.collect()->value() == 0xCAFEF00D);
  clock({&p});
  CHECK_FALSE(p.collect().has_value());
}

TEST_CASE("port: write then read of the same address in the next cycle") {
  Scratchpad s(0, 256);
  MemPort p(s, true);
  p.issue(wr(0x10, 0x12345678));
  clock({&p});
  p.issue(rd(0x10));
  clock({&p});
  CHECK(p.collect()->value() == 0x12345678);
}

TEST_CASE("port: same-cycle write and read on a shared scratchpad returns new data") {
  Scratchpad s(0, 256);
  MemPort reader(s, false);
  MemPort writer(s, true);
  s.write_now(0x20, MemWidth::WORD, 1);
  // read issued on the port clocked first still observes the write
  reader.issue(rd(0x20));
  writer.issue(wr(0x20, 0xABCD, MemWidth::HALF));
  clock({&reader, &writer});
  CHECK(reader.collect()->value() == 0xABCD);
}

TEST_CASE("port: request discipline") {
  Scratchpad s(0, 256);
  MemPort ro(s, false);
  CHECK_THROWS_AS(ro.issue(wr(0, 1)), std::logic_error);
  ro.issue(rd(0));
  CHECK(ro.busy());
  CHECK_THROWS_AS(ro.issue(rd(4)), std::logic_error);
  clock({&ro});
  CHECK_FALSE(ro.busy());
}

TEST_CASE("port: faults surface at collect time") {
  Scratchpad s(0, 256);
  MemPort p(s, true);
  p.issue(rd(0x102));
  clock({&p});
  CHECK(p.collect()->fault == FaultKind::kMisaligned);
  CHECK_THROWS_AS(p.collect()->value(), MemoryFault);
  p.issue(wr(0x100, 7));
  clock({&p});
  CHECK(p.collect()->fault == FaultKind::kOutOfRange);
}

TEST_CASE("property: timed port agrees with a byte-map model and never writes outside the access") {
  std::mt19937 rng(77);
  Scratchpad s(0, 512);
  MemPort p(s, true);
  std::map<Word, std::uint8_t> model;  // absent == 0
  const MemWidth widths[] = {MemWidth::BYTE, MemWidth::HALF, MemWidth::WORD};

  for (int i = 0; i < 400; ++i) {
    const MemWidth w = widths[rng() % 3];
    const unsigned n = static_cast<unsigned>(w);
    const Word addr = (rng() % (512 / n)) * n;
    const bool is_signed = rng() % 2;
    MemRequest req = rng() % 2 ? wr(addr, rng(), w) : rd(addr, w, is_signed);

    Word want = 0;
    if (req.is_write) {
      for (unsigned k = 0; k < n; ++k) model[addr + k] = static_cast<std::uint8_t>(req.write_data >> (8 * k));
    } else {
      for (unsigned k = 0; k < n; ++k) want |= Word{model.count(addr + k) ? model[addr + k] : std::uint8_t{0}} << (8 * k);
      if (is_signed && n < 4 && (want >> (8 * n - 1)) & 1u) want |= ~Word{0} << (8 * n);
    }
    p.issue(req);
    clock({&p});
    if (!req.is_write) REQUIRE(p.collect()->value() == want);
    for (Word a = 0; a < 512; ++a) {
      const std::uint8_t m = model.count(a) ? model[a] : 0;
      if (s.bytes()[a] != m) FAIL("byte " << a << " differs after op " << i);
    }
  }
  // endianness round trip
  for (int i = 0; i < 20000; ++i) {
    const Word addr = (rng() % 128) * 4;
    const Word v = rng();
    p.issue(wr(addr, v));
    clock({&p});
    Word back = 0;
    for (unsigned k = 0; k < 4; ++k) back |= s.read_now(addr + k, {MemWidth::BYTE, false}) << (8 * k);
    REQUIRE(back == v);
  }
}
