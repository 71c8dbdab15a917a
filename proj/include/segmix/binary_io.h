// Copyright 2026 The SegMix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEGMIX_BINARY_IO_H_
#define SEGMIX_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "segmix/errors.h"

// Little-endian primitives shared by the table and checkpoint formats.
namespace segmix::binary {

inline void write_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

inline void write_f32(std::ostream& out, float v) {
  write_u32(out, std::bit_cast<std::uint32_t>(v));
}

inline void write_string(std::ostream& out, const std::string& s) {
  write_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline void read_exact(std::istream& in, char* dst, std::size_t n) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw DataError("unexpected end of binary file");
  }
}

inline std::uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  read_exact(in, reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

inline std::uint64_t read_u64(std::istream& in) {
  unsigned char b[8];
  read_exact(in, reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

inline float read_f32(std::istream& in) {
  return std::bit_cast<float>(read_u32(in));
}

inline std::string read_string(std::istream& in) {
  const std::uint32_t n = read_u32(in);
  if (n > (1u << 20)) throw DataError("implausible string length in binary file");
  std::string s(n, '\0');
  read_exact(in, s.data(), n);
  return s;
}

inline void expect_magic(std::istream& in, const char (&magic)[9]) {
  char buf[8];
  read_exact(in, buf, 8);
  if (std::string(buf, 8) != std::string(magic, 8)) {
    throw DataError(std::string("bad magic, expected ") + magic);
  }
}

}  // namespace segmix::binary

#endif  // SEGMIX_BINARY_IO_H_
