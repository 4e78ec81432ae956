// Copyright 2026 The PBAG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pbag {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;
using Digest = std::array<uint8_t, 32>;

std::string to_hex(ByteSpan bytes);
Bytes from_hex(std::string_view hex);

inline ByteSpan as_bytes(std::string_view s) {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

Bytes concat(std::initializer_list<ByteSpan> parts);

/// SHA-256.
Digest sha256(ByteSpan data);

/// Big-endian, length-prefixed canonical encoder used by every wire and file format.
class ByteWriter {
 public:
  void u8(uint8_t v) { out_.push_back(v); }
  void u16(uint16_t v);
  void u32(uint32_t v);
  void u64(uint64_t v);
  void raw(ByteSpan data) { out_.insert(out_.end(), data.begin(), data.end()); }
  /// u32 length followed by the bytes.
  void var(ByteSpan data);

  const Bytes& bytes() const& { return out_; }
  Bytes take() && { return std::move(out_); }

 private:
  Bytes out_;
};

/// Decoder counterpart of ByteWriter. Every read throws Error(kMalformedInput)
/// when the buffer is too short.
class ByteReader {
 public:
  explicit ByteReader(ByteSpan data) : data_(data) {}

  uint8_t u8();
  uint16_t u16();
  uint32_t u32();
  uint64_t u64();
  ByteSpan raw(size_t n);
  template <size_t N>
  std::array<uint8_t, N> fixed() {
    std::array<uint8_t, N> out{};
    auto s = raw(N);
    std::copy(s.begin(), s.end(), out.begin());
    return out;
  }
  /// Reads a u32-prefixed field; `max_len` bounds the claimed length.
  Bytes var(size_t max_len = 1u << 24);

  size_t remaining() const { return data_.size() - pos_; }
  size_t position() const { return pos_; }
  bool done() const { return remaining() == 0; }
  /// Throws unless the whole buffer has been consumed.
  void expect_done() const;

 private:
  ByteSpan data_;
  size_t pos_ = 0;
};

}  // namespace pbag
