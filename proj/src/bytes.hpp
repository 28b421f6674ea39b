// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef CLAUTH_BYTES_HPP
#define CLAUTH_BYTES_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace clauth {

using Bytes = std::vector<std::uint8_t>;

std::string to_hex(const Bytes& data);
Bytes from_hex(const std::string& hex);

void put_u32be(Bytes& out, std::uint32_t v);
std::uint32_t get_u32be(const std::uint8_t* p);

inline void append(Bytes& out, const Bytes& more) {
  out.insert(out.end(), more.begin(), more.end());
}

inline Bytes cat(std::initializer_list<Bytes> parts) {
  Bytes out;
  for (const auto& p : parts) append(out, p);
  return out;
}

inline Bytes from_string(const std::string& s) {
  return Bytes(s.begin(), s.end());
}

}  // namespace clauth

#endif
