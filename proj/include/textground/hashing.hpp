// Copyright 2026 The TextGround Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace textground {

/// 64-bit FNV-1a over the bytes of `s`.
std::uint64_t fnv1a64(std::string_view s) noexcept;

/// SplitMix64 finalizer; a bijective mixer on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Platform-stable hash of (key, seed). Used wherever a decision must depend only
/// on a record id and a seed, never on processing order.
std::uint64_t keyed_hash(std::string_view key, std::uint64_t seed) noexcept;

/// Maps the top 53 bits of `bits` to a double in [0, 1).
double to_unit_interval(std::uint64_t bits) noexcept;

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

/// Incremental SHA-256 for streamed content.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(std::string_view bytes);
  std::string hex_digest();

 private:
  struct State;
  State* state_;
};

/// SplitMix64 stream. Deterministic on every platform, unlike the standard
/// distributions, so every seeded decision in the toolkit draws from this.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;
  /// Uniform double in [0, 1).
  double uniform() noexcept { return to_unit_interval(next()); }
  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;
  /// Standard normal via Box-Muller.
  double normal() noexcept;

 private:
  std::uint64_t state_;
};

}  // namespace textground
