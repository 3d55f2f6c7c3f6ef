// Copyright 2026 The patmine Authors.
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

#ifndef PATMINE_UTIL_H_
#define PATMINE_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace patmine {

// Seeded generator whose output sequence is identical on every platform.
// std::uniform_int_distribution and std::shuffle are implementation-defined,
// so bounded draws are done here by rejection sampling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t Below(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller.
  double Normal();

  bool Bernoulli(double p) { return Uniform() < p; }

  template <typename T>
  void Shuffle(std::vector<T> &items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// 64-bit FNV-1a. Stable across runs and platforms, used for seeds and
// content fingerprints.
std::uint64_t Fnv1a64(std::string_view data,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

std::vector<std::string> SplitWords(std::string_view text);
std::size_t CountWords(std::string_view text);
std::vector<std::string> SplitString(std::string_view text, char sep);

std::string ToLower(std::string_view text);
std::string ToUpper(std::string_view text);
std::string Trim(std::string_view text);

// Shortest round-trippable decimal representation of a double.
std::string FormatDouble(double value);

std::string ReadFile(const std::filesystem::path &path);
void WriteFile(const std::filesystem::path &path, std::string_view content);
std::string HexDigest(std::uint64_t value);

}  // namespace patmine

#endif  // PATMINE_UTIL_H_
