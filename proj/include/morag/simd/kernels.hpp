// Copyright 2026 The MoRAG Engine Authors
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

// Data-parallel inner loops used by retrieval scans, similarity matrices and
// the distance metrics. Every kernel has a scalar reference implementation;
// vector variants are selected once at startup from what the CPU reports.
// Set MORAG_SIMD=scalar|avx2|neon in the environment to pin a backend.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace morag::simd {

enum class Backend { scalar, avx2, neon };

std::string_view to_string(Backend backend) noexcept;

// Backends compiled in and supported by the running CPU. Always contains
// Backend::scalar.
std::vector<Backend> available_backends();

Backend active_backend() noexcept;

// Returns false (and leaves the active backend unchanged) if the requested
// backend is not available.
bool set_backend(Backend backend) noexcept;

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);

// scores[i] = dot(rows[i*dim : (i+1)*dim], query) for i in [0, scores.size()).
void dot_rows(std::span<const double> rows, std::span<const double> query,
              std::span<double> scores);

// Per-backend entry points, exposed so equivalence tests can compare them
// directly. Lengths are the caller's responsibility.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double squared_distance(const double* a, const double* b, std::size_t n) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double squared_distance(const double* a, const double* b, std::size_t n) noexcept;
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double squared_distance(const double* a, const double* b, std::size_t n) noexcept;
}  // namespace neon
#endif

}  // namespace morag::simd
