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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "morag/simd/kernels.hpp"

namespace morag::simd {
namespace {

using BinaryKernel = double (*)(const double*, const double*, std::size_t) noexcept;

struct KernelTable {
  Backend backend;
  BinaryKernel dot;
  BinaryKernel squared_distance;
};

constexpr KernelTable kScalarTable{Backend::scalar, &scalar::dot, &scalar::squared_distance};
#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable kAvx2Table{Backend::avx2, &avx2::dot, &avx2::squared_distance};
#endif
#if defined(__aarch64__)
constexpr KernelTable kNeonTable{Backend::neon, &neon::dot, &neon::squared_distance};
#endif

bool cpu_supports(Backend backend) noexcept {
  switch (backend) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* table_for(Backend backend) noexcept {
  if (!cpu_supports(backend)) return nullptr;
  switch (backend) {
    case Backend::scalar:
      return &kScalarTable;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return &kAvx2Table;
#else
      return nullptr;
#endif
    case Backend::neon:
#if defined(__aarch64__)
      return &kNeonTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable* initial_table() noexcept {
  if (const char* pinned = std::getenv("MORAG_SIMD")) {
    const std::string name(pinned);
    for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
      if (name == to_string(b)) {
        if (const KernelTable* t = table_for(b)) return t;
      }
    }
  }
  for (Backend b : {Backend::avx2, Backend::neon}) {
    if (const KernelTable* t = table_for(b)) return t;
  }
  return &kScalarTable;
}

std::atomic<const KernelTable*>& active_table() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

const KernelTable& kernels() noexcept {
  return *active_table().load(std::memory_order_acquire);
}

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) {
    throw std::invalid_argument("simd kernel: operand lengths differ (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

std::string_view to_string(Backend backend) noexcept {
  switch (backend) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
    if (table_for(b) != nullptr) out.push_back(b);
  }
  return out;
}

Backend active_backend() noexcept { return kernels().backend; }

bool set_backend(Backend backend) noexcept {
  const KernelTable* t = table_for(backend);
  if (t == nullptr) return false;
  active_table().store(t, std::memory_order_release);
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  return kernels().dot(a.data(), b.data(), a.size());
}

double squared_norm(std::span<const double> a) {
  return kernels().dot(a.data(), a.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  return kernels().squared_distance(a.data(), b.data(), a.size());
}

void dot_rows(std::span<const double> rows, std::span<const double> query,
              std::span<double> scores) {
  const std::size_t dim = query.size();
  require_same_size(rows.size(), dim * scores.size());
  const KernelTable& k = kernels();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = k.dot(rows.data() + i * dim, query.data(), dim);
  }
}

}  // namespace morag::simd
