#pragma once

// Data-parallel inner loops used by the matchers and the GIST filter bank.
//
// Every kernel has a portable scalar reference implementation and, on x86-64
// builds, an AVX2+FMA variant. The variant is picked once at first use from the
// CPU's capabilities; VPRKIT_KERNELS=scalar in the environment forces the
// reference path. Tests pin each variant against the scalar one.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace vprkit {

/// 256-bit binary descriptor, little-endian words.
using Bits256 = std::array<std::uint64_t, 4>;

namespace kernels {

struct CosineTerms {
  double dot = 0.0;
  double norm_a_sq = 0.0;
  double norm_b_sq = 0.0;
};

struct KernelTable {
  std::string_view name;

  double (*dot)(const double* a, const double* b, std::size_t n);
  CosineTerms (*cosine_terms)(const double* a, const double* b, std::size_t n);
  /// out[r] = <query, rows[r * dim .. (r + 1) * dim)> for r in [0, n_rows).
  void (*dot_rows)(const double* query, const double* rows, std::size_t n_rows, std::size_t dim,
                   double* out);
  int (*hamming256)(const Bits256& a, const Bits256& b);
  /// out[i] = hamming256(query, refs[i]).
  void (*hamming_many)(const Bits256& query, const Bits256* refs, std::size_t n, int* out);
  /// out[i] = source[i] * gain[i] (complex times real, single precision).
  void (*scale_spectrum)(const std::complex<float>* source, const float* gain,
                         std::complex<float>* out, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
/// nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2_table() noexcept;

/// Table used by the library. Resolved once; thread-safe.
const KernelTable& active() noexcept;

/// Overrides the active table (tests and benchmarks). Not thread-safe against
/// concurrent kernel use.
void set_active(const KernelTable& table) noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline CosineTerms cosine_terms(std::span<const double> a, std::span<const double> b) {
  return active().cosine_terms(a.data(), b.data(), a.size());
}

inline int hamming(const Bits256& a, const Bits256& b) { return active().hamming256(a, b); }

}  // namespace kernels
}  // namespace vprkit
