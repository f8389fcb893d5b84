// Built with -mavx2 -mfma -mpopcnt. Only reached through dispatch after a CPU check.

#include <immintrin.h>

#include "kernels/kernels_internal.hpp"

namespace vprkit::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

CosineTerms cosine_terms_avx2(const double* a, const double* b, std::size_t n) {
  __m256d ab = _mm256_setzero_pd();
  __m256d aa = _mm256_setzero_pd();
  __m256d bb = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    ab = _mm256_fmadd_pd(va, vb, ab);
    aa = _mm256_fmadd_pd(va, va, aa);
    bb = _mm256_fmadd_pd(vb, vb, bb);
  }
  CosineTerms t{hsum(ab), hsum(aa), hsum(bb)};
  for (; i < n; ++i) {
    t.dot += a[i] * b[i];
    t.norm_a_sq += a[i] * a[i];
    t.norm_b_sq += b[i] * b[i];
  }
  return t;
}

void dot_rows_avx2(const double* query, const double* rows, std::size_t n_rows, std::size_t dim,
                   double* out) {
  if (dim == 8) {
    // CoHOG's default region vector: one 16x16 cell, 8 bins.
    const __m256d q0 = _mm256_loadu_pd(query);
    const __m256d q1 = _mm256_loadu_pd(query + 4);
    for (std::size_t r = 0; r < n_rows; ++r) {
      const double* row = rows + r * 8;
      __m256d acc = _mm256_mul_pd(q0, _mm256_loadu_pd(row));
      acc = _mm256_fmadd_pd(q1, _mm256_loadu_pd(row + 4), acc);
      out[r] = hsum(acc);
    }
    return;
  }
  for (std::size_t r = 0; r < n_rows; ++r) out[r] = dot_avx2(query, rows + r * dim, dim);
}

inline __m256i popcount_bytes(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,  //
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  return _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
}

inline int hamming_vec(__m256i q, const Bits256& ref) {
  const __m256i r = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(ref.data()));
  const __m256i counts = popcount_bytes(_mm256_xor_si256(q, r));
  const __m256i sums = _mm256_sad_epu8(counts, _mm256_setzero_si256());
  return static_cast<int>(_mm256_extract_epi64(sums, 0) + _mm256_extract_epi64(sums, 1) +
                          _mm256_extract_epi64(sums, 2) + _mm256_extract_epi64(sums, 3));
}

int hamming256_avx2(const Bits256& a, const Bits256& b) {
  return hamming_vec(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data())), b);
}

void hamming_many_avx2(const Bits256& query, const Bits256* refs, std::size_t n, int* out) {
  const __m256i q = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(query.data()));
  for (std::size_t i = 0; i < n; ++i) out[i] = hamming_vec(q, refs[i]);
}

void scale_spectrum_avx2(const std::complex<float>* source, const float* gain,
                         std::complex<float>* out, std::size_t n) {
  const float* src = reinterpret_cast<const float*>(source);
  float* dst = reinterpret_cast<float*>(out);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128 g = _mm_loadu_ps(gain + i);
    const __m256 gg = _mm256_set_m128(_mm_unpackhi_ps(g, g), _mm_unpacklo_ps(g, g));
    _mm256_storeu_ps(dst + 2 * i, _mm256_mul_ps(_mm256_loadu_ps(src + 2 * i), gg));
  }
  for (; i < n; ++i) out[i] = source[i] * gain[i];
}

}  // namespace

namespace detail {

const KernelTable& avx2_table_unchecked() noexcept {
  static const KernelTable table{
      "avx2",          dot_avx2,          cosine_terms_avx2,   dot_rows_avx2,
      hamming256_avx2, hamming_many_avx2, scale_spectrum_avx2,
  };
  return table;
}

}  // namespace detail
}  // namespace vprkit::kernels
