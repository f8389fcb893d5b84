#include <bit>

#include "kernels/kernels_internal.hpp"

namespace vprkit::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

CosineTerms cosine_terms_scalar(const double* a, const double* b, std::size_t n) {
  CosineTerms t;
  for (std::size_t i = 0; i < n; ++i) {
    t.dot += a[i] * b[i];
    t.norm_a_sq += a[i] * a[i];
    t.norm_b_sq += b[i] * b[i];
  }
  return t;
}

void dot_rows_scalar(const double* query, const double* rows, std::size_t n_rows, std::size_t dim,
                     double* out) {
  for (std::size_t r = 0; r < n_rows; ++r) out[r] = dot_scalar(query, rows + r * dim, dim);
}

int hamming256_scalar(const Bits256& a, const Bits256& b) {
  int d = 0;
  for (std::size_t w = 0; w < a.size(); ++w) d += std::popcount(a[w] ^ b[w]);
  return d;
}

void hamming_many_scalar(const Bits256& query, const Bits256* refs, std::size_t n, int* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = hamming256_scalar(query, refs[i]);
}

void scale_spectrum_scalar(const std::complex<float>* source, const float* gain,
                           std::complex<float>* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = source[i] * gain[i];
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{
      "scalar",           dot_scalar,          cosine_terms_scalar,  dot_rows_scalar,
      hamming256_scalar,  hamming_many_scalar, scale_spectrum_scalar,
  };
  return table;
}

}  // namespace vprkit::kernels
