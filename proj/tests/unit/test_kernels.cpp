#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include "vprkit/kernels.hpp"

using namespace vprkit;
using kernels::KernelTable;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

Bits256 random_bits(std::mt19937_64& rng) { return {rng(), rng(), rng(), rng()}; }

int naive_hamming(const Bits256& a, const Bits256& b) {
  int n = 0;
  for (int bit = 0; bit < 256; ++bit) {
    n += static_cast<int>(((a[bit / 64] ^ b[bit / 64]) >> (bit % 64)) & 1u);
  }
  return n;
}

// Sum-of-abs bound for a reordered floating-point dot product.
double dot_tolerance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] * b[i]);
  return 1e-14 * (s + 1.0);
}

}  // namespace

TEST_CASE("scalar kernels against naive definitions") {
  const KernelTable& t = kernels::scalar_table();
  std::mt19937_64 rng(1);
  for (std::size_t n : {0u, 1u, 3u, 8u, 17u, 144u}) {
    const auto a = random_vector(rng, n);
    const auto b = random_vector(rng, n);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dot += a[i] * b[i];
      na += a[i] * a[i];
      nb += b[i] * b[i];
    }
    CHECK(t.dot(a.data(), b.data(), n) == doctest::Approx(dot).epsilon(1e-12));
    const auto terms = t.cosine_terms(a.data(), b.data(), n);
    CHECK(terms.dot == doctest::Approx(dot).epsilon(1e-12));
    CHECK(terms.norm_a_sq == doctest::Approx(na).epsilon(1e-12));
    CHECK(terms.norm_b_sq == doctest::Approx(nb).epsilon(1e-12));
  }
  for (int i = 0; i < 100; ++i) {
    const Bits256 a = random_bits(rng), b = random_bits(rng);
    CHECK(t.hamming256(a, b) == naive_hamming(a, b));
  }
  const Bits256 zero{}, ones{~0ull, ~0ull, ~0ull, ~0ull};
  CHECK(t.hamming256(zero, ones) == 256);
  CHECK(t.hamming256(ones, ones) == 0);
}

TEST_CASE("AVX2 kernels match the scalar reference") {
  const KernelTable* fast = kernels::avx2_table();
  if (fast == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this machine; skipping equivalence");
    return;
  }
  const KernelTable& ref = kernels::scalar_table();
  std::mt19937_64 rng(7);

  SUBCASE("dot and cosine terms, every tail length") {
    for (std::size_t n = 0; n <= 70; ++n) {
      CAPTURE(n);
      const auto a = random_vector(rng, n);
      const auto b = random_vector(rng, n);
      const double tol = dot_tolerance(a, b);
      CHECK(std::abs(fast->dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= tol);
      const auto f = fast->cosine_terms(a.data(), b.data(), n);
      const auto r = ref.cosine_terms(a.data(), b.data(), n);
      CHECK(std::abs(f.dot - r.dot) <= tol);
      CHECK(std::abs(f.norm_a_sq - r.norm_a_sq) <= dot_tolerance(a, a));
      CHECK(std::abs(f.norm_b_sq - r.norm_b_sq) <= dot_tolerance(b, b));
    }
  }

  SUBCASE("dot_rows, including the 8-wide special case") {
    for (std::size_t dim : {1u, 5u, 8u, 9u, 36u}) {
      for (std::size_t rows : {0u, 1u, 13u}) {
        const auto q = random_vector(rng, dim);
        const auto m = random_vector(rng, dim * rows);
        std::vector<double> of(rows), orf(rows);
        fast->dot_rows(q.data(), m.data(), rows, dim, of.data());
        ref.dot_rows(q.data(), m.data(), rows, dim, orf.data());
        for (std::size_t r = 0; r < rows; ++r) CHECK(of[r] == doctest::Approx(orf[r]).epsilon(1e-13));
      }
    }
  }

  SUBCASE("hamming is bit-exact") {
    std::vector<Bits256> refs(37);
    for (auto& r : refs) r = random_bits(rng);
    refs[5] = Bits256{};
    refs[6] = Bits256{~0ull, ~0ull, ~0ull, ~0ull};
    const Bits256 q = random_bits(rng);
    std::vector<int> a(refs.size()), b(refs.size());
    fast->hamming_many(q, refs.data(), refs.size(), a.data());
    ref.hamming_many(q, refs.data(), refs.size(), b.data());
    CHECK(a == b);
    for (const auto& r : refs) CHECK(fast->hamming256(q, r) == ref.hamming256(q, r));
  }

  SUBCASE("spectrum scaling is bit-exact") {
    std::uniform_real_distribution<float> d(-2.0f, 2.0f);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1001u}) {
      std::vector<std::complex<float>> src(n), o1(n), o2(n);
      std::vector<float> gain(n);
      for (std::size_t i = 0; i < n; ++i) {
        src[i] = {d(rng), d(rng)};
        gain[i] = d(rng);
      }
      fast->scale_spectrum(src.data(), gain.data(), o1.data(), n);
      ref.scale_spectrum(src.data(), gain.data(), o2.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::bit_cast<std::uint64_t>(o1[i]) == std::bit_cast<std::uint64_t>(o2[i]));
      }
    }
  }
}

TEST_CASE("active table can be overridden and restored") {
  const KernelTable& original = kernels::active();
  kernels::set_active(kernels::scalar_table());
  CHECK(kernels::active().name == "scalar");
  CHECK(kernels::hamming(Bits256{1, 0, 0, 0}, Bits256{}) == 1);
  kernels::set_active(original);
  CHECK(&kernels::active() == &original);
}
