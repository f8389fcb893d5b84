#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "vprkit/error.hpp"
#include "vprkit/matching.hpp"

using namespace vprkit;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0) {
  std::uniform_real_distribution<double> d(lo, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

double naive_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return d / std::sqrt(na * nb);
}

RegionalDescriptor regions(std::initializer_list<std::vector<double>> vs) {
  RegionalDescriptor d;
  d.dim = static_cast<int>(vs.begin()->size());
  for (const auto& v : vs) {
    d.centers.push_back({0, 0});
    d.values.insert(d.values.end(), v.begin(), v.end());
  }
  return d;
}

KeypointDescriptor keypoints(std::initializer_list<Bits256> bits) {
  KeypointDescriptor d;
  for (const auto& b : bits) {
    d.keypoints.push_back({});
    d.bits.push_back(b);
  }
  return d;
}

// First `n` bits set.
Bits256 low_bits(int n) {
  Bits256 b{};
  for (int i = 0; i < n; ++i) b[i / 64] |= std::uint64_t{1} << (i % 64);
  return b;
}

}  // namespace

TEST_CASE("cosine similarity examples") {
  const std::vector<double> a{1, 2, 3};
  CHECK(std::abs(cosine_similarity(a, a) - 1.0) <= 1e-12);
  CHECK(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  CHECK(cosine_similarity(std::vector<double>{1, 1}, std::vector<double>{1, 0}) ==
        doctest::Approx(0.7071).epsilon(1e-4));
  CHECK(cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{1, 0}) == 0.0);
  CHECK_THROWS_AS(cosine_similarity(std::vector<double>{1}, std::vector<double>{1, 2}),
                  DimensionMismatch);
}

TEST_CASE("cosine similarity properties") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 600;
    const auto a = random_vector(rng, n);
    const auto b = random_vector(rng, n);
    const double s = cosine_similarity(a, b);
    CHECK(std::abs(cosine_similarity(a, a) - 1.0) <= 1e-12);
    CHECK(s == cosine_similarity(b, a));
    CHECK(s >= -1.0 - 1e-12);
    CHECK(s <= 1.0 + 1e-12);
    CHECK(std::abs(s - naive_cosine(a, b)) <= 1e-12);
    for (double alpha : {0.5, 2.0, 10.0}) {
      std::vector<double> scaled(a);
      for (double& x : scaled) x *= alpha;
      CHECK(std::abs(cosine_similarity(scaled, b) - s) <= 1e-9);
    }
  }
}

TEST_CASE("CoHOG mean of maxima") {
  const std::vector<double> u{1, 0};
  const std::vector<double> v{0.5, std::sqrt(3.0) / 2};  // cos(u, v) = 0.5
  CHECK(std::abs(match_cohog(regions({u, v}), regions({u})) - 0.75) <= 1e-9);
  CHECK(std::abs(match_cohog(regions({u, v}), regions({u, v})) - 1.0) <= 1e-9);
  CHECK(match_cohog(regions({{0, 1}}), regions({{1, 0}, {2, 0}})) == 0.0);
  // Zero-norm query regions score 0 and still count in the mean.
  CHECK(std::abs(match_cohog(regions({u, {0, 0}}), regions({u})) - 0.5) <= 1e-12);
  CHECK_THROWS_AS(match_cohog(RegionalDescriptor{2, {}, {}}, regions({u})), EmptyDescriptor);
  CHECK_THROWS_AS(match_cohog(regions({{1, 0, 0}}), regions({u})), DimensionMismatch);
}

TEST_CASE("CoHOG matching agrees with a brute-force evaluation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 1 + static_cast<int>(rng() % 20);
    RegionalDescriptor q{dim, {}, {}}, r{dim, {}, {}};
    const std::size_t nq = 1 + rng() % 9, nr = 1 + rng() % 9;
    for (std::size_t i = 0; i < nq; ++i) {
      auto v = random_vector(rng, dim, 0.0);
      q.centers.push_back({});
      q.values.insert(q.values.end(), v.begin(), v.end());
    }
    for (std::size_t i = 0; i < nr; ++i) {
      auto v = random_vector(rng, dim, 0.0);
      r.centers.push_back({});
      r.values.insert(r.values.end(), v.begin(), v.end());
    }
    double total = 0.0;
    for (std::size_t i = 0; i < nq; ++i) {
      std::vector<double> a(q.vector(i).begin(), q.vector(i).end());
      double best = -2.0;
      for (std::size_t j = 0; j < nr; ++j) {
        std::vector<double> b(r.vector(j).begin(), r.vector(j).end());
        best = std::max(best, naive_cosine(a, b));
      }
      total += best;
    }
    const double s = match_cohog(q, r);
    CHECK(std::abs(s - total / nq) <= 1e-12);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0 + 1e-12);
    CHECK(std::abs(match_cohog(q, q) - 1.0) <= 1e-9);
  }
}

TEST_CASE("ORB mutual nearest neighbours") {
  const Bits256 zero{};
  const Bits256 ones{~0ull, ~0ull, ~0ull, ~0ull};
  CHECK(match_orb(keypoints({zero, ones}), keypoints({zero, ones})) == 1.0);
  CHECK(match_orb(keypoints({zero}), keypoints({ones})) == 0.0);

  // Query {a, b}, reference {c, d, e}, distances checked below:
  //   a-c 10, a-d 200, a-e 256
  //   b-c 90, b-d 100, b-e 156
  // a<->c is mutual. b's nearest is c, whose nearest is a, so b has no
  // mutual partner. One match over min(2, 3) = 0.5.
  const Bits256 a = zero;
  const Bits256 b = low_bits(100);
  const Bits256 c = low_bits(10);
  const Bits256 d = low_bits(200);
  const Bits256 e = ones;
  const auto q = keypoints({a, b});
  const auto r = keypoints({c, d, e});
  // Brute-force table.
  int table[2][3];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) {
      int n = 0;
      for (int w = 0; w < 4; ++w) n += std::popcount(q.bits[i][w] ^ r.bits[j][w]);
      table[i][j] = n;
    }
  CHECK(table[0][0] == 10);
  CHECK(table[0][1] == 200);
  CHECK(table[0][2] == 256);
  CHECK(table[1][0] == 90);
  CHECK(table[1][1] == 100);
  CHECK(table[1][2] == 156);
  CHECK(match_orb(q, r) == 0.5);
  CHECK(match_orb(q, r, 5) == 0.0);  // the one mutual pair is beyond the threshold
  CHECK_THROWS_AS(match_orb(KeypointDescriptor{}, r), EmptyDescriptor);
}

TEST_CASE("ORB similarity is symmetric and bounded") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    KeypointDescriptor q, r;
    const std::size_t nq = 1 + rng() % 12, nr = 1 + rng() % 12;
    Bits256 base{rng(), rng(), rng(), rng()};
    auto near = [&] {
      Bits256 b = base;
      for (int k = 0; k < 20; ++k) {
        const auto bit = rng() % 256;
        b[bit / 64] ^= std::uint64_t{1} << (bit % 64);
      }
      return b;
    };
    for (std::size_t i = 0; i < nq; ++i) {
      q.keypoints.push_back({});
      q.bits.push_back(rng() % 2 ? near() : Bits256{rng(), rng(), rng(), rng()});
    }
    for (std::size_t i = 0; i < nr; ++i) {
      r.keypoints.push_back({});
      r.bits.push_back(rng() % 2 ? near() : Bits256{rng(), rng(), rng(), rng()});
    }
    const double s = match_orb(q, r);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    CHECK(match_orb(q, q) == 1.0);
  }
}

TEST_CASE("retrieve picks the argmax with lowest-index ties") {
  std::mt19937_64 rng(5);
  std::vector<Descriptor> refs;
  std::vector<std::vector<double>> raw;
  for (int i = 0; i < 10; ++i) {
    raw.push_back(random_vector(rng, 32));
    refs.emplace_back(DenseDescriptor{raw.back()});
  }
  const auto q = random_vector(rng, 32);
  std::size_t best = 0;
  double best_score = -2.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double s = naive_cosine(q, raw[i]);
    if (s > best_score) best_score = s, best = i;
  }
  MatchOptions keep;
  keep.keep_scores = true;
  const MatchResult m = retrieve(Descriptor(DenseDescriptor{q}), refs, keep);
  CHECK(m.best_index == best);
  CHECK(m.score == doctest::Approx(best_score).epsilon(1e-12));
  REQUIRE(m.per_reference_scores.size() == 10);

  const MatchResult self = retrieve(refs[3], refs);
  CHECK(self.best_index == 3);
  CHECK(self.per_reference_scores.empty());

  std::vector<Descriptor> dup{refs[7], refs[2], refs[7]};
  CHECK(retrieve(refs[7], dup).best_index == 0);
  std::vector<Descriptor> one{refs[1]};
  CHECK(retrieve(Descriptor(DenseDescriptor{std::vector<double>(32, 0.0)}), one).best_index == 0);

  std::ostringstream csv;
  write_scores_csv(m, csv);
  CHECK(csv.str().rfind("reference_index,score\n0,", 0) == 0);

  CHECK_THROWS_AS(retrieve(refs[0], std::span<const Descriptor>{}), EmptyMap);
  std::vector<Descriptor> mixed{Descriptor(regions({{1.0}}))};
  CHECK_THROWS_AS(retrieve(refs[0], mixed), KindMismatch);
}
