#include "vprkit/matching.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "vprkit/error.hpp"
#include "vprkit/kernels.hpp"

namespace vprkit {

namespace {

std::vector<double> inverse_norms(const RegionalDescriptor& d) {
  std::vector<double> inv(d.size());
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double* v = d.values.data() + i * d.dim;
    const double norm = std::sqrt(k.dot(v, v, d.dim));
    inv[i] = norm < kZeroNorm ? 0.0 : 1.0 / norm;
  }
  return inv;
}

// Index of the smallest entry; first one wins ties.
std::size_t argmin(const int* values, std::size_t n) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

}  // namespace

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("cosine similarity of vectors with lengths " +
                            std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  const kernels::CosineTerms t = kernels::cosine_terms(a, b);
  const double na = std::sqrt(t.norm_a_sq);
  const double nb = std::sqrt(t.norm_b_sq);
  if (na < kZeroNorm || nb < kZeroNorm) return 0.0;
  return t.dot / (na * nb);
}

double match_cohog(const RegionalDescriptor& query, const RegionalDescriptor& reference) {
  if (query.size() == 0 || reference.size() == 0)
    throw EmptyDescriptor("CoHOG matching needs non-empty region sets");
  if (query.dim != reference.dim)
    throw DimensionMismatch("CoHOG region vectors differ in length");

  const auto& k = kernels::active();
  const std::vector<double> q_inv = inverse_norms(query);
  const std::vector<double> r_inv = inverse_norms(reference);
  std::vector<double> dots(reference.size());
  double total = 0.0;
  for (std::size_t i = 0; i < query.size(); ++i) {
    if (q_inv[i] == 0.0) continue;  // zero region: similarity 0 to everything
    k.dot_rows(query.values.data() + i * query.dim, reference.values.data(), reference.size(),
               query.dim, dots.data());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < dots.size(); ++j) best = std::max(best, dots[j] * r_inv[j]);
    total += best * q_inv[i];
  }
  return total / static_cast<double>(query.size());
}

double match_orb(const KeypointDescriptor& query, const KeypointDescriptor& reference,
                 int hamming_threshold) {
  const std::size_t nq = query.size();
  const std::size_t nr = reference.size();
  if (nq == 0 || nr == 0) throw EmptyDescriptor("ORB matching needs non-empty keypoint sets");

  const auto& k = kernels::active();
  std::vector<int> dist(nq * nr);
  for (std::size_t i = 0; i < nq; ++i)
    k.hamming_many(query.bits[i], reference.bits.data(), nr, dist.data() + i * nr);

  std::vector<std::size_t> q_to_r(nq);
  for (std::size_t i = 0; i < nq; ++i) q_to_r[i] = argmin(dist.data() + i * nr, nr);

  std::vector<int> column(nq);
  std::size_t good = 0;
  for (std::size_t j = 0; j < nr; ++j) {
    for (std::size_t i = 0; i < nq; ++i) column[i] = dist[i * nr + j];
    const std::size_t i = argmin(column.data(), nq);
    if (q_to_r[i] == j && column[i] <= hamming_threshold) ++good;
  }
  return static_cast<double>(good) / static_cast<double>(std::min(nq, nr));
}

double similarity(const Descriptor& query, const Descriptor& reference,
                  const MatchOptions& options) {
  if (query.kind() != reference.kind()) {
    throw KindMismatch(std::string("cannot match a ") + std::string(to_string(query.kind())) +
                       " descriptor against a " + std::string(to_string(reference.kind())) +
                       " descriptor");
  }
  switch (query.kind()) {
    case DescriptorKind::dense:
      return cosine_similarity(query.dense().values, reference.dense().values);
    case DescriptorKind::regional:
      return match_cohog(query.regional(), reference.regional());
    case DescriptorKind::keypoints:
      return match_orb(query.keypoints(), reference.keypoints(), options.hamming_threshold);
  }
  throw KindMismatch("unknown descriptor kind");
}

MatchResult retrieve(const Descriptor& query, std::span<const Descriptor> references,
                     const MatchOptions& options) {
  if (references.empty()) throw EmptyMap("reference map is empty");
  MatchResult result;
  if (options.keep_scores) result.per_reference_scores.reserve(references.size());
  for (std::size_t i = 0; i < references.size(); ++i) {
    const double s = similarity(query, references[i], options);
    if (options.keep_scores) result.per_reference_scores.push_back(s);
    if (i == 0 || s > result.score) {
      result.best_index = i;
      result.score = s;
    }
  }
  return result;
}

void write_scores_csv(const MatchResult& result, std::ostream& out) {
  out << "reference_index,score\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < result.per_reference_scores.size(); ++i)
    out << i << ',' << result.per_reference_scores[i] << '\n';
}

}  // namespace vprkit
