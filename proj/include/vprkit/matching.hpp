#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "vprkit/descriptor.hpp"

namespace vprkit {

/// Norm below which a vector counts as zero and its cosine similarity is 0.
inline constexpr double kZeroNorm = 1e-12;

/// a.b / (|a| |b|), or 0 when either norm is below kZeroNorm.
/// Throws DimensionMismatch when the lengths differ.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Mean over query regions of the best cosine similarity against any
/// reference region. Throws EmptyDescriptor / DimensionMismatch.
double match_cohog(const RegionalDescriptor& query, const RegionalDescriptor& reference);

/// Count of mutual nearest neighbours (Hamming) at distance <= hamming_threshold,
/// divided by min(|query|, |reference|). Nearest-neighbour ties go to the lowest index.
/// Throws EmptyDescriptor.
double match_orb(const KeypointDescriptor& query, const KeypointDescriptor& reference,
                 int hamming_threshold = 64);

struct MatchOptions {
  int hamming_threshold = 64;
  bool keep_scores = false;
};

/// Kind-appropriate similarity: cosine (dense), match_cohog (regional), match_orb (keypoints).
/// Throws KindMismatch.
double similarity(const Descriptor& query, const Descriptor& reference,
                  const MatchOptions& options = {});

struct MatchResult {
  std::size_t best_index = 0;
  double score = 0.0;
  /// Filled only when MatchOptions::keep_scores is set.
  std::vector<double> per_reference_scores;
};

/// Scores `query` against every reference and returns the argmax; ties go to
/// the lowest reference index. Throws EmptyMap / KindMismatch.
MatchResult retrieve(const Descriptor& query, std::span<const Descriptor> references,
                     const MatchOptions& options = {});

/// `reference_index,score` rows (requires keep_scores).
void write_scores_csv(const MatchResult& result, std::ostream& out);

}  // namespace vprkit
