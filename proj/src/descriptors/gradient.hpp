#pragma once

#include <span>
#include <vector>

#include "vprkit/image.hpp"

namespace vprkit::detail {

/// Per-pixel centred-difference gradients ([-1, 0, +1], replicated borders).
struct GradientField {
  int width = 0;
  int height = 0;
  std::vector<double> magnitude;
  std::vector<double> orientation;  // unsigned, degrees in [0, 180)
};

GradientField compute_gradients(const GrayImage& image);

/// Adds the magnitude-weighted orientation votes of the side x side cell at
/// (x0, y0) into `hist` (size = bins). Bin b is centred on b * 180 / bins
/// degrees; each vote is split linearly between the two nearest centres.
void accumulate_cell(const GradientField& field, int x0, int y0, int side,
                     std::span<double> hist);

/// v <- v / sqrt(|v|^2 + eps^2).
void l2_normalize(std::span<double> v, double epsilon);

}  // namespace vprkit::detail
