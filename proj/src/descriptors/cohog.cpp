#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "descriptors/gradient.hpp"
#include "vprkit/encoders.hpp"
#include "vprkit/error.hpp"

namespace vprkit {

void CohogParams::validate() const {
  if (internal_side < 0) throw InvalidArgument("cohog internal_side must be >= 0");
  if (cell_side < 2) throw InvalidArgument("cohog cell_side must be >= 2");
  if (bins < 2) throw InvalidArgument("cohog bins must be >= 2");
  if (patch_side < cell_side || patch_side % cell_side != 0)
    throw InvalidArgument("cohog patch_side must be a positive multiple of cell_side");
  if (!(entropy_threshold >= 0.0 && entropy_threshold <= 1.0))
    throw InvalidArgument("cohog entropy_threshold is a fraction in [0, 1]");
  if (!(epsilon > 0.0)) throw InvalidArgument("cohog epsilon must be positive");
}

double max_patch_entropy(int patch_side) noexcept {
  const double levels = std::min(256.0, static_cast<double>(patch_side) * patch_side);
  return std::log2(levels);
}

std::vector<EntropyPatch> entropy_map(const GrayImage& image, int patch_side) {
  if (patch_side < 1) throw InvalidArgument("patch_side must be >= 1");
  const std::vector<std::uint8_t> q = image.to_u8();
  const int nx = image.width() / patch_side;
  const int ny = image.height() / patch_side;
  const double count = static_cast<double>(patch_side) * patch_side;

  std::vector<EntropyPatch> patches;
  patches.reserve(static_cast<std::size_t>(nx) * ny);
  std::array<int, 256> hist{};
  for (int py = 0; py < ny; ++py) {
    for (int px = 0; px < nx; ++px) {
      hist.fill(0);
      const int x0 = px * patch_side;
      const int y0 = py * patch_side;
      for (int y = y0; y < y0 + patch_side; ++y) {
        const std::uint8_t* row = q.data() + static_cast<std::size_t>(y) * image.width();
        for (int x = x0; x < x0 + patch_side; ++x) ++hist[row[x]];
      }
      double h = 0.0;
      for (int c : hist) {
        if (c == 0) continue;
        const double p = c / count;
        h -= p * std::log2(p);
      }
      patches.push_back({{x0, y0}, h});
    }
  }
  return patches;
}

RegionalDescriptor encode_cohog(const GrayImage& input, const CohogParams& params) {
  params.validate();
  const GrayImage working =
      params.internal_side > 0 ? resize(input, Resolution{params.internal_side}) : input;
  if (working.width() < params.patch_side || working.height() < params.patch_side) {
    throw ImageTooSmall("CoHOG needs at least " + std::to_string(params.patch_side) + "x" +
                        std::to_string(params.patch_side) + " pixels, got " +
                        std::to_string(working.width()) + "x" + std::to_string(working.height()));
  }

  const std::vector<EntropyPatch> patches = entropy_map(working, params.patch_side);
  const double cutoff = params.entropy_threshold * max_patch_entropy(params.patch_side);

  std::vector<const EntropyPatch*> selected;
  for (const EntropyPatch& p : patches) {
    if (p.entropy >= cutoff) selected.push_back(&p);
  }
  if (selected.empty()) {
    // Never empty: keep the single most informative patch (first on ties).
    selected.push_back(&*std::max_element(
        patches.begin(), patches.end(),
        [](const EntropyPatch& a, const EntropyPatch& b) { return a.entropy < b.entropy; }));
  }

  const detail::GradientField field = detail::compute_gradients(working);
  const int cells = params.patch_side / params.cell_side;

  RegionalDescriptor out;
  out.dim = cells * cells * params.bins;
  out.centers.reserve(selected.size());
  out.values.assign(selected.size() * static_cast<std::size_t>(out.dim), 0.0);
  std::span<double> all(out.values);
  for (std::size_t r = 0; r < selected.size(); ++r) {
    const PixelPoint origin = selected[r]->origin;
    out.centers.push_back({origin.x + params.patch_side / 2, origin.y + params.patch_side / 2});
    std::span<double> region = all.subspan(r * out.dim, out.dim);
    for (int cy = 0; cy < cells; ++cy) {
      for (int cx = 0; cx < cells; ++cx) {
        detail::accumulate_cell(field, origin.x + cx * params.cell_side,
                                origin.y + cy * params.cell_side, params.cell_side,
                                region.subspan((cy * cells + cx) * params.bins, params.bins));
      }
    }
    detail::l2_normalize(region, params.epsilon);
  }
  return out;
}

}  // namespace vprkit
