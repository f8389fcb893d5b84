#include <string>

#include "descriptors/gradient.hpp"
#include "vprkit/encoders.hpp"
#include "vprkit/error.hpp"

namespace vprkit {

void HogParams::validate() const {
  if (cell_side < 2) throw InvalidArgument("hog cell_side must be >= 2");
  if (block_side < cell_side || block_side % cell_side != 0)
    throw InvalidArgument("hog block_side must be a positive multiple of cell_side");
  if (bins < 2) throw InvalidArgument("hog bins must be >= 2");
  if (!(epsilon > 0.0)) throw InvalidArgument("hog epsilon must be positive");
}

DenseDescriptor encode_hog(const GrayImage& image, const HogParams& params) {
  params.validate();
  if (image.width() < params.block_side || image.height() < params.block_side) {
    throw ImageTooSmall("HOG needs at least " + std::to_string(params.block_side) + "x" +
                        std::to_string(params.block_side) + " pixels, got " +
                        std::to_string(image.width()) + "x" + std::to_string(image.height()));
  }

  const detail::GradientField field = detail::compute_gradients(image);
  const int cells_per_block = params.block_side / params.cell_side;
  const int blocks_x = image.width() / params.block_side;
  const int blocks_y = image.height() / params.block_side;
  const std::size_t block_len =
      static_cast<std::size_t>(cells_per_block) * cells_per_block * params.bins;

  DenseDescriptor out;
  out.values.assign(static_cast<std::size_t>(blocks_x) * blocks_y * block_len, 0.0);
  std::span<double> all(out.values);

  std::size_t offset = 0;
  for (int by = 0; by < blocks_y; ++by) {
    for (int bx = 0; bx < blocks_x; ++bx) {
      std::span<double> block = all.subspan(offset, block_len);
      std::size_t cell_offset = 0;
      for (int cy = 0; cy < cells_per_block; ++cy) {
        for (int cx = 0; cx < cells_per_block; ++cx) {
          detail::accumulate_cell(field, bx * params.block_side + cx * params.cell_side,
                                  by * params.block_side + cy * params.cell_side,
                                  params.cell_side, block.subspan(cell_offset, params.bins));
          cell_offset += params.bins;
        }
      }
      detail::l2_normalize(block, params.epsilon);
      offset += block_len;
    }
  }
  return out;
}

}  // namespace vprkit
