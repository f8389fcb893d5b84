#include "vprkit/descriptor.hpp"

namespace vprkit {

std::string_view to_string(DescriptorKind kind) noexcept {
  switch (kind) {
    case DescriptorKind::dense:
      return "dense";
    case DescriptorKind::regional:
      return "regional";
    case DescriptorKind::keypoints:
      return "keypoints";
  }
  return "unknown";
}

}  // namespace vprkit
