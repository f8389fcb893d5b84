#pragma once

#include "vprkit/kernels.hpp"

namespace vprkit::kernels::detail {

#if defined(VPRKIT_HAVE_AVX2)
// Defined in kernels_avx2.cpp, which is the only TU built with -mavx2.
const KernelTable& avx2_table_unchecked() noexcept;
#endif

}  // namespace vprkit::kernels::detail
