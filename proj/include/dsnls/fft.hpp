#pragma once

#include <span>

#include "dsnls/grid.hpp"

namespace ds::detail {

// Unnormalized in-place n-D DFT over the grid's active axes.
// sign = -1 gives sum_j f_j e^{-2 pi i j k / N}, sign = +1 the conjugate kernel.
void fft_inplace(const GridSpec& g, std::span<cplx> data, int sign);

}  // namespace ds::detail
