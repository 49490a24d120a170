#pragma once

#include "fncr/grid.hpp"

namespace fncr {

/// 20 log10(max(truth) / rmse); +infinity when u == truth.
double psnr(const Image& u, const Image& truth);

} // namespace fncr
