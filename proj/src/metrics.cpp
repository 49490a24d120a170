#include "fncr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fncr {

double psnr(const Image& u, const Image& truth)
{
    require_same_n(u.n(), truth.n(), "psnr");
    const double peak = *std::max_element(truth.begin(), truth.end());
    if (!(peak > 0.0)) throw std::invalid_argument("psnr: reference maximum must be > 0");
    const double rmse = distance2(u, truth) / static_cast<double>(truth.n());
    if (rmse == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(peak / rmse);
}

} // namespace fncr
