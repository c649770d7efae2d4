#include "asplund/distance_map.hpp"

#include <algorithm>
#include <cmath>

namespace asplund {

double max_abs_difference(const RealArray& a, const RealArray& b)
{
    if (!a.same_shape(b)) {
        throw Error("max_abs_difference: shape mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) {
            continue;
        }
        const double d = std::abs(a[i] - b[i]);
        worst = std::isnan(d) ? INFINITY : std::max(worst, d);
    }
    return worst;
}

}  // namespace asplund
