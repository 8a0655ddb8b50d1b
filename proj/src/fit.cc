// Copyright 2026 The qem-ics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qemics/fit.h"

#include <cmath>
#include <stdexcept>

namespace qem {

ScalingFit fit_power_law(const std::vector<std::pair<double, double>> &points) {
    if (points.size() < 3) {
        throw std::invalid_argument("power-law fit needs at least three points");
    }
    const double m = static_cast<double>(points.size());
    double sx = 0, sy = 0;
    for (auto [x, y] : points) {
        if (!(x > 0) || !(y > 0)) {
            throw std::invalid_argument("power-law fit needs positive values");
        }
        sx += std::log(x);
        sy += std::log(y);
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : points) {
        const double dx = std::log(x) - mx, dy = std::log(y) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0) {
        throw std::invalid_argument("power-law fit needs distinct x values");
    }
    ScalingFit fit;
    fit.points = points;
    fit.exponent = sxy / sxx;
    fit.prefactor = std::exp(my - fit.exponent * mx);
    const double sse = std::max(0.0, syy - fit.exponent * sxy);
    fit.r_squared = syy > 0 ? 1 - sse / syy : 1.0;
    fit.se_exponent = points.size() > 2 ? std::sqrt(sse / (m - 2) / sxx) : 0.0;
    return fit;
}

}  // namespace qem
