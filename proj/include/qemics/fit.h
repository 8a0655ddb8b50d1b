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

#ifndef QEMICS_FIT_H
#define QEMICS_FIT_H

#include <utility>
#include <vector>

namespace qem {

/// value = prefactor * x^exponent, fitted by least squares on log-log data.
struct ScalingFit {
    double exponent = 0;
    double prefactor = 0;
    double r_squared = 0;
    double se_exponent = 0;
    std::vector<std::pair<double, double>> points;
};

/// Needs at least three points with positive coordinates and two distinct x values.
ScalingFit fit_power_law(const std::vector<std::pair<double, double>> &points);

}  // namespace qem

#endif
