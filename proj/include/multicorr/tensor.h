// Copyright 2026 The multicorr Authors
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

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace multicorr {

/// Mode-k product of a dense row-major tensor (first dimension slowest) with a
/// matrix: out[.., r, ..] = sum_t m(r, t) * in[.., t, ..]. Updates dims[k] to
/// m.rows().
std::vector<double> mode_product(
    const std::vector<double> &in, std::vector<size_t> &dims, size_t k, const Eigen::MatrixXd &m);

}  // namespace multicorr
