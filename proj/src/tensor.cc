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

#include "multicorr/tensor.h"

namespace multicorr {

std::vector<double> mode_product(
    const std::vector<double> &in, std::vector<size_t> &dims, size_t k, const Eigen::MatrixXd &m) {
    size_t pre = 1;
    for (size_t i = 0; i < k; i++) {
        pre *= dims[i];
    }
    size_t mid = dims[k];
    size_t post = 1;
    for (size_t i = k + 1; i < dims.size(); i++) {
        post *= dims[i];
    }
    size_t rows = static_cast<size_t>(m.rows());
    std::vector<double> out(pre * rows * post, 0.0);
    for (size_t p = 0; p < pre; p++) {
        for (size_t t = 0; t < mid; t++) {
            const double *src = &in[(p * mid + t) * post];
            for (size_t r = 0; r < rows; r++) {
                double coef = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t));
                if (coef == 0) {
                    continue;
                }
                double *dst = &out[(p * rows + r) * post];
                for (size_t q = 0; q < post; q++) {
                    dst[q] += coef * src[q];
                }
            }
        }
    }
    dims[k] = rows;
    return out;
}

}  // namespace multicorr
