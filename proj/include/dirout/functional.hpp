#pragma once

#include <cstddef>
#include <vector>

#include "dirout/core.hpp"

namespace dirout {

// Directional outlyingness of every curve at every grid point, stored in
// the same curve-major layout as FunctionalDataset.
struct OutlyingnessField {
    int n = 0;
    int k = 0;
    int p = 0;
    std::vector<double> o;

    double at(int i, int j, int c) const {
        return o[(static_cast<std::size_t>(i) * k + j) * p + c];
    }
    double& at(int i, int j, int c) {
        return o[(static_cast<std::size_t>(i) * k + j) * p + c];
    }
};

// Evaluates the pointwise directional outlyingness at each grid point with
// one shared DirectionSet sampled from cfg.
// Throws InfiniteOutlyingness carrying the offending curve and time index.
OutlyingnessField outlyingness_field(const FunctionalDataset& data, const DepthConfig& cfg);

// Per-curve summaries: mo = (1/k) sum_j O_j, vo = (1/k) sum_j |O_j - mo|^2,
// fo = (1/k) sum_j |O_j|^2. The equal 1/k weights make fo = |mo|^2 + vo
// an algebraic identity.
std::vector<OutlyingnessSummary> summarize(const OutlyingnessField& field);

}  // namespace dirout
