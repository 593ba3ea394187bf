#include "dirout/core.hpp"

#include <cmath>
#include <string>

#include "dirout/errors.hpp"

namespace dirout {

TimeGrid TimeGrid::equidistant(int k) {
    if (k < 2) throw GridMismatch("time grid needs at least two points, got " + std::to_string(k));
    TimeGrid grid;
    grid.points.resize(k);
    for (int j = 0; j < k; ++j) grid.points[j] = static_cast<double>(j) / (k - 1);
    return grid;
}

void validate_grid(const TimeGrid& grid) {
    const int k = grid.size();
    if (k < 2) throw GridMismatch("time grid needs at least two points, got " + std::to_string(k));
    constexpr double slack = 1e-12;
    for (int j = 0; j < k; ++j) {
        const double t = grid.points[j];
        if (!std::isfinite(t)) throw GridMismatch("non-finite time at index " + std::to_string(j));
        if (t < -slack || t > 1.0 + slack)
            throw GridMismatch("time " + std::to_string(t) + " outside [0,1] at index " +
                               std::to_string(j));
        if (j > 0 && !(grid.points[j - 1] < t))
            throw GridMismatch("time points not strictly increasing at index " + std::to_string(j));
    }
}

void validate_dataset(const FunctionalDataset& data) {
    validate_grid(data.grid);
    if (data.n < 2) throw TooFewCurves("need at least two curves, got " + std::to_string(data.n));
    if (data.p < 1) throw GridMismatch("curve dimension must be positive, got " + std::to_string(data.p));
    const std::size_t expected =
        static_cast<std::size_t>(data.n) * data.grid.size() * data.p;
    if (data.values.size() != expected)
        throw GridMismatch("value array has " + std::to_string(data.values.size()) +
                           " entries, expected " + std::to_string(expected));
    for (std::size_t idx = 0; idx < data.values.size(); ++idx) {
        if (!std::isfinite(data.values[idx]))
            throw NonFiniteValue("non-finite value at flat index " + std::to_string(idx));
    }
}

int LabelSet::count() const {
    int total = 0;
    for (const auto flag : flags) total += flag ? 1 : 0;
    return total;
}

std::vector<double> OutlyingnessSummary::y() const {
    std::vector<double> feature(mo);
    feature.push_back(vo);
    return feature;
}

}  // namespace dirout
