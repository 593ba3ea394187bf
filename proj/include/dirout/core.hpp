#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dirout {

// Strictly increasing time points in [0, 1], at least two.
struct TimeGrid {
    std::vector<double> points;

    int size() const { return static_cast<int>(points.size()); }
    double operator[](int j) const { return points[j]; }

    // k equidistant points covering [0, 1] inclusive.
    static TimeGrid equidistant(int k);
};

// Throws GridMismatch when the grid invariants fail.
void validate_grid(const TimeGrid& grid);

// n curves observed on one shared grid of k points, each observation in R^p.
// Storage is curve-major: value(i, j, c) = values[(i*k + j)*p + c].
struct FunctionalDataset {
    TimeGrid grid;
    int n = 0;
    int p = 0;
    std::vector<double> values;

    int k() const { return grid.size(); }

    double value(int i, int j, int c) const {
        return values[(static_cast<std::size_t>(i) * grid.size() + j) * p + c];
    }
    double& value(int i, int j, int c) {
        return values[(static_cast<std::size_t>(i) * grid.size() + j) * p + c];
    }
};

// Throws NonFiniteValue, GridMismatch, or TooFewCurves (n < 2).
void validate_dataset(const FunctionalDataset& data);

// Outlier indicators, one per curve. Ground truth for simulated data.
struct LabelSet {
    std::vector<std::uint8_t> flags;

    int size() const { return static_cast<int>(flags.size()); }
    int count() const;  // flagged curves
};

// Settings for the random projection directions shared by all pointwise
// computations on one dataset. p == 1 is computed exactly and ignores
// n_directions. Time averages use a constant weight, so discrete summaries
// are plain means over the normalized [0, 1] grid.
struct DepthConfig {
    int n_directions = 200;
    std::uint64_t seed = 0;
};

// Per-curve summary of the outlyingness curve: mo is its time average
// (length p), vo the average squared distance from mo, fo the average
// squared norm. fo == |mo|^2 + vo holds by construction.
struct OutlyingnessSummary {
    std::vector<double> mo;
    double vo = 0.0;
    double fo = 0.0;

    // Detection feature (mo^T, vo)^T of length p + 1.
    std::vector<double> y() const;
};

}  // namespace dirout
