#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace dirout {

// Cross-section of the curves at one time point; rows are points in R^p.
using PointCloud = Eigen::MatrixXd;

// Median with even-size averaging. The input is copied and must be finite.
double median(std::vector<double> values);

// Median absolute deviation about the median. No consistency factor.
double mad(std::vector<double> values);

// Robust z-score |x - median| / mad of a univariate sample. Degenerate
// spread: 0 when x equals the median exactly, +infinity otherwise.
double univariate_sdo(const std::vector<double>& values, double x);

// Unit projection directions approximating the directional supremum for
// p >= 2. One set is sampled per dataset and shared by every time point
// and query so outlyingness stays comparable across the grid.
struct DirectionSet {
    Eigen::MatrixXd dirs;  // count x p, unit rows

    int count() const { return static_cast<int>(dirs.rows()); }
    int dim() const { return static_cast<int>(dirs.cols()); }

    // Uniform directions via normalized Gaussian draws.
    static DirectionSet sample(int p, int count, std::uint64_t seed);
};

// Outlyingness of x against the cloud: exact |x - med| / mad for p == 1,
// otherwise the max of the projected univariate values over dirs.
// Directions with zero projected mad and zero deviation contribute 0;
// zero mad with nonzero deviation makes the result +infinity.
double multivariate_sdo(const PointCloud& cloud, const Eigen::VectorXd& x,
                        const DirectionSet& dirs);

// 1 / (1 + sdo); +infinity maps to 0.
double projection_depth(const PointCloud& cloud, const Eigen::VectorXd& x,
                        const DirectionSet& dirs);

// The sample point of maximal projection depth; ties within 1e-12 in depth
// are averaged coordinate-wise.
Eigen::VectorXd deepest_point(const PointCloud& cloud, const DirectionSet& dirs);

// sdo(x) times the unit vector from the deepest point toward x; the zero
// vector when x lies within 1e-12 of the deepest point.
// Throws InfiniteOutlyingness when sdo(x) is +infinity.
Eigen::VectorXd directional_outlyingness(const PointCloud& cloud, const Eigen::VectorXd& x,
                                         const DirectionSet& dirs);

// Bulk evaluation for one cross-section: per-point outlyingness sharing the
// per-direction medians and mads, plus the tie-averaged deepest point.
// sdo entries may be +infinity; callers decide the failure policy.
struct CloudOutlyingness {
    std::vector<double> sdo;
    Eigen::VectorXd deepest;
};

CloudOutlyingness cloud_outlyingness(const PointCloud& cloud, const DirectionSet& dirs);

}  // namespace dirout
