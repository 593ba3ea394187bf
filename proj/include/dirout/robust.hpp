#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dirout/core.hpp"

namespace dirout {

// Minimum covariance determinant fit over h-point subsets.
struct McdFit {
    std::vector<int> subset;   // h indices, ascending
    Eigen::VectorXd location;  // mean of the subset rows
    Eigen::MatrixXd scatter;   // (1/h)-covariance of the subset rows, SPD
    double determinant = 0.0;
    int h = 0;
};

// FAST-MCD: random (d+1)-point elemental starts inflated to h points,
// refined by concentration steps until the determinant converges
// (relative change < 1e-12, at most 100 steps); the lowest-determinant
// candidate wins. h == n is the classical fit. Deterministic given seed.
// Requires d+1 <= h <= n and n > d.
// Throws SingularScatter when every candidate scatter is rank-deficient
// (smallest eigenvalue < 1e-12 x largest).
McdFit fast_mcd(const Eigen::MatrixXd& y, int h, std::uint64_t seed, int n_starts = 500);

// Squared Mahalanobis distances (y_i - location)^T scatter^{-1} (y_i - location).
// Throws SingularScatter when the scatter is numerically singular.
Eigen::VectorXd robust_distances(const Eigen::MatrixXd& y, const McdFit& fit);

enum class CutoffMethod { simulated, asymptotic };

// Scaled-F calibration of MCD distances: c (m-d+1) / (m d) * rmd2 is
// treated as F_{d, m-d+1}; cutoff is that distribution's alpha-quantile.
struct CutoffParams {
    double c = 1.0;
    double m = 0.0;
    double alpha = 0.993;
    double cutoff = 0.0;
    int d = 0;

    double scale() const { return c * (m - d + 1.0) / (m * d); }
};

// Calibration constants for an MCD(h) fit of n Gaussian points in
// dimension d. simulated: refit MCD on `replications` standard normal
// samples and moment-match the distances of the points outside each
// subset against the scaled F law. asymptotic: closed-form large-n
// approximation. h == n returns the classical c = 1, m = n - 1.
// Results are memoized per argument tuple.
// Throws InvalidDf when the fitted m fails m > d - 1.
CutoffParams hardin_rocke_params(int n, int d, int h, CutoffMethod method,
                                 std::uint64_t seed, double alpha = 0.993,
                                 int replications = 500);

// Scaled distances and flags (scaled > cutoff) for given calibration.
std::pair<std::vector<double>, std::vector<std::uint8_t>> apply_cutoff(
    const std::vector<double>& rmd2, const CutoffParams& params);

struct DetectionConfig {
    double alpha = 0.993;
    double h_frac = 0.75;
    std::uint64_t seed = 0;
    CutoffMethod method = CutoffMethod::simulated;
    int mcd_starts = 500;
    // Reuse a precomputed calibration (must match n, d, h, alpha).
    std::optional<CutoffParams> cutoff;
};

struct DetectionReport {
    std::vector<double> rmd2;
    std::vector<double> scaled;
    double cutoff = 0.0;
    std::vector<std::uint8_t> flags;
    McdFit fit;
    CutoffParams params;
};

// Feature rows (mo^T, vo) per curve, n x (p+1).
Eigen::MatrixXd feature_matrix(const std::vector<OutlyingnessSummary>& summaries);

// Three-step flagging: MCD fit of the feature rows with h = floor(h_frac*n),
// robust distances, scaled-F cutoff at cfg.alpha. Requires n >= p + 3.
DetectionReport detect(const std::vector<OutlyingnessSummary>& summaries,
                       const DetectionConfig& cfg);

}  // namespace dirout
