#include "dirout/pointwise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dirout/errors.hpp"
#include "dirout/rng.hpp"

namespace dirout {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDepthTieTol = 1e-12;
constexpr double kCenterTol = 1e-12;

double median_inplace(std::vector<double>& values) {
    const std::size_t n = values.size();
    const std::size_t mid = n / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    const double upper = values[mid];
    if (n % 2 == 1) return upper;
    std::nth_element(values.begin(), values.begin() + mid - 1, values.begin() + mid);
    return 0.5 * (values[mid - 1] + upper);
}

// |dev| / mad with the degenerate-spread policy.
double sdo_from_deviation(double dev, double madv) {
    const double a = std::abs(dev);
    if (madv == 0.0) return a == 0.0 ? 0.0 : kInf;
    return a / madv;
}

// Per-point sdo over all directions, or the exact p == 1 values.
std::vector<double> sample_sdo(const PointCloud& cloud, const DirectionSet& dirs) {
    const int n = static_cast<int>(cloud.rows());
    const int p = static_cast<int>(cloud.cols());
    std::vector<double> sdo(n, 0.0);
    std::vector<double> work(n);

    if (p == 1) {
        for (int i = 0; i < n; ++i) work[i] = cloud(i, 0);
        const double med = median_inplace(work);
        for (int i = 0; i < n; ++i) work[i] = std::abs(cloud(i, 0) - med);
        const double madv = median_inplace(work);
        for (int i = 0; i < n; ++i) sdo[i] = sdo_from_deviation(cloud(i, 0) - med, madv);
        return sdo;
    }

    Eigen::VectorXd proj(n);
    for (int d = 0; d < dirs.count(); ++d) {
        proj.noalias() = cloud * dirs.dirs.row(d).transpose();
        for (int i = 0; i < n; ++i) work[i] = proj[i];
        const double med = median_inplace(work);
        for (int i = 0; i < n; ++i) work[i] = std::abs(proj[i] - med);
        const double madv = median_inplace(work);
        for (int i = 0; i < n; ++i)
            sdo[i] = std::max(sdo[i], sdo_from_deviation(proj[i] - med, madv));
    }
    return sdo;
}

Eigen::VectorXd deepest_from_sdo(const PointCloud& cloud, const std::vector<double>& sdo) {
    const int n = static_cast<int>(cloud.rows());
    double best_depth = -1.0;
    for (int i = 0; i < n; ++i) {
        const double depth = std::isinf(sdo[i]) ? 0.0 : 1.0 / (1.0 + sdo[i]);
        best_depth = std::max(best_depth, depth);
    }
    Eigen::VectorXd center = Eigen::VectorXd::Zero(cloud.cols());
    int ties = 0;
    for (int i = 0; i < n; ++i) {
        const double depth = std::isinf(sdo[i]) ? 0.0 : 1.0 / (1.0 + sdo[i]);
        if (best_depth - depth <= kDepthTieTol) {
            center += cloud.row(i).transpose();
            ++ties;
        }
    }
    return center / ties;
}

}  // namespace

double median(std::vector<double> values) { return median_inplace(values); }

double mad(std::vector<double> values) {
    const double med = median_inplace(values);
    for (auto& v : values) v = std::abs(v - med);
    return median_inplace(values);
}

double univariate_sdo(const std::vector<double>& values, double x) {
    std::vector<double> work(values);
    const double med = median_inplace(work);
    work = values;
    for (auto& v : work) v = std::abs(v - med);
    const double madv = median_inplace(work);
    return sdo_from_deviation(x - med, madv);
}

DirectionSet DirectionSet::sample(int p, int count, std::uint64_t seed) {
    DirectionSet set;
    set.dirs.resize(count, p);
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int d = 0; d < count; ++d) {
        double norm2 = 0.0;
        do {
            for (int c = 0; c < p; ++c) {
                const double g = normal(rng);
                set.dirs(d, c) = g;
            }
            norm2 = set.dirs.row(d).squaredNorm();
        } while (norm2 < 1e-24);
        set.dirs.row(d) /= std::sqrt(norm2);
    }
    return set;
}

double multivariate_sdo(const PointCloud& cloud, const Eigen::VectorXd& x,
                        const DirectionSet& dirs) {
    const int n = static_cast<int>(cloud.rows());
    const int p = static_cast<int>(cloud.cols());

    if (p == 1) {
        std::vector<double> values(n);
        for (int i = 0; i < n; ++i) values[i] = cloud(i, 0);
        return univariate_sdo(values, x[0]);
    }

    double worst = 0.0;
    std::vector<double> work(n);
    Eigen::VectorXd proj(n);
    for (int d = 0; d < dirs.count(); ++d) {
        proj.noalias() = cloud * dirs.dirs.row(d).transpose();
        const double qx = dirs.dirs.row(d).dot(x);
        for (int i = 0; i < n; ++i) work[i] = proj[i];
        const double med = median_inplace(work);
        for (int i = 0; i < n; ++i) work[i] = std::abs(proj[i] - med);
        const double madv = median_inplace(work);
        worst = std::max(worst, sdo_from_deviation(qx - med, madv));
        if (std::isinf(worst)) return worst;
    }
    return worst;
}

double projection_depth(const PointCloud& cloud, const Eigen::VectorXd& x,
                        const DirectionSet& dirs) {
    const double sdo = multivariate_sdo(cloud, x, dirs);
    return std::isinf(sdo) ? 0.0 : 1.0 / (1.0 + sdo);
}

Eigen::VectorXd deepest_point(const PointCloud& cloud, const DirectionSet& dirs) {
    return deepest_from_sdo(cloud, sample_sdo(cloud, dirs));
}

Eigen::VectorXd directional_outlyingness(const PointCloud& cloud, const Eigen::VectorXd& x,
                                         const DirectionSet& dirs) {
    const Eigen::VectorXd center = deepest_point(cloud, dirs);
    const Eigen::VectorXd offset = x - center;
    const double dist = offset.norm();
    if (dist <= kCenterTol) return Eigen::VectorXd::Zero(cloud.cols());
    const double sdo = multivariate_sdo(cloud, x, dirs);
    if (std::isinf(sdo)) throw InfiniteOutlyingness();
    return (sdo / dist) * offset;
}

CloudOutlyingness cloud_outlyingness(const PointCloud& cloud, const DirectionSet& dirs) {
    CloudOutlyingness result;
    result.sdo = sample_sdo(cloud, dirs);
    result.deepest = deepest_from_sdo(cloud, result.sdo);
    return result;
}

}  // namespace dirout
