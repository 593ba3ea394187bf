#include "dirout/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "dirout/errors.hpp"
#include "dirout/rng.hpp"

namespace dirout {

namespace {

constexpr double kSingularRatio = 1e-12;
constexpr double kDetRelTol = 1e-12;
constexpr int kMaxCSteps = 100;
constexpr std::uint64_t kCalibSampleStream = 0x4852534d504c3031ULL;
constexpr std::uint64_t kCalibFitStream = 0x4852464954303031ULL;

struct SubsetFit {
    Eigen::VectorXd location;
    Eigen::MatrixXd scatter;
    Eigen::MatrixXd inv_sqrt;  // scatter^{-1/2}, valid when !singular
    double determinant = std::numeric_limits<double>::infinity();
    bool singular = true;
};

// Mean and (1/|idx|)-covariance of the selected rows, with an eigenvalue
// based singularity verdict and an inverse square root for distances.
SubsetFit fit_rows(const Eigen::MatrixXd& y, const std::vector<int>& idx) {
    const int d = static_cast<int>(y.cols());
    const int m = static_cast<int>(idx.size());
    SubsetFit fit;
    fit.location = Eigen::VectorXd::Zero(d);
    for (int i : idx) fit.location += y.row(i).transpose();
    fit.location /= m;

    fit.scatter = Eigen::MatrixXd::Zero(d, d);
    for (int i : idx) {
        const Eigen::VectorXd dev = y.row(i).transpose() - fit.location;
        fit.scatter.noalias() += dev * dev.transpose();
    }
    fit.scatter /= m;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fit.scatter);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    const double largest = ev[d - 1];
    if (!(largest > 0.0) || ev[0] < kSingularRatio * largest) return fit;

    fit.singular = false;
    fit.determinant = ev.prod();
    fit.inv_sqrt = eig.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                   eig.eigenvectors().transpose();
    return fit;
}

std::vector<double> squared_distances(const Eigen::MatrixXd& y, const SubsetFit& fit) {
    const int n = static_cast<int>(y.rows());
    std::vector<double> d2(n);
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd z = fit.inv_sqrt * (y.row(i).transpose() - fit.location);
        d2[i] = z.squaredNorm();
    }
    return d2;
}

// Indices of the h smallest distances, ties broken by index so the
// selection is deterministic.
std::vector<int> h_smallest(const std::vector<double>& d2, int h) {
    std::vector<int> order(d2.size());
    std::iota(order.begin(), order.end(), 0);
    std::nth_element(order.begin(), order.begin() + h - 1, order.end(),
                     [&](int a, int b) { return d2[a] < d2[b] || (d2[a] == d2[b] && a < b); });
    order.resize(h);
    return order;
}

void check_mcd_args(int n, int d, int h) {
    if (d < 1) throw std::invalid_argument("feature dimension must be positive");
    if (n <= d) throw TooFewCurves("need more points than feature dimensions");
    if (h < d + 1 || h > n) throw std::invalid_argument("subset size must lie in [d+1, n]");
}

double conditional_mean_ratio(double a, double b, double u, double beta) {
    return b / (b - 2.0) * boost::math::ibetac(0.5 * a + 1.0, 0.5 * b - 1.0, u) / (1.0 - beta);
}

double conditional_square_ratio(double a, double b, double u, double beta) {
    return b * b * (a + 2.0) / (a * (b - 2.0) * (b - 4.0)) *
           boost::math::ibetac(0.5 * a + 2.0, 0.5 * b - 2.0, u) / (1.0 - beta);
}

// Squared coefficient of variation of an F_{a, b} variable conditioned on
// lying above its beta-quantile; b = m - d + 1.
double conditional_cv2(double a, double m, double d, double beta) {
    const double b = m - d + 1.0;
    const double u = boost::math::ibeta_inv(0.5 * a, 0.5 * b, beta);
    const double t1 = conditional_mean_ratio(a, b, u, beta);
    const double t2 = conditional_square_ratio(a, b, u, beta);
    return t2 / (t1 * t1) - 1.0;
}

}  // namespace

McdFit fast_mcd(const Eigen::MatrixXd& y, int h, std::uint64_t seed, int n_starts) {
    const int n = static_cast<int>(y.rows());
    const int d = static_cast<int>(y.cols());
    check_mcd_args(n, d, h);
    if (n_starts < 1) throw std::invalid_argument("need at least one start");

    McdFit best;
    best.h = h;
    best.determinant = std::numeric_limits<double>::infinity();
    bool found = false;

    const auto consider = [&](std::vector<int> subset) {
        double prev_det = std::numeric_limits<double>::infinity();
        for (int step = 0; step < kMaxCSteps; ++step) {
            const SubsetFit fit = fit_rows(y, subset);
            if (fit.singular) return;
            const bool converged =
                std::isfinite(prev_det) && prev_det - fit.determinant <= kDetRelTol * prev_det;
            if (converged || step == kMaxCSteps - 1 || h == n) {
                if (fit.determinant < best.determinant) {
                    std::sort(subset.begin(), subset.end());
                    best.subset = subset;
                    best.location = fit.location;
                    best.scatter = fit.scatter;
                    best.determinant = fit.determinant;
                    found = true;
                }
                return;
            }
            prev_det = fit.determinant;
            subset = h_smallest(squared_distances(y, fit), h);
        }
    };

    if (h == n) {
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        consider(std::move(all));
        if (!found) throw SingularScatter("classical covariance is rank-deficient");
        return best;
    }

    Rng rng = make_rng(seed);
    std::vector<int> order(n);
    for (int s = 0; s < n_starts; ++s) {
        std::iota(order.begin(), order.end(), 0);
        for (int j = 0; j <= d; ++j) {
            std::uniform_int_distribution<int> pick(j, n - 1);
            std::swap(order[j], order[pick(rng)]);
        }
        const std::vector<int> elemental(order.begin(), order.begin() + d + 1);
        const SubsetFit seed_fit = fit_rows(y, elemental);
        if (seed_fit.singular) continue;
        consider(h_smallest(squared_distances(y, seed_fit), h));
    }
    if (!found) throw SingularScatter("every subset produced a rank-deficient scatter");
    return best;
}

Eigen::VectorXd robust_distances(const Eigen::MatrixXd& y, const McdFit& fit) {
    const int n = static_cast<int>(y.rows());
    const int d = static_cast<int>(y.cols());
    if (fit.location.size() != d) throw std::invalid_argument("fit dimension mismatch");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fit.scatter);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    const double largest = ev[d - 1];
    if (!(largest > 0.0) || ev[0] < kSingularRatio * largest)
        throw SingularScatter("scatter matrix is numerically singular");

    const Eigen::MatrixXd inv_sqrt = eig.eigenvectors() *
                                     ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                                     eig.eigenvectors().transpose();
    Eigen::VectorXd d2(n);
    for (int i = 0; i < n; ++i)
        d2[i] = (inv_sqrt * (y.row(i).transpose() - fit.location)).squaredNorm();
    return d2;
}

CutoffParams hardin_rocke_params(int n, int d, int h, CutoffMethod method, std::uint64_t seed,
                                 double alpha, int replications) {
    check_mcd_args(n, d, h);
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (replications < 1) throw std::invalid_argument("need at least one replication");

    using Key = std::tuple<int, int, int, int, double, int, std::uint64_t>;
    static std::map<Key, CutoffParams> cache;
    static std::mutex cache_mutex;
    const Key key{n, d, h, static_cast<int>(method), alpha, replications, seed};
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        const auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    CutoffParams params;
    params.alpha = alpha;
    params.d = d;

    if (h == n) {
        params.c = 1.0;
        params.m = n - 1.0;
    } else if (method == CutoffMethod::asymptotic) {
        // Wishart degrees of freedom from the asymptotic variance of a
        // diagonal scatter entry at the Gaussian model. The variance comes
        // from the influence function of the trimmed second-moment
        // functional; the exp factor is the usual small-sample adjustment.
        const double alpha_star = static_cast<double>(h) / n;
        const double q = boost::math::quantile(boost::math::chi_squared(d), alpha_star);
        const double p1 = boost::math::cdf(boost::math::chi_squared(d + 2), q);
        const double p2 = boost::math::cdf(boost::math::chi_squared(d + 4), q);
        params.c = p1 / alpha_star;

        const double gamma = (p1 - p2) / (d * p1);
        const double exx = 3.0 * p2 - p1 * p1;
        const double eyy = d * (d + 2.0) * p2 - d * d * p1 * p1;
        const double exy = (d + 2.0) * p2 - d * p1 * p1;
        const double exb = (q / d) * p1 * (alpha_star - 1.0);
        const double eyb = q * p1 * (alpha_star - 1.0);
        const double ebb = (q / d) * (q / d) * alpha_star * (1.0 - alpha_star);
        const double one_gd = 1.0 - gamma * d;
        const double sigma1 = (exx + gamma * gamma * eyy + one_gd * one_gd * ebb -
                               2.0 * gamma * exy + 2.0 * one_gd * exb -
                               2.0 * gamma * one_gd * eyb) /
                              (p2 * p2);
        params.m = (2.0 * n / sigma1) *
                   std::exp(0.725 - 0.00663 * d - 0.078 * std::log(double(n)));
    } else {
        // Refit the estimator on clean Gaussian data and match the
        // distances of the points left outside each subset against the
        // conditional (upper-tail) moments of the scaled F law.
        const double beta = static_cast<double>(h) / n;
        std::vector<double> pooled;
        pooled.reserve(static_cast<std::size_t>(replications) * (n - h));
        for (int r = 0; r < replications; ++r) {
            Rng rng = make_rng(derive_seed(seed, kCalibSampleStream, r));
            std::normal_distribution<double> normal(0.0, 1.0);
            Eigen::MatrixXd z(n, d);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < d; ++j) z(i, j) = normal(rng);
            const McdFit fit = fast_mcd(z, h, derive_seed(seed, kCalibFitStream, r));
            const Eigen::VectorXd d2 = robust_distances(z, fit);
            std::vector<std::uint8_t> inside(n, 0);
            for (int i : fit.subset) inside[i] = 1;
            for (int i = 0; i < n; ++i)
                if (!inside[i]) pooled.push_back(d2[i]);
        }

        double mean = 0.0;
        for (double v : pooled) mean += v;
        mean /= pooled.size();
        double var = 0.0;
        for (double v : pooled) var += (v - mean) * (v - mean);
        var /= pooled.size() - 1;
        const double cv2 = var / (mean * mean);

        const double a = d;
        double lo = d + 4.0;
        double hi = 1e7;
        if (conditional_cv2(a, lo, d, beta) <= cv2) {
            params.m = lo;
        } else if (conditional_cv2(a, hi, d, beta) >= cv2) {
            params.m = hi;
        } else {
            for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (conditional_cv2(a, mid, d, beta) > cv2 ? lo : hi) = mid;
            }
            params.m = 0.5 * (lo + hi);
        }

        const double b = params.m - d + 1.0;
        const double u = boost::math::ibeta_inv(0.5 * a, 0.5 * b, beta);
        const double t1 = conditional_mean_ratio(a, b, u, beta);
        params.c = t1 * params.m * a / (b * mean);
    }

    if (!(params.m > d - 1.0))
        throw InvalidDf("fitted degrees of freedom too small for the F cutoff");
    params.cutoff =
        boost::math::quantile(boost::math::fisher_f(d, params.m - d + 1.0), alpha);

    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(key, params);
    return params;
}

std::pair<std::vector<double>, std::vector<std::uint8_t>> apply_cutoff(
    const std::vector<double>& rmd2, const CutoffParams& params) {
    const double factor = params.scale();
    std::vector<double> scaled(rmd2.size());
    std::vector<std::uint8_t> flags(rmd2.size());
    for (std::size_t i = 0; i < rmd2.size(); ++i) {
        scaled[i] = factor * rmd2[i];
        flags[i] = scaled[i] > params.cutoff ? 1 : 0;
    }
    return {std::move(scaled), std::move(flags)};
}

Eigen::MatrixXd feature_matrix(const std::vector<OutlyingnessSummary>& summaries) {
    if (summaries.empty()) throw TooFewCurves("no summaries given");
    const int n = static_cast<int>(summaries.size());
    const int p = static_cast<int>(summaries.front().mo.size());
    Eigen::MatrixXd y(n, p + 1);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(summaries[i].mo.size()) != p)
            throw LengthMismatch("summary dimensions differ");
        for (int c = 0; c < p; ++c) y(i, c) = summaries[i].mo[c];
        y(i, p) = summaries[i].vo;
    }
    return y;
}

DetectionReport detect(const std::vector<OutlyingnessSummary>& summaries,
                       const DetectionConfig& cfg) {
    const Eigen::MatrixXd y = feature_matrix(summaries);
    const int n = static_cast<int>(y.rows());
    const int d = static_cast<int>(y.cols());
    if (n < d + 2) throw TooFewCurves("too few curves: detection needs at least p + 3");
    if (!(cfg.h_frac > 0.0 && cfg.h_frac <= 1.0))
        throw std::invalid_argument("h fraction must lie in (0, 1]");

    int h = static_cast<int>(std::floor(cfg.h_frac * n));
    h = std::max(h, d + 1);
    h = std::min(h, n);

    DetectionReport report;
    report.fit = fast_mcd(y, h, cfg.seed, cfg.mcd_starts);
    const Eigen::VectorXd d2 = robust_distances(y, report.fit);
    report.rmd2.assign(d2.data(), d2.data() + d2.size());

    if (cfg.cutoff) {
        if (cfg.cutoff->d != d) throw std::invalid_argument("precomputed calibration dimension mismatch");
        report.params = *cfg.cutoff;
    } else {
        report.params = hardin_rocke_params(n, d, h, cfg.method, cfg.seed, cfg.alpha);
    }
    report.cutoff = report.params.cutoff;
    auto scaled_flags = apply_cutoff(report.rmd2, report.params);
    report.scaled = std::move(scaled_flags.first);
    report.flags = std::move(scaled_flags.second);
    return report;
}

}  // namespace dirout
