#include <cmath>
#include <functional>
#include <random>
#include <utility>

#include <Eigen/Cholesky>

#include "dirout/errors.hpp"
#include "dirout/simulate.hpp"

namespace dirout {

namespace {

struct MatrixBuilder {
    const TimeGrid& grid;

    Eigen::MatrixXd dense(int k, const std::function<double(double)>& corr) const {
        Eigen::MatrixXd m(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) {
                const double v = corr(std::abs(grid[i] - grid[j]));
                m(i, j) = v;
                m(j, i) = v;
            }
        return m;
    }

    Eigen::MatrixXd operator()(const ExpScaledCov& c) const {
        return dense(grid.size(), [&](double h) { return c.amplitude * std::exp(-c.rate * h); });
    }

    Eigen::MatrixXd operator()(const PoweredExpCov& c) const {
        return dense(grid.size(), [&](double h) {
            return c.amplitude * std::exp(-std::pow(h, c.exponent));
        });
    }

    Eigen::MatrixXd operator()(const MaternCov& c) const {
        return dense(grid.size(), [&](double h) {
            return c.sigma * c.sigma * matern_corr(h, c.nu, c.alpha);
        });
    }

    Eigen::MatrixXd operator()(const BivariateMaternCov& c) const {
        if (!(std::abs(c.rho12) <= 1.0)) throw NotPositiveDefinite("cross-correlation above 1");
        const int k = grid.size();
        Eigen::MatrixXd m(2 * k, 2 * k);
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) {
                const double h = std::abs(grid[i] - grid[j]);
                const double c11 = c.sigma1 * c.sigma1 * matern_corr(h, c.nu11, c.alpha11);
                const double c22 = c.sigma2 * c.sigma2 * matern_corr(h, c.nu22, c.alpha22);
                const double c12 =
                    c.rho12 * c.sigma1 * c.sigma2 * matern_corr(h, c.nu12, c.alpha12);
                m(i, j) = c11;
                m(j, i) = c11;
                m(k + i, k + j) = c22;
                m(k + j, k + i) = c22;
                m(i, k + j) = c12;
                m(k + j, i) = c12;
                m(j, k + i) = c12;
                m(k + i, j) = c12;
            }
        return m;
    }
};

}  // namespace

Eigen::MatrixXd covariance_matrix(const TimeGrid& grid, const CovarianceSpec& spec) {
    // Covariances accept any ordered grid; the [0,1] normalization is a
    // dataset-ingestion contract, not a sampling one (model noise uses
    // grid-step lags).
    if (grid.size() < 2) throw GridMismatch("time grid needs at least two points");
    for (int j = 0; j < grid.size(); ++j) {
        if (!std::isfinite(grid.points[j]))
            throw GridMismatch("non-finite time at index " + std::to_string(j));
        if (j > 0 && !(grid.points[j - 1] < grid.points[j]))
            throw GridMismatch("time points not strictly increasing at index " +
                               std::to_string(j));
    }
    return std::visit(MatrixBuilder{grid}, spec);
}

GaussianSampler::GaussianSampler(TimeGrid grid, const CovarianceSpec& spec)
    : grid_(std::move(grid)), bivariate_(std::holds_alternative<BivariateMaternCov>(spec)) {
    Eigen::MatrixXd cov = covariance_matrix(grid_, spec);

    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw NotPositiveDefinite("covariance matrix not symmetric");

    const double max_diag = cov.diagonal().maxCoeff();
    double jitter = 0.0;
    for (int attempt = 0; attempt < 5; ++attempt) {
        Eigen::MatrixXd candidate = cov;
        if (jitter > 0.0)
            candidate.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(candidate);
        if (llt.info() == Eigen::Success) {
            chol_ = llt.matrixL();
            return;
        }
        jitter = jitter == 0.0 ? 1e-10 * max_diag : 10.0 * jitter;
    }
    throw NotPositiveDefinite("covariance factorization failed after jitter escalation");
}

Eigen::VectorXd GaussianSampler::draw(Rng& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(chol_.rows());
    for (int i = 0; i < z.size(); ++i) z[i] = normal(rng);
    return chol_ * z;
}

std::vector<double> gp_sample(const TimeGrid& grid, const CovarianceSpec& spec, Rng& rng) {
    if (std::holds_alternative<BivariateMaternCov>(spec))
        throw NotPositiveDefinite("univariate sampler given a bivariate covariance");
    const Eigen::VectorXd draw = GaussianSampler(grid, spec).draw(rng);
    return std::vector<double>(draw.data(), draw.data() + draw.size());
}

Eigen::MatrixXd bivariate_gp_sample(const TimeGrid& grid, const BivariateMaternCov& spec,
                                    Rng& rng) {
    const GaussianSampler sampler(grid, CovarianceSpec(spec));
    const Eigen::VectorXd stacked = sampler.draw(rng);
    const int k = grid.size();
    Eigen::MatrixXd out(k, 2);
    out.col(0) = stacked.head(k);
    out.col(1) = stacked.tail(k);
    return out;
}

}  // namespace dirout
