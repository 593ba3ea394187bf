#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "dirout/core.hpp"
#include "dirout/rng.hpp"

namespace dirout {

// Modified Bessel function of the second kind, real order nu > 0, x > 0.
// Relative accuracy about 1e-12 for nu in [0.1, 5], x in [1e-6, 30];
// results below the double underflow threshold saturate to 0.
double bessel_k(double nu, double x);

// Matern correlation 2^{1-nu} / Gamma(nu) * (alpha h)^nu K_nu(alpha h);
// equals 1 at h == 0 (analytic limit). Requires nu > 0, alpha > 0, h >= 0.
double matern_corr(double h, double nu, double alpha);

// Stationary covariance families over the time grid.
struct ExpScaledCov {
    double amplitude = 1.0;  // a in a * exp(-r |s-t|)
    double rate = 1.0;
};

struct PoweredExpCov {
    double amplitude = 1.0;  // a in a * exp(-|s-t|^b), 0 < b <= 2
    double exponent = 1.0;
};

struct MaternCov {
    double sigma = 1.0;  // sd; covariance sigma^2 * M(|s-t|; nu, alpha)
    double nu = 1.0;
    double alpha = 1.0;
};

// Cross-covariance C_ij(s,t) = rho_ij sigma_i sigma_j M(|s-t|; nu_ij, alpha_ij)
// with rho_11 = rho_22 = 1. Validity of the parameter set is established by
// the Cholesky factorization of the assembled 2k x 2k matrix.
struct BivariateMaternCov {
    double sigma1 = 1.0, sigma2 = 1.0;
    double rho12 = 0.6;
    double nu11 = 1.2, nu22 = 0.6, nu12 = 1.0;
    double alpha11 = 0.02, alpha22 = 0.01, alpha12 = 0.016;
};

using CovarianceSpec = std::variant<ExpScaledCov, PoweredExpCov, MaternCov, BivariateMaternCov>;

/// Dense covariance over the grid: k x k, or 2k x 2k for the bivariate
// family (component-major blocks [C11 C12; C21 C22]).
Eigen::MatrixXd covariance_matrix(const TimeGrid& grid, const CovarianceSpec& spec);

// Zero-mean Gaussian sampler factoring the covariance once. When the plain
// Cholesky fails, diagonal jitter of 1e-10 x (max diagonal) is added and
// escalated tenfold at most three times.
// Throws NotPositiveDefinite when the factorization keeps failing.
class GaussianSampler {
  public:
    GaussianSampler(TimeGrid grid, const CovarianceSpec& spec);

    int dim() const { return static_cast<int>(chol_.rows()); }  // k or 2k
    bool bivariate() const { return bivariate_; }
    const TimeGrid& grid() const { return grid_; }

    // One path; bivariate samples come stacked (component 1 first).
    Eigen::VectorXd draw(Rng& rng) const;

  private:
    TimeGrid grid_;
    bool bivariate_ = false;
    Eigen::MatrixXd chol_;
};

// One zero-mean draw with the given univariate covariance.
std::vector<double> gp_sample(const TimeGrid& grid, const CovarianceSpec& spec, Rng& rng);

// One joint draw of the bivariate family, k x 2.
Eigen::MatrixXd bivariate_gp_sample(const TimeGrid& grid, const BivariateMaternCov& spec,
                                    Rng& rng);

enum class ContaminationScheme {
    fixed_count,  // exactly round(eps * n) outliers at uniform indices
    bernoulli,    // each curve contaminated independently with probability eps
};

// Benchmark generator settings. Models 0-4 are univariate, 5-10 bivariate;
// model 0 has no contamination model, so eps must be 0 there.
struct ModelSpec {
    int id = 1;
    int n = 100;
    int k = 50;
    double eps = 0.0;  // in [0, 0.5)
    std::uint64_t seed = 0;
    ContaminationScheme scheme = ContaminationScheme::fixed_count;

    // Model-specific defaults: n=500, k=1000 for model 0, n=100, k=50 otherwise.
    static ModelSpec defaults(int id);
};

// Seeded draw of the model: labels mark the contaminated curves.
std::pair<FunctionalDataset, LabelSet> generate_model(const ModelSpec& spec);

}  // namespace dirout
