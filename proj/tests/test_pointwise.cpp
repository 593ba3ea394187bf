#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "dirout/errors.hpp"
#include "dirout/pointwise.hpp"

using dirout::CloudOutlyingness;
using dirout::DirectionSet;
using dirout::PointCloud;

namespace {

// Reference median via nth_element, deliberately a different code path
// than the library's.
double ref_median(std::vector<double> v) {
    const size_t n = v.size();
    auto mid = v.begin() + n / 2;
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

double ref_mad(const std::vector<double>& v) {
    const double m = ref_median(v);
    std::vector<double> dev(v.size());
    for (size_t i = 0; i < v.size(); ++i) dev[i] = std::abs(v[i] - m);
    return ref_median(std::move(dev));
}

// Independent projection sweep: same definition as the library, written
// from scratch against the same direction set.
double ref_sweep_sdo(const PointCloud& cloud, const Eigen::VectorXd& x,
                     const DirectionSet& dirs) {
    const int n = static_cast<int>(cloud.rows());
    double best = 0.0;
    for (int d = 0; d < dirs.count(); ++d) {
        const Eigen::VectorXd u = dirs.dirs.row(d).transpose();
        std::vector<double> proj(n);
        for (int i = 0; i < n; ++i) proj[i] = cloud.row(i).dot(u);
        const double m = ref_median(proj);
        const double s = ref_mad(proj);
        const double dev = std::abs(x.dot(u) - m);
        double val;
        if (s == 0.0) {
            val = dev == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
            val = dev / s;
        }
        best = std::max(best, val);
    }
    return best;
}

PointCloud cross_cloud() {
    PointCloud c(4, 2);
    c << 1, 0, -1, 0, 0, 1, 0, -1;
    return c;
}

PointCloud random_cloud(int n, int p, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    PointCloud c(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) c(i, j) = nd(gen);
    return c;
}

}  // namespace

TEST_CASE("median hand values") {
    CHECK(dirout::median({3.0}) == 3.0);
    CHECK(dirout::median({1.0, 3.0, 2.0}) == 2.0);
    CHECK(dirout::median({1.0, 2.0, 3.0, 4.0}) == 2.5);
    CHECK(dirout::median({5.0, 1.0, 1.0, 5.0}) == 3.0);
    CHECK(dirout::median({-2.0, 4.0, 0.0, 4.0, -2.0}) == 0.0);
}

TEST_CASE("mad hand values") {
    CHECK(dirout::mad({1.0, 2.0, 3.0, 4.0, 5.0}) == 1.0);
    CHECK(dirout::mad({7.0, 7.0, 7.0}) == 0.0);
    CHECK(dirout::mad({2.0, 4.0}) == 1.0);
    CHECK(dirout::mad({0.0, 0.0, 0.0, 10.0}) == 0.0);
}

TEST_CASE("median and mad agree with the nth_element route on random data") {
    std::mt19937 gen(991);
    std::uniform_real_distribution<double> ud(-5.0, 5.0);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 1 + static_cast<int>(gen() % 40);
        std::vector<double> v(n);
        for (double& x : v) x = ud(gen);
        CHECK(dirout::median(v) == doctest::Approx(ref_median(v)).epsilon(1e-14));
        CHECK(dirout::mad(v) == doctest::Approx(ref_mad(v)).epsilon(1e-14));
    }
}

TEST_CASE("univariate sdo hand values and degenerate policy") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(dirout::univariate_sdo(v, 5.0) == 2.0);
    CHECK(dirout::univariate_sdo(v, 3.0) == 0.0);
    CHECK(dirout::univariate_sdo(v, 0.0) == 3.0);

    const std::vector<double> flat{4.0, 4.0, 4.0};
    CHECK(dirout::univariate_sdo(flat, 4.0) == 0.0);
    CHECK(std::isinf(dirout::univariate_sdo(flat, 5.0)));
}

TEST_CASE("univariate sdo is invariant under affine rescaling") {
    std::mt19937 gen(17);
    std::normal_distribution<double> nd(0.0, 2.0);
    std::vector<double> v(31);
    for (double& x : v) x = nd(gen);
    const double a = -2.5, b = 7.0;
    std::vector<double> w(v.size());
    for (size_t i = 0; i < v.size(); ++i) w[i] = a * v[i] + b;
    for (double q : {-3.0, 0.4, 1.9}) {
        const double lhs = dirout::univariate_sdo(v, q);
        const double rhs = dirout::univariate_sdo(w, a * q + b);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("direction sets are unit, deterministic, seed sensitive") {
    const DirectionSet d1 = DirectionSet::sample(3, 50, 7);
    CHECK(d1.count() == 50);
    CHECK(d1.dim() == 3);
    for (int i = 0; i < d1.count(); ++i)
        CHECK(d1.dirs.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));

    const DirectionSet d2 = DirectionSet::sample(3, 50, 7);
    CHECK((d1.dirs - d2.dirs).cwiseAbs().maxCoeff() == 0.0);

    const DirectionSet d3 = DirectionSet::sample(3, 50, 8);
    CHECK((d1.dirs - d3.dirs).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("multivariate sdo uses the exact route for p = 1") {
    PointCloud c(5, 1);
    c << 1, 2, 3, 4, 5;
    const DirectionSet dirs = DirectionSet::sample(1, 3, 99);
    Eigen::VectorXd x(1);
    x << 5.0;
    CHECK(dirout::multivariate_sdo(c, x, dirs) == 2.0);
    x << 0.0;
    CHECK(dirout::multivariate_sdo(c, x, dirs) == 3.0);
}

TEST_CASE("projection sweep matches an independent reimplementation") {
    std::mt19937 gen(5150);
    for (int rep = 0; rep < 8; ++rep) {
        const int p = 2 + static_cast<int>(gen() % 3);
        const PointCloud c = random_cloud(25, p, 1000 + rep);
        const DirectionSet dirs = DirectionSet::sample(p, 80, 40 + rep);
        Eigen::VectorXd x = c.row(rep % 25).transpose();
        x.array() += 0.3;
        const double lib = dirout::multivariate_sdo(c, x, dirs);
        const double ref = ref_sweep_sdo(c, x, dirs);
        CHECK(lib == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("cross cloud outlyingness respects the analytic bound") {
    // For the 4-point cross the projected ratio is 2|x.u| / (|u1| + |u2|),
    // maximized at the axis directions: sdo((2,0)) = 4 exactly.
    const PointCloud c = cross_cloud();
    const DirectionSet dirs = DirectionSet::sample(2, 500, 11);
    Eigen::VectorXd x(2);
    x << 2.0, 0.0;
    const double s = dirout::multivariate_sdo(c, x, dirs);
    CHECK(s <= 4.0 + 1e-9);
    CHECK(s >= 3.5);
}

TEST_CASE("projection depth is the reciprocal transform of sdo") {
    const PointCloud c = random_cloud(30, 2, 2024);
    const DirectionSet dirs = DirectionSet::sample(2, 100, 3);
    Eigen::VectorXd x(2);
    x << 1.2, -0.7;
    const double s = dirout::multivariate_sdo(c, x, dirs);
    const double d = dirout::projection_depth(c, x, dirs);
    CHECK(d == doctest::Approx(1.0 / (1.0 + s)).epsilon(1e-12));
}

TEST_CASE("deepest point picks an exact center when one exists") {
    PointCloud c(5, 2);
    c << 1, 0, -1, 0, 0, 1, 0, -1, 0, 0;
    const DirectionSet dirs = DirectionSet::sample(2, 200, 21);
    const Eigen::VectorXd z = dirout::deepest_point(c, dirs);
    CHECK(z(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(z(1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("directional outlyingness has sdo magnitude and points away from the center") {
    const PointCloud c = random_cloud(40, 2, 77);
    const DirectionSet dirs = DirectionSet::sample(2, 150, 5);
    const Eigen::VectorXd z = dirout::deepest_point(c, dirs);
    Eigen::VectorXd x(2);
    x << 2.5, 1.0;
    const double s = dirout::multivariate_sdo(c, x, dirs);
    const Eigen::VectorXd o = dirout::directional_outlyingness(c, x, dirs);
    CHECK(o.norm() == doctest::Approx(s).epsilon(1e-12));
    const Eigen::VectorXd u = (x - z).normalized();
    CHECK((o.normalized() - u).norm() == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("directional outlyingness is zero at the deepest point") {
    const PointCloud c = random_cloud(25, 2, 31);
    const DirectionSet dirs = DirectionSet::sample(2, 150, 6);
    const Eigen::VectorXd z = dirout::deepest_point(c, dirs);
    const Eigen::VectorXd o = dirout::directional_outlyingness(c, z, dirs);
    CHECK(o.norm() == 0.0);
}

TEST_CASE("degenerate spread maps to infinity, zero depth, and a typed throw") {
    PointCloud c(4, 1);
    c << 5, 5, 5, 5;
    const DirectionSet dirs = DirectionSet::sample(1, 8, 12);
    Eigen::VectorXd x(1);
    x << 6.0;
    CHECK(std::isinf(dirout::multivariate_sdo(c, x, dirs)));
    CHECK(dirout::projection_depth(c, x, dirs) == 0.0);
    CHECK_THROWS_AS(dirout::directional_outlyingness(c, x, dirs),
                    dirout::InfiniteOutlyingness);

    // In higher dimension a query off a degenerate hyperplane stays finite:
    // sampled directions almost surely miss the zero-spread axis.
    PointCloud flat(4, 2);
    flat << 1, 5, 2, 5, 3, 5, 4, 5;
    const DirectionSet d2 = DirectionSet::sample(2, 100, 12);
    Eigen::VectorXd q(2);
    q << 2.0, 6.0;
    const double s = dirout::multivariate_sdo(flat, q, d2);
    CHECK(std::isfinite(s));
    CHECK(s > 1.0);
}

TEST_CASE("cloud outlyingness matches the single query route") {
    const PointCloud c = random_cloud(30, 3, 123);
    const DirectionSet dirs = DirectionSet::sample(3, 120, 9);
    const CloudOutlyingness co = dirout::cloud_outlyingness(c, dirs);
    REQUIRE(static_cast<int>(co.sdo.size()) == 30);
    for (int i = 0; i < 30; ++i) {
        const double single =
            dirout::multivariate_sdo(c, c.row(i).transpose(), dirs);
        CHECK(co.sdo[i] == doctest::Approx(single).epsilon(1e-12));
    }
    const Eigen::VectorXd z = dirout::deepest_point(c, dirs);
    CHECK((co.deepest - z).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("projection machinery is exactly invariant under a shared rotation") {
    const PointCloud c = random_cloud(30, 2, 314);
    const DirectionSet dirs = DirectionSet::sample(2, 100, 15);
    Eigen::VectorXd x(2);
    x << 0.9, -1.4;

    const double theta = 0.73;
    Eigen::Matrix2d r;
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);

    PointCloud cr = c * r.transpose();
    DirectionSet dirs_r = dirs;
    dirs_r.dirs = dirs.dirs * r.transpose();
    const Eigen::VectorXd xr = r * x;

    const double s = dirout::multivariate_sdo(c, x, dirs);
    const double sr = dirout::multivariate_sdo(cr, xr, dirs_r);
    CHECK(s == doctest::Approx(sr).epsilon(1e-12));
}

TEST_CASE("sdo grows monotonically along a ray from the deepest point") {
    const PointCloud c = random_cloud(50, 2, 555);
    const DirectionSet dirs = DirectionSet::sample(2, 200, 18);
    const Eigen::VectorXd z = dirout::deepest_point(c, dirs);
    Eigen::VectorXd step(2);
    step << 0.8, 0.5;
    double prev = -1.0;
    for (int m = 1; m <= 6; ++m) {
        const Eigen::VectorXd x = z + m * step;
        const double s = dirout::multivariate_sdo(c, x, dirs);
        CHECK(s > prev);
        prev = s;
    }
}
