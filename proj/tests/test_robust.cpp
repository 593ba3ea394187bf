#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <boost/math/distributions/fisher_f.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "dirout/errors.hpp"
#include "dirout/robust.hpp"

using dirout::CutoffMethod;
using dirout::CutoffParams;
using dirout::DetectionConfig;
using dirout::DetectionReport;
using dirout::McdFit;
using dirout::OutlyingnessSummary;

namespace {

Eigen::MatrixXd random_points(int n, int d, unsigned seed, double spread = 1.0) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd(0.0, spread);
    Eigen::MatrixXd y(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) y(i, j) = nd(gen);
    return y;
}

// Determinant of the (1/h)-covariance of the given subset rows.
double subset_det(const Eigen::MatrixXd& y, const std::vector<int>& idx) {
    const int d = static_cast<int>(y.cols());
    const int h = static_cast<int>(idx.size());
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (int i : idx) mean += y.row(i).transpose();
    mean /= h;
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
    for (int i : idx) {
        const Eigen::VectorXd c = y.row(i).transpose() - mean;
        s += c * c.transpose();
    }
    s /= h;
    return s.determinant();
}

// Smallest subset determinant over all h-subsets, by full enumeration.
double exhaustive_min_det(const Eigen::MatrixXd& y, int h) {
    const int n = static_cast<int>(y.rows());
    std::vector<int> idx(h);
    for (int i = 0; i < h; ++i) idx[i] = i;
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        best = std::min(best, subset_det(y, idx));
        int pos = h - 1;
        while (pos >= 0 && idx[pos] == n - h + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int q = pos + 1; q < h; ++q) idx[q] = idx[q - 1] + 1;
    }
    return best;
}

std::vector<OutlyingnessSummary> to_summaries(const Eigen::MatrixXd& y) {
    // Interpret the first d-1 columns as mo and the last as vo.
    std::vector<OutlyingnessSummary> s(y.rows());
    for (int i = 0; i < y.rows(); ++i) {
        s[i].mo.assign(y.cols() - 1, 0.0);
        for (int c = 0; c + 1 < y.cols(); ++c) s[i].mo[c] = y(i, c);
        s[i].vo = y(i, y.cols() - 1);
        double mo2 = 0.0;
        for (double m : s[i].mo) mo2 += m * m;
        s[i].fo = mo2 + s[i].vo;
    }
    return s;
}

}  // namespace

TEST_CASE("fast mcd reaches the exhaustive minimum on small instances") {
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const int n = 10;
        const int h = 7;
        Eigen::MatrixXd y = random_points(n, 2, 100 + seed);
        y.row(0) << 6.0, -5.0;  // one gross point the subset should drop
        const McdFit fit = dirout::fast_mcd(y, h, seed);
        const double target = exhaustive_min_det(y, h);
        CHECK(fit.determinant == doctest::Approx(target).epsilon(1e-9));
        CHECK(static_cast<int>(fit.subset.size()) == h);
        CHECK(fit.determinant ==
              doctest::Approx(subset_det(y, fit.subset)).epsilon(1e-9));
    }
}

TEST_CASE("full subset size gives the classical estimate") {
    const Eigen::MatrixXd y = random_points(40, 3, 7);
    const McdFit fit = dirout::fast_mcd(y, 40, 11);
    const Eigen::VectorXd mean = y.colwise().mean().transpose();
    CHECK((fit.location - mean).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::MatrixXd centered = y.rowwise() - mean.transpose();
    Eigen::MatrixXd cov = centered.transpose() * centered / 40.0;
    CHECK((fit.scatter - cov).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(static_cast<int>(fit.subset.size()) == 40);
}

TEST_CASE("mcd subsets are stable under affine maps") {
    const Eigen::MatrixXd y = random_points(60, 2, 42);
    Eigen::Matrix2d a;
    a << 2.0, 0.7, -0.3, 1.4;
    Eigen::RowVector2d b(5.0, -2.0);
    Eigen::MatrixXd z = (y * a.transpose()).rowwise() + b;

    const McdFit fy = dirout::fast_mcd(y, 45, 9);
    const McdFit fz = dirout::fast_mcd(z, 45, 9);
    CHECK(fy.subset == fz.subset);

    const Eigen::VectorXd dy = dirout::robust_distances(y, fy);
    const Eigen::VectorXd dz = dirout::robust_distances(z, fz);
    CHECK((dy - dz).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("robust distances match the quadratic form") {
    McdFit fit;
    fit.location = Eigen::Vector2d(1.0, -1.0);
    fit.scatter = Eigen::Matrix2d::Identity() * 4.0;
    fit.h = 5;
    fit.determinant = 16.0;
    Eigen::MatrixXd y(2, 2);
    y << 3.0, -1.0, 1.0, 1.0;
    const Eigen::VectorXd d = dirout::robust_distances(y, fit);
    CHECK(d(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("degenerate inputs raise typed errors") {
    Eigen::MatrixXd line(8, 2);
    for (int i = 0; i < 8; ++i) line.row(i) << i, 2.0 * i;
    CHECK_THROWS_AS(dirout::fast_mcd(line, 6, 1), dirout::SingularScatter);

    const Eigen::MatrixXd y = random_points(10, 2, 3);
    CHECK_THROWS_AS(dirout::fast_mcd(y, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(dirout::fast_mcd(y, 11, 1), std::invalid_argument);
    Eigen::MatrixXd thin = random_points(2, 3, 4);
    CHECK_THROWS_AS(dirout::fast_mcd(thin, 2, 1), dirout::TooFewCurves);
}

TEST_CASE("the classical calibration matches the F law directly") {
    const CutoffParams p =
        dirout::hardin_rocke_params(50, 3, 50, CutoffMethod::asymptotic, 1);
    CHECK(p.c == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.m == doctest::Approx(49.0).epsilon(1e-12));
    boost::math::fisher_f f(3.0, 49.0 - 3.0 + 1.0);
    CHECK(p.cutoff ==
          doctest::Approx(boost::math::quantile(f, 0.993)).epsilon(1e-10));
    CHECK(p.scale() == doctest::Approx((49.0 - 2.0) / (49.0 * 3.0)).epsilon(1e-12));
}

TEST_CASE("simulated and asymptotic calibrations stay close at the pinned point") {
    const CutoffParams sim =
        dirout::hardin_rocke_params(100, 2, 75, CutoffMethod::simulated, 5);
    const CutoffParams asym =
        dirout::hardin_rocke_params(100, 2, 75, CutoffMethod::asymptotic, 5);
    // Compare the rmd2-space boundaries, which is what flags depend on.
    const double bs = sim.cutoff / sim.scale();
    const double ba = asym.cutoff / asym.scale();
    CHECK(std::abs(bs - ba) / ba < 0.25);
}

TEST_CASE("calibration is memoized deterministically") {
    const CutoffParams a =
        dirout::hardin_rocke_params(80, 3, 60, CutoffMethod::simulated, 21);
    const CutoffParams b =
        dirout::hardin_rocke_params(80, 3, 60, CutoffMethod::simulated, 21);
    CHECK(a.c == b.c);
    CHECK(a.m == b.m);
    CHECK(a.cutoff == b.cutoff);
}

TEST_CASE("apply cutoff scales distances and thresholds them") {
    CutoffParams p;
    p.c = 2.0;
    p.m = 11.0;
    p.d = 2;
    p.cutoff = 5.0;
    // scale = 2 * (11 - 2 + 1) / (11 * 2) = 10/11
    const std::vector<double> rmd2{1.0, 5.5, 11.0};
    const auto [scaled, flags] = dirout::apply_cutoff(rmd2, p);
    CHECK(scaled[0] == doctest::Approx(10.0 / 11.0).epsilon(1e-12));
    CHECK(scaled[1] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(scaled[2] == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(flags[0] == 0);
    CHECK(flags[1] == 0);  // boundary is strict
    CHECK(flags[2] == 1);
}

TEST_CASE("clean gaussian features are flagged at about the nominal rate") {
    DetectionConfig cfg;
    cfg.seed = 31;
    int flagged = 0, total = 0;
    for (int rep = 0; rep < 40; ++rep) {
        const Eigen::MatrixXd y = random_points(100, 3, 5000 + rep);
        const DetectionReport r = dirout::detect(to_summaries(y), cfg);
        for (auto f : r.flags) flagged += f;
        total += 100;
    }
    const double rate = 100.0 * flagged / total;
    CHECK(rate > 0.05);
    CHECK(rate < 3.5);
}

TEST_CASE("planted feature outliers are the flagged set") {
    Eigen::MatrixXd y = random_points(60, 3, 99);
    y.row(3) << 25.0, -20.0, 40.0;
    y.row(17) << -30.0, 22.0, 35.0;
    y.row(41) << 28.0, 28.0, 50.0;
    DetectionConfig cfg;
    cfg.seed = 8;
    const DetectionReport r = dirout::detect(to_summaries(y), cfg);
    CHECK(r.flags[3] == 1);
    CHECK(r.flags[17] == 1);
    CHECK(r.flags[41] == 1);
    int extra = 0;
    for (int i = 0; i < 60; ++i)
        if (r.flags[i] && i != 3 && i != 17 && i != 41) ++extra;
    CHECK(extra <= 2);
    CHECK(r.rmd2.size() == 60);
    CHECK(r.scaled.size() == 60);
    CHECK(r.params.d == 3);
    CHECK(r.cutoff == r.params.cutoff);
}

TEST_CASE("detection reuses a matching precomputed calibration") {
    const Eigen::MatrixXd y = random_points(50, 2, 1234);
    DetectionConfig cfg;
    cfg.seed = 4;
    const DetectionReport first = dirout::detect(to_summaries(y), cfg);
    DetectionConfig reuse = cfg;
    reuse.cutoff = first.params;
    const DetectionReport second = dirout::detect(to_summaries(y), reuse);
    CHECK(first.cutoff == second.cutoff);
    CHECK(first.flags == second.flags);

    reuse.cutoff->d = 3;
    CHECK_THROWS_AS(dirout::detect(to_summaries(y), reuse), std::invalid_argument);
}

TEST_CASE("feature matrix lays out means then variation") {
    std::vector<OutlyingnessSummary> s(2);
    s[0].mo = {1.0, 2.0};
    s[0].vo = 3.0;
    s[1].mo = {-1.0, 0.5};
    s[1].vo = 0.25;
    const Eigen::MatrixXd y = dirout::feature_matrix(s);
    REQUIRE(y.rows() == 2);
    REQUIRE(y.cols() == 3);
    CHECK(y(0, 0) == 1.0);
    CHECK(y(0, 1) == 2.0);
    CHECK(y(0, 2) == 3.0);
    CHECK(y(1, 2) == 0.25);
}

TEST_CASE("detection enforces the minimum sample size") {
    const Eigen::MatrixXd y = random_points(3, 2, 2);
    DetectionConfig cfg;
    CHECK_THROWS_AS(dirout::detect(to_summaries(y), cfg), dirout::TooFewCurves);
}
