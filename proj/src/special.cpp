#include "dirout/simulate.hpp"

#include <cmath>
#include <limits>

namespace dirout {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 2000;

// Leading coefficients of 1/Gamma(z) = sum c_k z^k, used near mu = 0 where the
// direct (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu) form loses digits.
constexpr double kC2 = 0.57721566490153286061;
constexpr double kC3 = -0.65587807152025388108;
constexpr double kC4 = -0.04200263503409523553;
constexpr double kC5 = 0.16653861138229148950;
constexpr double kC6 = -0.04219773455554433675;
constexpr double kC7 = -0.00962197152787697356;
constexpr double kC8 = 0.00721894324666309954;
constexpr double kC9 = -0.00116516759185906511;

// gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu), gam2 = the average,
// gampl = 1/Gamma(1+mu), gammi = 1/Gamma(1-mu). Valid for |mu| <= 1/2.
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
    if (std::abs(mu) < 1e-2) {
        const double mu2 = mu * mu;
        gam1 = -(kC2 + mu2 * (kC4 + mu2 * (kC6 + mu2 * kC8)));
        gam2 = 1.0 + mu2 * (kC3 + mu2 * (kC5 + mu2 * (kC7 + mu2 * kC9)));
        gampl = gam2 - mu * gam1;
        gammi = gam2 + mu * gam1;
    } else {
        gampl = 1.0 / std::tgamma(1.0 + mu);
        gammi = 1.0 / std::tgamma(1.0 - mu);
        gam1 = (gammi - gampl) / (2.0 * mu);
        gam2 = 0.5 * (gammi + gampl);
    }
}

// K_mu(x) and K_{mu+1}(x) for x <= 2 by the Temme power series.
void bessel_k_series(double x, double mu, double& kmu, double& kmu1) {
    const double x2 = 0.5 * x;
    const double mu2 = mu * mu;
    const double pimu = kPi * mu;
    const double fact = std::abs(pimu) < 1e-150 ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < 1e-150 ? 1.0 : std::sinh(e) / e;

    double gam1, gam2, gampl, gammi;
    temme_gammas(mu, gam1, gam2, gampl, gammi);

    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    for (int i = 1; i <= kMaxIter; ++i) {
        ff = (i * ff + p + q) / (i * i - mu2);
        c *= d / i;
        p /= i - mu;
        q /= i + mu;
        const double del = c * ff;
        sum += del;
        sum1 += c * (p - i * ff);
        if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    kmu = sum;
    kmu1 = sum1 * 2.0 / x;
}

// K_mu(x) and K_{mu+1}(x) for x > 2 by Steed's continued fraction (CF2).
void bessel_k_cf2(double x, double mu, double& kmu, double& kmu1) {
    const double mu2 = mu * mu;
    const double a1 = 0.25 - mu2;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= kMaxIter; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps) break;
    }
    h = a1 * h;
    kmu = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
    kmu1 = kmu * (mu + x + 0.5 - h) / x;
}

}  // namespace

double bessel_k(double nu, double x) {
    nu = std::abs(nu);
    const int n = static_cast<int>(nu + 0.5);
    const double mu = nu - n;

    double kmu, kmu1;
    if (x <= 2.0)
        bessel_k_series(x, mu, kmu, kmu1);
    else
        bessel_k_cf2(x, mu, kmu, kmu1);

    // Upward recurrence K_{m+1} = K_{m-1} + 2m/x K_m, rescaled so the
    // intermediate values stay representable; the final exp saturates to
    // +inf when the true value exceeds double range.
    double log_scale = 0.0;
    const double xi2 = 2.0 / x;
    for (int i = 1; i <= n; ++i) {
        const double next = (mu + i) * xi2 * kmu1 + kmu;
        kmu = kmu1;
        kmu1 = next;
        if (kmu1 > 1e280) {
            kmu *= 1e-280;
            kmu1 *= 1e-280;
            log_scale += 280.0 * std::log(10.0);
        }
    }
    if (log_scale == 0.0) return kmu;
    return std::exp(std::log(kmu) + log_scale);
}

double matern_corr(double h, double nu, double alpha) {
    h = std::abs(h);
    if (h == 0.0) return 1.0;
    const double z = alpha * h;
    const double value =
        std::pow(2.0, 1.0 - nu) / std::tgamma(nu) * std::pow(z, nu) * bessel_k(nu, z);
    // Clamp roundoff excursions; the analytic range is (0, 1].
    if (value > 1.0) return 1.0;
    if (value < 0.0) return 0.0;
    return value;
}

}  // namespace dirout
