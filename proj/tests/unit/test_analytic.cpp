#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "geolangevin/analytic.hpp"
#include "geolangevin/errors.hpp"

using namespace geolangevin;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Partial fractions: 1/(x^2 (1+x^2)^2) = 1/x^2 - 1/(1+x^2) - 1/(1+x^2)^2.
double antiderivative(double x) { return -1.0 / x - 1.5 * std::atan(x) - x / (2.0 * (1.0 + x * x)); }

// Tail integral from x to infinity as the series sum (-1)^k (k+1) / ((2k+5) x^(2k+5)), x >= 3;
// the closed form cancels catastrophically there.
double tail(double x) {
    if (std::isinf(x)) return 0.0;
    const double inv2 = 1.0 / (x * x);
    double term = inv2 * inv2 / x;
    double sum = 0.0;
    for (int k = 0; k < 80; ++k) {
        sum += (k % 2 == 0 ? 1.0 : -1.0) * (k + 1) * term / (2 * k + 5);
        term *= inv2;
    }
    return sum;
}

double oracle(double a, double b) {
    constexpr double split = 3.0;
    if (a >= split) return tail(a) - tail(b);
    if (b <= split) return antiderivative(b) - antiderivative(a);
    return antiderivative(split) - antiderivative(a) + tail(split) - tail(b);
}

// Endpoints re-placed about the same mean point with |R_f - R_i|^2 = 2 kT T / eta.
ModelParams tuned(ModelParams p) {
    const Vec2 mid = p.mean_point();
    const double half = 0.5 * std::sqrt(2.0 * p.kT * p.duration / p.friction);
    const Vec2 dir = rotated(mid / norm(mid), 0.5 * kPi);
    p.start = mid - half * dir;
    p.end = mid + half * dir;
    return p;
}

}  // namespace

TEST(BandwidthIntegral, MatchesAntiderivative) {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> log10x(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        double a = std::pow(10.0, log10x(gen));
        double b = std::pow(10.0, log10x(gen));
        if (a > b) std::swap(a, b);
        const double expected = oracle(a, b);
        EXPECT_NEAR(bandwidth_integral(a, b), expected, 1e-9 * std::abs(expected) + 1e-300) << a << " " << b;
    }
    for (double a : {1e-3, 0.1, 1.0, 30.0}) {
        const double expected = oracle(a, kInf);
        EXPECT_NEAR(bandwidth_integral(a, kInf), expected, 1e-9 * expected);
    }
    EXPECT_EQ(bandwidth_integral(0.5, 0.5), 0.0);
}

TEST(BandwidthIntegral, RejectsDivergentOrReversedLimits) {
    EXPECT_THROW(bandwidth_integral(0.0, 1.0), DomainError);
    EXPECT_THROW(bandwidth_integral(-1.0, 1.0), DomainError);
    EXPECT_THROW(bandwidth_integral(2.0, 1.0), DomainError);
    EXPECT_THROW(bandwidth_integral(1.0, std::nan("")), DomainError);
}

TEST(Kappa, SquareRootLawInRelaxationRatio) {
    const double k1 = kappa(0.1, 10.0, 0.05);
    EXPECT_NEAR(kappa(0.1, 10.0, 0.1), std::sqrt(2.0) * k1, 1e-12);
    EXPECT_NEAR(kappa(0.1, 10.0, 0.2), 2.0 * k1, 1e-12);
    EXPECT_EQ(kappa(0.1, 10.0, 0.0), 0.0);
    EXPECT_THROW(kappa(0.1, 10.0, -1.0), DomainError);
}

TEST(Kappa, Limits) {
    // Small x_c: the integral is dominated by 1/x_c.
    const double xc = 1e-6;
    EXPECT_NEAR(kappa(xc, kInf, 1.0), std::sqrt(3.0 / (kPi * xc)), 1e-3 * std::sqrt(3.0 / (kPi * xc)));
    // Narrow band: kappa^2 ~ 3 (tau/T) width f(x) / pi.
    const double x = 2.0, w = 1e-6;
    const double f = 1.0 / (x * x * (1.0 + x * x) * (1.0 + x * x));
    EXPECT_NEAR(kappa(x, x + w, 1.0), std::sqrt(3.0 * w * f / kPi), 1e-5 * std::sqrt(3.0 * w * f / kPi));
    EXPECT_THROW(kappa(0.0, 1.0, 1.0), DomainError);
}

TEST(MeanShift, ChordFromAxisToAxis) {
    const ModelParams p;
    EXPECT_NEAR(mean_shift(p), -p.hbar * kPi / (4.0 * p.duration), 1e-12);
}

TEST(MeanShift, EqualsSweptAngleOfTheChord) {
    ModelParams p;
    p.start = {3.0, 1.0};
    p.end = {-1.0, 2.0};
    p.hbar = 1.7;
    // Independent quadrature of d phi = (x dy - y dx) / |R|^2 along the straight chord.
    const Vec2 d = p.end - p.start;
    auto dphi = [&](double s) {
        const Vec2 r = p.start + s * d;
        return cross(r, d) / norm2(r);
    };
    const int n = 20000;
    double swept = 0.0;
    for (int i = 0; i < n; ++i) {
        const double s0 = static_cast<double>(i) / n, s1 = static_cast<double>(i + 1) / n;
        swept += (s1 - s0) / 6.0 * (dphi(s0) + 4.0 * dphi(0.5 * (s0 + s1)) + dphi(s1));
    }
    EXPECT_NEAR(mean_shift(p), -p.hbar * swept / (2.0 * p.duration), 1e-10);
}

TEST(MeanShift, CollinearPathHasNoShift) {
    ModelParams p;
    p.start = {1.0, 2.0};
    p.end = {5.0, 10.0};
    EXPECT_NEAR(mean_shift(p), 0.0, 1e-15);
}

TEST(MeanShift, AntisymmetricUnderReversal) {
    ModelParams p;
    p.start = {30.0, -4.0};
    p.end = {-2.0, 50.0};
    ModelParams q = p;
    std::swap(q.start, q.end);
    EXPECT_NEAR(mean_shift(q), -mean_shift(p), 1e-14);
}

TEST(Sigma, TunedEndpointsMatchSimplifiedForm) {
    for (double kT : {0.5, 4.0, 20.0}) {
        ModelParams p;
        p.kT = kT;
        p.mass = 0.7;
        p = tuned(p);
        EXPECT_NEAR(sigma_analytic(p), sigma_simplified(p), 1e-12 * sigma_simplified(p)) << "kT " << kT;
    }
}

TEST(Sigma, LinearInTemperatureWhenBandIsCapped) {
    ModelParams p;
    p.noise_band_cap = 2.0;  // below sqrt(6) kT / hbar for both temperatures
    p.kT = 4.0;
    const double base = sigma_simplified(p);
    p.kT = 8.0;
    EXPECT_NEAR(sigma_simplified(p), 2.0 * base, 1e-12 * base);
}

TEST(Sigma, LinearInHbarWhenBandIsCapped) {
    ModelParams p;
    p.noise_band_cap = 2.0;
    const double a = sigma_analytic(p);
    const double s = sigma_simplified(p);
    p.hbar = 2.0;
    EXPECT_NEAR(sigma_analytic(p), 2.0 * a, 1e-12 * a);
    EXPECT_NEAR(sigma_simplified(p), 2.0 * s, 1e-12 * s);
}

TEST(Sigma, VanishesWithoutNoise) {
    ModelParams p;
    p.kT = 0.0;
    EXPECT_EQ(sigma_analytic(p), 0.0);
    EXPECT_EQ(sigma_simplified(p), 0.0);
}

TEST(Sigma, IncreasesWithTemperature) {
    ModelParams p;
    double previous = 0.0;
    for (double kT : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        p.kT = kT;
        const double s = sigma_analytic(p);
        EXPECT_GT(s, previous);
        previous = s;
    }
}

TEST(Sigma, EqualsFrequencyIntegralRoute) {
    for (double m : {0.2, 1.0, 5.0}) {
        ModelParams p;
        p.mass = m;
        p.dt = 0.001;
        p.start = {40.0, 10.0};
        p.end = {-5.0, 60.0};
        const double s = sigma_analytic(p);
        EXPECT_NEAR(detail::variance_from_frequency_integrals(p), s * s, 1e-8 * s * s) << "M " << m;
    }
}

TEST(Predictions, DimensionallyConsistent) {
    // Rescale energy by a, time by b and length by c; energies must scale by a.
    const double a = 3.0, b = 0.5, c = 7.0;
    ModelParams p;
    p.start = {80.0, 20.0};
    p.end = {-10.0, 90.0};
    ModelParams q = p;
    q.hbar *= a * b;
    q.mass *= a * b * b / (c * c);
    q.friction *= a * b / (c * c);
    q.kT *= a;
    q.duration *= b;
    q.dt *= b;
    q.start = c * p.start;
    q.end = c * p.end;
    const Predictions pp = predict(p);
    const Predictions pq = predict(q);
    EXPECT_NEAR(pq.mean_shift, a * pp.mean_shift, 1e-12 * std::abs(a * pp.mean_shift));
    EXPECT_NEAR(pq.sigma, a * pp.sigma, 1e-9 * a * pp.sigma);
    EXPECT_NEAR(pq.sigma_simplified, a * pp.sigma_simplified, 1e-9 * a * pp.sigma_simplified);
    EXPECT_NEAR(pq.kappa, pp.kappa, 1e-9 * pp.kappa);
    EXPECT_NEAR(pq.low_noise_margin, pp.low_noise_margin, 1e-12);
    EXPECT_NEAR(pq.x_c, pp.x_c, 1e-12);
}

TEST(Predictions, DefaultModel) {
    const Predictions p = predict(ModelParams{});
    EXPECT_NEAR(p.low_noise_margin, 0.016, 1e-15);
    EXPECT_TRUE(p.low_noise);
    EXPECT_NEAR(p.x_c, kPi / 20.0, 1e-15);
    EXPECT_NEAR(p.x_b, std::sqrt(6.0) * 4.0, 1e-14);
    EXPECT_EQ(p.c1, p.mean_shift);
    EXPECT_NEAR(p.c3, 5000.0 / 8.0, 1e-12);
    EXPECT_NEAR(p.kappa, kappa(p.x_c, p.x_b, 1.0 / 20.0), 1e-15);
}

TEST(LowNoise, MarginAndThreshold) {
    ModelParams p;
    p.kT = 20.0;
    p.start = {10.0, 0.0};
    p.end = {0.0, 10.0};  // Rbar^2 = 50
    const LowNoiseCheck c = low_noise_check(p);
    EXPECT_NEAR(c.margin, 8.0, 1e-12);
    EXPECT_FALSE(c.ok);
    EXPECT_TRUE(low_noise_check(p, 8.1).ok);
    EXPECT_FALSE(low_noise_check(p, 8.0).ok);
}

TEST(Msd, TwoDimensionalDiffusion) {
    ModelParams p;
    p.kT = 4.0;
    p.friction = 2.0;
    const MsdPrediction m = msd_prediction(3.0, p);
    EXPECT_DOUBLE_EQ(m.one_dim, 12.0);
    EXPECT_DOUBLE_EQ(m.value, 24.0);
    EXPECT_THROW(msd_prediction(-1.0, p), DomainError);
}
