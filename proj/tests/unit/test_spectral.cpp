#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "geolangevin/errors.hpp"
#include "geolangevin/langevin.hpp"
#include "geolangevin/spectral.hpp"

using namespace geolangevin;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoltzmannEvPerK = 8.617333262e-5;

double band_mean(const Spectrum& s, double lo, double hi, auto&& reference) {
    double ratio = 0.0;
    int count = 0;
    for (std::size_t j = 0; j < s.omega.size(); ++j) {
        if (s.omega[j] < lo || s.omega[j] > hi) continue;
        ratio += s.density[j] / reference(s.omega[j]);
        ++count;
    }
    return ratio / count;
}

// A long force-free trajectory far from the origin.
Trajectory long_run(double duration, bool noise, std::uint64_t seed) {
    ModelParams p;
    p.duration = duration;
    p.start = {1e6, 0.0};
    p.end = {0.0, 1e6};
    SimulationOptions opts;
    opts.record_noise = noise;
    RandomStream rng(seed);
    return simulate(p, opts, rng);
}

}  // namespace

TEST(Welch, SinusoidParseval) {
    const double dt = 0.01, amplitude = 3.0, omega0 = 7.0;
    std::vector<double> x(20000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = amplitude * std::cos(omega0 * static_cast<double>(i) * dt + 0.3);
    const Spectrum s = welch_density(x, dt, 8);
    EXPECT_NEAR(s.mean_square(), 0.5 * amplitude * amplitude, 0.02 * 0.5 * amplitude * amplitude);
    const auto peak = std::max_element(s.density.begin(), s.density.end()) - s.density.begin();
    EXPECT_NEAR(s.omega[static_cast<std::size_t>(peak)], omega0, s.omega[0]);
}

TEST(Welch, WhiteForceIsFlat) {
    const Trajectory t = long_run(2000.0, true, 21);
    const Spectrum s = periodogram(t, SignalKind::force, 200);
    const double level = 2.0 * t.params.friction * t.params.kT;
    EXPECT_NEAR(band_mean(s, s.omega.front(), s.omega.back(), [&](double) { return level; }), 1.0, 0.05);
    // Also flat: the low and high halves agree.
    const double mid = 0.5 * s.omega.back();
    const double low = band_mean(s, 0.0, mid, [&](double) { return level; });
    const double high = band_mean(s, mid, s.omega.back(), [&](double) { return level; });
    EXPECT_NEAR(low / high, 1.0, 0.05);
}

TEST(Welch, NoiselessForceRecordIsZero) {
    ModelParams p;
    p.kT = 0.0;
    p.duration = 10.0;
    SimulationOptions opts;
    opts.record_noise = true;
    RandomStream rng(1);
    const Spectrum s = periodogram(simulate(p, opts, rng), SignalKind::force, 4);
    for (double d : s.density) EXPECT_EQ(d, 0.0);
}

TEST(Welch, OrnsteinUhlenbeckVelocityIsUnbiased) {
    const Trajectory t = long_run(20000.0, false, 5);
    const Spectrum s = periodogram(t, SignalKind::velocity, 1000);
    const double r = band_mean(s, 1.0, 30.0, [&](double w) { return transfer_Jv(w, t.params); });
    EXPECT_NEAR(r, 1.0, 0.05);
    const Spectrum e = periodogram(t, SignalKind::energy, 1000);
    for (std::size_t j = 0; j < e.density.size(); ++j) {
        EXPECT_DOUBLE_EQ(e.density[j], 0.5 * t.params.mass * s.density[j]);
    }
}

TEST(Welch, WienerKhinchin) {
    // Covariance from the spectrum, K(t) = (1/pi) sum J cos(omega t) d omega, against the direct
    // lag average, relative to K(0).
    const Trajectory t = long_run(4000.0, false, 9);
    std::vector<double> vx(t.states.size());
    for (std::size_t i = 0; i < vx.size(); ++i) vx[i] = t.states[i].v.x;
    const Spectrum s = welch_density(vx, t.params.dt, 100);
    const std::size_t max_lag = 300;
    const std::vector<double> direct = autocovariance(vx, max_lag);
    const double dw = s.omega[1] - s.omega[0];
    for (std::size_t lag = 0; lag <= max_lag; lag += 25) {
        const double tau = static_cast<double>(lag) * t.params.dt;
        double k = 0.0;
        for (std::size_t j = 0; j < s.omega.size(); ++j) k += s.density[j] * std::cos(s.omega[j] * tau) * dw;
        k /= kPi;
        EXPECT_NEAR(k, direct[lag], 0.05 * direct[0]) << "lag " << lag;
    }
}

TEST(SineSeries, ParsevalIsExact) {
    std::mt19937_64 gen(4);
    std::normal_distribution<double> n01;
    std::vector<double> x(257);
    double walk = 0.0;
    for (double& v : x) v = (walk += n01(gen));
    const double dt = 0.02;
    const Spectrum s = sine_density(x, dt);
    const double slope = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    double sum2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double d = x[j] - (x.front() + slope * static_cast<double>(j));
        sum2 += d * d;
    }
    EXPECT_NEAR(s.mean_square(), sum2 / static_cast<double>(x.size() - 1), 1e-10 * sum2);
    EXPECT_NEAR(s.omega[0], kPi / (256 * dt), 1e-12);
}

TEST(SineSeries, LinearDriftIsRemoved) {
    std::vector<double> x(64);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 2.0 - 0.7 * static_cast<double>(i);
    for (double d : sine_density(x, 0.1).density) EXPECT_NEAR(d, 0.0, 1e-25);
}

TEST(Periodogram, PositionFollowsTransferFunction) {
    const Trajectory t = long_run(400.0, false, 2);
    const Spectrum s = periodogram(t, SignalKind::position, 4);
    const double r = band_mean(s, 1.0, 20.0, [&](double w) { return transfer_JR(w, t.params); });
    EXPECT_NEAR(r, 1.0, 0.1);
}

TEST(Periodogram, Errors) {
    ModelParams p;
    p.duration = 1.0;
    RandomStream rng(1);
    const Trajectory t = simulate(p, SimulationOptions{}, rng);
    EXPECT_THROW(periodogram(t, SignalKind::force), DomainError);
    EXPECT_THROW(periodogram(t, SignalKind::position, 60), DomainError);
    EXPECT_THROW(periodogram(t, SignalKind::velocity, 0), DomainError);
    const std::vector<Spectrum> none;
    EXPECT_THROW(average(none), DomainError);
}

TEST(Transfer, PositionDensity) {
    ModelParams p;
    p.mass = 2.0;
    p.friction = 3.0;
    p.kT = 1.5;
    const double wr = p.damping_rate();
    EXPECT_NEAR(transfer_JR(wr, p), p.friction * p.kT / (p.mass * p.mass * std::pow(wr, 4)), 1e-12);
    const double w = 1e3 * wr;
    EXPECT_NEAR(std::log(transfer_JR(10.0 * w, p) / transfer_JR(w, p)) / std::log(10.0), -4.0, 1e-5);
    EXPECT_NEAR(transfer_JR(0.7, p) * 0.49, transfer_Jv(0.7, p), 1e-14);
    EXPECT_THROW(transfer_JR(0.0, p), DomainError);
}

TEST(Transfer, VelocityAndEnergyIntegrals) {
    using boost::math::quadrature::gauss_kronrod;
    ModelParams p;
    p.mass = 0.5;
    p.friction = 2.0;
    p.kT = 3.0;
    const double inf = std::numeric_limits<double>::infinity();
    const double v2 = gauss_kronrod<double, 61>::integrate([&](double w) { return transfer_Jv(w, p); }, 0.0, inf) / kPi;
    EXPECT_NEAR(v2, p.kT / p.mass, 1e-9);
    const double energy = gauss_kronrod<double, 61>::integrate(
                              [&](double w) { return energy_spectral_density(w, p, inf); }, 0.0, inf) / kPi;
    EXPECT_NEAR(energy, 0.5 * p.kT, 1e-9);
    EXPECT_DOUBLE_EQ(energy_spectral_density(2.0, p, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(energy_spectral_density(0.5, p, 1.0), 0.5 * p.mass * transfer_Jv(0.5, p));
}

TEST(CorrelationTime, Value) {
    ModelParams p;
    p.kT = 1.0;
    EXPECT_NEAR(correlation_time(p), 0.408248290463863, 1e-12);
    p.kT = 0.0;
    EXPECT_THROW(correlation_time(p), DomainError);
}

TEST(Adiabaticity, TenthOfAnElectronVoltGap) {
    // Energies in eV; the ratio hbar / (tau_c * gap) = sqrt(6) kT / gap does not depend on hbar.
    ModelParams p;
    p.hbar = 6.582119569e-16;
    p.start = {1.0, 0.0};
    p.end = {0.0, 1.0};
    p.coupling = 0.1 / (2.0 * p.mean_radius());
    for (double kelvin : {4.0, 10.0, 30.0}) {
        p.kT = kBoltzmannEvPerK * kelvin;
        EXPECT_TRUE(adiabaticity_check(p).ok) << kelvin << " K";
    }
    p.kT = kBoltzmannEvPerK * 30.0;
    EXPECT_NEAR(adiabaticity_check(p).ratio, 0.0633, 1e-4);
    p.kT = kBoltzmannEvPerK * 100.0;
    const AdiabaticityReport hot = adiabaticity_check(p);
    EXPECT_FALSE(hot.ok);
    EXPECT_NEAR(hot.ratio, 0.2111, 1e-4);
    EXPECT_NEAR(hot.spacing, 0.1, 1e-15);
}

TEST(Adiabaticity, ThresholdIsStrict) {
    ModelParams p;
    const AdiabaticityReport r = adiabaticity_check(p);
    EXPECT_FALSE(adiabaticity_check(p, r.ratio).ok);
    EXPECT_TRUE(adiabaticity_check(p, std::nextafter(r.ratio, 1.0)).ok);
    p.kT = 0.0;
    const AdiabaticityReport cold = adiabaticity_check(p);
    EXPECT_EQ(cold.ratio, 0.0);
    EXPECT_TRUE(cold.ok);
}

TEST(Adiabaticity, UsesClosestApproach) {
    ModelParams p;
    p.start = {10.0, 0.0};
    p.end = {-10.0, 1.0};
    p.kT = 0.0;
    SimulationOptions opts;
    opts.initial_velocity = InitialVelocity::homogeneous;
    RandomStream rng(1);
    const Trajectory t = simulate(p, opts, rng);
    p.kT = 0.05;
    const AdiabaticityReport r = adiabaticity_check(p, 0.1, &t);
    ASSERT_TRUE(r.min_radius.has_value());
    EXPECT_NEAR(*r.min_radius, 10.0 / std::sqrt(401.0), 1e-3);
    EXPECT_GT(*r.ratio_at_min, r.ratio);
    EXPECT_FALSE(adiabaticity_check(p, 0.1).min_radius.has_value());
}

TEST(SpectrumCsv, Header) {
    Spectrum s;
    s.omega = {1.0, 2.0};
    s.density = {0.5, 0.25};
    std::ostringstream out;
    write_spectrum_csv(out, s);
    EXPECT_EQ(out.str(), "omega,density\n1,0.5\n2,0.25\n");
}

TEST(SignalKind, Strings) {
    for (SignalKind k : {SignalKind::position, SignalKind::velocity, SignalKind::force, SignalKind::energy}) {
        EXPECT_EQ(signal_kind_from_string(to_string(k)), k);
    }
    EXPECT_THROW(signal_kind_from_string("phase"), ConfigError);
}
