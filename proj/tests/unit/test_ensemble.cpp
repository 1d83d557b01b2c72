#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "geolangevin/analytic.hpp"
#include "geolangevin/ensemble.hpp"
#include "geolangevin/errors.hpp"
#include "test_support.hpp"

using namespace geolangevin;
using geolangevin::test_support::ThreadsEnv;

namespace {

ModelParams short_model() {
    ModelParams p;
    p.duration = 2.0;
    return p;
}

EnsembleOptions options(std::size_t n, std::uint64_t seed = 42) {
    EnsembleOptions o;
    o.n_paths = n;
    o.seed = seed;
    return o;
}

}  // namespace

TEST(Ensemble, NoiselessPathsAreIdentical) {
    ModelParams p = short_model();
    p.kT = 0.0;
    EnsembleOptions o = options(16);
    o.simulation.initial_velocity = InitialVelocity::homogeneous;
    const ShiftEnsemble e = run_ensemble(p, o);
    for (const ShiftSample& s : e.samples) EXPECT_EQ(s.delta_e, e.samples.front().delta_e);
    EXPECT_LT(e.variance, 1e-28);  // only the rounding of the mean survives
    EXPECT_EQ(e.n_retained, 16u);
    EXPECT_NEAR(e.mean, mean_shift(p), 1e-9 * std::abs(mean_shift(p)));
}

TEST(Ensemble, StatisticsMatchDirectComputation) {
    const ShiftEnsemble e = run_ensemble(short_model(), options(500));
    std::vector<double> v;
    for (const ShiftSample& s : e.samples) v.push_back(s.delta_e);
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    EXPECT_NEAR(e.mean, mean, 1e-15);
    EXPECT_NEAR(e.variance, ss / (n - 1.0), 1e-12 * e.variance);
    EXPECT_NEAR(e.std_err_mean, std::sqrt(ss / (n - 1.0) / n), 1e-12);
    EXPECT_EQ(e.accepted_fraction, 1.0);
    for (std::size_t i = 0; i < e.samples.size(); ++i) EXPECT_EQ(e.samples[i].path_index, i);
}

TEST(Ensemble, IndependentOfThreadCount) {
    EnsembleOptions one = options(300, 7);
    one.threads = 1;
    EnsembleOptions four = one;
    four.threads = 4;
    ThreadsEnv env(nullptr);
    const ShiftEnsemble a = run_ensemble(short_model(), one);
    const ShiftEnsemble b = run_ensemble(short_model(), four);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        EXPECT_EQ(a.samples[i].delta_e, b.samples[i].delta_e);
        EXPECT_EQ(a.samples[i].endpoint, b.samples[i].endpoint);
    }
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.variance, b.variance);
    EXPECT_EQ(a.histogram.counts, b.histogram.counts);
}

TEST(Ensemble, SeedsGiveDifferentSamples) {
    const ShiftEnsemble a = run_ensemble(short_model(), options(50, 1));
    const ShiftEnsemble b = run_ensemble(short_model(), options(50, 2));
    EXPECT_NE(a.mean, b.mean);
}

TEST(Ensemble, HugeBinEqualsFreeConditioning) {
    EnsembleOptions binned = options(200);
    binned.conditioning = Conditioning::endpoint_binned;
    binned.bin_radius = 1e9;
    const ShiftEnsemble a = run_ensemble(short_model(), options(200));
    const ShiftEnsemble b = run_ensemble(short_model(), binned);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.variance, b.variance);
    EXPECT_EQ(b.n_retained, 200u);
}

TEST(Ensemble, BinnedConditioningKeepsNearbyEndpoints) {
    EnsembleOptions o = options(400);
    o.conditioning = Conditioning::endpoint_binned;
    o.simulation.initial_velocity = InitialVelocity::homogeneous;
    const ModelParams p = short_model();
    const ShiftEnsemble e = run_ensemble(p, o);
    EXPECT_NEAR(e.bin_radius, default_bin_radius(p), 1e-15);
    EXPECT_GT(e.n_retained, 0u);
    EXPECT_LT(e.n_retained, 400u);
    for (const ShiftSample& s : e.samples) {
        EXPECT_EQ(s.accepted, norm(s.endpoint - p.end) < e.bin_radius);
    }
}

TEST(Ensemble, EmptyBinReportsEndpoints) {
    EnsembleOptions o = options(20);
    o.conditioning = Conditioning::endpoint_binned;
    o.bin_radius = 1e-9;
    try {
        run_ensemble(short_model(), o);
        FAIL() << "expected EmptyEnsembleError";
    } catch (const EmptyEnsembleError& e) {
        EXPECT_EQ(e.endpoints().size(), 20u);
    }
}

TEST(Ensemble, RejectsBadOptions) {
    EXPECT_THROW(run_ensemble(short_model(), options(1)), ConfigError);
    EnsembleOptions o = options(10);
    o.conditioning = Conditioning::endpoint_binned;
    o.bin_radius = 0.0;
    EXPECT_THROW(run_ensemble(short_model(), o), ConfigError);
}

TEST(Ensemble, StandardErrorHalvesWithFourTimesThePaths) {
    const ShiftEnsemble small = run_ensemble(short_model(), options(1000, 3));
    const ShiftEnsemble large = run_ensemble(short_model(), options(4000, 4));
    EXPECT_NEAR(small.std_err_mean / large.std_err_mean, 2.0, 0.2);
}

TEST(Ensemble, DefaultBinRadius) {
    ModelParams p;
    p.kT = 2.0;
    p.duration = 8.0;
    p.friction = 0.5;
    EXPECT_DOUBLE_EQ(default_bin_radius(p), 0.5 * std::sqrt(2.0 * 2.0 * 2.0 * 8.0 / 0.5));
}

TEST(Histogram, CountsSumToSamples) {
    std::mt19937_64 gen(1);
    std::normal_distribution<double> n01;
    std::vector<double> v(5000);
    for (double& x : v) x = n01(gen);
    const Histogram fd = make_histogram(v);
    EXPECT_EQ(std::accumulate(fd.counts.begin(), fd.counts.end(), std::size_t{0}), v.size());
    EXPECT_EQ(fd.edges.size(), fd.counts.size() + 1);
    EXPECT_GT(fd.counts.size(), 20u);
    EXPECT_LT(fd.counts.size(), 80u);
    const Histogram fixed = make_histogram(v, 7);
    EXPECT_EQ(fixed.counts.size(), 7u);
    EXPECT_EQ(std::accumulate(fixed.counts.begin(), fixed.counts.end(), std::size_t{0}), v.size());
    EXPECT_DOUBLE_EQ(fixed.edges.front(), *std::min_element(v.begin(), v.end()));
    EXPECT_DOUBLE_EQ(fixed.edges.back(), *std::max_element(v.begin(), v.end()));
}

TEST(Histogram, DegenerateInputs) {
    EXPECT_TRUE(make_histogram({}).counts.empty());
    const Histogram same = make_histogram({2.0, 2.0, 2.0});
    ASSERT_EQ(same.counts.size(), 1u);
    EXPECT_EQ(same.counts[0], 3u);
}

TEST(Ensemble, RecomputeAfterEditingAcceptance) {
    ShiftEnsemble e = run_ensemble(short_model(), options(100));
    for (std::size_t i = 50; i < 100; ++i) e.samples[i].accepted = false;
    recompute_statistics(e);
    EXPECT_EQ(e.n_retained, 50u);
    EXPECT_DOUBLE_EQ(e.accepted_fraction, 0.5);
    double sum = 0.0;
    for (std::size_t i = 0; i < 50; ++i) sum += e.samples[i].delta_e;
    EXPECT_NEAR(e.mean, sum / 50.0, 1e-15);
}

TEST(SamplesCsv, Header) {
    const ShiftEnsemble e = run_ensemble(short_model(), options(3));
    std::ostringstream out;
    write_samples_csv(out, e);
    const std::string text = out.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "path_index,deltaE,endpoint_x,endpoint_y,accepted");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(PowerLaw, RecoversExactExponent) {
    const std::vector<double> x{1.0, 2.0, 4.0, 8.0, 16.0};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 1.7));
    const PowerLawFit f = fit_power_law(x, y);
    EXPECT_NEAR(f.exponent, 1.7, 1e-12);
    EXPECT_NEAR(f.ci_low, 1.7, 1e-6);
    EXPECT_NEAR(f.ci_high, 1.7, 1e-6);
    EXPECT_EQ(f.points, 5u);
}

TEST(PowerLaw, IntervalCoversTruthForNoisyData) {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> noise(0.0, 0.05);
    int covered = 0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> x, y;
        for (double v = 1.0; v <= 32.0; v *= 2.0) {
            x.push_back(v);
            y.push_back(std::pow(v, 0.5) * std::exp(noise(gen)));
        }
        const PowerLawFit f = fit_power_law(x, y);
        covered += f.ci_low <= 0.5 && 0.5 <= f.ci_high;
    }
    EXPECT_NEAR(static_cast<double>(covered) / trials, 0.95, 0.03);
}

TEST(PowerLaw, TooFewPoints) {
    EXPECT_TRUE(std::isnan(fit_power_law({1.0}, {2.0}).exponent));
    const PowerLawFit two = fit_power_law({1.0, 2.0}, {1.0, 4.0});
    EXPECT_NEAR(two.exponent, 2.0, 1e-12);
    EXPECT_TRUE(std::isinf(two.ci_high));
    EXPECT_EQ(fit_power_law({1.0, -2.0, 3.0}, {1.0, 1.0, 0.0}).points, 1u);
}

TEST(Sweep, HbarExponentIsExactlyOne) {
    SweepSpec s;
    s.parameter = "hbar";
    s.values = {0.5, 1.0, 2.0};
    const ScalingTable t = scaling_study(short_model(), s, options(200));
    EXPECT_NEAR(t.sigma_fit.exponent, 1.0, 1e-9);
    EXPECT_NEAR(t.mean_fit.exponent, 1.0, 1e-9);
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_NEAR(t.rows[2].sigma_mc, 4.0 * t.rows[0].sigma_mc, 1e-12 * t.rows[2].sigma_mc);
}

TEST(Sweep, ExcludesRowsOutsideLowNoise) {
    SweepSpec s;
    s.parameter = "kT";
    s.values = {1.0, 2.0, 4.0, 400.0};  // margin = 2 kT / 5000: the last row is 0.16
    const ScalingTable t = scaling_study(short_model(), s, options(50));
    ASSERT_EQ(t.rows.size(), 4u);
    EXPECT_TRUE(t.rows[2].low_noise);
    EXPECT_FALSE(t.rows[3].low_noise);
    EXPECT_EQ(t.sigma_fit.points, 3u);
}

TEST(Sweep, TiedEndpointsFollowDiffusionLength) {
    SweepSpec s;
    s.parameter = "kT";
    s.tie_endpoints_to_diffusion = true;
    const ModelParams base;
    const ModelParams p = apply_sweep_value(base, s, 9.0);
    EXPECT_NEAR(norm2(p.end - p.start), 2.0 * 9.0 * base.duration / base.friction, 1e-9);
    EXPECT_NEAR(norm(p.mean_point() - base.mean_point()), 0.0, 1e-12);
    EXPECT_NEAR(p.epsilon(), base.epsilon(), 1e-15);
    s.parameter = "g";
    EXPECT_THROW(apply_sweep_value(base, s, 1.0), ConfigError);
}

TEST(Threads, EnvironmentCapsWorkers) {
    {
        ThreadsEnv env("2");
        EXPECT_EQ(resolve_threads(8), 2u);
        EXPECT_EQ(resolve_threads(1), 1u);
        EXPECT_LE(resolve_threads(0), 2u);
    }
    {
        ThreadsEnv env(nullptr);
        EXPECT_EQ(resolve_threads(8), 8u);
        EXPECT_GE(resolve_threads(0), 1u);
    }
    {
        ThreadsEnv env("lots");
        EXPECT_EQ(resolve_threads(3), 3u);
    }
}

TEST(Threads, ParallelForVisitsEveryIndexOnce) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) EXPECT_EQ(h, 1);
    EXPECT_THROW(parallel_for(10, 4, [](std::size_t i) { if (i == 3) throw DomainError("x"); }), DomainError);
}

TEST(Conditioning, Strings) {
    EXPECT_EQ(conditioning_from_string("endpoint_binned"), Conditioning::endpoint_binned);
    EXPECT_EQ(conditioning_from_string(to_string(Conditioning::free)), Conditioning::free);
    EXPECT_THROW(conditioning_from_string("binned"), ConfigError);
}
