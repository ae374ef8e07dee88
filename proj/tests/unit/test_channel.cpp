#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "wslice/channel.hpp"
#include "wslice/rng.hpp"

using namespace wslice;
using wslice::testing::make_realization;

TEST_SUITE("channel") {
  TEST_CASE("mean SNR draws stay in range and repeat under a seed") {
    const Interval range{5.0, 25.0};
    auto a = make_rng(11, SeedTag::kMeanSnr);
    auto b = make_rng(11, SeedTag::kMeanSnr);
    const double x = sample_mean_snr(a, range);
    CHECK(range.contains(x));
    CHECK(x == sample_mean_snr(b, range));
  }

  TEST_CASE("mean SNR sample mean matches the uniform midpoint") {
    auto rng = make_rng(3, SeedTag::kMeanSnr);
    const auto v = sample_mean_snrs(10000, rng, {5.0, 25.0});
    double sum = 0.0;
    for (double x : v) sum += x;
    CHECK(std::abs(sum / v.size() - 15.0) < 0.5);
  }

  TEST_CASE("fading gain has the mean SNR as its expectation") {
    // Exponential(1) fading: mean snr_linear, standard deviation snr_linear.
    auto r = make_realization({1, 1, 1}, 1.0, 10.0);
    const double snr = 10.0;
    const int n = 10000;
    double sum = 0.0;
    auto rng = make_rng(5, SeedTag::kChannel);
    for (int t = 0; t < n; ++t) sum += sample_fading(r, t % r.config.num_windows, rng).gain[0];
    const double sigma = snr / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(sum / n - snr) < 3.0 * sigma);
  }

  TEST_CASE("fading gain is the linear SNR times a shared draw") {
    // At 0 dB the gain is the exponential draw itself; 10 dB scales it by 10.
    const auto zero = make_realization({1, 1, 1}, 1.0, 0.0);
    const auto ten = make_realization({1, 1, 1}, 1.0, 10.0);
    const auto a = sample_fading(zero, 3);
    const auto b = sample_fading(ten, 3);
    for (std::size_t i = 0; i < a.gain.size(); ++i) {
      CHECK(a.gain[i] > 0.0);
      CHECK(b.gain[i] == doctest::Approx(10.0 * a.gain[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("fading is reproducible per window and constant across slots") {
    auto r = make_realization({2, 2, 2});
    const auto a = sample_fading(r, 7);
    const auto b = sample_fading(r, 7);
    CHECK(a.gain == b.gain);
    CHECK(a.at(0, 0) == a.at(0, a.num_slots - 1));
    CHECK(sample_fading(r, 8).gain != a.gain);
  }

  TEST_CASE("Shannon rate") {
    CHECK(shannon_rate(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(shannon_rate(0.0, 1.0) == 0.0);
    CHECK(shannon_rate(15.0, 1.0) == doctest::Approx(4.0));
    CHECK(shannon_rate(30.0, 2.0) == doctest::Approx(4.0));
    CHECK(shannon_rate(std::exp(1.0) - 1.0, 1.0, LogBase::E) == doctest::Approx(1.0));
  }
}
