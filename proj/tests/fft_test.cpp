#include "qgrad/fft.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace qgrad;

namespace {

std::vector<Complex> naive_dft(const std::vector<Complex>& x, Direction dir) {
    const std::size_t n = x.size();
    const double sign = dir == Direction::forward ? -1.0 : 1.0;
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex s{};
        for (std::size_t j = 0; j < n; ++j) {
            const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
            s += x[j] * std::polar(1.0, angle);
        }
        out[k] = s;
    }
    return out;
}

std::vector<Complex> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<Complex> v(n);
    for (auto& z : v) z = {g(rng), g(rng)};
    return v;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST(Dft, MatchesNaiveDftForAllLengthsUpTo130) {
    for (std::size_t n = 1; n <= 130; ++n) {
        for (auto dir : {Direction::forward, Direction::inverse}) {
            auto x = random_vector(n, n);
            const auto expected = naive_dft(x, dir);
            dft(x, dir);
            EXPECT_LT(max_diff(x, expected), 1e-10 * std::sqrt(static_cast<double>(n))) << "n=" << n;
        }
    }
}

TEST(Dft, LargePrimeLength) {
    auto x = random_vector(1018, 3);
    const auto expected = naive_dft(x, Direction::forward);
    dft(x, Direction::forward);
    EXPECT_LT(max_diff(x, expected), 1e-9);
}

TEST(FourierNd, OneDimensionIsScaledDft) {
    for (std::int64_t N : {1, 7, 80, 97}) {
        auto x = random_vector(static_cast<std::size_t>(N), 11);
        auto expected = naive_dft(x, Direction::forward);
        for (auto& z : expected) z /= std::sqrt(static_cast<double>(N));
        fourier_nd(x, 1, N, Direction::forward);
        EXPECT_LT(max_diff(x, expected), 1e-12) << "N=" << N;
    }
    std::vector<Complex> bad(7);
    EXPECT_THROW(fourier_nd(bad, 1, 8, Direction::forward), std::invalid_argument);
}

TEST(FourierNd, UnitaryAndInvertible) {
    for (std::int64_t N : {5, 8, 12, 37}) {
        auto x = random_vector(static_cast<std::size_t>(N * N), 9);
        const auto original = x;
        double before = 0.0, after = 0.0;
        for (const auto& z : x) before += std::norm(z);
        fourier_nd(x, 2, N, Direction::forward);
        for (const auto& z : x) after += std::norm(z);
        EXPECT_NEAR(after / before, 1.0, 1e-12);
        fourier_nd(x, 2, N, Direction::inverse);
        EXPECT_LT(max_diff(x, original), 1e-12);
    }
}

TEST(FourierNd, ResultIndependentOfWorkerCount) {
    const auto input = random_vector(24 * 24 * 24, 5);
    auto a = input;
    auto b = input;
    fourier_nd(a, 3, 24, Direction::forward, 1);
    fourier_nd(b, 3, 24, Direction::forward, 5);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_EQ(a[i].real(), b[i].real());
        ASSERT_EQ(a[i].imag(), b[i].imag());
    }
}
