// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "riscav/fft.hpp"
#include "oracles.hpp"

using riscav::fft::Complex;
using riscav::fft::inverse_dft;

namespace {

// Plain inverse DFT without the envelope shift, for transform-level checks.
std::vector<Complex> plain_inverse(const std::vector<Complex>& in, std::size_t L) {
    std::size_t n = in.size();
    std::vector<Complex> out(L);
    const double pi = 3.14159265358979323846;
    for (std::size_t j = 0; j < L; ++j) {
        Complex acc(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            std::uint64_t r = (static_cast<std::uint64_t>(j) * k) % L;
            double angle = 2.0 * pi * static_cast<double>(r) / static_cast<double>(L);
            acc += in[k] * Complex(std::cos(angle), std::sin(angle));
        }
        out[j] = acc / static_cast<double>(L);
    }
    return out;
}

double max_abs(const std::vector<Complex>& v) {
    double m = 0.0;
    for (const Complex& c : v)
        m = std::max(m, std::abs(c));
    return m;
}

void check_against_oracle(std::size_t n, std::size_t L, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto unit = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; };
    std::vector<Complex> in(n);
    for (Complex& c : in)
        c = Complex(unit(), unit());
    auto got = inverse_dft(in, L);
    auto want = plain_inverse(in, L);
    REQUIRE(got.size() == want.size());
    double scale = max_abs(want);
    for (std::size_t j = 0; j < L; ++j)
        CHECK(std::abs(got[j] - want[j]) <= 1e-9 * scale);
}

} // namespace

TEST_CASE("single-bin spectra give complex exponentials") {
    // bin k of an L-point inverse DFT is (1/L) e^{2 pi i jk / L}
    std::size_t L = 24;
    std::vector<Complex> in(5, Complex(0.0, 0.0));
    in[2] = Complex(1.0, 0.0);
    auto out = inverse_dft(in, L);
    for (std::size_t j = 0; j < L; ++j) {
        double angle = 2.0 * 3.14159265358979323846 * 2.0 * j / L;
        CHECK(std::abs(out[j] - Complex(std::cos(angle), std::sin(angle)) / 24.0) < 1e-14);
    }
}

TEST_CASE("power-of-two and Bluestein paths match the direct oracle") {
    check_against_oracle(64, 1024, 11);   // radix-2
    check_against_oracle(101, 1616, 12);  // Bluestein, 16x zero pad
    check_against_oracle(401, 401, 13);   // Bluestein, no padding
    check_against_oracle(33, 97, 14);     // Bluestein, prime length
}

TEST_CASE("401-point band at 16x padding matches the oracle within 1e-9") {
    check_against_oracle(401, 6416, 15);
}

TEST_CASE("Parseval for the unnormalized pair") {
    // sum |in|^2 == L * sum |out|^2 for the (1/L)-normalized inverse
    std::mt19937_64 rng(99);
    auto unit = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; };
    for (std::size_t L : {512u, 1616u, 6416u}) {
        std::vector<Complex> in(101);
        for (Complex& c : in)
            c = Complex(unit(), unit());
        auto out = inverse_dft(in, L);
        double e_in = 0.0, e_out = 0.0;
        for (const Complex& c : in)
            e_in += std::norm(c);
        for (const Complex& c : out)
            e_out += std::norm(c);
        CHECK(std::abs(e_in - static_cast<double>(L) * e_out) <= 1e-9 * e_in);
    }
}
