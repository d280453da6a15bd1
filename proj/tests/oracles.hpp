// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference implementations, deliberately independent of the
// production code paths they check: a direct O(n^2) inverse DFT, ascending
// series for the Bessel functions J0 and Y0, and a Cramer's-rule 2x2 solver.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracles {

using Complex = std::complex<double>;

// Direct inverse DFT with zero padding and the same band-center envelope
// convention as the production transform:
//   x[j] = (1/L) e^{-i pi j (n-1)/L} sum_k in[k] e^{+2 pi i jk/L}.
// Angles are reduced in integer arithmetic, so this stays accurate for the
// longest transforms used in tests.
inline std::vector<Complex> direct_inverse_dft(const std::vector<Complex>& in, std::size_t L) {
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
        std::uint64_t s = (static_cast<std::uint64_t>(j) * (n - 1)) % (2 * L);
        double shift = -pi * static_cast<double>(s) / static_cast<double>(L);
        out[j] = acc * Complex(std::cos(shift), std::sin(shift)) / static_cast<double>(L);
    }
    return out;
}

// Ascending power series: J0(x) = sum_m (-x^2/4)^m / (m!)^2.
inline double bessel_j0_series(double x) {
    double term = 1.0;
    double sum = 1.0;
    double q = -x * x / 4.0;
    for (int m = 1; m <= 40; ++m) {
        term *= q / (static_cast<double>(m) * m);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum))
            break;
    }
    return sum;
}

// Y0(x) = (2/pi) [ (ln(x/2) + gamma) J0(x) + sum_m (-1)^{m+1} H_m (x^2/4)^m / (m!)^2 ]
// with H_m the harmonic numbers; valid for the small arguments used in tests.
inline double bessel_y0_series(double x) {
    const double pi = 3.14159265358979323846;
    const double euler_gamma = 0.57721566490153286061;
    double q = x * x / 4.0;
    double term = 1.0; // q^m / (m!)^2
    double harmonic = 0.0;
    double sum = 0.0;
    for (int m = 1; m <= 40; ++m) {
        term *= q / (static_cast<double>(m) * m);
        harmonic += 1.0 / m;
        double contribution = (m % 2 == 1 ? 1.0 : -1.0) * harmonic * term;
        sum += contribution;
        if (std::abs(contribution) < 1e-18 * std::abs(sum) && m > 4)
            break;
    }
    return (2.0 / pi) * ((std::log(x / 2.0) + euler_gamma) * bessel_j0_series(x) + sum);
}

// Solves the 2x2 system M v = b by Cramer's rule.
inline void cramer_2x2(const Complex m[2][2], const Complex b[2], Complex v[2]) {
    Complex det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    v[0] = (b[0] * m[1][1] - m[0][1] * b[1]) / det;
    v[1] = (m[0][0] * b[1] - b[0] * m[1][0]) / det;
}

} // namespace oracles
