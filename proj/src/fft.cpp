// SPDX-License-Identifier: Apache-2.0
#include "riscav/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace riscav::fft {

namespace {

// Twiddle table for one power-of-two length: w[k] = e^{-2 pi i k / n}, k < n/2.
struct TwiddleTable {
    std::size_t n;
    std::vector<Complex> w;
};

std::shared_ptr<const TwiddleTable> twiddles_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const TwiddleTable>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;
    auto table = std::make_shared<TwiddleTable>();
    table->n = n;
    table->w.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        table->w[k] = Complex(std::cos(angle), std::sin(angle));
    }
    cache.emplace(n, table);
    return table;
}

void bit_reverse_permute(std::vector<Complex>& a) {
    std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
}

// Bluestein plan for one arbitrary length n: chirp c[k] = e^{+i pi k^2 / n}
// and the forward FFT of the matching kernel at the convolution length m.
struct BluesteinPlan {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<Complex> chirp;      // length n
    std::vector<Complex> kernel_fft; // length m
};

std::shared_ptr<const BluesteinPlan> bluestein_plan_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const BluesteinPlan>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;

    auto plan = std::make_shared<BluesteinPlan>();
    plan->n = n;
    std::size_t m = 1;
    while (m < 2 * n - 1)
        m <<= 1;
    plan->m = m;

    // k^2 reduced mod 2n in integers keeps the chirp phase exact for large k.
    plan->chirp.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) % (2 * n);
        double angle = std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
        plan->chirp[k] = Complex(std::cos(angle), std::sin(angle));
    }

    // Convolution kernel b[k] = e^{-i pi k^2 / n} = conj(chirp), even in k,
    // laid out circularly so linear convolution over [-(n-1), n-1] fits.
    std::vector<Complex> kernel(m, Complex(0.0, 0.0));
    kernel[0] = Complex(1.0, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        kernel[k] = std::conj(plan->chirp[k]);
        kernel[m - k] = kernel[k];
    }
    transform_pow2(kernel, -1);
    plan->kernel_fft = std::move(kernel);

    cache.emplace(n, plan);
    return plan;
}

} // namespace

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

void transform_pow2(std::vector<Complex>& data, int sign) {
    std::size_t n = data.size();
    if (!is_power_of_two(n))
        throw std::invalid_argument("transform_pow2 requires a power-of-two length");
    if (n == 1)
        return;
    auto table = twiddles_for(n);
    bit_reverse_permute(data);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                Complex w = table->w[k * stride];
                if (sign > 0)
                    w = std::conj(w);
                Complex& a = data[start + k];
                Complex& b = data[start + k + len / 2];
                Complex t = b * w;
                b = a - t;
                a = a + t;
            }
        }
    }
    if (sign > 0) {
        double scale = 1.0 / static_cast<double>(n);
        for (Complex& v : data)
            v *= scale;
    }
}

std::vector<Complex> inverse_dft(const std::vector<Complex>& in, std::size_t out_length) {
    std::size_t n = out_length;
    if (n == 0)
        throw std::invalid_argument("inverse_dft needs a nonzero output length");
    if (in.size() > n)
        throw std::invalid_argument("inverse_dft input longer than output length");

    if (is_power_of_two(n)) {
        std::vector<Complex> data(n, Complex(0.0, 0.0));
        std::copy(in.begin(), in.end(), data.begin());
        transform_pow2(data, +1);
        return data;
    }

    // Bluestein: x[j] = (1/n) c[j] * conv(a, b)[j] with a[k] = in[k] c[k],
    // b[k] = conj(c[k]); the +i chirp sign matches the inverse transform.
    auto plan = bluestein_plan_for(n);
    std::size_t m = plan->m;
    std::vector<Complex> a(m, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < in.size(); ++k)
        a[k] = in[k] * plan->chirp[k];
    transform_pow2(a, -1);
    for (std::size_t k = 0; k < m; ++k)
        a[k] *= plan->kernel_fft[k];
    transform_pow2(a, +1);

    std::vector<Complex> out(n);
    double scale = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = a[j] * plan->chirp[j] * scale;
    return out;
}

} // namespace riscav::fft
