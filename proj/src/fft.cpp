#include "circlt/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace circlt {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

}  // namespace

Dft::Dft(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("Dft: length must be positive");
    pow2_ = is_pow2(n);
    m_ = pow2_ ? n : next_pow2(2 * n - 1);
    twiddle_.resize(m_ / 2);
    for (std::size_t k = 0; k < m_ / 2; ++k)
        twiddle_[k] = std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(m_));
    if (!pow2_) {
        // Bluestein: jk = (j^2 + k^2 - (k-j)^2) / 2, so the transform is a
        // convolution of x_j * exp(+i pi j^2/n) with exp(-i pi m^2/n).
        // Exponents are reduced mod 2n before the trig call to keep large
        // j accurate.
        chirp_.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            const std::size_t sq = (j * j) % (2 * n_);
            chirp_[j] = std::polar(1.0, kTwoPi * static_cast<double>(sq) / (2.0 * static_cast<double>(n_)));
        }
        std::vector<std::complex<double>> kernel(m_, 0.0);
        kernel[0] = std::conj(chirp_[0]);
        for (std::size_t j = 1; j < n_; ++j) kernel[j] = kernel[m_ - j] = std::conj(chirp_[j]);
        fft_pow2(kernel.data(), m_, false);
        chirp_fft_ = std::move(kernel);
    }
}

void Dft::fft_pow2(std::complex<double>* a, std::size_t m, bool inverse) const {
    // iterative radix-2, bit-reversal then butterflies
    for (std::size_t i = 1, j = 0; i < m; ++i) {
        std::size_t bit = m >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const std::size_t stride0 = m_ / m;  // twiddles were tabulated for length m_
    for (std::size_t len = 2; len <= m; len <<= 1) {
        const std::size_t step = m / len * stride0;
        for (std::size_t i = 0; i < m; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> w = twiddle_[k * step];
                if (inverse) w = std::conj(w);
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i) a[i] *= inv;
    }
}

void Dft::transform(const double* in, std::complex<double>* out) const {
    if (pow2_) {
        // twiddle table carries e^{+2 pi i k/m}, so the plain pass is
        // already the +i sign convention
        for (std::size_t j = 0; j < n_; ++j) out[j] = in[j];
        fft_pow2(out, n_, false);
        return;
    }
    std::vector<std::complex<double>> work(m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) work[j] = in[j] * chirp_[j];
    fft_pow2(work.data(), m_, false);
    for (std::size_t j = 0; j < m_; ++j) work[j] *= chirp_fft_[j];
    fft_pow2(work.data(), m_, true);
    for (std::size_t k = 0; k < n_; ++k) out[k] = work[k] * chirp_[k];
}

std::vector<std::complex<double>> Dft::transform(const std::vector<double>& in) const {
    if (in.size() != n_) throw std::invalid_argument("Dft::transform: length mismatch");
    std::vector<std::complex<double>> out(n_);
    transform(in.data(), out.data());
    return out;
}

}  // namespace circlt
