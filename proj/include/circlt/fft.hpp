#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace circlt {

/// Discrete Fourier transform plan for a fixed length n:
///   out[k] = sum_j in[j] * exp(+2*pi*i*j*k/n).
/// Power-of-two lengths run a radix-2 Cooley-Tukey; everything else goes
/// through Bluestein's chirp-z reduction to the next power of two, so the
/// cost is O(n log n) for all n. Twiddles are precomputed once per plan.
class Dft {
public:
    explicit Dft(std::size_t n);

    std::size_t size() const { return n_; }

    void transform(const double* in, std::complex<double>* out) const;
    std::vector<std::complex<double>> transform(const std::vector<double>& in) const;

private:
    void fft_pow2(std::complex<double>* a, std::size_t m, bool inverse) const;

    std::size_t n_;
    std::size_t m_ = 0;                             // pow2 work size (Bluestein) or n
    bool pow2_ = false;
    std::vector<std::complex<double>> twiddle_;     // roots for the pow2 stage
    std::vector<std::complex<double>> chirp_;       // Bluestein chirp a_j
    std::vector<std::complex<double>> chirp_fft_;   // FFT of the conjugate-chirp kernel
};

}  // namespace circlt
