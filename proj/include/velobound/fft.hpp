#pragma once

#include <complex>
#include <vector>

namespace velobound {

// Discrete Fourier transforms on flattened row-major arrays of shape
// [n]^dim.  Forward transform is unscaled; the inverse divides by n^dim, so
// inverse(forward(x)) == x.  Plans are cached per (dim, n, direction) and are
// safe for concurrent execution once created.
void fft_forward(int dim, int n, const std::complex<double>* in, std::complex<double>* out);
void fft_inverse(int dim, int n, const std::complex<double>* in, std::complex<double>* out);

void fft_forward(int dim, int n, std::vector<std::complex<double>>& data);
void fft_inverse(int dim, int n, std::vector<std::complex<double>>& data);

}  // namespace velobound
