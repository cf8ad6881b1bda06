#include "velobound/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace velobound {
namespace {

std::mutex plan_mutex;
std::map<std::tuple<int, int, int>, fftw_plan> plan_cache;

// Plans are created with FFTW_UNALIGNED so they can run on any caller buffer
// via fftw_execute_dft (the new-array execute interface is thread safe).
fftw_plan plan_for(int dim, int n, int sign) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_tuple(dim, n, sign);
  auto it = plan_cache.find(key);
  if (it != plan_cache.end()) return it->second;

  std::vector<std::complex<double>> scratch(1);
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(n);
  scratch.resize(total);
  int dims[3] = {n, n, n};
  fftw_plan p = fftw_plan_dft(dim, dims,
                              reinterpret_cast<fftw_complex*>(scratch.data()),
                              reinterpret_cast<fftw_complex*>(scratch.data()),
                              sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("fft: plan creation failed");
  plan_cache.emplace(key, p);
  return p;
}

void execute(int dim, int n, int sign, const std::complex<double>* in,
             std::complex<double>* out) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("fft: dim must be 1..3");
  fftw_plan p = plan_for(dim, n, sign);
  // fftw_execute_dft does not modify the input for out-of-place transforms,
  // but the API takes non-const pointers.
  if (in == out) {
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(out),
                     reinterpret_cast<fftw_complex*>(out));
  } else {
    fftw_execute_dft(p,
                     reinterpret_cast<fftw_complex*>(
                         const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
  }
}

}  // namespace

void fft_forward(int dim, int n, const std::complex<double>* in,
                 std::complex<double>* out) {
  execute(dim, n, FFTW_FORWARD, in, out);
}

void fft_inverse(int dim, int n, const std::complex<double>* in,
                 std::complex<double>* out) {
  execute(dim, n, FFTW_BACKWARD, in, out);
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(n);
  const double scale = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < total; ++i) out[i] *= scale;
}

void fft_forward(int dim, int n, std::vector<std::complex<double>>& data) {
  fft_forward(dim, n, data.data(), data.data());
}

void fft_inverse(int dim, int n, std::vector<std::complex<double>>& data) {
  fft_inverse(dim, n, data.data(), data.data());
}

}  // namespace velobound
