#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace dff {

// Forward real-to-complex DFT of a fixed length (FFTW backed). Produces the
// n/2+1 non-negative frequency bins, unnormalized. An instance is not safe for
// concurrent use; separate instances are.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }
  void forward(std::span<const double> in, std::span<std::complex<double>> out);

 private:
  std::size_t n_;
  double* in_ = nullptr;
  void* out_ = nullptr;
  void* plan_ = nullptr;
};

}  // namespace dff
