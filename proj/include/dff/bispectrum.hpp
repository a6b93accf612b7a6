#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dff {

enum class Window { Rectangular, Hann };

Window parse_window(const std::string& name);
std::string window_name(Window w);

struct BispectrumParams {
  std::size_t segment_len = 256;
  double overlap_fraction = 0.5;
  Window window = Window::Hann;

  // segment_len a power of two >= 8, overlap in [0, 1).
  void validate() const;
  std::size_t hop() const;
};

// Bispectrum over the non-redundant domain of a real signal: bins j, k >= 0
// with j + k <= segment_len / 2. Stored densely as n_bins x n_bins; cells
// outside the domain are zero and never reported.
class BispectrumGrid {
 public:
  // `values` is row-major n_bins x n_bins, n_bins = segment_len/2 + 1.
  // Entries outside the valid domain are ignored. The grid is symmetrized
  // from the j <= k triangle.
  BispectrumGrid(std::size_t segment_len, std::vector<std::complex<double>> values, std::size_t segment_count);

  std::size_t segment_len() const noexcept { return segment_len_; }
  std::size_t n_bins() const noexcept { return segment_len_ / 2 + 1; }
  std::size_t segment_count() const noexcept { return segment_count_; }

  bool is_valid(std::size_t j, std::size_t k) const noexcept { return j + k <= segment_len_ / 2; }
  // Number of valid (j, k) pairs, counting (j, k) and (k, j) separately.
  std::size_t valid_count() const noexcept;

  std::complex<double> value(std::size_t j, std::size_t k) const;
  double magnitude(std::size_t j, std::size_t k) const { return std::abs(value(j, k)); }
  double biphase(std::size_t j, std::size_t k) const;

 private:
  std::size_t segment_len_;
  std::vector<std::complex<double>> values_;
  std::size_t segment_count_;
};

// Principal argument in (-pi, pi]; arg(0) is 0.
double principal_arg(std::complex<double> z);

// Dense n_bins x n_bins real view; cells outside the domain hold 0.
struct RealGrid {
  std::size_t n_bins = 0;
  std::vector<double> values;

  double at(std::size_t j, std::size_t k) const { return values[j * n_bins + k]; }
};

RealGrid magnitude_grid(const BispectrumGrid& grid);
RealGrid biphase_grid(const BispectrumGrid& grid);

// Valid cells in row-major order (j ascending, then k ascending).
std::vector<double> valid_cells(const BispectrumGrid& grid, const RealGrid& view);

// Averages X(j) X(k) conj(X(j+k)) over all complete windowed segments.
BispectrumGrid estimate_bispectrum(std::span<const double> signal, const BispectrumParams& params = {});

// Rows "j,k,real,imag,magnitude,biphase" over valid pairs, with header.
std::string grid_to_csv(const BispectrumGrid& grid);

}  // namespace dff
