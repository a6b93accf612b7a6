#include "dff/bispectrum.hpp"

#include <cmath>

#include "dff/error.hpp"
#include "dff/fft.hpp"
#include "dff/format.hpp"

namespace dff {

Window parse_window(const std::string& name) {
  if (name == "hann") return Window::Hann;
  if (name == "rectangular") return Window::Rectangular;
  throw Error(Errc::InvalidArgument, "unknown window '" + name + "' (expected hann or rectangular)");
}

std::string window_name(Window w) { return w == Window::Hann ? "hann" : "rectangular"; }

void BispectrumParams::validate() const {
  if (segment_len < 8 || (segment_len & (segment_len - 1)) != 0) {
    throw Error(Errc::InvalidArgument, "segment_len must be a power of two >= 8");
  }
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw Error(Errc::InvalidArgument, "overlap_fraction must be in [0, 1)");
  }
}

std::size_t BispectrumParams::hop() const {
  // The small bias keeps e.g. 256 * (1 - 0.75) from flooring to 63.
  auto h = static_cast<std::size_t>(std::floor(static_cast<double>(segment_len) * (1.0 - overlap_fraction) + 1e-9));
  return h == 0 ? 1 : h;
}

BispectrumGrid::BispectrumGrid(std::size_t segment_len, std::vector<std::complex<double>> values,
                               std::size_t segment_count)
    : segment_len_(segment_len), values_(std::move(values)), segment_count_(segment_count) {
  const std::size_t n = n_bins();
  if (segment_len_ < 2 || values_.size() != n * n) {
    throw Error(Errc::InvalidArgument, "grid values must be n_bins x n_bins");
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!is_valid(j, k)) {
        values_[j * n + k] = 0.0;
      } else if (k < j) {
        values_[j * n + k] = values_[k * n + j];
      }
    }
  }
}

std::size_t BispectrumGrid::valid_count() const noexcept {
  const std::size_t h = segment_len_ / 2;
  return (h + 1) * (h + 2) / 2;
}

std::complex<double> BispectrumGrid::value(std::size_t j, std::size_t k) const {
  if (!is_valid(j, k)) throw Error(Errc::InvalidArgument, "bin pair outside the bispectrum domain");
  return values_[j * n_bins() + k];
}

double BispectrumGrid::biphase(std::size_t j, std::size_t k) const { return principal_arg(value(j, k)); }

double principal_arg(std::complex<double> z) {
  if (z.real() == 0.0 && z.imag() == 0.0) return 0.0;
  double a = std::atan2(z.imag(), z.real());
  return a <= -M_PI ? M_PI : a;
}

namespace {

template <typename F>
RealGrid map_grid(const BispectrumGrid& grid, F f) {
  RealGrid out;
  out.n_bins = grid.n_bins();
  out.values.assign(out.n_bins * out.n_bins, 0.0);
  for (std::size_t j = 0; j < out.n_bins; ++j) {
    for (std::size_t k = 0; j + k <= grid.segment_len() / 2; ++k) out.values[j * out.n_bins + k] = f(grid.value(j, k));
  }
  return out;
}

std::vector<double> make_window(Window w, std::size_t n) {
  std::vector<double> out(n, 1.0);
  if (w == Window::Hann) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / n);
  }
  return out;
}

}  // namespace

RealGrid magnitude_grid(const BispectrumGrid& grid) {
  return map_grid(grid, [](std::complex<double> z) { return std::abs(z); });
}

RealGrid biphase_grid(const BispectrumGrid& grid) { return map_grid(grid, principal_arg); }

std::vector<double> valid_cells(const BispectrumGrid& grid, const RealGrid& view) {
  std::vector<double> out;
  out.reserve(grid.valid_count());
  const std::size_t h = grid.segment_len() / 2;
  for (std::size_t j = 0; j <= h; ++j) {
    for (std::size_t k = 0; j + k <= h; ++k) out.push_back(view.at(j, k));
  }
  return out;
}

BispectrumGrid estimate_bispectrum(std::span<const double> signal, const BispectrumParams& params) {
  params.validate();
  const std::size_t len = params.segment_len;
  if (signal.size() < len) {
    throw Error(Errc::SignalTooShort, "signal has " + std::to_string(signal.size()) + " samples, segment needs " +
                                          std::to_string(len));
  }
  for (double s : signal) {
    if (!std::isfinite(s)) throw Error(Errc::NonFiniteSample, "signal contains NaN or Inf");
  }

  const std::size_t h = len / 2;
  const std::size_t n = h + 1;
  const std::size_t hop = params.hop();
  const auto window = make_window(params.window, len);

  RealFft fft(len);
  std::vector<double> frame(len);
  std::vector<std::complex<double>> spectrum(n);
  std::vector<std::complex<double>> acc(n * n, 0.0);
  std::size_t count = 0;

  // Segments are accumulated in order, so the sum is reproducible.
  for (std::size_t start = 0; start + len <= signal.size(); start += hop) {
    for (std::size_t i = 0; i < len; ++i) frame[i] = signal[start + i] * window[i];
    fft.forward(frame, spectrum);
    for (std::size_t j = 0; j <= h; ++j) {
      for (std::size_t k = j; j + k <= h; ++k) acc[j * n + k] += spectrum[j] * spectrum[k] * std::conj(spectrum[j + k]);
    }
    ++count;
  }
  const double scale = 1.0 / static_cast<double>(count);
  for (auto& v : acc) v *= scale;
  return BispectrumGrid(len, std::move(acc), count);
}

std::string grid_to_csv(const BispectrumGrid& grid) {
  std::string out = "j,k,real,imag,magnitude,biphase\n";
  const std::size_t h = grid.segment_len() / 2;
  for (std::size_t j = 0; j <= h; ++j) {
    for (std::size_t k = 0; j + k <= h; ++k) {
      auto v = grid.value(j, k);
      out += std::to_string(j) + "," + std::to_string(k) + "," + fmt_real(v.real()) + "," + fmt_real(v.imag()) + "," +
             fmt_real(std::abs(v)) + "," + fmt_real(principal_arg(v)) + "\n";
    }
  }
  return out;
}

}  // namespace dff
