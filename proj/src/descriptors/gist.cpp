#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "vprkit/encoders.hpp"
#include "vprkit/error.hpp"
#include "vprkit/kernels.hpp"

namespace vprkit {

namespace {

using Complex = std::complex<float>;

constexpr double kPi = std::numbers::pi;

// Whitening cut-off: 4 cycles per 256 pixels, expressed per pixel so the
// filter follows the image size.
constexpr double kPrefilterCutoff = 4.0 / 256.0;
// Added to the local standard deviation before dividing.
constexpr double kContrastFloor = 0.2;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftwf_free(p); }
};
using Buffer = std::unique_ptr<Complex[], FftwFree>;

Buffer make_buffer(std::size_t n) {
  static_assert(sizeof(Complex) == sizeof(fftwf_complex));
  auto* raw = static_cast<Complex*>(fftwf_malloc(sizeof(Complex) * n));
  if (!raw) throw std::bad_alloc();
  return Buffer(raw);
}

// Single-precision forward and inverse 2-D transforms between two fixed
// buffers. FFTW_ESTIMATE keeps plan selection, and so the output bits,
// independent of machine load.
class Fft2d {
 public:
  Fft2d(int width, int height)
      : n_(static_cast<std::size_t>(width) * height), in_(make_buffer(n_)), out_(make_buffer(n_)) {
    std::lock_guard lock(planner_mutex());
    auto* in = reinterpret_cast<fftwf_complex*>(in_.get());
    auto* out = reinterpret_cast<fftwf_complex*>(out_.get());
    forward_ = fftwf_plan_dft_2d(height, width, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    inverse_ = fftwf_plan_dft_2d(height, width, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!forward_ || !inverse_) throw Error("FFTW planning failed");
  }
  ~Fft2d() {
    std::lock_guard lock(planner_mutex());
    fftwf_destroy_plan(forward_);
    fftwf_destroy_plan(inverse_);
  }
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  Complex* in() noexcept { return in_.get(); }
  Complex* out() noexcept { return out_.get(); }
  std::size_t size() const noexcept { return n_; }

  void forward() noexcept { fftwf_execute(forward_); }
  /// Unnormalised; callers divide by size().
  void inverse() noexcept { fftwf_execute(inverse_); }

 private:
  std::size_t n_;
  Buffer in_;
  Buffer out_;
  fftwf_plan forward_ = nullptr;
  fftwf_plan inverse_ = nullptr;
};

// Signed frequency of FFT bin k in an n-point transform, in cycles per pixel.
double bin_frequency(int k, int n) noexcept {
  const int f = (k <= (n - 1) / 2) ? k : k - n;
  return static_cast<double>(f) / n;
}

int mirror(int i, int n) noexcept {
  // Symmetric extension that repeats the edge sample: -1 -> 0, n -> n - 1.
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

// out = real(ifft(fft(src) .* gain)).
void lowpass(Fft2d& fft, const std::vector<double>& src, const std::vector<float>& gain,
             std::vector<double>& out) {
  const std::size_t n = fft.size();
  for (std::size_t i = 0; i < n; ++i) fft.in()[i] = Complex(static_cast<float>(src[i]), 0.0f);
  fft.forward();
  kernels::active().scale_spectrum(fft.out(), gain.data(), fft.in(), n);
  fft.inverse();
  const double norm = 1.0 / static_cast<double>(n);
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = fft.out()[i].real() * norm;
}

// Each Gabor gain is exp(-a r^2) * exp(-b t^2): a radial factor per scale
// times an angular factor per orientation, so the bank needs scales +
// orientations exponential maps instead of scales * orientations.
struct BankFactors {
  std::vector<std::vector<double>> radial;   // per scale
  std::vector<std::vector<double>> angular;  // per orientation
};

BankFactors bank_factors(int width, int height, const GistParams& params) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<double> radius(n), angle(n);
  for (int ky = 0; ky < height; ++ky) {
    const double fy = bin_frequency(ky, height);
    for (int kx = 0; kx < width; ++kx) {
      const double fx = bin_frequency(kx, width);
      const std::size_t i = static_cast<std::size_t>(ky) * width + kx;
      radius[i] = std::hypot(fx, fy);
      angle[i] = std::atan2(fy, fx);
    }
  }

  BankFactors f;
  // Centre frequency 0.3 / 1.85^s cycles per pixel.
  for (int s = 0; s < params.scales; ++s) {
    const double centre = 0.3 / std::pow(1.85, s);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = radius[i] / centre - 1.0;
      g[i] = std::exp(-10.0 * 0.35 * r * r);
    }
    f.radial.push_back(std::move(g));
  }
  // Angular spread tied to the number of orientations.
  const double spread = 16.0 * params.orientations * params.orientations / (32.0 * 32.0);
  for (int o = 0; o < params.orientations; ++o) {
    const double theta = kPi / params.orientations * o;
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
      double tr = angle[i] + theta;
      if (tr < -kPi) tr += 2.0 * kPi;
      if (tr > kPi) tr -= 2.0 * kPi;
      g[i] = std::exp(-2.0 * spread * kPi * tr * tr);
    }
    f.angular.push_back(std::move(g));
  }
  return f;
}

}  // namespace

void GistParams::validate() const {
  if (scales < 1 || orientations < 1 || grid < 1)
    throw InvalidArgument("gist scales, orientations and grid must be >= 1");
}

int gist_padding(int width, int height) noexcept {
  return std::max(1, (std::min(width, height) + 4) / 8);
}

std::vector<double> gist_prefilter_gain(int width, int height) {
  const double s1 = kPrefilterCutoff / std::sqrt(std::log(2.0));
  std::vector<double> gain(static_cast<std::size_t>(width) * height);
  for (int ky = 0; ky < height; ++ky) {
    const double fy = bin_frequency(ky, height);
    for (int kx = 0; kx < width; ++kx) {
      const double fx = bin_frequency(kx, width);
      gain[static_cast<std::size_t>(ky) * width + kx] = std::exp(-(fx * fx + fy * fy) / (s1 * s1));
    }
  }
  return gain;
}

std::vector<std::vector<double>> gist_filter_bank(int width, int height,
                                                  const GistParams& params) {
  params.validate();
  const BankFactors f = bank_factors(width, height, params);
  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<std::vector<double>> bank;
  bank.reserve(static_cast<std::size_t>(params.scales) * params.orientations);
  for (const auto& radial : f.radial) {
    for (const auto& angular : f.angular) {
      std::vector<double> g(n);
      for (std::size_t i = 0; i < n; ++i) g[i] = radial[i] * angular[i];
      bank.push_back(std::move(g));
    }
  }
  return bank;
}

DenseDescriptor encode_gist(const GrayImage& image, const GistParams& params) {
  params.validate();
  if (image.width() < 8 || image.height() < 8) {
    throw ImageTooSmall("GIST needs at least 8x8 pixels, got " + std::to_string(image.width()) +
                        "x" + std::to_string(image.height()));
  }

  const int w = image.width();
  const int h = image.height();
  DenseDescriptor out;
  out.values.assign(params.length(), 0.0);

  const auto px = image.pixels();
  if (std::all_of(px.begin(), px.end(), [&](float p) { return p == px[0]; })) {
    return out;  // no band-pass energy in a flat image
  }

  const int pad = gist_padding(w, h);
  const int pw = w + 2 * pad;
  const int ph = h + 2 * pad;
  const std::size_t n = static_cast<std::size_t>(pw) * ph;

  // Log intensity on the 0..255 scale, mirrored borders, zero mean.
  std::vector<double> img(n);
  for (int y = 0; y < ph; ++y) {
    const int sy = mirror(y - pad, h);
    for (int x = 0; x < pw; ++x) {
      img[static_cast<std::size_t>(y) * pw + x] =
          std::log1p(255.0 * image.at(mirror(x - pad, w), sy));
    }
  }
  double mean = 0.0;
  for (double v : img) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : img) v -= mean;

  Fft2d fft(pw, ph);
  const std::vector<double> prefilter_d = gist_prefilter_gain(pw, ph);
  const std::vector<float> prefilter(prefilter_d.begin(), prefilter_d.end());

  // Whitening, then local contrast normalisation.
  std::vector<double> low;
  lowpass(fft, img, prefilter, low);
  for (std::size_t i = 0; i < n; ++i) img[i] -= low[i];
  std::vector<double> energy(n);
  for (std::size_t i = 0; i < n; ++i) energy[i] = img[i] * img[i];
  lowpass(fft, energy, prefilter, low);
  for (std::size_t i = 0; i < n; ++i) img[i] /= kContrastFloor + std::sqrt(std::abs(low[i]));

  for (std::size_t i = 0; i < n; ++i) fft.in()[i] = Complex(static_cast<float>(img[i]), 0.0f);
  fft.forward();
  std::vector<Complex> spectrum(fft.out(), fft.out() + n);

  const BankFactors factors = bank_factors(pw, ph, params);
  std::vector<float> gain(n);
  const int g = params.grid;
  std::vector<int> xb(g + 1), yb(g + 1);
  for (int k = 0; k <= g; ++k) {
    xb[k] = static_cast<int>(static_cast<long long>(k) * w / g);
    yb[k] = static_cast<int>(static_cast<long long>(k) * h / g);
  }
  const double norm = 1.0 / static_cast<double>(n);

  std::size_t offset = 0;
  for (const auto& radial : factors.radial) {
    for (const auto& angular : factors.angular) {
      for (std::size_t i = 0; i < n; ++i) gain[i] = static_cast<float>(radial[i] * angular[i]);
      kernels::active().scale_spectrum(spectrum.data(), gain.data(), fft.in(), n);
      fft.inverse();
      const Complex* resp = fft.out();
      for (int gy = 0; gy < g; ++gy) {
        for (int gx = 0; gx < g; ++gx) {
          double sum = 0.0;
          int count = 0;
          for (int y = yb[gy]; y < yb[gy + 1]; ++y) {
            const Complex* row = resp + static_cast<std::size_t>(y + pad) * pw + pad;
            for (int x = xb[gx]; x < xb[gx + 1]; ++x) {
              const double re = row[x].real();
              const double im = row[x].imag();
              sum += std::sqrt(re * re + im * im);
              ++count;
            }
          }
          out.values[offset++] = count ? sum * norm / count : 0.0;
        }
      }
    }
  }
  return out;
}

}  // namespace vprkit
