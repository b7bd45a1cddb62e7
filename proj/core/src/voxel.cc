#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>

#include "nlperim/covariogram.h"

namespace nlperim {

namespace {

// The FFTW planner is not reentrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

struct Padded {
  std::array<int, 3> p{1, 1, 1};
  std::size_t real_size = 1;
  std::size_t complex_size = 1;
};

Padded padded_extent(std::array<int, 3> n, int d, std::size_t max_cells) {
  Padded g;
  for (int a = 0; a < d; ++a) g.p[a] = next_pow2(2 * n[a]);
  g.real_size = static_cast<std::size_t>(g.p[0]) * g.p[1] * g.p[2];
  g.complex_size = static_cast<std::size_t>(g.p[0] / 2 + 1) * g.p[1] * g.p[2];
  if (g.real_size > max_cells) {
    const double factor = std::pow(static_cast<double>(g.real_size) / max_cells, 1.0 / d);
    throw ValidationError("autocorrelation grid of " + std::to_string(g.real_size) +
                          " cells exceeds the memory bound of " + std::to_string(max_cells) +
                          "; use a spacing at least " + std::to_string(factor) + " times coarser");
  }
  return g;
}

// Correlation sum_x a(x) b(x + k) on the padded grid, read back onto the
// lattice [-(n-1), n-1]^d and rounded to integers.
std::vector<double> fft_correlation(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>* b,
                                    std::array<int, 3> n, int d, std::size_t max_cells) {
  const Padded g = padded_extent(n, d, max_cells);
  // FFTW is row-major with the last index fastest; our x index is fastest.
  int dims[3];
  for (int a2 = 0; a2 < d; ++a2) dims[a2] = g.p[d - 1 - a2];

  double* ra = fftw_alloc_real(g.real_size);
  fftw_complex* ca = fftw_alloc_complex(g.complex_size);
  double* rb = nullptr;
  fftw_complex* cb = nullptr;
  if (b) {
    rb = fftw_alloc_real(g.real_size);
    cb = fftw_alloc_complex(g.complex_size);
  }
  if (!ra || !ca || (b && (!rb || !cb))) {
    throw NumericalError("FFT buffer allocation failed");
  }
  fftw_plan fa, fb = nullptr, back;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fa = fftw_plan_dft_r2c(d, dims, ra, ca, FFTW_ESTIMATE);
    if (b) fb = fftw_plan_dft_r2c(d, dims, rb, cb, FFTW_ESTIMATE);
    back = fftw_plan_dft_c2r(d, dims, ca, ra, FFTW_ESTIMATE);
  }
  auto load = [&](const std::vector<std::uint8_t>& m, double* dst) {
    std::fill(dst, dst + g.real_size, 0.0);
    for (int k = 0; k < n[2]; ++k) {
      for (int j = 0; j < n[1]; ++j) {
        for (int i = 0; i < n[0]; ++i) {
          const std::size_t src =
              i + static_cast<std::size_t>(n[0]) * (j + static_cast<std::size_t>(n[1]) * k);
          dst[i + static_cast<std::size_t>(g.p[0]) * (j + static_cast<std::size_t>(g.p[1]) * k)] =
              m[src] ? 1.0 : 0.0;
        }
      }
    }
  };
  load(a, ra);
  fftw_execute(fa);
  if (b) {
    load(*b, rb);
    fftw_execute(fb);
  }
  for (std::size_t i = 0; i < g.complex_size; ++i) {
    const std::complex<double> x(ca[i][0], ca[i][1]);
    const std::complex<double> y = b ? std::complex<double>(cb[i][0], cb[i][1]) : x;
    const std::complex<double> z = std::conj(x) * y;
    ca[i][0] = z.real();
    ca[i][1] = z.imag();
  }
  fftw_execute(back);

  const std::size_t w0 = 2 * n[0] - 1, w1 = 2 * n[1] - 1, w2 = 2 * n[2] - 1;
  std::vector<double> out(w0 * w1 * w2);
  const double scale = 1.0 / static_cast<double>(g.real_size);
  double worst = 0.0;
  for (int k = -(n[2] - 1); k <= n[2] - 1; ++k) {
    for (int j = -(n[1] - 1); j <= n[1] - 1; ++j) {
      for (int i = -(n[0] - 1); i <= n[0] - 1; ++i) {
        const int pi = (i + g.p[0]) % g.p[0];
        const int pj = (j + g.p[1]) % g.p[1];
        const int pk = (k + g.p[2]) % g.p[2];
        const double raw =
            ra[pi + static_cast<std::size_t>(g.p[0]) * (pj + static_cast<std::size_t>(g.p[1]) * pk)] * scale;
        const double r = std::nearbyint(raw);
        worst = std::max(worst, std::abs(raw - r));
        out[static_cast<std::size_t>(i + n[0] - 1) +
            w0 * (static_cast<std::size_t>(j + n[1] - 1) + w1 * static_cast<std::size_t>(k + n[2] - 1))] =
            std::max(0.0, r);
      }
    }
  }
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fa);
    if (fb) fftw_destroy_plan(fb);
    fftw_destroy_plan(back);
  }
  fftw_free(ra);
  fftw_free(ca);
  if (rb) fftw_free(rb);
  if (cb) fftw_free(cb);
  if (worst > 0.25) {
    throw NumericalError("FFT correlation round-off " + std::to_string(worst) +
                         " too large to recover integer counts");
  }
  return out;
}

std::vector<double> direct_correlation(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b,
                                       std::array<int, 3> n) {
  const std::size_t w0 = 2 * n[0] - 1, w1 = 2 * n[1] - 1, w2 = 2 * n[2] - 1;
  std::vector<double> out(w0 * w1 * w2, 0.0);
  auto idx = [&](int i, int j, int k) {
    return i + static_cast<std::size_t>(n[0]) * (j + static_cast<std::size_t>(n[1]) * k);
  };
  for (int k = 0; k < n[2]; ++k) {
    for (int j = 0; j < n[1]; ++j) {
      for (int i = 0; i < n[0]; ++i) {
        if (!a[idx(i, j, k)]) continue;
        for (int kk = 0; kk < n[2]; ++kk) {
          for (int jj = 0; jj < n[1]; ++jj) {
            for (int ii = 0; ii < n[0]; ++ii) {
              if (!b[idx(ii, jj, kk)]) continue;
              const int si = ii - i, sj = jj - j, sk = kk - k;
              out[static_cast<std::size_t>(si + n[0] - 1) +
                  w0 * (static_cast<std::size_t>(sj + n[1] - 1) +
                        w1 * static_cast<std::size_t>(sk + n[2] - 1))] += 1.0;
            }
          }
        }
      }
    }
  }
  return out;
}

void check_extent(const std::vector<std::uint8_t>& m, std::array<int, 3>& n, int d) {
  check_dimension(d);
  for (int a = 0; a < 3; ++a) {
    if (a >= d) n[a] = 1;
    if (n[a] < 1) throw ValidationError("mask extent must be positive");
  }
  if (m.size() != static_cast<std::size_t>(n[0]) * n[1] * n[2]) {
    throw ValidationError("mask size does not match extent");
  }
}

}  // namespace

std::vector<double> autocorrelation_counts(const std::vector<std::uint8_t>& mask, std::array<int, 3> n, int d,
                                           AutocorrelationMethod method, std::size_t max_cells) {
  check_extent(mask, n, d);
  if (method == AutocorrelationMethod::direct) return direct_correlation(mask, mask, n);
  return fft_correlation(mask, nullptr, n, d, max_cells);
}

std::vector<double> cross_correlation_counts(const std::vector<std::uint8_t>& a,
                                             const std::vector<std::uint8_t>& b, std::array<int, 3> n, int d,
                                             std::size_t max_cells) {
  check_extent(a, n, d);
  check_extent(b, n, d);
  return fft_correlation(a, &b, n, d, max_cells);
}

}  // namespace nlperim
