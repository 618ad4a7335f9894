#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "morpho/error.hpp"
#include "morpho/imagery.hpp"
#include "morpho/kernels.hpp"

namespace morpho {

EigenDecomposition jacobi_eigen(std::vector<double> a, int n, int max_sweeps) {
  const auto dim = static_cast<std::size_t>(n);
  if (n < 1 || a.size() != dim * dim) throw DataError("jacobi_eigen: matrix must be n x n");

  std::vector<double> v(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) v[i * dim + i] = 1.0;

  double frobenius = 0.0;
  for (double x : a) frobenius += x * x;
  frobenius = std::sqrt(frobenius);

  const auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        if (i != j) s += a[i * dim + j] * a[i * dim + j];
    return std::sqrt(s);
  };

  int sweep = 0;
  for (;; ++sweep) {
    if (off_norm() <= 1e-12 * frobenius) break;
    if (sweep == max_sweeps)
      throw DataError("covariance eigen-solve did not converge within " +
                      std::to_string(max_sweeps) + " sweeps");
    for (std::size_t p = 0; p + 1 < dim; ++p) {
      for (std::size_t q = p + 1; q < dim; ++q) {
        const double apq = a[p * dim + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * dim + q] - a[p * dim + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < dim; ++k) {
          const double akp = a[k * dim + p];
          const double akq = a[k * dim + q];
          a[k * dim + p] = c * akp - s * akq;
          a[k * dim + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < dim; ++k) {
          const double apk = a[p * dim + k];
          const double aqk = a[q * dim + k];
          a[p * dim + k] = c * apk - s * aqk;
          a[q * dim + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < dim; ++k) {
          const double vkp = v[k * dim + p];
          const double vkq = v[k * dim + q];
          v[k * dim + p] = c * vkp - s * vkq;
          v[k * dim + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a[i * dim + i] > a[j * dim + j];
  });

  EigenDecomposition out;
  out.sweeps = sweep;
  out.values.resize(dim);
  out.vectors.assign(dim * dim, 0.0);
  for (std::size_t c = 0; c < dim; ++c) {
    const std::size_t src = order[c];
    out.values[c] = a[src * dim + src];
    std::size_t dominant = 0;
    for (std::size_t k = 1; k < dim; ++k)
      if (std::abs(v[k * dim + src]) > std::abs(v[dominant * dim + src])) dominant = k;
    const double sign = v[dominant * dim + src] < 0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < dim; ++k) out.vectors[k * dim + c] = sign * v[k * dim + src];
  }
  return out;
}

PcaResult pca(const MultibandImage& image, int n_components, Exec exec) {
  const int bands = image.bands();
  if (n_components < 1 || n_components > bands)
    throw DataError("PCA component count " + std::to_string(n_components) + " outside [1, " +
                    std::to_string(bands) + "]");
  const std::size_t pixels = image.pixel_count();
  if (pixels < static_cast<std::size_t>(n_components))
    throw DataError("PCA needs at least as many pixels as components");

  const bool par = exec == Exec::Parallel;
  const auto means = par ? kernels::omp::band_means(image.values(), pixels, bands)
                         : kernels::serial::band_means(image.values(), pixels, bands);
  auto cov = par ? kernels::omp::covariance(image.values(), pixels, bands, means)
                 : kernels::serial::covariance(image.values(), pixels, bands, means);
  const EigenDecomposition eig = jacobi_eigen(std::move(cov), bands);

  const auto nb = static_cast<std::size_t>(bands);
  const auto nc = static_cast<std::size_t>(n_components);
  std::vector<double> basis(nb * nc);
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t c = 0; c < nc; ++c) basis[b * nc + c] = eig.vectors[b * nb + c];

  auto projected = par ? kernels::omp::project(image.values(), pixels, bands, means, basis,
                                               n_components)
                       : kernels::serial::project(image.values(), pixels, bands, means, basis,
                                                  n_components);
  return PcaResult{MultibandImage(image.width(), image.height(), n_components, std::move(projected)),
                   eig.values, std::move(basis)};
}

MultibandImage pca_reduce(const MultibandImage& image, int n_components, Exec exec) {
  return pca(image, n_components, exec).components;
}

RasterImage rescale_to_levels(std::span<const double> band, int width, int height, int levels) {
  if (levels < 2 || levels > 65536) throw DataError("rescale levels must lie in [2, 65536]");
  if (band.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw DataError("band size does not match dimensions");
  const auto [lo, hi] = std::minmax_element(band.begin(), band.end());
  const double min = *lo;
  const double range = *hi - *lo;
  std::vector<std::uint16_t> out(band.size(), 0);
  if (range > 0.0) {
    const double top = static_cast<double>(levels - 1);
    for (std::size_t i = 0; i < band.size(); ++i) {
      const double q = std::floor((band[i] - min) / range * top + 0.5);
      out[i] = static_cast<std::uint16_t>(std::clamp(q, 0.0, top));
    }
  }
  return RasterImage(width, height, levels, std::move(out));
}

}  // namespace morpho
