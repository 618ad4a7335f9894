#include "morpho/kernels.hpp"

namespace morpho::kernels::serial {

void paint(std::span<const std::int32_t> pixel_node, std::span<const double> node_value,
           std::span<double> out, std::size_t stride, std::size_t offset) {
  for (std::size_t p = 0; p < pixel_node.size(); ++p)
    out[p * stride + offset] = node_value[static_cast<std::size_t>(pixel_node[p])];
}

std::vector<double> band_means(std::span<const double> bsq, std::size_t pixels, int bands) {
  std::vector<double> means(static_cast<std::size_t>(bands), 0.0);
  for (int b = 0; b < bands; ++b) {
    const double* band = bsq.data() + static_cast<std::size_t>(b) * pixels;
    double sum = 0.0;
    for (std::size_t p = 0; p < pixels; ++p) sum += band[p];
    means[static_cast<std::size_t>(b)] = sum / static_cast<double>(pixels);
  }
  return means;
}

std::vector<double> covariance(std::span<const double> bsq, std::size_t pixels, int bands,
                               std::span<const double> means) {
  const auto nb = static_cast<std::size_t>(bands);
  std::vector<double> cov(nb * nb, 0.0);
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = i; j < nb; ++j) {
      const double* a = bsq.data() + i * pixels;
      const double* b = bsq.data() + j * pixels;
      double sum = 0.0;
      for (std::size_t p = 0; p < pixels; ++p) sum += (a[p] - means[i]) * (b[p] - means[j]);
      cov[i * nb + j] = cov[j * nb + i] = sum / static_cast<double>(pixels);
    }
  }
  return cov;
}

std::vector<double> project(std::span<const double> bsq, std::size_t pixels, int bands,
                            std::span<const double> means, std::span<const double> basis,
                            int components) {
  const auto nc = static_cast<std::size_t>(components);
  std::vector<double> out(nc * pixels, 0.0);
  for (std::size_t p = 0; p < pixels; ++p) {
    for (std::size_t c = 0; c < nc; ++c) {
      double sum = 0.0;
      for (std::size_t b = 0; b < static_cast<std::size_t>(bands); ++b)
        sum += (bsq[b * pixels + p] - means[b]) * basis[b * nc + c];
      out[c * pixels + p] = sum;
    }
  }
  return out;
}

}  // namespace morpho::kernels::serial
