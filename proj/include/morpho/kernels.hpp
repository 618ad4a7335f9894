#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

// Data-parallel inner loops. `serial` is the reference implementation kept
// for testing; `omp` must return bit-identical results. Reductions are
// partitioned so that every output element is summed in the same order on
// both paths.

namespace morpho::kernels {

namespace serial {

/// out[p * stride + offset] = node_value[pixel_node[p]]
void paint(std::span<const std::int32_t> pixel_node, std::span<const double> node_value,
           std::span<double> out, std::size_t stride, std::size_t offset);

/// Per-band means of a band-sequential matrix.
std::vector<double> band_means(std::span<const double> bsq, std::size_t pixels, int bands);

/// Population covariance (divide by pixel count), bands x bands row-major.
std::vector<double> covariance(std::span<const double> bsq, std::size_t pixels, int bands,
                               std::span<const double> means);

/// Projects centered spectra onto `components` columns of `basis` (bands x components).
std::vector<double> project(std::span<const double> bsq, std::size_t pixels, int bands,
                            std::span<const double> means, std::span<const double> basis,
                            int components);

}  // namespace serial

namespace omp {

void paint(std::span<const std::int32_t> pixel_node, std::span<const double> node_value,
           std::span<double> out, std::size_t stride, std::size_t offset);
std::vector<double> band_means(std::span<const double> bsq, std::size_t pixels, int bands);
std::vector<double> covariance(std::span<const double> bsq, std::size_t pixels, int bands,
                               std::span<const double> means);
std::vector<double> project(std::span<const double> bsq, std::size_t pixels, int bands,
                            std::span<const double> means, std::span<const double> basis,
                            int components);

}  // namespace omp

}  // namespace morpho::kernels
