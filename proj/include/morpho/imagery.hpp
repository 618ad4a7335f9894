#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morpho/exec.hpp"
#include "morpho/image.hpp"

namespace morpho {

// PGM (netpbm P2 / P5, maxval <= 65535). 16-bit P5 samples are big-endian.
RasterImage parse_pgm(std::string_view bytes);
RasterImage load_grayscale(const std::filesystem::path& path);
std::string encode_pgm(const RasterImage& image, bool binary = true);
void save_pgm(const std::filesystem::path& path, const RasterImage& image, bool binary = true);

/// Sample types of the raw band-sequential blob.
enum class SampleType { U8, U16, F32 };

/// Loads `<name>.json` plus the sibling `<name>.raw` blob (little-endian, BSQ).
MultibandImage load_multiband(const std::filesystem::path& header_path);
void save_multiband(const std::filesystem::path& header_path, const MultibandImage& image,
                    SampleType type);

/// Labels are stored as PGM; dimensions must match the paired image.
LabelMap load_labels(const std::filesystem::path& path, int expected_width, int expected_height);
void save_labels(const std::filesystem::path& path, const LabelMap& labels);

/// Symmetric eigendecomposition; eigenvalues descending, eigenvectors stored
/// column-wise in `vectors` (n x n, row-major).
struct EigenDecomposition {
  std::vector<double> values;
  std::vector<double> vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi rotations. Converges when the off-diagonal norm drops below
/// 1e-12 times the Frobenius norm; throws DataError after `max_sweeps`.
EigenDecomposition jacobi_eigen(std::vector<double> matrix, int n, int max_sweeps = 100);

struct PcaResult {
  MultibandImage components;
  std::vector<double> eigenvalues;   // all bands, descending
  std::vector<double> eigenvectors;  // bands x n_components, row-major
};

/// Principal components of mean-centered spectra. Eigenvectors are signed so
/// that their largest-magnitude coordinate is positive.
PcaResult pca(const MultibandImage& image, int n_components, Exec exec = Exec::Parallel);
MultibandImage pca_reduce(const MultibandImage& image, int n_components,
                          Exec exec = Exec::Parallel);

/// Affine min-max map of a band onto [0, levels - 1], rounding half up.
/// A constant band maps to zeros.
RasterImage rescale_to_levels(std::span<const double> band, int width, int height, int levels);

}  // namespace morpho
