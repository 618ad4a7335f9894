#pragma once

namespace morpho {

/// Selects between the serial reference loops and the OpenMP kernels.
/// Both paths produce bit-identical results.
enum class Exec { Serial, Parallel };

}  // namespace morpho
