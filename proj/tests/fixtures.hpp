#pragma once

#include "spinent/thermal.hpp"

namespace fixtures {

/// Copper-nitrate 12-site ring, diagonalized once per test binary.
inline const spinent::SpectralDecomposition& cn12() {
  static const spinent::SpectralDecomposition decomp = spinent::diagonalize(spinent::ChainSpec{});
  return decomp;
}

}  // namespace fixtures
