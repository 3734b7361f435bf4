#pragma once
// Binary cache for mass matrices, keyed by a content hash of
// (manifold, primitives, topology, mode range, quadrature order).

#include <iosfwd>

#include "obswave/spectral.hpp"

namespace obswave {

/// Content hash (FNV-1a over the canonical byte encoding of the inputs).
uint64_t massMatrixKey(const SpectralBasis& basis, const Region& region, int first, int last,
                       const QuadratureSpec& quad);

/// Cache directory: the OBSWAVE_CACHE_DIR environment variable if set, else
/// ".obswave-cache" in the working directory.
std::string cacheDirectory();

/// massMatrix with a read-through file cache. A hit is returned bit-exact; a
/// corrupt or mismatching file is recomputed and rewritten, with a warning on
/// `warn` if given.
MassMatrix cachedMassMatrix(const SpectralBasis& basis, const Region& region, int first,
                            int last, const QuadratureSpec& quad = {},
                            std::ostream* warn = nullptr);

}  // namespace obswave
