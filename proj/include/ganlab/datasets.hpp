#pragma once

#include <vector>

#include "ganlab/rng.hpp"
#include "ganlab/types.hpp"

namespace ganlab {

// Ground-truth generators for the three 2-D shapes. All of them are
// noiseless: every point sits exactly on its defining curve, and all are
// deterministic under a fixed rng seed.

// x ~ uniform[0, 2pi], y = sin(x). Requires n >= 1.
Matrix gen_sine(Index n, Rng& rng);

// Two overlapping ellipse boundaries, points split evenly (odd n: extra point
// to the first). A: centre (0,0), semi-axes (2,1). B: centre (1,0),
// semi-axes (1,2). Requires n >= 2.
Matrix gen_ellipses(Index n, Rng& rng);

// Three concentric circles of radii 1, 2, 3 centred at the origin, split as
// evenly as possible. Requires n >= 3.
Matrix gen_circles(Index n, Rng& rng);

// i.i.d. uniform[-1, 1] latent batch, n x dim.
Matrix sample_latent(Index n, Index dim, Rng& rng);

// One epoch worth of batches: rows shuffled once with `rng` (Fisher-Yates,
// so the order is platform-independent), then chunked. The final short batch
// is kept.
std::vector<Matrix> shuffled_batches(const Matrix& points, Index batch_size, Rng& rng);

}  // namespace ganlab
