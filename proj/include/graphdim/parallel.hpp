#pragma once

namespace graphdim {

/// Worker count for a parallel region: `requested` if positive, otherwise the
/// OpenMP default; either way capped by the GRAPHDIM_THREADS environment
/// variable when it holds a positive integer.
int resolve_workers(int requested = 0);

}  // namespace graphdim
