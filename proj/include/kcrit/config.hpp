#pragma once

namespace kcrit {

/// Vertex-count ceiling for the exponential oracles (brute-force potential, exact coloring).
/// Defaults to 20; the KCRIT_ORACLE_LIMIT environment variable overrides it.
int oracle_limit();

} // namespace kcrit
