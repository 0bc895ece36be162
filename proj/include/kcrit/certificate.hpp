#pragma once

#include "kcrit/graph.hpp"
#include "kcrit/reducer.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace kcrit::cert {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolVersion = "0.1.0";

/// C in the call budget C * k^2 * n^2 * ln n, frozen after calibration on the acceptance corpus.
inline constexpr double kCallConstant = 0.01;

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// "sha256:" + digest of the canonical graph6 encoding; independent of the input format.
std::string input_digest(const Graph& g);

Json coloring_certificate(const Graph& g, int k, const ColoringOutcome& outcome, bool with_trace);

enum class PotentialMode { r1, brute };

Json potential_certificate(const Graph& g, int k, PotentialMode mode, int jobs = 1);

/// Chromatic number, k-criticality and the edge-count bounds for (k, n) where they apply.
Json verification_certificate(const Graph& g, int k);

Json construction_certificate(int k, int steps);

Json bounds_certificate(int k, int n_lo, int n_hi);

/// Colors a graph of maximum degree <= max_degree drawn from `seed`; the graph travels in the payload.
Json bench_certificate(int k, int n, int max_degree, std::uint64_t seed, double call_constant);

/// Random graph on n vertices with maximum degree <= max_degree (deterministic in seed).
Graph bench_graph(int n, int max_degree, std::uint64_t seed);

/// Replays a certificate. Kinds that carry their own graphs (construction, bench) and graph-free
/// kinds (bounds over formulas) ignore `g`; the others require it. Returns "" when valid.
std::string validate(const Json& cert, const Graph* g);

} // namespace kcrit::cert
