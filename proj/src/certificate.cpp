#include "kcrit/certificate.hpp"

#include "kcrit/config.hpp"
#include "kcrit/error.hpp"
#include "kcrit/graph_io.hpp"
#include "kcrit/oracle.hpp"
#include "kcrit/potential.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <random>

namespace kcrit::cert {

namespace {

Json header(std::string_view kind)
{
    Json j;
    j["kind"] = kind;
    j["toolVersion"] = kToolVersion;
    return j;
}

Json set_json(const VertexSet& s)
{
    return Json(s.members());
}

VertexSet set_from(const Json& j)
{
    return VertexSet(j.get<std::vector<Vertex>>());
}

Json witness_json(const PotentialWitness& w)
{
    return Json{{"set", set_json(w.set)}, {"rho", w.rho}};
}

Json stats_json(const ReducerStats& s)
{
    Json steps = Json::object();
    for (const auto& [name, count] : s.steps)
        steps[name] = count;
    return Json{{"calls", s.calls},           {"baseCases", s.base_cases},       {"fallbacks", s.fallbacks},
                {"failedRules", s.failed_rules}, {"skippedRules", s.skipped_rules}, {"maxDepth", s.max_depth},
                {"steps", steps}};
}

Json trace_json(const ReductionTrace& t)
{
    Json out = Json::array();
    for (const auto& e : t.entries)
        out.push_back(Json{{"depth", e.depth},
                           {"step", e.step},
                           {"n", e.vertices},
                           {"m", e.edges},
                           {"twinPairs", e.twin_pairs},
                           {"action", e.action}});
    return out;
}

Json bound_row(const BoundReport& r)
{
    Json row{{"n", r.n}, {"F", r.F}};
    row["gallai"] = r.gallai ? Json(*r.gallai) : Json(nullptr);
    row["dirac"] = r.dirac;
    row["diracApplies"] = r.dirac_applies;
    row["kostochkaStiebitz"] = r.kostochka_stiebitz;
    row["ksApplies"] = r.ks_applies;
    row["oreUpper"] = r.ore_upper ? Json(*r.ore_upper) : Json(nullptr);
    return row;
}

// Potential band a tagged R1/brute witness must fall in.
std::string check_tag_witness(const Graph& g, int k, const std::string& tag, const Json& wj)
{
    const VertexSet w = set_from(wj.at("set"));
    if (w.empty())
        return "empty witness set";
    for (Vertex v : w)
        if (v < 0 || v >= g.vertex_count())
            return "witness vertex out of range";
    const Potential r = rho(g, k, w);
    if (r != wj.at("rho").get<Potential>())
        return "witness potential does not recompute";
    const int n = g.vertex_count();
    const bool proper = w.size() >= 2 && static_cast<int>(w.size()) <= n - 1;
    if (tag == "S1")
        return r <= witness_threshold(k) ? "" : "S1 witness above k(k-3)";
    if (!proper)
        return tag + " witness must have 2 <= |W| <= n-1";
    if (tag == "S2")
        return r < vertex_potential(k) ? "" : "S2 witness not below (k+1)(k-2)";
    if (tag == "S3")
        return r < clique_potential(k) ? "" : "S3 witness not below 2(k-1)(k-2)";
    if (tag == "S4")
        return r == clique_potential(k) && static_cast<int>(w.size()) >= k ? "" : "S4 witness not a tight set of size >= k";
    return "unknown tag " + tag;
}

std::string validate_coloring(const Json& c, const Graph& g)
{
    const int k = c.at("k").get<int>();
    const auto colors = c.at("colors").get<std::vector<Color>>();
    if (static_cast<int>(colors.size()) != g.vertex_count())
        return "coloring has " + std::to_string(colors.size()) + " entries for " + std::to_string(g.vertex_count()) +
               " vertices";
    ColorAssignment a(g.vertex_count());
    a.colors = colors;
    return coloring_defect(g, a, k - 1);
}

std::string validate_witness(const Json& c, const Graph& g)
{
    const int k = c.at("k").get<int>();
    const VertexSet w = set_from(c.at("set"));
    if (w.empty())
        return "empty witness set";
    for (Vertex v : w)
        if (v < 0 || v >= g.vertex_count())
            return "witness vertex out of range";
    const Potential r = rho(g, k, w);
    if (r != c.at("rho").get<Potential>())
        return "witness potential does not recompute";
    return r <= witness_threshold(k) ? "" : "witness potential above k(k-3)";
}

std::string validate_potential(const Json& c, const Graph& g)
{
    const int k = c.at("k").get<int>();
    const std::string tag = c.at("tag").get<std::string>();
    if (tag != "S5") {
        if (!c.contains("witness"))
            return "tag " + tag + " needs a witness";
        if (auto bad = check_tag_witness(g, k, tag, c.at("witness")); !bad.empty())
            return bad;
    } else if (c.contains("witness")) {
        return "S5 carries no witness";
    }
    if (c.at("mode") == "r1") {
        if (c.at("audit").at("directWholeGraph").get<bool>())
            return rho(g, k, VertexSet::range(g.vertex_count())) <= witness_threshold(k) ? ""
                                                                                        : "whole graph is not low";
        const CutResult cut = max_flow(build_R1_network(g, k));
        if (cut.flow_value != c.at("audit").at("plainFlow").get<Capacity>())
            return "plain flow value does not recompute";
        return "";
    }
    if (g.vertex_count() > oracle_limit())
        return "";
    const BruteClassification b = classify_brute(g, k);
    if (to_string(b.tag) != tag)
        return "brute classification does not recompute";
    if (b.min_potential != c.at("minPotential").get<Potential>())
        return "minimum potential does not recompute";
    return "";
}

std::string validate_verification(const Json& c, const Graph& g)
{
    const int k = c.at("k").get<int>();
    if (c.at("n").get<int>() != g.vertex_count() || c.at("m").get<std::size_t>() != g.edge_count())
        return "graph size mismatch";
    if (g.vertex_count() <= oracle_limit()) {
        if (c.at("chromaticNumber").get<int>() != chromatic_number(g))
            return "chromatic number does not recompute";
        if (c.at("critical").get<bool>() != is_k_critical(g, k))
            return "criticality does not recompute";
    }
    if (k >= 4 && g.vertex_count() >= k) {
        const Json row = bound_row(bound_report(k, g.vertex_count()));
        if (c.at("bounds") != row)
            return "bound values do not recompute";
    }
    return "";
}

std::string validate_construction(const Json& c)
{
    const int k = c.at("k").get<int>();
    const auto& graphs = c.at("graphs");
    if (graphs.size() != c.at("steps").get<std::size_t>() + 1)
        return "chain length mismatch";
    for (const auto& row : graphs) {
        const Graph g = parse_graph6(row.at("graph6").get<std::string>());
        if (g.vertex_count() != row.at("n").get<int>() || g.edge_count() != row.at("m").get<std::size_t>())
            return "chain member size mismatch";
        if (row.at("F").get<std::int64_t>() != F(k, g.vertex_count()))
            return "F column does not recompute";
    }
    return "";
}

std::string validate_bounds(const Json& c)
{
    const int k = c.at("k").get<int>();
    for (const auto& row : c.at("rows"))
        if (row != bound_row(bound_report(k, row.at("n").get<int>())))
            return "bounds row for n = " + std::to_string(row.at("n").get<int>()) + " does not recompute";
    return "";
}

std::string validate_bench(const Json& c)
{
    const Graph g = parse_graph6(c.at("graph6").get<std::string>());
    if (c.at("inputDigest") != input_digest(g))
        return "bench graph digest mismatch";
    if (g.max_degree() > c.at("maxDegree").get<int>())
        return "bench graph exceeds its degree bound";
    if (g != bench_graph(c.at("n").get<int>(), c.at("maxDegree").get<int>(), c.at("seed").get<std::uint64_t>()))
        return "bench graph does not regenerate from its seed";
    const Json& out = c.at("result");
    if (out.at("kind") == "coloring")
        return validate_coloring(out, g);
    return validate_witness(out, g);
}

} // namespace

std::string sha256_hex(std::string_view data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

std::string input_digest(const Graph& g)
{
    return "sha256:" + sha256_hex(to_graph6(g));
}

Json coloring_certificate(const Graph& g, int k, const ColoringOutcome& outcome, bool with_trace)
{
    Json j = header(outcome.is_coloring() ? "coloring" : "witness");
    j["inputDigest"] = input_digest(g);
    j["k"] = k;
    j["n"] = g.vertex_count();
    j["m"] = g.edge_count();
    if (outcome.is_coloring()) {
        j["colors"] = outcome.coloring().colors;
    } else {
        j["set"] = set_json(outcome.witness().set);
        j["rho"] = outcome.witness().rho;
    }
    j["stats"] = stats_json(outcome.stats);
    if (with_trace)
        j["trace"] = trace_json(outcome.trace);
    return j;
}

Json potential_certificate(const Graph& g, int k, PotentialMode mode, int jobs)
{
    Json j = header("bounds");
    j["subject"] = "potential";
    j["inputDigest"] = input_digest(g);
    j["k"] = k;
    j["n"] = g.vertex_count();
    j["m"] = g.edge_count();
    if (mode == PotentialMode::r1) {
        j["mode"] = "r1";
        const R1Outcome out = procedure_R1(g, k, R1Options{jobs});
        j["tag"] = to_string(out.tag);
        if (out.witness)
            j["witness"] = witness_json(*out.witness);
        const R1Audit& a = out.audit;
        Json audit{{"scale", a.scale}, {"base", a.base}, {"plainFlow", a.plain_flow}};
        audit["minPairFlow"] = a.min_pair_flow ? Json(*a.min_pair_flow) : Json(nullptr);
        audit["e0"] = a.e0 ? Json::array({a.e0->u, a.e0->v}) : Json(nullptr);
        audit["v0"] = a.v0 ? Json(*a.v0) : Json(nullptr);
        audit["pairsSolved"] = a.pairs_solved;
        audit["directWholeGraph"] = a.direct_whole_graph;
        j["audit"] = audit;
    } else {
        j["mode"] = "brute";
        const BruteClassification b = classify_brute(g, k);
        j["tag"] = to_string(b.tag);
        j["minPotential"] = b.min_potential;
        j["restrictedMinimum"] = b.restricted_minimum ? Json(*b.restricted_minimum) : Json(nullptr);
        if (b.tag != R1Tag::S5 && b.witness)
            j["witness"] = witness_json(*b.witness);
    }
    return j;
}

Json verification_certificate(const Graph& g, int k)
{
    Json j = header("verification");
    j["inputDigest"] = input_digest(g);
    j["k"] = k;
    j["n"] = g.vertex_count();
    j["m"] = g.edge_count();
    j["chromaticNumber"] = chromatic_number(g);
    j["critical"] = is_k_critical(g, k);
    if (k >= 4 && g.vertex_count() >= k) {
        const BoundReport r = bound_report(k, g.vertex_count());
        j["bounds"] = bound_row(r);
        j["meetsF"] = static_cast<std::int64_t>(g.edge_count()) >= r.F;
        j["meetsDirac"] = !r.dirac_applies || static_cast<std::int64_t>(g.edge_count()) >= r.dirac;
        j["meetsKostochkaStiebitz"] = !r.ks_applies || static_cast<std::int64_t>(g.edge_count()) >= r.kostochka_stiebitz;
    }
    return j;
}

Json construction_certificate(int k, int steps)
{
    if (k < 4)
        throw DomainError("construction needs k >= 4");
    if (steps < 0)
        throw DomainError("construction needs steps >= 0");
    Json j = header("construction");
    j["k"] = k;
    j["steps"] = steps;
    Json graphs = Json::array();
    for (const Graph& g : iterate_ore_chain(k, steps))
        graphs.push_back(Json{{"n", g.vertex_count()},
                              {"m", g.edge_count()},
                              {"F", F(k, g.vertex_count())},
                              {"graph6", to_graph6(g)}});
    j["graphs"] = graphs;
    return j;
}

Json bounds_certificate(int k, int n_lo, int n_hi)
{
    if (k < 4)
        throw DomainError("bounds need k >= 4");
    if (n_lo < k || n_hi < n_lo)
        throw DomainError("bounds need k <= n_lo <= n_hi");
    Json j = header("bounds");
    j["subject"] = "formulas";
    j["k"] = k;
    Json rows = Json::array();
    for (int n = n_lo; n <= n_hi; ++n)
        rows.push_back(bound_row(bound_report(k, n)));
    j["rows"] = rows;
    return j;
}

Graph bench_graph(int n, int max_degree, std::uint64_t seed)
{
    if (n < 0 || max_degree < 0)
        throw DomainError("bench graph needs n >= 0 and max_degree >= 0");
    std::mt19937_64 rng(seed);
    GraphBuilder b(n);
    std::vector<int> deg(n, 0);
    if (n >= 2)
        for (std::int64_t attempt = 0; attempt < static_cast<std::int64_t>(n) * max_degree * 4; ++attempt) {
            const Vertex u = static_cast<Vertex>(rng() % n), v = static_cast<Vertex>(rng() % n);
            if (u == v || deg[u] >= max_degree || deg[v] >= max_degree || b.adjacent(u, v))
                continue;
            b.add_edge(u, v);
            ++deg[u];
            ++deg[v];
        }
    return b.build();
}

Json bench_certificate(int k, int n, int max_degree, std::uint64_t seed, double call_constant)
{
    const Graph g = bench_graph(n, max_degree, seed);
    const ColoringOutcome out = color_or_witness(g, k);
    Json j = header("bench");
    j["inputDigest"] = input_digest(g);
    j["k"] = k;
    j["n"] = n;
    j["m"] = g.edge_count();
    j["maxDegree"] = max_degree;
    j["seed"] = seed;
    j["graph6"] = to_graph6(g);
    const double budget =
        call_constant * k * k * static_cast<double>(n) * n * std::max(1.0, std::log(static_cast<double>(std::max(n, 1))));
    j["calls"] = out.stats.calls;
    j["callConstant"] = call_constant;
    j["callBudget"] = budget;
    j["withinBudget"] = static_cast<double>(out.stats.calls) <= budget;
    Json result = coloring_certificate(g, k, out, false);
    result.erase("toolVersion");
    j["result"] = result;
    return j;
}

std::string validate(const Json& cert, const Graph* g)
{
    try {
        const std::string kind = cert.at("kind").get<std::string>();
        if (kind == "construction")
            return validate_construction(cert);
        if (kind == "bench")
            return validate_bench(cert);
        if (kind == "bounds" && cert.value("subject", "") == "formulas")
            return validate_bounds(cert);
        if (!g)
            return "certificate kind " + kind + " needs the input graph";
        if (cert.at("inputDigest") != input_digest(*g))
            return "input digest mismatch";
        if (kind == "coloring")
            return validate_coloring(cert, *g);
        if (kind == "witness")
            return validate_witness(cert, *g);
        if (kind == "bounds")
            return validate_potential(cert, *g);
        if (kind == "verification")
            return validate_verification(cert, *g);
        return "unknown certificate kind " + kind;
    } catch (const Json::exception& e) {
        return std::string("malformed certificate: ") + e.what();
    } catch (const Error& e) {
        return std::string("certificate replay failed: ") + e.what();
    }
}

} // namespace kcrit::cert
