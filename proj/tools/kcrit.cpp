#include "kcrit/certificate.hpp"
#include "kcrit/error.hpp"
#include "kcrit/graph_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

using namespace kcrit;
using cert::Json;

namespace {

struct InputFlags {
    std::string path = "-";
    std::string format = "graph6";
};

void add_input(CLI::App* cmd, InputFlags& in)
{
    cmd->add_option("--input", in.path, "graph file, '-' for standard input")->capture_default_str();
    cmd->add_option("--format", in.format, "graph6 | dimacs")
        ->check(CLI::IsMember({"graph6", "dimacs"}))
        ->capture_default_str();
}

std::string slurp(const std::string& path)
{
    if (path == "-")
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot open " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

Graph load(const InputFlags& in)
{
    return parse_graph(slurp(in.path), in.format == "dimacs" ? GraphFormat::dimacs : GraphFormat::graph6);
}

void emit(const Json& j)
{
    std::cout << j.dump(2) << '\n';
}

std::pair<int, int> parse_range(const std::string& s)
{
    const auto dots = s.find("..");
    if (dots == std::string::npos)
        throw DomainError("--n-range expects lo..hi");
    try {
        std::size_t used_lo = 0, used_hi = 0;
        const std::string lo = s.substr(0, dots), hi = s.substr(dots + 2);
        const int a = std::stoi(lo, &used_lo), b = std::stoi(hi, &used_hi);
        if (used_lo != lo.size() || used_hi != hi.size())
            throw DomainError("--n-range expects lo..hi");
        return {a, b};
    } catch (const std::logic_error&) {
        throw DomainError("--n-range expects lo..hi");
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"k-critical graph toolkit: colorings, potential analysis, verification, constructions"};
    app.require_subcommand(1);

    int k = 0;
    int jobs = 1;
    bool trace = false;
    InputFlags in;

    auto* color = app.add_subcommand("color", "(k-1)-color the input or return a low-potential set");
    color->add_option("--k", k, "k >= 4")->required();
    add_input(color, in);
    color->add_flag("--trace", trace, "attach the reduction trace");
    color->add_option("--jobs", jobs, "worker threads for the flow pair loop")->capture_default_str();

    std::string mode = "r1";
    auto* potential = app.add_subcommand("potential", "classify the minimum potential (S1..S5)");
    potential->add_option("--k", k, "k >= 4")->required();
    add_input(potential, in);
    potential->add_option("--mode", mode, "r1 | brute")->check(CLI::IsMember({"r1", "brute"}))->capture_default_str();
    potential->add_option("--jobs", jobs, "worker threads for the flow pair loop")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "chromatic number, criticality and edge bounds");
    verify->add_option("--k", k, "k >= 3")->required();
    add_input(verify, in);

    int steps = 0;
    auto* construct = app.add_subcommand("construct", "Ore chain of Hajos joins with K_k");
    construct->add_option("--k", k, "k >= 4")->required();
    construct->add_option("--steps", steps, "number of joins")->required();

    std::string range;
    auto* bounds = app.add_subcommand("bounds", "edge-count bounds over a range of n");
    bounds->add_option("--k", k, "k >= 4")->required();
    bounds->add_option("--n-range", range, "lo..hi")->required();

    int bench_n = 500;
    int max_degree = -1;
    std::uint64_t seed = 0;
    auto* bench = app.add_subcommand("bench", "color a random bounded-degree graph and report the call count");
    bench->add_option("--k", k, "k >= 4")->required();
    bench->add_option("--n", bench_n, "vertices")->capture_default_str();
    bench->add_option("--max-degree", max_degree, "degree bound (default k-2)");
    bench->add_option("--seed", seed, "generator seed")->capture_default_str();

    std::string certificate_path;
    auto* check = app.add_subcommand("check", "replay a certificate");
    check->add_option("--certificate", certificate_path, "certificate JSON file, '-' for standard input")->required();
    check->add_option("--input", in.path, "graph the certificate refers to");
    check->add_option("--format", in.format, "graph6 | dimacs")->check(CLI::IsMember({"graph6", "dimacs"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*color) {
            const Graph g = load(in);
            ReducerOptions opt;
            opt.jobs = jobs;
            opt.trace = trace;
            const ColoringOutcome out = color_or_witness(g, k, opt);
            emit(cert::coloring_certificate(g, k, out, trace));
            if (out.is_coloring()) {
                std::cerr << "colored " << g.vertex_count() << " vertices with " << k - 1 << " colors ("
                          << out.stats.calls << " calls)\n";
                return 0;
            }
            std::cerr << "witness of size " << out.witness().set.size() << " with potential " << out.witness().rho
                      << " <= " << witness_threshold(k) << '\n';
            return 2;
        }
        if (*potential) {
            const Graph g = load(in);
            const Json j = cert::potential_certificate(g, k, mode == "brute" ? cert::PotentialMode::brute
                                                                              : cert::PotentialMode::r1,
                                                       jobs);
            emit(j);
            std::cerr << "outcome " << j["tag"].get<std::string>() << '\n';
            return 0;
        }
        if (*verify) {
            const Graph g = load(in);
            const Json j = cert::verification_certificate(g, k);
            emit(j);
            std::cerr << "chi = " << j["chromaticNumber"].get<int>() << ", " << (j["critical"].get<bool>() ? "" : "not ")
                      << k << "-critical, |E| = " << g.edge_count() << '\n';
            return 0;
        }
        if (*construct) {
            const Json j = cert::construction_certificate(k, steps);
            emit(j);
            for (const auto& row : j["graphs"])
                std::cerr << row["graph6"].get<std::string>() << "  n=" << row["n"] << " m=" << row["m"]
                          << " F=" << row["F"] << '\n';
            return 0;
        }
        if (*bounds) {
            const auto [lo, hi] = parse_range(range);
            const Json j = cert::bounds_certificate(k, lo, hi);
            emit(j);
            for (const auto& row : j["rows"])
                std::cerr << "n=" << row["n"] << " F=" << row["F"] << '\n';
            return 0;
        }
        if (*bench) {
            const Json j = cert::bench_certificate(k, bench_n, max_degree < 0 ? k - 2 : max_degree, seed,
                                                   cert::kCallConstant);
            emit(j);
            std::cerr << "calls " << j["calls"] << " of budget " << j["callBudget"] << '\n';
            return j["result"]["kind"] == "witness" ? 2 : 0;
        }
        if (*check) {
            const Json c = Json::parse(slurp(certificate_path));
            std::optional<Graph> g;
            if (check->count("--input"))
                g = load(in);
            const std::string bad = cert::validate(c, g ? &*g : nullptr);
            if (!bad.empty()) {
                std::cerr << "invalid certificate: " << bad << '\n';
                return 1;
            }
            std::cerr << "certificate valid\n";
            return 0;
        }
    } catch (const Json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
