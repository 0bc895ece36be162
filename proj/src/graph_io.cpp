#include "kcrit/graph_io.hpp"

#include "kcrit/error.hpp"

#include <charconv>
#include <sstream>
#include <vector>

namespace kcrit {

namespace {

constexpr int kBias = 63;
constexpr std::string_view kHeader = ">>graph6<<";

int sixbits(std::string_view s, std::size_t pos)
{
    if (pos >= s.size())
        throw ParseError("graph6 line truncated", pos);
    const int c = static_cast<unsigned char>(s[pos]);
    if (c < kBias || c > 126)
        throw ParseError("graph6 byte outside 63..126", pos);
    return c - kBias;
}

std::string_view trim_right(std::string_view s)
{
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

} // namespace

Graph parse_graph6(std::string_view text)
{
    std::size_t pos = 0;
    std::string_view s = trim_right(text);
    if (s.substr(0, kHeader.size()) == kHeader)
        pos = kHeader.size();
    if (pos >= s.size())
        throw ParseError("empty graph6 input", pos);
    if (s[pos] == ':' || s[pos] == '&' || s[pos] == ';')
        throw ParseError("sparse6/digraph6 lines are not graph6", pos);

    long long n = 0;
    if (s[pos] != '~') {
        n = sixbits(s, pos++);
    } else if (pos + 1 < s.size() && s[pos + 1] == '~') {
        pos += 2;
        for (int i = 0; i < 6; ++i)
            n = (n << 6) | sixbits(s, pos++);
    } else {
        pos += 1;
        for (int i = 0; i < 3; ++i)
            n = (n << 6) | sixbits(s, pos++);
    }
    if (n > (1LL << 24))
        throw ParseError("graph6 vertex count too large", pos);

    const long long bits = n * (n - 1) / 2;
    const long long bytes = (bits + 5) / 6;
    if (static_cast<long long>(s.size() - pos) != bytes)
        throw ParseError("graph6 body has " + std::to_string(s.size() - pos) + " bytes, expected " +
                             std::to_string(bytes),
                         s.size() < pos + bytes ? s.size() : pos + bytes);

    std::vector<Edge> es;
    long long bit = 0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i, ++bit) {
            const std::size_t at = pos + static_cast<std::size_t>(bit / 6);
            if ((sixbits(s, at) >> (5 - bit % 6)) & 1)
                es.emplace_back(i, j);
        }
    if (bits % 6 != 0) {
        const std::size_t last = pos + static_cast<std::size_t>(bytes) - 1;
        const int pad = static_cast<int>(6 - bits % 6);
        if (sixbits(s, last) & ((1 << pad) - 1))
            throw ParseError("nonzero graph6 padding bits", last);
    }
    return Graph(static_cast<int>(n), es);
}

std::string to_graph6(const Graph& g)
{
    const long long n = g.vertex_count();
    std::string out;
    if (n <= 62) {
        out.push_back(static_cast<char>(n + kBias));
    } else if (n <= 258047) {
        out.push_back('~');
        for (int shift = 12; shift >= 0; shift -= 6)
            out.push_back(static_cast<char>(((n >> shift) & 63) + kBias));
    } else {
        out += "~~";
        for (int shift = 30; shift >= 0; shift -= 6)
            out.push_back(static_cast<char>(((n >> shift) & 63) + kBias));
    }
    int acc = 0;
    int filled = 0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i) {
            acc = (acc << 1) | (g.adjacent(i, j) ? 1 : 0);
            if (++filled == 6) {
                out.push_back(static_cast<char>(acc + kBias));
                acc = filled = 0;
            }
        }
    if (filled > 0)
        out.push_back(static_cast<char>((acc << (6 - filled)) + kBias));
    return out;
}

namespace {

std::vector<std::string_view> tokens(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

long long to_int(std::string_view tok, std::size_t line)
{
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError("expected an integer, got '" + std::string(tok) + "'", line);
    return v;
}

} // namespace

Graph parse_dimacs(std::string_view text)
{
    long long n = -1;
    long long declared_m = -1;
    std::vector<Edge> es;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        const std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        const auto tok = tokens(line);
        if (tok.empty() || tok[0] == "c")
            continue;
        if (tok[0] == "p") {
            if (tok.size() != 4 || (tok[1] != "edge" && tok[1] != "col"))
                throw ParseError("malformed problem line", line_no);
            const long long pn = to_int(tok[2], line_no);
            const long long pm = to_int(tok[3], line_no);
            if (pn < 0 || pm < 0 || pn > (1 << 24))
                throw ParseError("invalid problem size", line_no);
            if (n != -1 && (pn != n || pm != declared_m))
                throw ParseError("contradictory duplicate problem line", line_no);
            n = pn;
            declared_m = pm;
        } else if (tok[0] == "e") {
            if (n == -1)
                throw ParseError("edge line before problem line", line_no);
            if (tok.size() != 3)
                throw ParseError("malformed edge line", line_no);
            const long long u = to_int(tok[1], line_no);
            const long long v = to_int(tok[2], line_no);
            if (u < 1 || u > n || v < 1 || v > n)
                throw ParseError("edge endpoint out of range 1.." + std::to_string(n), line_no);
            if (u == v)
                throw ParseError("self-loop", line_no);
            es.emplace_back(static_cast<int>(u - 1), static_cast<int>(v - 1));
        } else {
            throw ParseError("unknown line type '" + std::string(tok[0]) + "'", line_no);
        }
        if (end == text.size())
            break;
    }
    if (n == -1)
        throw ParseError("missing problem line", line_no);
    return Graph(static_cast<int>(n), es);
}

std::string to_dimacs(const Graph& g)
{
    std::ostringstream out;
    out << "p edge " << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const auto& e : g.edges())
        out << "e " << e.u + 1 << ' ' << e.v + 1 << '\n';
    return out.str();
}

Graph parse_graph(std::string_view text, GraphFormat format)
{
    return format == GraphFormat::graph6 ? parse_graph6(text) : parse_dimacs(text);
}

} // namespace kcrit
