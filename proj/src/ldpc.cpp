#include "ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>

#include "textio.hpp"

namespace evin {

namespace {

constexpr double kLlrClamp = 1e6;

struct TokenLine {
    std::vector<long long> values;
    int line = 0;
};

std::vector<TokenLine> tokenize_lines(const std::string& text, const std::string& path) {
    std::vector<TokenLine> lines;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        ++line_no;
        TokenLine tl;
        tl.line = line_no;
        std::size_t cur = pos;
        while (cur < eol) {
            while (cur < eol && (text[cur] == ' ' || text[cur] == '\t' || text[cur] == '\r')) ++cur;
            if (cur >= eol) break;
            std::size_t tok_start = cur;
            while (cur < eol && text[cur] != ' ' && text[cur] != '\t' && text[cur] != '\r') ++cur;
            const std::string tok = text.substr(tok_start, cur - tok_start);
            char* end = nullptr;
            const long long v = std::strtoll(tok.c_str(), &end, 10);
            if (end == tok.c_str() || *end != '\0')
                fail(Status::format_error,
                     path + ":" + std::to_string(line_no) + ": expected an integer, got '" +
                         tok + "'");
            tl.values.push_back(v);
        }
        if (!tl.values.empty()) lines.push_back(std::move(tl));
        if (eol == text.size()) break;
        pos = eol + 1;
    }
    return lines;
}

// One node's neighbor line: trailing zeros are padding; interior zeros or a
// count mismatch with the declared degree are rejected.
std::vector<std::uint32_t> parse_adjacency(const TokenLine& tl, long long declared_degree,
                                           long long max_value, const std::string& path) {
    std::vector<long long> vals = tl.values;
    while (!vals.empty() && vals.back() == 0) vals.pop_back();
    const std::string where = path + ":" + std::to_string(tl.line) + ": ";
    if (static_cast<long long>(vals.size()) != declared_degree)
        fail(Status::format_error, where + "node lists " + std::to_string(vals.size()) +
                                       " neighbors but its declared degree is " +
                                       std::to_string(declared_degree));
    std::vector<std::uint32_t> adj;
    adj.reserve(vals.size());
    for (long long v : vals) {
        if (v < 1 || v > max_value)
            fail(Status::format_error, where + "neighbor index " + std::to_string(v) +
                                           " out of range [1, " + std::to_string(max_value) + "]");
        adj.push_back(static_cast<std::uint32_t>(v - 1));
    }
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end())
        fail(Status::format_error, where + "duplicate neighbor index");
    return adj;
}

void build_encoder_setup(const LdpcCode& code) {
    EncoderCache& cache = *code.cache;
    const std::size_t n = code.n;
    const std::size_t rows = code.checks;
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> mat(rows * words, 0);
    for (std::size_t c = 0; c < rows; ++c)
        for (std::uint32_t v : code.check_adj[c]) mat[c * words + v / 64] |= 1ULL << (v % 64);

    // Full reduced row echelon form so every pivot column has a single 1 and
    // back-substitution becomes a plain XOR list.
    std::vector<std::uint32_t> pivots;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < rows; ++col) {
        const std::size_t w = col / 64;
        const std::uint64_t bit = 1ULL << (col % 64);
        std::size_t pivot_row = rows;
        for (std::size_t r = rank; r < rows; ++r)
            if (mat[r * words + w] & bit) {
                pivot_row = r;
                break;
            }
        if (pivot_row == rows) continue;
        if (pivot_row != rank)
            for (std::size_t j = 0; j < words; ++j)
                std::swap(mat[pivot_row * words + j], mat[rank * words + j]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || !(mat[r * words + w] & bit)) continue;
            for (std::size_t j = 0; j < words; ++j) mat[r * words + j] ^= mat[rank * words + j];
        }
        pivots.push_back(static_cast<std::uint32_t>(col));
        ++rank;
    }
    if (rank < rows) {
        cache.error = Status::encoding_setup;
        cache.error_message = "parity-check matrix is rank-deficient over GF(2): rank " +
                              std::to_string(rank) + " < " + std::to_string(rows) + " checks";
        return;
    }

    EncoderSetup setup;
    setup.parity_cols = pivots;
    std::vector<std::uint32_t> col_to_info(n, std::numeric_limits<std::uint32_t>::max());
    {
        std::size_t next_pivot = 0;
        for (std::size_t col = 0; col < n; ++col) {
            if (next_pivot < pivots.size() && pivots[next_pivot] == col) {
                ++next_pivot;
                continue;
            }
            col_to_info[col] = static_cast<std::uint32_t>(setup.info_cols.size());
            setup.info_cols.push_back(static_cast<std::uint32_t>(col));
        }
    }
    setup.parity_from_info.resize(rows);
    for (std::size_t r = 0; r < rows; ++r)
        for (const std::uint32_t col : setup.info_cols)
            if (mat[r * words + col / 64] & (1ULL << (col % 64)))
                setup.parity_from_info[r].push_back(col_to_info[col]);
    cache.setup = std::move(setup);
}

double box_plus(double a, double b) {
    const double sign = (a < 0.0) == (b < 0.0) ? 1.0 : -1.0;
    const double mag = std::min(std::fabs(a), std::fabs(b));
    return sign * mag + std::log1p(std::exp(-std::fabs(a + b))) -
           std::log1p(std::exp(-std::fabs(a - b)));
}

}  // namespace

std::size_t LdpcCode::edge_count() const {
    std::size_t edges = 0;
    for (const auto& adj : check_adj) edges += adj.size();
    return edges;
}

void LdpcCode::validate() const {
    if (n == 0 || checks == 0) fail(Status::invalid_argument, "code dimensions must be positive");
    if (checks >= n)
        fail(Status::invalid_argument,
             "code has no information positions (checks >= codeword length)");
    if (check_adj.size() != checks || var_adj.size() != n)
        fail(Status::invalid_argument, "adjacency sizes disagree with the code dimensions");
    for (std::size_t v = 0; v < n; ++v)
        if (var_adj[v].empty())
            fail(Status::invalid_argument,
                 "variable node " + std::to_string(v) + " has degree 0");
    // The two adjacency views must describe the same edge set.
    std::size_t var_edges = 0;
    for (const auto& adj : var_adj) var_edges += adj.size();
    if (var_edges != edge_count())
        fail(Status::invalid_argument, "row and column adjacency edge counts disagree");
    for (std::size_t c = 0; c < checks; ++c)
        for (std::uint32_t v : check_adj[c]) {
            if (v >= n) fail(Status::invalid_argument, "check adjacency index out of range");
            if (!std::binary_search(var_adj[v].begin(), var_adj[v].end(),
                                    static_cast<std::uint32_t>(c)))
                fail(Status::invalid_argument,
                     "edge (" + std::to_string(c) + ", " + std::to_string(v) +
                         ") missing from the column adjacency");
        }
}

LdpcCode load_code(const std::string& path) {
    const std::vector<TokenLine> lines = tokenize_lines(read_file(path), path);
    auto need_line = [&](std::size_t idx, const char* what) -> const TokenLine& {
        if (idx >= lines.size())
            fail(Status::format_error, path + ": truncated alist: missing " + std::string(what));
        return lines[idx];
    };
    const TokenLine& dims = need_line(0, "dimension line");
    if (dims.values.size() != 2 || dims.values[0] < 1 || dims.values[1] < 1)
        fail(Status::format_error,
             path + ":" + std::to_string(dims.line) + ": expected 'n checks' dimensions");
    LdpcCode code;
    code.n = static_cast<std::size_t>(dims.values[0]);
    code.checks = static_cast<std::size_t>(dims.values[1]);

    const TokenLine& maxdeg = need_line(1, "max-degree line");
    if (maxdeg.values.size() != 2)
        fail(Status::format_error,
             path + ":" + std::to_string(maxdeg.line) + ": expected two max degrees");

    const TokenLine& var_deg = need_line(2, "variable degree list");
    if (var_deg.values.size() != code.n)
        fail(Status::format_error, path + ":" + std::to_string(var_deg.line) + ": expected " +
                                       std::to_string(code.n) + " variable degrees, got " +
                                       std::to_string(var_deg.values.size()));
    const TokenLine& check_deg = need_line(3, "check degree list");
    if (check_deg.values.size() != code.checks)
        fail(Status::format_error, path + ":" + std::to_string(check_deg.line) + ": expected " +
                                       std::to_string(code.checks) + " check degrees, got " +
                                       std::to_string(check_deg.values.size()));
    if (lines.size() != 4 + code.n + code.checks)
        fail(Status::format_error, path + ": expected " +
                                       std::to_string(4 + code.n + code.checks) +
                                       " content lines, found " + std::to_string(lines.size()));

    long long actual_max_var = 0, actual_max_check = 0;
    code.var_adj.resize(code.n);
    for (std::size_t v = 0; v < code.n; ++v) {
        code.var_adj[v] = parse_adjacency(lines[4 + v], var_deg.values[v],
                                          static_cast<long long>(code.checks), path);
        actual_max_var = std::max(actual_max_var, var_deg.values[v]);
    }
    code.check_adj.resize(code.checks);
    for (std::size_t c = 0; c < code.checks; ++c) {
        code.check_adj[c] = parse_adjacency(lines[4 + code.n + c], check_deg.values[c],
                                            static_cast<long long>(code.n), path);
        actual_max_check = std::max(actual_max_check, check_deg.values[c]);
    }
    if (maxdeg.values[0] != actual_max_var || maxdeg.values[1] != actual_max_check)
        fail(Status::format_error,
             path + ":" + std::to_string(maxdeg.line) + ": declared max degrees (" +
                 std::to_string(maxdeg.values[0]) + ", " + std::to_string(maxdeg.values[1]) +
                 ") disagree with the degree lists (" + std::to_string(actual_max_var) + ", " +
                 std::to_string(actual_max_check) + ")");
    try {
        code.validate();
    } catch (const Error& err) {
        fail(Status::format_error, path + ": " + err.what());
    }
    return code;
}

void save_code(const LdpcCode& code, const std::string& path) {
    code.validate();
    std::size_t max_var = 0, max_check = 0;
    for (const auto& adj : code.var_adj) max_var = std::max(max_var, adj.size());
    for (const auto& adj : code.check_adj) max_check = std::max(max_check, adj.size());
    std::string out;
    out += std::to_string(code.n) + " " + std::to_string(code.checks) + "\n";
    out += std::to_string(max_var) + " " + std::to_string(max_check) + "\n";
    auto append_degrees = [&out](const std::vector<std::vector<std::uint32_t>>& adj) {
        for (std::size_t i = 0; i < adj.size(); ++i)
            out += (i ? " " : "") + std::to_string(adj[i].size());
        out += "\n";
    };
    append_degrees(code.var_adj);
    append_degrees(code.check_adj);
    auto append_adjacency = [&out](const std::vector<std::vector<std::uint32_t>>& adj,
                                   std::size_t pad_to) {
        for (const auto& neighbors : adj) {
            for (std::size_t i = 0; i < pad_to; ++i) {
                const std::string v =
                    i < neighbors.size() ? std::to_string(neighbors[i] + 1) : std::string("0");
                out += (i ? " " : "") + v;
            }
            out += "\n";
        }
    };
    append_adjacency(code.var_adj, max_var);
    append_adjacency(code.check_adj, max_check);
    atomic_write_file(path, out);
}

LdpcCode make_regular_code(std::size_t n) {
    if (n < 6 || n % 2 != 0)
        fail(Status::invalid_argument,
             "regular (3,6) construction needs an even codeword length of at least 6");
    constexpr std::size_t kVarDegree = 3;
    constexpr std::size_t kCheckDegree = 6;
    LdpcCode code;
    code.n = n;
    code.checks = n / 2;
    code.var_adj.assign(n, {});
    code.check_adj.assign(code.checks, {});

    std::vector<int> check_dist(code.checks);
    std::vector<int> var_dist(n);
    std::deque<std::uint32_t> frontier;
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t e = 0; e < kVarDegree; ++e) {
            // BFS over the current bipartite graph to find each check's
            // distance from v (-1 = unreached, the preferred case).
            std::fill(check_dist.begin(), check_dist.end(), -1);
            std::fill(var_dist.begin(), var_dist.end(), -1);
            var_dist[v] = 0;
            frontier.assign(1, static_cast<std::uint32_t>(v));
            while (!frontier.empty()) {
                const std::uint32_t cur = frontier.front();
                frontier.pop_front();
                for (std::uint32_t c : code.var_adj[cur]) {
                    if (check_dist[c] != -1) continue;
                    check_dist[c] = var_dist[cur] + 1;
                    for (std::uint32_t v2 : code.check_adj[c]) {
                        if (var_dist[v2] != -1) continue;
                        var_dist[v2] = check_dist[c] + 1;
                        frontier.push_back(v2);
                    }
                }
            }
            // Farthest check wins; ties go to the lightest, then lowest index.
            std::size_t best = code.checks;
            for (std::size_t c = 0; c < code.checks; ++c) {
                if (code.check_adj[c].size() >= kCheckDegree) continue;
                if (check_dist[c] == 1) continue;  // already adjacent to v
                if (best == code.checks) {
                    best = c;
                    continue;
                }
                const int dist_c = check_dist[c] == -1 ? std::numeric_limits<int>::max()
                                                       : check_dist[c];
                const int dist_b = check_dist[best] == -1 ? std::numeric_limits<int>::max()
                                                          : check_dist[best];
                if (dist_c > dist_b ||
                    (dist_c == dist_b && code.check_adj[c].size() < code.check_adj[best].size()))
                    best = c;
            }
            if (best == code.checks)
                fail(Status::numeric_error,
                     "code construction wedged: no check has spare degree for variable " +
                         std::to_string(v));
            code.check_adj[best].push_back(static_cast<std::uint32_t>(v));
            code.var_adj[v].push_back(static_cast<std::uint32_t>(best));
        }
        std::sort(code.var_adj[v].begin(), code.var_adj[v].end());
    }
    for (auto& adj : code.check_adj) std::sort(adj.begin(), adj.end());
    code.validate();
    return code;
}

const EncoderSetup& encoder_setup(const LdpcCode& code) {
    code.validate();
    EncoderCache& cache = *code.cache;
    std::call_once(cache.once, [&] { build_encoder_setup(code); });
    if (!cache.setup) fail(cache.error, cache.error_message);
    return *cache.setup;
}

std::vector<std::uint8_t> encode(const std::vector<std::uint8_t>& info, const LdpcCode& code) {
    const EncoderSetup& setup = encoder_setup(code);
    if (info.size() != setup.info_cols.size())
        fail(Status::invalid_argument, "expected " + std::to_string(setup.info_cols.size()) +
                                           " information bits, got " +
                                           std::to_string(info.size()));
    std::vector<std::uint8_t> codeword(code.n, 0);
    for (std::size_t j = 0; j < info.size(); ++j) codeword[setup.info_cols[j]] = info[j] & 1u;
    for (std::size_t r = 0; r < code.checks; ++r) {
        std::uint8_t bit = 0;
        for (std::uint32_t j : setup.parity_from_info[r]) bit ^= info[j] & 1u;
        codeword[setup.parity_cols[r]] = bit;
    }
    return codeword;
}

DecodeResult decode(const std::vector<double>& llrs, const LdpcCode& code, int max_iters) {
    const EncoderSetup& setup = encoder_setup(code);
    if (llrs.size() != code.n)
        fail(Status::invalid_argument, "expected " + std::to_string(code.n) + " LLRs, got " +
                                           std::to_string(llrs.size()));
    if (max_iters < 1) fail(Status::invalid_argument, "max iterations must be at least 1");

    const std::size_t edges = code.edge_count();
    std::vector<std::size_t> check_offset(code.checks + 1, 0);
    for (std::size_t c = 0; c < code.checks; ++c)
        check_offset[c + 1] = check_offset[c] + code.check_adj[c].size();
    // Per variable: the flat slots of its edges in the check-major layout.
    std::vector<std::size_t> var_offset(code.n + 1, 0);
    for (std::size_t v = 0; v < code.n; ++v)
        var_offset[v + 1] = var_offset[v] + code.var_adj[v].size();
    std::vector<std::size_t> var_slots(edges);
    {
        std::vector<std::size_t> cursor(code.n);
        for (std::size_t v = 0; v < code.n; ++v) cursor[v] = var_offset[v];
        for (std::size_t c = 0; c < code.checks; ++c)
            for (std::size_t i = 0; i < code.check_adj[c].size(); ++i)
                var_slots[cursor[code.check_adj[c][i]]++] = check_offset[c] + i;
    }

    std::vector<double> channel(code.n);
    for (std::size_t v = 0; v < code.n; ++v) {
        const double l = llrs[v];
        if (std::isnan(l)) fail(Status::invalid_argument, "LLR input contains NaN");
        channel[v] = std::clamp(l, -kLlrClamp, kLlrClamp);
    }

    std::vector<double> var_to_check(edges);
    for (std::size_t v = 0; v < code.n; ++v)
        for (std::size_t s = var_offset[v]; s < var_offset[v + 1]; ++s)
            var_to_check[var_slots[s]] = channel[v];

    DecodeResult result;
    result.codeword.assign(code.n, 0);
    std::vector<double> check_to_var(edges);
    std::size_t max_check_degree = 0;
    for (const auto& adj : code.check_adj) max_check_degree = std::max(max_check_degree, adj.size());
    std::vector<double> forward(max_check_degree), backward(max_check_degree);
    std::vector<double> total(code.n);

    for (int iter = 1; iter <= max_iters; ++iter) {
        for (std::size_t c = 0; c < code.checks; ++c) {
            const std::size_t off = check_offset[c];
            const std::size_t deg = check_offset[c + 1] - off;
            forward[0] = var_to_check[off];
            for (std::size_t i = 1; i < deg; ++i)
                forward[i] = box_plus(forward[i - 1], var_to_check[off + i]);
            backward[deg - 1] = var_to_check[off + deg - 1];
            for (std::size_t i = deg - 1; i > 0; --i)
                backward[i - 1] = box_plus(backward[i], var_to_check[off + i - 1]);
            for (std::size_t i = 0; i < deg; ++i) {
                if (deg == 1)
                    check_to_var[off + i] = kLlrClamp;  // degree-1 check pins its variable
                else if (i == 0)
                    check_to_var[off] = backward[1];
                else if (i + 1 == deg)
                    check_to_var[off + i] = forward[deg - 2];
                else
                    check_to_var[off + i] = box_plus(forward[i - 1], backward[i + 1]);
            }
        }
        for (std::size_t v = 0; v < code.n; ++v) {
            double acc = channel[v];
            for (std::size_t s = var_offset[v]; s < var_offset[v + 1]; ++s)
                acc += check_to_var[var_slots[s]];
            total[v] = acc;
            for (std::size_t s = var_offset[v]; s < var_offset[v + 1]; ++s)
                var_to_check[var_slots[s]] =
                    std::clamp(acc - check_to_var[var_slots[s]], -kLlrClamp, kLlrClamp);
        }
        for (std::size_t v = 0; v < code.n; ++v)
            result.codeword[v] = total[v] < 0.0 ? 1 : 0;
        bool syndrome_zero = true;
        for (std::size_t c = 0; c < code.checks && syndrome_zero; ++c) {
            std::uint8_t parity = 0;
            for (std::uint32_t v : code.check_adj[c]) parity ^= result.codeword[v];
            syndrome_zero = parity == 0;
        }
        result.iterations = iter;
        if (syndrome_zero) {
            result.converged = true;
            break;
        }
    }
    result.info_bits.resize(setup.info_cols.size());
    for (std::size_t j = 0; j < setup.info_cols.size(); ++j)
        result.info_bits[j] = result.codeword[setup.info_cols[j]];
    return result;
}

}  // namespace evin
