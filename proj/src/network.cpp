#include "toric/network.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

namespace toric {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotWeaklyReversible: return "NotWeaklyReversible";
    case ErrorCode::NotReversible: return "NotReversible";
    case ErrorCode::RateOutOfBand: return "RateOutOfBand";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::InvalidHorizon: return "InvalidHorizon";
    case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NoComplexBalance: return "NoComplexBalance";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::CoincidentVertices: return "CoincidentVertices";
    case ErrorCode::TieOnProjection: return "TieOnProjection";
    case ErrorCode::OrderingMismatch: return "OrderingMismatch";
    case ErrorCode::BandsOverlap: return "BandsOverlap";
    case ErrorCode::InfeasibleAdjustment: return "InfeasibleAdjustment";
    }
    return "Error";
}

// -------------------------------------------------------------
// ReactionNetwork
// -------------------------------------------------------------

ReactionNetwork::ReactionNetwork(std::vector<std::string> species) : species_(std::move(species)) {}

int ReactionNetwork::find_complex(const Vector& y) const
{
    for (const auto& c : complexes_) {
        if (c.y == y) {
            return c.id;
        }
    }
    return -1;
}

int ReactionNetwork::add_complex(const Vector& y)
{
    require_dimension(y.size(), dimension(), "complex dimension");
    if (!y.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "complex coordinates must be finite");
    }
    if (int id = find_complex(y); id >= 0) {
        return id;
    }
    complexes_.push_back({complex_count(), y});
    return complexes_.back().id;
}

void ReactionNetwork::add_reaction(int source, int target, double rate)
{
    if (source < 0 || source >= complex_count() || target < 0 || target >= complex_count()) {
        throw Error(ErrorCode::InvalidArgument, "reaction references unknown complex");
    }
    if (source == target) {
        throw Error(ErrorCode::InvalidArgument, "reaction source equals target");
    }
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw Error(ErrorCode::InvalidArgument, "reaction rate must be positive and finite");
    }
    reactions_.push_back({source, target, rate});
}

void ReactionNetwork::add_reaction(const Vector& source, const Vector& target, double rate)
{
    int s = add_complex(source);
    int t = add_complex(target);
    add_reaction(s, t, rate);
}

Vector ReactionNetwork::rates() const
{
    Vector k(edge_count());
    for (int e = 0; e < edge_count(); ++e) {
        k[e] = reactions_[e].rate;
    }
    return k;
}

ReactionNetwork ReactionNetwork::with_rates(const Vector& rates) const
{
    require_dimension(rates.size(), edge_count(), "rate vector");
    ReactionNetwork out = *this;
    for (int e = 0; e < edge_count(); ++e) {
        if (!(rates[e] > 0.0) || !std::isfinite(rates[e])) {
            throw Error(ErrorCode::InvalidArgument, "reaction rate must be positive and finite");
        }
        out.reactions_[e].rate = rates[e];
    }
    return out;
}

// -------------------------------------------------------------
// Parser
// -------------------------------------------------------------

namespace {

struct Cursor {
    std::string_view line;
    std::size_t pos = 0;
    std::size_t line_no = 0;

    void skip_ws()
    {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) {
            ++pos;
        }
    }
    bool at_end()
    {
        skip_ws();
        return pos >= line.size();
    }
    char peek()
    {
        skip_ws();
        return pos < line.size() ? line[pos] : '\0';
    }
    std::size_t column() const { return pos + 1; }

    [[noreturn]] void fail(const std::string& msg, ParseError::Kind kind = ParseError::Kind::Syntax)
    {
        throw ParseError(kind, line_no, column(), msg);
    }

    bool consume(std::string_view tok)
    {
        skip_ws();
        if (line.substr(pos, tok.size()) == tok) {
            pos += tok.size();
            return true;
        }
        return false;
    }
    void expect(std::string_view tok)
    {
        if (!consume(tok)) {
            fail("expected '" + std::string(tok) + "'");
        }
    }

    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    std::optional<std::string> identifier()
    {
        skip_ws();
        if (pos >= line.size() || !ident_start(line[pos])) {
            return std::nullopt;
        }
        std::size_t start = pos;
        while (pos < line.size() && ident_char(line[pos])) {
            ++pos;
        }
        return std::string(line.substr(start, pos - start));
    }

    bool number_ahead()
    {
        skip_ws();
        if (pos >= line.size()) {
            return false;
        }
        char c = line[pos];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+';
    }

    double number()
    {
        skip_ws();
        std::size_t start = pos;
        if (pos < line.size() && (line[pos] == '+' || line[pos] == '-')) {
            ++pos;
        }
        bool digits = false;
        while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos]))) {
            ++pos;
            digits = true;
        }
        if (pos < line.size() && line[pos] == '.') {
            ++pos;
            while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos]))) {
                ++pos;
                digits = true;
            }
        }
        if (digits && pos < line.size() && (line[pos] == 'e' || line[pos] == 'E')) {
            std::size_t save = pos++;
            if (pos < line.size() && (line[pos] == '+' || line[pos] == '-')) {
                ++pos;
            }
            bool exp_digits = false;
            while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos]))) {
                ++pos;
                exp_digits = true;
            }
            if (!exp_digits) {
                pos = save;
            }
        }
        if (!digits) {
            pos = start;
            fail("expected number");
        }
        std::string text(line.substr(start, pos - start));
        if (!text.empty() && text.front() == '+') {
            text.erase(0, 1);
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            pos = start;
            fail("malformed number");
        }
        return value;
    }
};

class NetworkParser {
public:
    ReactionNetwork parse(std::string_view text)
    {
        std::size_t line_no = 0;
        std::size_t begin = 0;
        bool have_header = false;
        while (begin <= text.size()) {
            std::size_t end = text.find('\n', begin);
            if (end == std::string_view::npos) {
                end = text.size();
            }
            std::string_view raw = text.substr(begin, end - begin);
            ++line_no;
            if (auto hash = raw.find('#'); hash != std::string_view::npos) {
                raw = raw.substr(0, hash);
            }
            if (!raw.empty() && raw.back() == '\r') {
                raw.remove_suffix(1);
            }
            Cursor cur{raw, 0, line_no};
            if (!cur.at_end()) {
                if (!have_header) {
                    parse_header(cur);
                    have_header = true;
                } else {
                    parse_statement(cur);
                }
            }
            if (end == text.size()) {
                break;
            }
            begin = end + 1;
        }
        if (!have_header) {
            throw ParseError(ParseError::Kind::Syntax, line_no, 1, "missing 'species' header line");
        }
        return std::move(net_);
    }

private:
    ReactionNetwork net_;

    void parse_header(Cursor& cur)
    {
        auto kw = cur.identifier();
        if (!kw || *kw != "species") {
            cur.pos = 0;
            cur.fail("first line must be 'species <names...>'");
        }
        std::vector<std::string> names;
        std::set<std::string> seen;
        while (!cur.at_end()) {
            std::size_t col = cur.column();
            auto name = cur.identifier();
            if (!name) {
                cur.fail("expected species name");
            }
            if (*name == "complex" || *name == "species") {
                throw ParseError(ParseError::Kind::Syntax, cur.line_no, col,
                                 "reserved word used as species name: " + *name);
            }
            if (!seen.insert(*name).second) {
                throw ParseError(ParseError::Kind::DuplicateDefinition, cur.line_no, col,
                                 "duplicate species '" + *name + "'");
            }
            names.push_back(*name);
        }
        net_ = ReactionNetwork(std::move(names));
    }

    int species_index(const std::string& name) const
    {
        const auto& sp = net_.species();
        auto it = std::find(sp.begin(), sp.end(), name);
        return it == sp.end() ? -1 : static_cast<int>(it - sp.begin());
    }

    Vector parse_complex(Cursor& cur)
    {
        const int n = net_.dimension();
        Vector y = Vector::Zero(n);
        cur.skip_ws();
        std::size_t start = cur.pos;

        // "0" alone is the zero complex.
        if (cur.peek() == '0') {
            std::size_t save = cur.pos;
            double v = cur.number();
            if (v == 0.0 && !Cursor::ident_start(cur.peek())) {
                return y;
            }
            cur.pos = save;
        }

        if (auto kw = cur.identifier(); kw && *kw == "complex") {
            if (cur.peek() == '(') {
                cur.expect("(");
                std::vector<double> coords;
                while (true) {
                    double v = cur.number();
                    if (!std::isfinite(v)) {
                        cur.fail("complex coordinate must be finite");
                    }
                    coords.push_back(v);
                    if (cur.consume(",")) {
                        continue;
                    }
                    cur.expect(")");
                    break;
                }
                if (static_cast<int>(coords.size()) != n) {
                    cur.fail("raw complex has " + std::to_string(coords.size()) +
                             " coordinates, expected " + std::to_string(n));
                }
                return to_vector(coords);
            }
        }
        cur.pos = start;

        std::vector<bool> used(static_cast<std::size_t>(n), false);
        while (true) {
            double coef = 1.0;
            if (cur.number_ahead()) {
                coef = cur.number();
                if (!(coef > 0.0) || !std::isfinite(coef)) {
                    cur.fail("stoichiometric coefficient must be positive");
                }
            }
            std::size_t col_pos = cur.pos;
            cur.skip_ws();
            col_pos = cur.pos;
            auto name = cur.identifier();
            if (!name) {
                cur.fail("expected species name");
            }
            int idx = species_index(*name);
            if (idx < 0) {
                cur.pos = col_pos;
                cur.fail("unknown species '" + *name + "'", ParseError::Kind::UnknownSpecies);
            }
            if (used[static_cast<std::size_t>(idx)]) {
                cur.pos = col_pos;
                cur.fail("species '" + *name + "' repeated within one complex",
                         ParseError::Kind::DuplicateDefinition);
            }
            used[static_cast<std::size_t>(idx)] = true;
            y[idx] = coef;
            if (cur.peek() == '+') {
                cur.expect("+");
                continue;
            }
            break;
        }
        return y;
    }

    std::map<std::string, double> parse_params(Cursor& cur)
    {
        std::map<std::string, double> params;
        while (!cur.at_end()) {
            std::size_t col_pos = cur.pos;
            auto key = cur.identifier();
            if (!key) {
                cur.fail("expected rate parameter");
            }
            cur.expect("=");
            cur.skip_ws();
            std::size_t value_pos = cur.pos;
            double v = cur.number();
            if (!(v > 0.0) || !std::isfinite(v)) {
                cur.pos = value_pos;
                cur.fail("rate '" + *key + "' must be positive", ParseError::Kind::NonpositiveRate);
            }
            if (!params.emplace(*key, v).second) {
                cur.pos = col_pos;
                cur.fail("rate parameter '" + *key + "' given twice", ParseError::Kind::DuplicateDefinition);
            }
        }
        return params;
    }

    void parse_statement(Cursor& cur)
    {
        Vector lhs = parse_complex(cur);
        if (cur.at_end()) {
            net_.add_complex(lhs);
            return;
        }
        bool reversible = false;
        if (cur.consume("<->")) {
            reversible = true;
        } else if (!cur.consume("->")) {
            cur.fail("expected '->' or '<->'");
        }
        cur.skip_ws();
        if (cur.at_end() || cur.peek() == ';') {
            cur.fail("missing target complex");
        }
        Vector rhs = parse_complex(cur);
        std::size_t semi_col = cur.pos;
        cur.expect(";");
        auto params = parse_params(cur);

        auto take = [&](const std::string& key) {
            auto it = params.find(key);
            if (it == params.end()) {
                cur.pos = semi_col;
                cur.fail("missing rate parameter '" + key + "'");
            }
            double v = it->second;
            params.erase(it);
            return v;
        };

        if (lhs == rhs) {
            cur.pos = 0;
            cur.fail("source and target complexes coincide");
        }
        int s = net_.add_complex(lhs);
        int t = net_.add_complex(rhs);
        if (reversible) {
            double kf = take("kf");
            double kr = take("kr");
            if (!params.empty()) {
                cur.fail("unexpected rate parameter '" + params.begin()->first + "'");
            }
            net_.add_reaction(s, t, kf);
            net_.add_reaction(t, s, kr);
        } else {
            double k = take("k");
            if (!params.empty()) {
                cur.fail("unexpected rate parameter '" + params.begin()->first + "'");
            }
            net_.add_reaction(s, t, k);
        }
    }
};

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_complex(const ReactionNetwork& net, const Vector& y)
{
    if ((y.array() < 0.0).any()) {
        std::string out = "complex (";
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            out += (i ? ", " : "") + format_double(y[i]);
        }
        return out + ")";
    }
    std::string out;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] == 0.0) {
            continue;
        }
        if (!out.empty()) {
            out += " + ";
        }
        if (y[i] != 1.0) {
            out += format_double(y[i]) + " ";
        }
        out += net.species()[static_cast<std::size_t>(i)];
    }
    return out.empty() ? "0" : out;
}

} // namespace

ReactionNetwork parse_network(std::string_view text)
{
    return NetworkParser{}.parse(text);
}

ReactionNetwork load_network(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::InvalidArgument, "cannot open network file: " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_network(ss.str());
}

std::string serialize_network(const ReactionNetwork& net)
{
    std::string out = "species";
    for (const auto& s : net.species()) {
        out += " " + s;
    }
    out += "\n";
    for (const auto& c : net.complexes()) {
        out += format_complex(net, c.y) + "\n";
    }
    for (const auto& r : net.reactions()) {
        out += format_complex(net, net.y(r.source)) + " -> " + format_complex(net, net.y(r.target)) +
               " ; k=" + format_double(r.rate) + "\n";
    }
    return out;
}

// -------------------------------------------------------------
// Structural analysis
// -------------------------------------------------------------

Vector StoichiometricSubspace::project_off(const Vector& v) const
{
    if (dim == 0) {
        return v;
    }
    return v - basis * (basis.transpose() * v);
}

StoichiometricSubspace stoichiometric_subspace(const ReactionNetwork& net)
{
    const int n = net.dimension();
    StoichiometricSubspace out;
    out.basis = Matrix(n, 0);
    if (net.edge_count() == 0 || n == 0) {
        return out;
    }
    Matrix diffs(n, net.edge_count());
    for (int e = 0; e < net.edge_count(); ++e) {
        const auto& r = net.reactions()[e];
        diffs.col(e) = net.y(r.target) - net.y(r.source);
    }
    Eigen::JacobiSVD<Matrix> svd(diffs, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    double tol = 1e-10 * std::max(1.0, sv.size() ? sv[0] : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        rank += sv[i] > tol ? 1 : 0;
    }
    out.dim = rank;
    out.basis = svd.matrixU().leftCols(rank);
    return out;
}

Matrix conservation_basis(const ReactionNetwork& net)
{
    const int n = net.dimension();
    auto sub = stoichiometric_subspace(net);
    if (sub.dim == 0) {
        return Matrix::Identity(n, n);
    }
    // Full U of the basis gives the complement as trailing columns.
    Eigen::JacobiSVD<Matrix> svd(sub.basis, Eigen::ComputeFullU);
    return svd.matrixU().rightCols(n - sub.dim);
}

namespace {

std::vector<std::vector<int>> out_adjacency(const ReactionNetwork& net)
{
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(net.complex_count()));
    for (const auto& r : net.reactions()) {
        adj[static_cast<std::size_t>(r.source)].push_back(r.target);
    }
    return adj;
}

Partition make_partition(std::vector<int> label, int count)
{
    // Relabel so classes are ordered by their smallest member.
    std::vector<int> remap(static_cast<std::size_t>(count), -1);
    Partition p;
    p.class_of.assign(label.size(), -1);
    for (std::size_t v = 0; v < label.size(); ++v) {
        int& r = remap[static_cast<std::size_t>(label[v])];
        if (r < 0) {
            r = static_cast<int>(p.classes.size());
            p.classes.emplace_back();
        }
        p.class_of[v] = r;
        p.classes[static_cast<std::size_t>(r)].push_back(static_cast<int>(v));
    }
    return p;
}

} // namespace

Partition strongly_connected_components(const ReactionNetwork& net)
{
    const int m = net.complex_count();
    auto adj = out_adjacency(net);
    std::vector<int> index(static_cast<std::size_t>(m), -1), low(static_cast<std::size_t>(m), 0),
        comp(static_cast<std::size_t>(m), -1);
    std::vector<bool> on_stack(static_cast<std::size_t>(m), false);
    std::vector<int> stack;
    int counter = 0, ncomp = 0;

    // Iterative Tarjan: frames hold (vertex, next neighbour position).
    std::vector<std::pair<int, std::size_t>> frames;
    for (int root = 0; root < m; ++root) {
        if (index[static_cast<std::size_t>(root)] >= 0) {
            continue;
        }
        frames.emplace_back(root, 0);
        while (!frames.empty()) {
            auto& [v, next] = frames.back();
            auto vs = static_cast<std::size_t>(v);
            if (next == 0 && index[vs] < 0) {
                index[vs] = low[vs] = counter++;
                stack.push_back(v);
                on_stack[vs] = true;
            }
            if (next < adj[vs].size()) {
                int w = adj[vs][next++];
                auto ws = static_cast<std::size_t>(w);
                if (index[ws] < 0) {
                    frames.emplace_back(w, 0);
                } else if (on_stack[ws]) {
                    low[vs] = std::min(low[vs], index[ws]);
                }
                continue;
            }
            if (low[vs] == index[vs]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = false;
                    comp[static_cast<std::size_t>(w)] = ncomp;
                } while (w != v);
                ++ncomp;
            }
            int finished = v;
            frames.pop_back();
            if (!frames.empty()) {
                auto parent = static_cast<std::size_t>(frames.back().first);
                low[parent] = std::min(low[parent], low[static_cast<std::size_t>(finished)]);
            }
        }
    }
    return make_partition(std::move(comp), ncomp);
}

Partition linkage_classes(const ReactionNetwork& net)
{
    const int m = net.complex_count();
    std::vector<int> parent(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        parent[static_cast<std::size_t>(i)] = i;
    }
    std::function<int(int)> find = [&](int v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            parent[static_cast<std::size_t>(v)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
            v = parent[static_cast<std::size_t>(v)];
        }
        return v;
    };
    for (const auto& r : net.reactions()) {
        int a = find(r.source), b = find(r.target);
        if (a != b) {
            parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        }
    }
    std::vector<int> label(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        label[static_cast<std::size_t>(i)] = find(i);
    }
    return make_partition(std::move(label), m);
}

bool is_weakly_reversible(const ReactionNetwork& net)
{
    auto scc = strongly_connected_components(net);
    for (const auto& r : net.reactions()) {
        if (scc.class_of[static_cast<std::size_t>(r.source)] !=
            scc.class_of[static_cast<std::size_t>(r.target)]) {
            return false;
        }
    }
    return true;
}

bool is_reversible(const ReactionNetwork& net)
{
    std::set<std::pair<int, int>> edges;
    for (const auto& r : net.reactions()) {
        edges.emplace(r.source, r.target);
    }
    return std::all_of(edges.begin(), edges.end(),
                       [&](const auto& e) { return edges.count({e.second, e.first}) > 0; });
}

int deficiency(const ReactionNetwork& net)
{
    return net.complex_count() - linkage_classes(net).count() - stoichiometric_subspace(net).dim;
}

int CycleCover::max_multiplicity() const
{
    return multiplicity.empty() ? 0 : *std::max_element(multiplicity.begin(), multiplicity.end());
}

CycleCover cycle_cover(const ReactionNetwork& net)
{
    if (!is_weakly_reversible(net)) {
        throw Error(ErrorCode::NotWeaklyReversible, "cycle cover requires a weakly reversible network");
    }
    const int m = net.complex_count();
    const int edges = net.edge_count();
    std::vector<std::vector<int>> out_edges(static_cast<std::size_t>(m));
    for (int e = 0; e < edges; ++e) {
        out_edges[static_cast<std::size_t>(net.reactions()[e].source)].push_back(e);
    }

    CycleCover cover;
    cover.multiplicity.assign(static_cast<std::size_t>(edges), 0);
    for (int e = 0; e < edges; ++e) {
        if (cover.multiplicity[static_cast<std::size_t>(e)] > 0) {
            continue;
        }
        const int u = net.reactions()[e].source;
        const int v = net.reactions()[e].target;

        // BFS v -> u; via_edge records the edge used to reach each vertex.
        std::vector<int> via_edge(static_cast<std::size_t>(m), -1);
        std::vector<bool> seen(static_cast<std::size_t>(m), false);
        std::queue<int> q;
        q.push(v);
        seen[static_cast<std::size_t>(v)] = true;
        while (!q.empty() && !seen[static_cast<std::size_t>(u)]) {
            int a = q.front();
            q.pop();
            for (int f : out_edges[static_cast<std::size_t>(a)]) {
                int b = net.reactions()[f].target;
                if (!seen[static_cast<std::size_t>(b)]) {
                    seen[static_cast<std::size_t>(b)] = true;
                    via_edge[static_cast<std::size_t>(b)] = f;
                    q.push(b);
                }
            }
        }
        // Weak reversibility guarantees u is reachable from v.
        std::vector<int> path_edges;
        for (int w = u; w != v;) {
            int f = via_edge[static_cast<std::size_t>(w)];
            path_edges.push_back(f);
            w = net.reactions()[f].source;
        }
        std::reverse(path_edges.begin(), path_edges.end());

        std::vector<int> cyc{u};
        std::vector<int> cyc_edges{e};
        for (int f : path_edges) {
            cyc.push_back(net.reactions()[f].source);
            cyc_edges.push_back(f);
        }
        for (int f : cyc_edges) {
            ++cover.multiplicity[static_cast<std::size_t>(f)];
        }
        cover.cycles.push_back(std::move(cyc));
        cover.cycle_edges.push_back(std::move(cyc_edges));
    }
    return cover;
}

} // namespace toric
