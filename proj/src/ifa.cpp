#include "leakcheck/ifa.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace leakcheck {

void LabelConfig::validate(const FlatNetlist &net) const {
    auto check = [&](const LabelRef &r) {
        int id = net.find_signal(r.name);
        if (id < 0)
            throw InputError("label references unknown signal '" + r.name + "'");
        if (!r.range.full() && (r.range.hi >= net.signal(id).width || r.range.lo < 0))
            throw InputError("label bit range out of bounds on '" + r.name + "'");
    };
    for (const auto &r : sensitive)
        check(r);
    for (const auto &r : sinks)
        check(r);
    for (const auto &r : declassified)
        check(r);
    for (const auto &src : sensitive)
        for (const auto &sink : sinks)
            if (src.name == sink.name)
                throw InputError("'" + src.name + "' is both sensitive and a sink");
}

namespace {

struct Arm {
    int assignment;
    Expr condition;
    BitRange from_range;
    BitRange to_range;
    Expr read_addr;
};

// Collects data-flow arms from one assignment RHS. Mux/ternary selects and
// memory addresses are activation context, not data, so they contribute
// conditions rather than edges. Word operators taint the whole target slice.
void collect_arms(const FlatNetlist &net, const Assignment &a, const Expr &e, Expr cond,
                  int to_lo, int to_hi, bool opaque,
                  std::map<int, std::vector<Arm>> &arms_by_source) {
    switch (e->op) {
    case ExprOp::Const:
        return;
    case ExprOp::Signal: {
        Arm arm;
        arm.assignment = a.id;
        arm.condition = cond;
        arm.from_range = {e->hi, e->lo};
        arm.to_range = {to_hi, to_lo};
        arms_by_source[e->signal].push_back(std::move(arm));
        return;
    }
    case ExprOp::MemRead: {
        Arm arm;
        arm.assignment = a.id;
        arm.condition = cond;
        arm.from_range = {net.signal(e->signal).width - 1, 0};
        arm.to_range = {to_hi, to_lo};
        arm.read_addr = e->args[0];
        arms_by_source[e->signal].push_back(std::move(arm));
        return;
    }
    case ExprOp::Aux:
        return;
    case ExprOp::Mux: {
        Expr sel = e->args[0];
        collect_arms(net, a, e->args[1], b_and(cond, cond_true(sel)), to_lo, to_hi, opaque,
                     arms_by_source);
        collect_arms(net, a, e->args[2], b_and(cond, cond_false(sel)), to_lo, to_hi, opaque,
                     arms_by_source);
        return;
    }
    case ExprOp::Concat: {
        if (opaque) {
            for (const auto &part : e->args)
                collect_arms(net, a, part, cond, to_lo, to_hi, true, arms_by_source);
            return;
        }
        int off = to_lo;
        for (auto it = e->args.rbegin(); it != e->args.rend(); ++it) {
            int w = (*it)->width;
            int hi = std::min(off + w - 1, to_hi);
            if (off <= to_hi)
                collect_arms(net, a, *it, cond, off, hi, false, arms_by_source);
            off += w;
        }
        return;
    }
    case ExprOp::Repl: {
        collect_arms(net, a, e->args[0], cond, to_lo, to_hi, true, arms_by_source);
        return;
    }
    case ExprOp::Not:
        collect_arms(net, a, e->args[0], cond, to_lo, to_hi, opaque, arms_by_source);
        return;
    case ExprOp::And:
    case ExprOp::Or:
    case ExprOp::Xor:
        // bit-aligned, but operand widths may differ from the slice; treat as
        // whole-slice flow
        collect_arms(net, a, e->args[0], cond, to_lo, to_hi, true, arms_by_source);
        collect_arms(net, a, e->args[1], cond, to_lo, to_hi, true, arms_by_source);
        return;
    default:
        // arithmetic, shifts, comparisons, logic connectives: every operand
        // reaches every target bit
        for (const auto &arg : e->args)
            collect_arms(net, a, arg, cond, to_lo, to_hi, true, arms_by_source);
        return;
    }
}

} // namespace

EdgeGraph EdgeGraph::build(const FlatNetlist &net) {
    // (from, to) -> merged edge
    std::map<std::pair<int, int>, AssignmentEdge> merged;

    for (const auto &a : net.assignments) {
        std::map<int, std::vector<Arm>> arms_by_source;
        collect_arms(net, a, a.source, a.condition, a.target.lo, a.target.hi, false,
                     arms_by_source);
        for (auto &[from, arms] : arms_by_source) {
            if (from == a.target.signal)
                continue; // value retention is the alive-function's concern
            for (auto &arm : arms) {
                auto key = std::make_pair(from, a.target.signal);
                auto it = merged.find(key);
                if (it == merged.end()) {
                    AssignmentEdge e;
                    e.from = from;
                    e.to = a.target.signal;
                    e.condition = arm.condition;
                    e.sequential = a.timing == Timing::Clocked;
                    e.assignment = a.id;
                    e.from_range = arm.from_range;
                    e.to_range = arm.to_range;
                    e.read_addr = arm.read_addr;
                    if (a.target.mem_addr)
                        e.write_addr = a.target.mem_addr;
                    merged.emplace(key, std::move(e));
                } else {
                    AssignmentEdge &e = it->second;
                    if (!expr_equal(e.condition, arm.condition))
                        e.condition = b_or(e.condition, arm.condition);
                    e.assignment = std::min(e.assignment, a.id);
                    e.from_range.hi = std::max(e.from_range.hi, arm.from_range.hi);
                    e.from_range.lo = std::min(e.from_range.lo, arm.from_range.lo);
                    e.to_range.hi = std::max(e.to_range.hi, arm.to_range.hi);
                    e.to_range.lo = std::min(e.to_range.lo, arm.to_range.lo);
                    if (!e.read_addr && arm.read_addr)
                        e.read_addr = arm.read_addr;
                    if (!e.write_addr && a.target.mem_addr)
                        e.write_addr = a.target.mem_addr;
                }
            }
        }
    }

    EdgeGraph g;
    g.out.resize(net.signals.size());
    for (auto &[key, edge] : merged) {
        int idx = static_cast<int>(g.edges.size());
        g.out[key.first].push_back(idx);
        g.edges.push_back(std::move(edge));
    }
    // map iteration is already (from, to)-sorted; out lists are sorted by to
    return g;
}

namespace {

// Iterative deepening keeps the discovery order a prefix-stable sequence:
// raising max-paths or max-edges can only append paths, never drop one.
struct Enumerator {
    const FlatNetlist &net;
    const EdgeGraph &graph;
    const PathLimits &limits;
    std::vector<bool> is_sink;
    std::vector<bool> is_barrier;
    std::vector<bool> edge_used;
    std::vector<int> current;
    std::vector<LeakagePath> out;
    int target_len = 1;
    bool truncated = false;

    void dfs(int signal, int source, const BitRange &source_range) {
        if (truncated || static_cast<int>(current.size()) >= target_len)
            return;
        for (int eidx : graph.out[signal]) {
            if (edge_used[eidx])
                continue;
            const AssignmentEdge &e = graph.edges[eidx];
            if (is_barrier[e.to])
                continue;
            edge_used[eidx] = true;
            current.push_back(eidx);
            if (is_sink[e.to] && static_cast<int>(current.size()) == target_len) {
                if (static_cast<int>(out.size()) >= limits.max_paths) {
                    truncated = true;
                } else {
                    LeakagePath p;
                    p.edges = current;
                    p.source = source;
                    p.sink = e.to;
                    p.source_range = source_range;
                    p.sink_range = e.to_range;
                    out.push_back(std::move(p));
                }
            }
            if (!truncated)
                dfs(e.to, source, source_range);
            current.pop_back();
            edge_used[eidx] = false;
            if (truncated)
                return;
        }
    }
};

} // namespace

int conditional_edge_count(const EdgeGraph &graph, const LeakagePath &path) {
    int n = 0;
    for (int e : path.edges)
        if (!is_const_true(graph.edges[e].condition))
            n++;
    return n;
}

PathResult enumerate_paths(const FlatNetlist &net, const EdgeGraph &graph,
                           const LabelConfig &labels, const PathLimits &limits) {
    labels.validate(net);
    Enumerator en{net, graph, limits, {}, {}, {}, {}, {}, false};
    en.is_sink.assign(net.signals.size(), false);
    en.is_barrier.assign(net.signals.size(), false);
    en.edge_used.assign(graph.edges.size(), false);
    for (const auto &r : labels.sinks)
        en.is_sink[net.require_signal(r.name)] = true;
    for (const auto &r : labels.declassified)
        en.is_barrier[net.require_signal(r.name)] = true;

    for (int len = 1; len <= limits.max_edges && !en.truncated; len++) {
        en.target_len = len;
        for (const auto &r : labels.sensitive) {
            int src = net.require_signal(r.name);
            BitRange range = r.range;
            if (range.full())
                range = {net.signal(src).width - 1, 0};
            en.dfs(src, src, range);
            if (en.truncated)
                break;
        }
    }

    PathResult result;
    result.truncated = en.truncated;
    result.paths = std::move(en.out);
    rank_paths(graph, result.paths);
    return result;
}

void rank_paths(const EdgeGraph &graph, std::vector<LeakagePath> &paths) {
    // fewer conditional edges first (easier to activate), then shorter,
    // then lexicographic edge ids; ids are assigned after ordering
    std::stable_sort(paths.begin(), paths.end(),
                     [&](const LeakagePath &a, const LeakagePath &b) {
                         int ca = conditional_edge_count(graph, a);
                         int cb = conditional_edge_count(graph, b);
                         if (ca != cb)
                             return ca < cb;
                         if (a.length() != b.length())
                             return a.length() < b.length();
                         return a.edges < b.edges;
                     });
    for (size_t i = 0; i < paths.size(); i++) {
        char buf[16];
        snprintf(buf, sizeof buf, "p%04zu", i);
        paths[i].id = buf;
    }
}

std::string paths_report(const FlatNetlist &net, const EdgeGraph &graph,
                         const PathResult &result) {
    std::ostringstream os;
    for (const auto &p : result.paths) {
        nlohmann::json rec;
        rec["id"] = p.id;
        rec["source"] = net.signal(p.source).name;
        rec["sink"] = net.signal(p.sink).name;
        rec["conditional_edges"] = conditional_edge_count(graph, p);
        nlohmann::json edges = nlohmann::json::array();
        for (int eidx : p.edges) {
            const AssignmentEdge &e = graph.edges[eidx];
            nlohmann::json je;
            je["from"] = net.signal(e.from).name;
            je["to"] = net.signal(e.to).name;
            je["condition"] = print_expr(e.condition, net);
            je["sequential"] = e.sequential;
            je["assignment"] = e.assignment;
            edges.push_back(je);
        }
        rec["edges"] = edges;
        os << rec.dump() << "\n";
    }
    if (result.truncated)
        os << R"({"truncated":true})" << "\n";
    return os.str();
}

} // namespace leakcheck
