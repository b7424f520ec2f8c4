#include "leakcheck/netlist.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace leakcheck {

int FlatNetlist::add_signal(SignalDecl decl) {
    if (name_to_id.count(decl.name))
        throw InputError(decl.loc, "duplicate signal '" + decl.name + "'");
    decl.id = static_cast<int>(signals.size());
    name_to_id[decl.name] = decl.id;
    signals.push_back(std::move(decl));
    return signals.back().id;
}

int FlatNetlist::find_signal(const std::string &name) const {
    auto it = name_to_id.find(name);
    return it == name_to_id.end() ? -1 : it->second;
}

int FlatNetlist::require_signal(const std::string &name) const {
    int id = find_signal(name);
    if (id < 0)
        throw InputError("unknown signal '" + name + "'");
    return id;
}

std::vector<std::vector<int>> FlatNetlist::writers_by_signal() const {
    std::vector<std::vector<int>> out(signals.size());
    for (const auto &a : assignments)
        out[a.target.signal].push_back(a.id);
    for (auto &v : out)
        std::sort(v.begin(), v.end(), [this](int x, int y) {
            return assignments[x].order_index < assignments[y].order_index;
        });
    return out;
}

std::vector<int> FlatNetlist::comb_topo_order() const {
    // Signal-level dependency graph over combinational assignments.
    std::vector<std::vector<int>> comb_writers(signals.size());
    for (const auto &a : assignments)
        if (a.timing == Timing::Combinational)
            comb_writers[a.target.signal].push_back(a.id);

    std::vector<int> order;
    std::vector<int> mark(signals.size(), 0); // 0 unvisited, 1 on path, 2 done
    std::vector<int> path;

    std::function<void(int)> visit = [&](int sig) {
        if (mark[sig] == 2)
            return;
        if (mark[sig] == 1) {
            std::ostringstream os;
            os << "combinational cycle through signals {";
            bool in_cycle = false;
            bool first = true;
            for (int s : path) {
                if (s == sig)
                    in_cycle = true;
                if (!in_cycle)
                    continue;
                if (!first)
                    os << ", ";
                os << signals[s].name;
                first = false;
            }
            os << ", " << signals[sig].name << "}";
            throw InputError(signals[sig].loc, os.str());
        }
        mark[sig] = 1;
        path.push_back(sig);
        for (int aid : comb_writers[sig]) {
            const Assignment &a = assignments[aid];
            std::vector<int> deps;
            collect_signals(a.source, deps);
            collect_signals(a.condition, deps);
            if (a.target.mem_addr)
                collect_signals(a.target.mem_addr, deps);
            for (int d : deps)
                if (!comb_writers[d].empty())
                    visit(d);
        }
        path.pop_back();
        mark[sig] = 2;
        for (int aid : comb_writers[sig])
            order.push_back(aid);
    };

    for (size_t s = 0; s < signals.size(); s++)
        if (!comb_writers[s].empty())
            visit(static_cast<int>(s));
    return order;
}

void FlatNetlist::validate() const {
    auto check_expr = [this](const Expr &root, SourceLoc loc) {
        std::function<void(const Expr &)> rec = [&](const Expr &e) {
            if (e->op == ExprOp::Signal) {
                if (e->signal < 0 || e->signal >= static_cast<int>(signals.size()))
                    throw InputError(loc, "expression references unknown signal");
                const SignalDecl &d = signals[e->signal];
                if (d.kind == SignalKind::Memory)
                    throw InputError(loc, "memory '" + d.name + "' used without word index");
                if (e->hi >= d.width || e->lo < 0)
                    throw InputError(loc, "bit select out of range on '" + d.name + "'");
            }
            if (e->op == ExprOp::MemRead) {
                const SignalDecl &d = signals.at(e->signal);
                if (d.kind != SignalKind::Memory)
                    throw InputError(loc, "word read from non-memory '" + d.name + "'");
            }
            for (const auto &a : e->args)
                rec(a);
        };
        rec(root);
    };

    for (const auto &a : assignments) {
        const SignalDecl &t = signals.at(a.target.signal);
        if (a.target.mem_addr) {
            if (t.kind != SignalKind::Memory)
                throw InputError(a.loc, "word write to non-memory '" + t.name + "'");
            if (a.timing != Timing::Clocked)
                throw InputError(a.loc, "memory '" + t.name + "' written combinationally");
            check_expr(a.target.mem_addr, a.loc);
        } else {
            if (t.kind == SignalKind::Memory)
                throw InputError(a.loc, "memory '" + t.name + "' assigned without word index");
            if (a.target.hi >= t.width || a.target.lo < 0 || a.target.hi < a.target.lo)
                throw InputError(a.loc, "target slice out of range on '" + t.name + "'");
        }
        bool want_clocked = t.is_clocked();
        if ((a.timing == Timing::Clocked) != want_clocked)
            throw InputError(a.loc, "timing/kind mismatch on '" + t.name + "'");
        if (t.kind == SignalKind::InputPort)
            throw InputError(a.loc, "input port '" + t.name + "' cannot be assigned");
        if (a.condition->width != 1)
            throw InputError(a.loc, "condition must be 1 bit wide");
        check_expr(a.source, a.loc);
        check_expr(a.condition, a.loc);
    }
}

int FlatNetlist::total_state_bits() const {
    int bits = 0;
    for (const auto &s : signals) {
        if (s.kind == SignalKind::Register)
            bits += s.width;
        else if (s.kind == SignalKind::Memory)
            bits += s.width * s.depth;
    }
    return bits;
}

} // namespace leakcheck
