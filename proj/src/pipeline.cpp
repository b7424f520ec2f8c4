#include "leakcheck/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "leakcheck/elaborate.hpp"
#include "leakcheck/parser.hpp"
#include "leakcheck/psl.hpp"
#include "leakcheck/sim.hpp"

namespace leakcheck {

// ---- config ----

RunConfig RunConfig::from_json_file(const std::string &path) {
    std::ifstream is(path);
    if (!is)
        throw InputError("cannot open config '" + path + "'");
    nlohmann::json j = nlohmann::json::parse(is);
    RunConfig c;
    for (const auto &f : j.at("rtl"))
        c.rtl_files.push_back(f.get<std::string>());
    c.top = j.value("top", "");
    c.clock_name = j.value("clock", "");
    if (j.contains("reset")) {
        c.reset_signal = j["reset"].value("signal", "");
        c.reset_active_high = j["reset"].value("active_high", true);
    }
    auto parse_ref = [](const std::string &text) {
        LabelRef r;
        size_t bracket = text.find('[');
        if (bracket == std::string::npos) {
            r.name = text;
            return r;
        }
        r.name = text.substr(0, bracket);
        std::string range = text.substr(bracket + 1, text.size() - bracket - 2);
        size_t colon = range.find(':');
        if (colon == std::string::npos) {
            r.range.hi = r.range.lo = std::stoi(range);
        } else {
            r.range.hi = std::stoi(range.substr(0, colon));
            r.range.lo = std::stoi(range.substr(colon + 1));
        }
        return r;
    };
    const auto &labels = j.at("labels");
    for (const auto &s : labels.value("sensitive", nlohmann::json::array()))
        c.labels.sensitive.push_back(parse_ref(s.get<std::string>()));
    for (const auto &s : labels.value("sinks", nlohmann::json::array()))
        c.labels.sinks.push_back(parse_ref(s.get<std::string>()));
    for (const auto &s : labels.value("declassified", nlohmann::json::array()))
        c.labels.declassified.push_back(parse_ref(s.get<std::string>()));
    if (j.contains("core")) {
        const auto &core = j["core"];
        c.core.instr_data = core.value("instr_data", "");
        c.core.fetch_addr = core.value("fetch_addr", "");
        c.core.ret_exec = core.value("ret_exec", "");
        c.core.ret_target = core.value("ret_target", "");
        c.core.call_exec = core.value("call_exec", "");
        c.core.link_value = core.value("link_value", "");
        c.core.lp_active = core.value("lp_active", "");
        c.core.lp_start = core.value("lp_start", "");
        c.core.lp_end = core.value("lp_end", "");
        for (const auto &p : core.value("instr_write_ports", nlohmann::json::array()))
            c.core.instr_write_ports.push_back(p.get<std::string>());
    }
    if (j.contains("limits")) {
        const auto &l = j["limits"];
        c.limits.paths.max_paths = l.value("max_paths", c.limits.paths.max_paths);
        c.limits.paths.max_edges = l.value("max_edges", c.limits.paths.max_edges);
        c.limits.max_k = l.value("max_k", c.limits.max_k);
        c.limits.induction_depth = l.value("induction_depth", c.limits.induction_depth);
        c.limits.explicit_state_bits =
            l.value("explicit_state_bits", c.limits.explicit_state_bits);
        c.limits.explicit_input_bits =
            l.value("explicit_input_bits", c.limits.explicit_input_bits);
        c.limits.conflict_budget = l.value("conflict_budget", c.limits.conflict_budget);
        c.limits.parallelism = l.value("parallelism", c.limits.parallelism);
        c.limits.dump_cnf = l.value("dump_cnf", c.limits.dump_cnf);
    }
    c.stack_depth = j.value("stack_depth", c.stack_depth);
    c.pipeline_depth = j.value("pipeline_depth", c.pipeline_depth);
    for (const auto &u : j.value("unused_outputs", nlohmann::json::array()))
        c.unused_outputs.push_back(u.get<std::string>());
    return c;
}

// ---- design loading ----

int default_max_k(const Design &design, const RunConfig &config) {
    int longest_blocks = 1;
    for (const auto &p : design.paths.paths)
        longest_blocks = std::max(
            longest_blocks, static_cast<int>(split_blocks(design.graph, p).size()));
    return 2 * longest_blocks * std::max(1, config.pipeline_depth);
}

Design load_design(const RunConfig &config) {
    Design d;
    std::vector<std::pair<std::string, std::string>> sources;
    for (const auto &path : config.rtl_files) {
        std::ifstream is(path);
        if (!is)
            throw InputError("cannot open RTL file '" + path + "'");
        std::stringstream buf;
        buf << is.rdbuf();
        sources.emplace_back(path, buf.str());
    }
    d.tree = parse_rtl_files(sources);
    ElabOptions eopts;
    eopts.top = config.top;
    eopts.reset_name = config.reset_signal;
    eopts.reset_active_high = config.reset_active_high;
    eopts.unused_outputs = config.unused_outputs;
    d.net = elaborate(d.tree, eopts);
    d.graph = EdgeGraph::build(d.net);
    d.paths = enumerate_paths(d.net, d.graph, config.labels, config.limits.paths);
    for (const auto &p : d.paths.paths)
        d.properties.push_back(path_cover_property(d.net, d.graph, p));
    if (!config.program_hex.empty()) {
        d.program = load_program(config.program_hex, config.program_meta);
    }
    return d;
}

const LeakagePath &Design::path_of(const std::string &prop_name) const {
    for (size_t i = 0; i < properties.size(); i++)
        if (properties[i].name == prop_name)
            return paths.paths[i];
    throw InputError("unknown property '" + prop_name + "'");
}

// ---- pc-range lemma (table modes) ----

// Static control-flow closure over the image. Return instructions may land
// on any recorded return address (mirroring the return-target assumption),
// so those feed the closure once a return is reachable.
std::set<uint32_t> reachable_pcs(const ProgramImage &program) {
    std::set<uint32_t> seen{program.entry};
    bool changed = true;
    while (changed) {
        changed = false;
        bool any_return = false;
        std::vector<uint32_t> work(seen.begin(), seen.end());
        auto add = [&](uint32_t a) {
            if (program.words.count(a) && seen.insert(a).second) {
                work.push_back(a);
                changed = true;
            }
        };
        while (!work.empty()) {
            uint32_t a = work.back();
            work.pop_back();
            if (!program.words.count(a))
                continue;
            Instruction ins = decode(program.words.at(a));
            switch (ins.cls) {
            case InstrClass::Branch:
                add(a + 4);
                add(a + static_cast<uint32_t>(ins.imm));
                break;
            case InstrClass::Jump:
                add(a + static_cast<uint32_t>(ins.imm));
                break;
            case InstrClass::Call:
                add(a + static_cast<uint32_t>(ins.imm));
                add(a + 4);
                break;
            case InstrClass::Return:
                any_return = true;
                break;
            case InstrClass::Illegal:
                break;
            default:
                add(a + 4);
                break;
            }
            for (const auto &hl : program.hwloops)
                if (hl.end == a)
                    add(hl.start);
        }
        if (any_return)
            for (const auto &cs : program.call_sites)
                if (seen.count(cs.call_addr))
                    add(cs.return_addr);
    }
    return seen;
}

namespace {

Expr pc_range_lemma(const FlatNetlist &net, const CoreBinding &core,
                    const ProgramImage &program) {
    Expr pc = e_signal(net.require_signal(core.fetch_addr),
                       net.signal(net.require_signal(core.fetch_addr)).width - 1, 0);
    Expr in_range = e_false();
    for (uint32_t a : reachable_pcs(program))
        in_range = b_or(in_range, e_binop(ExprOp::Eq, pc, e_const(a, pc->width)));
    return in_range;
}

} // namespace

// ---- property checking ----

CheckOutcome check_property(const Design &design, const RunConfig &config,
                            const Property &prop, const AssumptionSet &assumptions) {
    RunConfig effective = config;
    if (effective.limits.max_k <= 0)
        effective.limits.max_k = default_max_k(design, config);
    const RunConfig &cfg = effective;
    Monitor monitor = compile_monitor(prop.body);
    CoverEngine engine(design.net, assumptions.ts, monitor);
    if (cfg.limits.dump_cnf && !cfg.out_dir.empty()) {
        engine.dimacs_dir = cfg.out_dir + "/cnf/" + prop.name + "_" +
                            mode_name(assumptions.mode);
    }

    if (assumptions.has_memory_table && design.program)
        engine.add_lemma(pc_range_lemma(design.net, cfg.core, *design.program));
    engine.generate_auto_lemmas();

    CheckOutcome out;
    out.verdict = engine.bmc(cfg.limits.max_k, cfg.limits.conflict_budget);
    if (out.verdict.kind == VerdictKind::Unknown) {
        Verdict proved = engine.prove_by_induction(cfg.limits.induction_depth,
                                                   cfg.limits.conflict_budget);
        if (proved.kind == VerdictKind::Unknown &&
            engine.ts().state_bit_count() <= cfg.limits.explicit_state_bits) {
            // small instances get an exact answer from full reachability
            proved = engine.explicit_search(cfg.limits.explicit_state_bits,
                                            cfg.limits.explicit_input_bits);
        }
        if (proved.kind != VerdictKind::Unknown)
            out.verdict = proved;
        else
            out.verdict = proved.detail.empty() ? out.verdict : proved;
    }
    out.sat_queries = engine.sat_queries();
    return out;
}

// ---- witness serialization ----

std::string write_witness_text(const Witness &w) {
    std::ostringstream os;
    os << "length " << w.length << "\n";
    std::vector<std::pair<std::string, uint64_t>> aux(w.aux.begin(), w.aux.end());
    std::sort(aux.begin(), aux.end());
    for (const auto &[name, v] : aux)
        os << "aux " << name << " 0x" << std::hex << v << std::dec << "\n";
    std::vector<std::pair<std::string, uint64_t>> init(w.initial_state.begin(),
                                                       w.initial_state.end());
    std::sort(init.begin(), init.end());
    for (const auto &[name, v] : init)
        os << "init " << name << " 0x" << std::hex << v << std::dec << "\n";
    for (int c = 0; c < w.length; c++) {
        os << "cycle " << c << "\n";
        std::vector<std::pair<int, uint64_t>> ins(w.inputs[c].begin(), w.inputs[c].end());
        std::sort(ins.begin(), ins.end());
        for (const auto &[sig, v] : ins)
            os << "in " << sig << " 0x" << std::hex << v << std::dec << "\n";
    }
    return os.str();
}

Witness parse_witness_text(const std::string &text) {
    Witness w;
    std::istringstream is(text);
    std::string kind;
    int cycle = -1;
    while (is >> kind) {
        if (kind == "length") {
            is >> w.length;
            w.inputs.resize(w.length);
        } else if (kind == "aux") {
            std::string name, value;
            is >> name >> value;
            w.aux[name] = std::stoull(value, nullptr, 0);
        } else if (kind == "init") {
            std::string name, value;
            is >> name >> value;
            w.initial_state[name] = std::stoull(value, nullptr, 0);
        } else if (kind == "cycle") {
            is >> cycle;
        } else if (kind == "in") {
            int sig;
            std::string value;
            is >> sig >> value;
            w.inputs.at(cycle)[sig] = std::stoull(value, nullptr, 0);
        } else {
            throw InputError("bad witness line starting with '" + kind + "'");
        }
    }
    return w;
}

// ---- replay ----

ReplayResult replay_witness(const Design &design, const RunConfig &config, const Property &prop,
                            const AssumptionSet &assumptions, const Witness &witness) {
    ReplayResult res;
    const FlatNetlist &net = design.net;
    Monitor monitor = compile_monitor(prop.body);
    NetSim sim(net);

    for (const auto &[name, v] : witness.aux)
        sim.set_aux(name, v);

    // initial state: registers and memory words by state-variable name
    for (const auto &[name, v] : witness.initial_state) {
        size_t bracket = name.find('[');
        std::string base = bracket == std::string::npos ? name : name.substr(0, bracket);
        int sig = net.find_signal(base);
        if (sig < 0)
            continue; // monitor/stack internals are reconstructed, not restored
        if (bracket != std::string::npos) {
            uint64_t word = std::stoull(name.substr(bracket + 1));
            sim.set_mem(sig, word, v);
        } else {
            sim.set_value(sig, v);
        }
    }

    // soft call-stack monitor
    std::vector<uint64_t> stack;
    bool overflow = false;

    std::vector<bool> active(monitor.num_states, false);
    active[monitor.start] = true;
    bool accepted = monitor.accepts_empty() && witness.length == 0;

    int clock_sig = net.clock;
    for (int cycle = 0; cycle < witness.length; cycle++) {
        // free inputs from the witness; clock/reset pinned
        if (clock_sig >= 0)
            sim.set_value(clock_sig, 0);
        if (net.reset)
            sim.set_value(*net.reset, net.reset_active_high ? 0 : 1);
        auto it = witness.inputs[cycle];
        for (const auto &[sig, v] : it)
            sim.set_value(sig, v);
        // bound inputs are functions of register state
        for (const auto &b : assumptions.ts.input_bindings)
            sim.set_value(b.signal, eval_expr(b.func, sim));
        sim.eval_comb();

        // assumptions must hold this cycle
        for (size_t i = 0; i < assumptions.ts.constraints.size(); i++) {
            if (eval_expr(assumptions.ts.constraints[i], sim) == 0) {
                res.error = "assumption violated at cycle " + std::to_string(cycle);
                return res;
            }
        }
        // call-stack discipline
        if (assumptions.ts.stack) {
            const StackMonitorSpec &spec = *assumptions.ts.stack;
            bool push = eval_expr(spec.push_cond, sim) != 0;
            bool pop = eval_expr(spec.pop_cond, sim) != 0;
            if (pop) {
                if (stack.empty()) {
                    res.error = "return with an empty call stack at cycle " +
                                std::to_string(cycle);
                    return res;
                }
                uint64_t expected = eval_expr(spec.pop_expected, sim);
                if (stack.back() != expected) {
                    res.error = "return target mismatch at cycle " + std::to_string(cycle);
                    return res;
                }
                stack.pop_back();
            }
            if (push) {
                if (static_cast<int>(stack.size()) >= spec.depth)
                    overflow = true;
                else
                    stack.push_back(eval_expr(spec.push_value, sim));
            }
        }

        // observation points
        int fetch_sig = net.find_signal(config.core.fetch_addr);
        if (fetch_sig >= 0)
            res.fetch_addrs.push_back(static_cast<uint32_t>(sim.value(fetch_sig)));
        int instr_sig = net.find_signal(config.core.instr_data);
        if (instr_sig >= 0)
            res.fetch_words.push_back(static_cast<uint32_t>(sim.value(instr_sig)));

        // monitor step
        std::vector<bool> next(monitor.num_states, false);
        for (const auto &e : monitor.edges)
            if (active[e.from] && eval_expr(e.guard, sim) != 0)
                next[e.to] = true;
        next[monitor.start] = true; // armed every cycle
        active = std::move(next);
        if (cycle == witness.length - 1) {
            accepted = false;
            for (int s = 0; s < monitor.num_states; s++)
                accepted |= active[s] && monitor.accepting[s];
        }
        sim.clock_edge();
    }

    if (overflow) {
        res.error = "witness relies on call-stack overflow";
        return res;
    }
    if (!accepted) {
        res.error = "monitor did not accept at the final cycle";
        return res;
    }
    res.ok = true;
    return res;
}

std::vector<std::string> attribute_witness(const ReplayResult &replay,
                                           const ProgramImage *program) {
    std::vector<std::string> out;
    char buf[32];
    for (size_t c = 0; c < replay.fetch_addrs.size(); c++) {
        uint32_t addr = replay.fetch_addrs[c];
        snprintf(buf, sizeof buf, "0x%04x", addr);
        std::string entry = std::string(buf);
        bool mapped = false;
        if (program) {
            auto word = program->words.find(addr);
            auto sym = program->symbols.find(addr);
            if (word != program->words.end() && sym != program->symbols.end() &&
                c < replay.fetch_words.size() && replay.fetch_words[c] == word->second) {
                entry += " " + sym->second;
                mapped = true;
            }
        }
        if (!mapped)
            entry += " <unmapped>";
        out.push_back(entry);
    }
    return out;
}

// ---- full run ----

namespace {

struct StageResult {
    Mode mode;
    Verdict verdict;
    uint64_t queries = 0;
};

PropertyRecord check_with_escalation(const Design &design, const RunConfig &config,
                                     size_t prop_index,
                                     const std::vector<AssumptionSet> &stages) {
    const Property &prop = design.properties[prop_index];
    const LeakagePath &path = design.paths.paths[prop_index];
    PropertyRecord rec;
    rec.property = prop.name;
    rec.path_id = path.id;
    rec.source = design.net.signal(path.source).name;
    rec.sink = design.net.signal(path.sink).name;

    auto t0 = std::chrono::steady_clock::now();
    const AssumptionSet *decided_with = nullptr;
    for (size_t s = 0; s < stages.size(); s++) {
        CheckOutcome out = check_property(design, config, prop, stages[s]);
        rec.sat_queries += out.sat_queries;
        rec.verdict = out.verdict.kind;
        rec.method = out.verdict.method;
        rec.bound = out.verdict.bound;
        rec.detail = out.verdict.detail;
        rec.decided_mode = stages[s].mode;
        decided_with = &stages[s];
        if (out.verdict.kind == VerdictKind::Covered) {
            rec.stack_overflow = out.verdict.witness.stack_overflow;
            // validate the trace on the reference simulator
            ReplayResult rr =
                replay_witness(design, config, prop, stages[s], out.verdict.witness);
            rec.replayed = rr.ok;
            if (!rr.ok)
                rec.detail += "; replay failed: " + rr.error;
            rec.attribution = attribute_witness(rr, design.program ? &*design.program : nullptr);
            if (!config.out_dir.empty()) {
                std::filesystem::create_directories(config.out_dir + "/witness");
                std::string fname = "witness/" + prop.name + "_" +
                                    mode_name(stages[s].mode) + ".txt";
                std::ofstream os(config.out_dir + "/" + fname);
                os << "# " << prop.name << " under mode " << mode_name(stages[s].mode) << "\n";
                os << write_witness_text(out.verdict.witness);
                rec.witness_file = fname;
            }
        }
        if (out.verdict.kind == VerdictKind::Uncoverable)
            break; // proof obtained; escalation stops here
        // covered or unknown: a stricter stage may still rule it out
    }
    (void)decided_with;
    auto t1 = std::chrono::steady_clock::now();
    rec.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    return rec;
}

} // namespace

Report run(const RunConfig &config) {
    Report report;
    report.mode = config.mode;
    auto t0 = std::chrono::steady_clock::now();

    Design design = load_design(config);
    report.state_bits = design.net.total_state_bits();

    // assumption stages: the selected mode, or the escalation schedule
    std::vector<AssumptionSet> stages;
    const ProgramImage *prog = design.program ? &*design.program : nullptr;
    if (config.mode == Mode::Full) {
        stages.push_back(gen_assumptions(design.net, config.core, Mode::Used, prog,
                                         config.stack_depth));
        stages.push_back(gen_assumptions(design.net, config.core, Mode::Jumps, prog,
                                         config.stack_depth));
        stages.push_back(gen_assumptions(design.net, config.core, Mode::Stack, prog,
                                         config.stack_depth));
    } else {
        stages.push_back(gen_assumptions(design.net, config.core, config.mode, prog,
                                         config.stack_depth));
    }

    report.records.resize(design.properties.size());
    std::atomic<size_t> next{0};
    std::atomic<bool> any_failed{false};
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= design.properties.size())
                return;
            try {
                report.records[i] = check_with_escalation(design, config, i, stages);
            } catch (const InputError &e) {
                PropertyRecord rec;
                rec.property = design.properties[i].name;
                rec.path_id = design.paths.paths[i].id;
                rec.verdict = VerdictKind::Unknown;
                rec.detail = std::string("stage failure: ") + e.what();
                report.records[i] = rec;
                any_failed = true;
            }
        }
    };
    int width = std::max(1, config.limits.parallelism);
    if (width == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < width; t++)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }

    for (const auto &rec : report.records) {
        switch (rec.verdict) {
        case VerdictKind::Covered: report.covered++; break;
        case VerdictKind::Uncoverable: report.uncoverable++; break;
        case VerdictKind::Unknown: report.unknown++; break;
        }
        report.total_sat_queries += rec.sat_queries;
    }
    report.incomplete = any_failed.load();
    auto t1 = std::chrono::steady_clock::now();
    report.total_seconds = std::chrono::duration<double>(t1 - t0).count();

    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        std::ofstream js(config.out_dir + "/report.jsonl");
        js << report.to_json();
        std::ofstream tb(config.out_dir + "/report.txt");
        tb << report.to_table();
        // properties and assumptions for audit
        std::filesystem::create_directories(config.out_dir + "/props");
        std::ofstream manifest(config.out_dir + "/props/manifest.jsonl");
        for (size_t i = 0; i < design.properties.size(); i++) {
            const auto &p = design.properties[i];
            std::ofstream ps(config.out_dir + "/props/" + p.name + ".psl");
            ps << emit_psl(p, design.net, config.clock_name);
            nlohmann::json m;
            m["property"] = p.name;
            m["path"] = design.paths.paths[i].id;
            m["source"] = design.net.signal(design.paths.paths[i].source).name;
            m["sink"] = design.net.signal(design.paths.paths[i].sink).name;
            manifest << m.dump() << "\n";
        }
        for (const auto &st : stages) {
            std::ofstream as(config.out_dir + "/props/assume_" +
                             std::string(mode_name(st.mode)) + ".psl");
            as << st.psl_dump(design.net, config.clock_name);
        }
    }
    return report;
}

// ---- reports ----

std::string Report::to_json() const {
    std::ostringstream os;
    for (const auto &r : records) {
        nlohmann::json j;
        j["property"] = r.property;
        j["path"] = r.path_id;
        j["source"] = r.source;
        j["sink"] = r.sink;
        j["mode"] = mode_name(r.decided_mode);
        j["verdict"] = r.verdict == VerdictKind::Covered      ? "covered"
                       : r.verdict == VerdictKind::Uncoverable ? "uncoverable"
                                                               : "unknown";
        j["method"] = r.method == ProofMethod::Bmc             ? "bmc"
                      : r.method == ProofMethod::KInduction    ? "k-induction"
                      : r.method == ProofMethod::ExplicitState ? "explicit-state"
                                                               : "structural";
        j["bound"] = r.bound;
        j["wall_seconds"] = r.wall_seconds;
        j["sat_queries"] = r.sat_queries;
        j["replayed"] = r.replayed;
        if (!r.witness_file.empty())
            j["witness"] = r.witness_file;
        if (!r.attribution.empty())
            j["attribution"] = r.attribution;
        if (r.stack_overflow)
            j["stack_overflow"] = true;
        if (!r.detail.empty())
            j["detail"] = r.detail;
        os << j.dump() << "\n";
    }
    nlohmann::json summary;
    summary["summary"] = {{"mode", mode_name(mode)},
                          {"state_bits", state_bits},
                          {"covered", covered},
                          {"uncoverable", uncoverable},
                          {"unknown", unknown},
                          {"total_seconds", total_seconds},
                          {"sat_queries", total_sat_queries},
                          {"incomplete", incomplete}};
    os << summary.dump() << "\n";
    return os.str();
}

std::string Report::to_table() const {
    std::ostringstream os;
    os << "mode " << mode_name(mode) << ", design state bits " << state_bits << "\n";
    os << "property      source -> sink                                verdict      mode   "
          "method        bound\n";
    for (const auto &r : records) {
        char line[256];
        std::string route = r.source + " -> " + r.sink;
        snprintf(line, sizeof line, "%-13s %-45s %-12s %-6s %-13s %d\n", r.property.c_str(),
                 route.c_str(),
                 r.verdict == VerdictKind::Covered      ? "covered"
                 : r.verdict == VerdictKind::Uncoverable ? "uncoverable"
                                                         : "unknown",
                 mode_name(r.decided_mode),
                 r.method == ProofMethod::Bmc             ? "bmc"
                 : r.method == ProofMethod::KInduction    ? "k-induction"
                 : r.method == ProofMethod::ExplicitState ? "explicit-state"
                                                          : "structural",
                 r.bound);
        os << line;
    }
    os << "covered " << covered << ", uncoverable " << uncoverable << ", unknown " << unknown
       << ", sat queries " << total_sat_queries << "\n";
    return os.str();
}

std::vector<std::string> Report::covered_set() const {
    std::vector<std::string> out;
    for (const auto &r : records)
        if (r.verdict == VerdictKind::Covered)
            out.push_back(r.property);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> Report::uncoverable_set() const {
    std::vector<std::string> out;
    for (const auto &r : records)
        if (r.verdict == VerdictKind::Uncoverable)
            out.push_back(r.property);
    std::sort(out.begin(), out.end());
    return out;
}

std::string compare_modes(const Report &weaker, const Report &stronger) {
    if (weaker.records.size() != stronger.records.size())
        return "reports cover different property sets";
    auto wu = weaker.uncoverable_set();
    auto su = stronger.uncoverable_set();
    for (const auto &p : wu)
        if (std::find(su.begin(), su.end(), p) == su.end())
            return "property " + p + " is uncoverable under " +
                   mode_name(weaker.mode) + " but not under " + mode_name(stronger.mode);
    return "";
}

} // namespace leakcheck
