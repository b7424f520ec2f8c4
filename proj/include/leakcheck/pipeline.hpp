#pragma once

#include <memory>
#include <optional>
#include <set>

#include "leakcheck/ast.hpp"
#include "leakcheck/constraints.hpp"
#include "leakcheck/engine.hpp"
#include "leakcheck/ifa.hpp"
#include "leakcheck/propgen.hpp"

namespace leakcheck {

struct RunLimits {
    PathLimits paths;
    int max_k = 0; // 0 = derive: 2 x blocks of the longest path x pipeline depth
    int induction_depth = 8;
    int explicit_state_bits = 20;
    int explicit_input_bits = 14;
    int64_t conflict_budget = -1;
    int parallelism = 1;
    bool dump_cnf = false; // write one DIMACS file per SAT query
};

struct RunConfig {
    std::vector<std::string> rtl_files;
    std::string top;
    std::string clock_name; // flat name, for PSL emission
    std::string reset_signal;
    bool reset_active_high = true;
    LabelConfig labels;
    CoreBinding core;
    RunLimits limits;
    int pipeline_depth = 1; // fetch-to-writeback stages of the core
    Mode mode = Mode::Full;
    std::string program_hex;
    std::string program_meta;
    int stack_depth = 8;
    std::string out_dir;
    std::vector<std::string> unused_outputs;

    static RunConfig from_json_file(const std::string &path);
};

// Parsed design plus the generated per-path cover properties.
struct Design {
    ModuleTree tree;
    FlatNetlist net;
    EdgeGraph graph;
    PathResult paths;
    std::vector<Property> properties; // one per path, same order
    std::optional<ProgramImage> program;

    const LeakagePath &path_of(const std::string &prop_name) const;
};

Design load_design(const RunConfig &config);

struct PropertyRecord {
    std::string property;
    std::string path_id;
    std::string source;
    std::string sink;
    Mode decided_mode = Mode::None; // stage that produced the verdict
    VerdictKind verdict = VerdictKind::Unknown;
    ProofMethod method = ProofMethod::Bmc;
    int bound = 0;
    double wall_seconds = 0;
    uint64_t sat_queries = 0;
    bool stack_overflow = false;
    bool replayed = false;
    std::string witness_file;
    std::vector<std::string> attribution; // "0x0014 line 7: ldk t2, 0(t1)"
    std::string detail;
};

struct Report {
    Mode mode = Mode::Full;
    int state_bits = 0; // registers + memory bits of the netlist
    std::vector<PropertyRecord> records;
    int covered = 0, uncoverable = 0, unknown = 0;
    double total_seconds = 0;
    uint64_t total_sat_queries = 0;
    bool incomplete = false;
    std::string error;

    std::string to_json() const;
    std::string to_table() const;
    std::vector<std::string> covered_set() const;
    std::vector<std::string> uncoverable_set() const;
};

// Single property under a fixed assumption set; lemma candidates are
// verified internally. Used by run() and directly by tests.
struct CheckOutcome {
    Verdict verdict;
    uint64_t sat_queries = 0;
};
CheckOutcome check_property(const Design &design, const RunConfig &config,
                            const Property &prop, const AssumptionSet &assumptions);

// Cycle-accurate replay of a covered witness on the reference simulator:
// asserts every assumption each cycle and monitor acceptance at the end.
struct ReplayResult {
    bool ok = false;
    std::string error;
    std::vector<uint32_t> fetch_addrs;  // per cycle
    std::vector<uint32_t> fetch_words;  // per cycle
};
ReplayResult replay_witness(const Design &design, const RunConfig &config, const Property &prop,
                            const AssumptionSet &assumptions, const Witness &witness);

// Maps a witness's fetch stream to program addresses and source lines;
// cycles whose fetched word does not match the image are marked unmapped.
std::vector<std::string> attribute_witness(const ReplayResult &replay,
                                           const ProgramImage *program);

// Full pipeline per the configured mode; mode Full escalates per property
// used -> jumps -> stack until a proof of uncoverability succeeds.
Report run(const RunConfig &config);

// Verifies the uncoverable-set inclusion along the mode chain; returns an
// error string when the ordering is violated, empty otherwise.
std::string compare_modes(const Report &weaker, const Report &stronger);

// Static control-flow closure of the image: the addresses the program can
// fetch from under the table-mode assumptions (feeds the pc-range lemma).
std::set<uint32_t> reachable_pcs(const ProgramImage &program);

std::string write_witness_text(const Witness &w);
Witness parse_witness_text(const std::string &text);

} // namespace leakcheck
