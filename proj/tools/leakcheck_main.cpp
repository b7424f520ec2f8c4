// leakcheck: finds leakage paths in an RTL design, compiles them into
// temporal cover properties, constrains the model with software-derived
// assumptions and model-checks whether the program can activate each leak.
//
// Exit codes: 0 = completed with zero covered paths, 1 = covered paths
// exist, 2 = errors or unknown verdicts.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "leakcheck/pipeline.hpp"
#include "leakcheck/psl.hpp"

using namespace leakcheck;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string mode = "full";
    std::string program_hex;
    std::string program_meta;
    std::string out_dir;
    int parallelism = 0;
    int max_k = 0;
    int max_paths = 0;
    int max_edges = 0;
};

void add_common(CLI::App *cmd, CommonArgs &args, bool with_mode = true) {
    cmd->add_option("-c,--config", args.config_path, "design/config JSON")->required();
    if (with_mode)
        cmd->add_option("-m,--mode", args.mode,
                        "verification mode: none|legal|used|jumps|stack|full");
    cmd->add_option("--program", args.program_hex, "program image (hex words)");
    cmd->add_option("--meta", args.program_meta, "program metadata sidecar (JSON)");
    cmd->add_option("-o,--out", args.out_dir, "output directory");
    cmd->add_option("-j,--parallel", args.parallelism, "worker threads");
    cmd->add_option("--max-k", args.max_k, "BMC bound override");
    cmd->add_option("--max-paths", args.max_paths, "path enumeration cap");
    cmd->add_option("--max-edges", args.max_edges, "path length cap");
}

RunConfig build_config(const CommonArgs &args, bool with_mode = true) {
    RunConfig config = RunConfig::from_json_file(args.config_path);
    if (with_mode)
        config.mode = mode_from_string(args.mode);
    if (!args.program_hex.empty()) {
        config.program_hex = args.program_hex;
        config.program_meta = args.program_meta;
    }
    if (!args.out_dir.empty())
        config.out_dir = args.out_dir;
    if (args.parallelism > 0)
        config.limits.parallelism = args.parallelism;
    if (args.max_k > 0)
        config.limits.max_k = args.max_k;
    if (args.max_paths > 0)
        config.limits.paths.max_paths = args.max_paths;
    if (args.max_edges > 0)
        config.limits.paths.max_edges = args.max_edges;
    return config;
}

int exit_code_for(const Report &report) {
    if (report.incomplete || report.unknown > 0)
        return 2;
    return report.covered > 0 ? 1 : 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"hardware-software confidentiality checker"};
    app.require_subcommand(1);
    std::string diag_json;
    app.add_option("--diag-json", diag_json,
                   "write machine-readable diagnostics to this file on error");

    CommonArgs run_args, check_args, paths_args, props_args, assume_args, replay_args;

    auto *cmd_run = app.add_subcommand("run", "end-to-end flow: paths, properties, checking");
    add_common(cmd_run, run_args);

    auto *cmd_check = app.add_subcommand("check", "check properties under one mode");
    add_common(cmd_check, check_args);
    std::string check_property_name;
    cmd_check->add_option("--property", check_property_name, "check a single property");

    auto *cmd_paths = app.add_subcommand("paths", "enumerate and rank leakage paths");
    add_common(cmd_paths, paths_args, false);

    auto *cmd_props = app.add_subcommand("props", "emit the PSL cover properties");
    add_common(cmd_props, props_args, false);

    auto *cmd_assume = app.add_subcommand("assume", "emit the assumption set for a mode");
    add_common(cmd_assume, assume_args);

    auto *cmd_asm = app.add_subcommand("asm", "assemble a fixture program");
    std::string asm_input, asm_out = "image.hex", asm_meta = "image.meta.json";
    std::vector<std::string> asm_defines;
    cmd_asm->add_option("input", asm_input, "assembly source")->required();
    cmd_asm->add_option("-o,--out", asm_out, "image output (hex words)");
    cmd_asm->add_option("--meta", asm_meta, "metadata output (JSON)");
    cmd_asm->add_option("-D,--define", asm_defines, "override .equ symbols: NAME=VALUE");

    auto *cmd_replay = app.add_subcommand("replay", "replay a witness on the simulator");
    add_common(cmd_replay, replay_args);
    std::string replay_file, replay_property;
    cmd_replay->add_option("--witness", replay_file, "witness text file")->required();
    cmd_replay->add_option("--property", replay_property, "property name")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed() || cmd_check->parsed()) {
            const CommonArgs &args = cmd_run->parsed() ? run_args : check_args;
            RunConfig config = build_config(args);
            if (cmd_check->parsed() && !check_property_name.empty()) {
                Design design = load_design(config);
                const ProgramImage *prog = design.program ? &*design.program : nullptr;
                AssumptionSet set =
                    gen_assumptions(design.net, config.core, config.mode, prog,
                                    config.stack_depth);
                for (const auto &p : design.properties) {
                    if (p.name != check_property_name)
                        continue;
                    CheckOutcome out = check_property(design, config, p, set);
                    std::cout << p.name << ": "
                              << (out.verdict.kind == VerdictKind::Covered      ? "covered"
                                  : out.verdict.kind == VerdictKind::Uncoverable ? "uncoverable"
                                                                                  : "unknown")
                              << " (" << out.verdict.detail << ")\n";
                    return out.verdict.kind == VerdictKind::Covered      ? 1
                           : out.verdict.kind == VerdictKind::Uncoverable ? 0
                                                                           : 2;
                }
                std::cerr << "unknown property '" << check_property_name << "'\n";
                return 2;
            }
            Report report = run(config);
            std::cout << report.to_table();
            if (!config.out_dir.empty())
                std::cout << "reports written to " << config.out_dir << "\n";
            return exit_code_for(report);
        }
        if (cmd_paths->parsed()) {
            RunConfig config = build_config(paths_args, false);
            Design design = load_design(config);
            std::cout << paths_report(design.net, design.graph, design.paths);
            return 0;
        }
        if (cmd_props->parsed()) {
            RunConfig config = build_config(props_args, false);
            Design design = load_design(config);
            for (const auto &p : design.properties) {
                std::cout << "// " << p.name << "\n"
                          << emit_psl(p, design.net, config.clock_name) << "\n";
            }
            if (!config.out_dir.empty()) {
                std::filesystem::create_directories(config.out_dir);
                for (const auto &p : design.properties) {
                    std::ofstream os(config.out_dir + "/" + p.name + ".psl");
                    os << emit_psl(p, design.net, config.clock_name);
                }
            }
            return 0;
        }
        if (cmd_assume->parsed()) {
            RunConfig config = build_config(assume_args);
            if (config.mode == Mode::Full) {
                std::cerr << "pick a concrete mode for 'assume'\n";
                return 2;
            }
            Design design = load_design(config);
            const ProgramImage *prog = design.program ? &*design.program : nullptr;
            AssumptionSet set =
                gen_assumptions(design.net, config.core, config.mode, prog, config.stack_depth);
            std::cout << set.psl_dump(design.net, config.clock_name);
            return 0;
        }
        if (cmd_asm->parsed()) {
            std::ifstream is(asm_input);
            if (!is) {
                std::cerr << "cannot open '" << asm_input << "'\n";
                return 2;
            }
            std::stringstream buf;
            buf << is.rdbuf();
            std::map<std::string, uint64_t> defines;
            for (const auto &d : asm_defines) {
                size_t eq = d.find('=');
                if (eq == std::string::npos) {
                    std::cerr << "bad define '" << d << "'\n";
                    return 2;
                }
                defines[d.substr(0, eq)] = std::stoull(d.substr(eq + 1), nullptr, 0);
            }
            ProgramImage img = assemble(buf.str(), defines);
            save_program(img, asm_out, asm_meta);
            std::cout << "assembled " << img.words.size() << " words, "
                      << img.call_sites.size() << " call sites, " << img.hwloops.size()
                      << " hardware loops\n";
            return 0;
        }
        if (cmd_replay->parsed()) {
            RunConfig config = build_config(replay_args);
            if (config.mode == Mode::Full) {
                std::cerr << "pick a concrete mode for 'replay'\n";
                return 2;
            }
            Design design = load_design(config);
            const ProgramImage *prog = design.program ? &*design.program : nullptr;
            AssumptionSet set =
                gen_assumptions(design.net, config.core, config.mode, prog, config.stack_depth);
            std::ifstream is(replay_file);
            if (!is) {
                std::cerr << "cannot open witness '" << replay_file << "'\n";
                return 2;
            }
            std::stringstream buf;
            buf << is.rdbuf();
            std::string text = buf.str();
            // strip comment lines
            std::string cleaned;
            std::istringstream lines(text);
            std::string line;
            while (std::getline(lines, line))
                if (line.empty() || line[0] != '#')
                    cleaned += line + "\n";
            Witness w = parse_witness_text(cleaned);
            for (const auto &p : design.properties) {
                if (p.name != replay_property)
                    continue;
                ReplayResult rr = replay_witness(design, config, p, set, w);
                if (rr.ok) {
                    std::cout << "witness replays cleanly; monitor accepted\n";
                    for (const auto &a :
                         attribute_witness(rr, design.program ? &*design.program : nullptr))
                        std::cout << "  " << a << "\n";
                    return 0;
                }
                std::cout << "replay failed: " << rr.error << "\n";
                return 2;
            }
            std::cerr << "unknown property '" << replay_property << "'\n";
            return 2;
        }
    } catch (const InputError &e) {
        std::cerr << "error: " << e.what() << "\n";
        if (!diag_json.empty()) {
            std::ofstream os(diag_json);
            os << "{\"severity\":\"error\",\"line\":" << e.diag.loc.line
               << ",\"column\":" << e.diag.loc.column << ",\"message\":\""
               << e.diag.message << "\"}\n";
        }
        return 2;
    }
    return 2;
}
