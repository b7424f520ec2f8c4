#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "leakcheck/isa.hpp"

namespace leakcheck {

// Compiled program plus the sidecar metadata the assumption generator needs
// (call sites, hardware loops, source-line symbols).
struct ProgramImage {
    std::map<uint32_t, uint32_t> words; // byte address (word aligned) -> encoding
    uint32_t entry = 0;

    struct CallSite {
        uint32_t call_addr = 0;
        std::string callee;
        uint32_t return_addr = 0;
    };
    std::vector<CallSite> call_sites;

    struct HwLoop {
        uint32_t setup_addr = 0;
        uint32_t start = 0;
        uint32_t end = 0;
    };
    std::vector<HwLoop> hwloops;

    std::map<uint32_t, std::string> symbols; // addr -> "line N: text"
    std::map<std::string, uint32_t> functions; // called labels -> entry address

    bool has_metadata = true; // false when loaded from a bare image

    std::vector<uint32_t> distinct_encodings() const;
    int static_call_depth() const; // longest call chain in the call graph
};

// Two-pass assembler for the fixture ISA. `defines` override .equ symbols.
ProgramImage assemble(const std::string &source,
                      const std::map<std::string, uint64_t> &defines = {});

ProgramImage load_program(const std::string &hex_path, const std::string &meta_path);
void save_program(const ProgramImage &img, const std::string &hex_path,
                  const std::string &meta_path);

} // namespace leakcheck
