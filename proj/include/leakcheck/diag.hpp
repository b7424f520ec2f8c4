#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace leakcheck {

struct SourceLoc {
    int line = 0;
    int column = 0;

    bool valid() const { return line > 0; }
    std::string str() const;
};

enum class Severity { Note, Warning, Error };

struct Diagnostic {
    Severity severity = Severity::Error;
    SourceLoc loc;
    std::string message;

    std::string str() const;
};

// Thrown for unrecoverable input errors (syntax, unsupported construct,
// bad configuration). Carries the primary diagnostic.
class InputError : public std::runtime_error {
public:
    InputError(SourceLoc loc, std::string message)
        : std::runtime_error(Diagnostic{Severity::Error, loc, message}.str()),
          diag{Severity::Error, loc, std::move(message)} {}

    explicit InputError(std::string message) : InputError(SourceLoc{}, std::move(message)) {}

    Diagnostic diag;
};

// Collects non-fatal diagnostics during a pass.
class DiagSink {
public:
    void note(SourceLoc loc, std::string msg) { add(Severity::Note, loc, std::move(msg)); }
    void warning(SourceLoc loc, std::string msg) { add(Severity::Warning, loc, std::move(msg)); }
    void error(SourceLoc loc, std::string msg) { add(Severity::Error, loc, std::move(msg)); }

    bool has_errors() const;
    const std::vector<Diagnostic> &all() const { return diags_; }
    std::string dump() const;

private:
    void add(Severity sev, SourceLoc loc, std::string msg) {
        diags_.push_back(Diagnostic{sev, loc, std::move(msg)});
    }
    std::vector<Diagnostic> diags_;
};

} // namespace leakcheck
