#include "leakcheck/diag.hpp"

#include <sstream>

namespace leakcheck {

std::string SourceLoc::str() const {
    if (!valid())
        return "<unknown>";
    std::ostringstream os;
    os << line << ":" << column;
    return os.str();
}

std::string Diagnostic::str() const {
    std::ostringstream os;
    switch (severity) {
    case Severity::Note: os << "note"; break;
    case Severity::Warning: os << "warning"; break;
    case Severity::Error: os << "error"; break;
    }
    if (loc.valid())
        os << " at " << loc.str();
    os << ": " << message;
    return os.str();
}

bool DiagSink::has_errors() const {
    for (const auto &d : diags_)
        if (d.severity == Severity::Error)
            return true;
    return false;
}

std::string DiagSink::dump() const {
    std::ostringstream os;
    for (const auto &d : diags_)
        os << d.str() << "\n";
    return os.str();
}

} // namespace leakcheck
