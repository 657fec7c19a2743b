#pragma once

#include "bltab/rational.hpp"

#include <map>
#include <string>

namespace bltab {

// A model value reported by the external solver. Rational answers are exact;
// decimal approximations and algebraic root objects are converted to a
// rational `value` accurate to within `precision`.
struct SmtValue {
    Rat value = 0;
    bool exact = true;
    Rat precision = 0;
};

enum class SmtStatus { Sat, Unsat, Unknown, Error };

struct SmtResult {
    SmtStatus status = SmtStatus::Error;
    std::map<std::string, SmtValue> values;  // keyed by declared symbol name
    std::string diagnostics;
};

// Runs `command` (split on whitespace) as a subprocess, writes `problem` to
// its stdin, and parses the sat/unsat/unknown verdict plus any get-value
// answer from stdout. The process is killed once `timeout_ms` elapses, which
// yields Unknown("timeout"). Launch failures yield Error with diagnostics.
SmtResult run_smt(const std::string& problem, const std::string& command, int timeout_ms);

}  // namespace bltab
