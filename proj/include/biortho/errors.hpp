#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace biortho {

/// Closed enumeration of machine-readable refusal reasons. A refusal is a
/// successful diagnostic, not a crash: the CLI maps it to exit code 2 and
/// serializes the payload.
enum class RefusalReason {
    has_zero,
    near_singular,
    non_convergence,
    divergent,
    indefinite_gram,
    indefinite_operator,
    unsupported_parameter,
};

inline const char* to_string(RefusalReason r) {
    switch (r) {
        case RefusalReason::has_zero: return "has_zero";
        case RefusalReason::near_singular: return "near_singular";
        case RefusalReason::non_convergence: return "non_convergence";
        case RefusalReason::divergent: return "divergent";
        case RefusalReason::indefinite_gram: return "indefinite_gram";
        case RefusalReason::indefinite_operator: return "indefinite_operator";
        case RefusalReason::unsupported_parameter: return "unsupported_parameter";
    }
    return "unknown";
}

class RefusalError : public std::runtime_error {
public:
    RefusalError(RefusalReason reason, std::string message)
        : std::runtime_error(std::move(message)), reason_(reason) {}

    RefusalReason reason() const { return reason_; }

    // Optional payload, filled by the throwing site.
    std::vector<double> argmin;   // location of the symbol minimum, if relevant
    double min_abs = 0.0;         // symbol minimum modulus, if relevant
    double last_change = 0.0;     // final per-coefficient delta on non-convergence
    int nodes = 0;                // node count reached
    double min_eigenvalue = 0.0;  // for indefiniteness refusals

private:
    RefusalReason reason_;
};

}  // namespace biortho
