#pragma once

#include <cstdint>
#include <string>

namespace crfuchs {

/// Batch configuration shared by the CLI commands. Exact mode forbids
/// tolerance-dependent verdicts; float-mode verdicts are labeled "numeric".
struct JobConfig {
    enum class Arith { Exact, Float64 };

    Arith arith = Arith::Exact;
    std::uint64_t seed = 1;
    int jobs = 1;
    int order = -1; // truncation override, -1 = module defaults
    bool verify = false;
    long param_budget = 100000;
    double zero_tol = 1e-12;
    double integrator_tol = 1e-10;

    bool exact() const { return arith == Arith::Exact; }
    /// Tolerance handed to order reads: negative in exact mode.
    double order_tol() const { return exact() ? -1.0 : zero_tol; }
};

/// Loads defaults from the JSON file named by $CRFUCHS_CONFIG, if set.
JobConfig load_default_config();

} // namespace crfuchs
