#pragma once

#include <string>
#include <vector>

#include "pancake/run_config.hpp"
#include "pancake/shooter.hpp"

namespace pancake {

struct StackSlot {
    double s = 0.0;
    RunConfig config;  // per-slot derived config
    ShootResult result;
};

/// Bisection + margin flow for every schedule slot, fanned out across
/// threads (capped by PANCAKE_THREADS). Results are merged by slot index,
/// so the outcome is independent of the thread count.
std::vector<StackSlot> run_stack(const RunConfig& base);

/// Thread cap: PANCAKE_THREADS when set, else hardware concurrency.
unsigned stack_thread_cap();

}  // namespace pancake
