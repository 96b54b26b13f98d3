#include "pancake/pipeline.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>

namespace pancake {

unsigned stack_thread_cap() {
    if (const char* env = std::getenv("PANCAKE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

std::vector<StackSlot> run_stack(const RunConfig& base) {
    std::vector<StackSlot> slots(base.schedule.size());
    for (std::size_t i = 0; i < base.schedule.size(); ++i) {
        slots[i].s = base.schedule[i];
        slots[i].config = base.for_schedule_slot(base.schedule[i]);
    }

    std::vector<std::exception_ptr> errors(slots.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= slots.size()) return;
            try {
                StackSlot& slot = slots[i];
                const NeckJoinSpec js = slot.config.join_spec();
                const ShootConfig sc = slot.config.shoot_config();
                slot.result = bisect(js, sc, slot.config.flow);

                // Extension target: a fraction of the inscribed-sphere radius
                // of the margin run's initial region.
                NeckJoinSpec probe = js;
                probe.m = slot.result.m_star + sc.delta;
                probe.rho.reset();
                const double r0 = inscribed_axis_disk_radius(join(probe).curve);
                const double extend = slot.config.extend_factor * r0;
                build_old_flow(slot.result, js, sc, slot.config.flow, extend);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const unsigned cap = std::min<std::size_t>(stack_thread_cap(), slots.size());
    if (cap <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < cap; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return slots;
}

}  // namespace pancake
