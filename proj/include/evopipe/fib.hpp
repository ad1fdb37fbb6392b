#pragma once

#include <cstdint>
#include <stdexcept>

namespace evopipe {

// Population-size schedule 1, 2, 3, 5, 8, 13, ... — the Fibonacci numbers
// with 0 skipped and the duplicate 1 collapsed. prev(1) clamps to 1 so the
// offspring size stays positive, and for mu >= 2 the defining identity
// next(mu) - mu = prev(mu) holds exactly.
struct FibSchedule {
    static bool contains(std::int64_t v)
    {
        if (v < 1) return false;
        std::int64_t a = 1, b = 2;
        while (a < v) {
            const std::int64_t c = a + b;
            a = b;
            b = c;
        }
        return a == v;
    }

    static std::int64_t next(std::int64_t v)
    {
        require(v);
        if (v == 1) return 2;
        std::int64_t a = 1, b = 2;
        while (b <= v) {
            const std::int64_t c = a + b;
            a = b;
            b = c;
        }
        return b;
    }

    static std::int64_t prev(std::int64_t v)
    {
        require(v);
        if (v == 1 || v == 2) return 1;
        std::int64_t a = 1, b = 2;
        while (b < v) {
            const std::int64_t c = a + b;
            a = b;
            b = c;
        }
        return a;
    }

private:
    static void require(std::int64_t v)
    {
        if (!contains(v)) {
            throw std::invalid_argument("value " + std::to_string(v) + " is not on the schedule");
        }
    }
};

// lambda = prev(mu): the gap to the next schedule entry, so that an
// increase step absorbs every offspring.
inline std::int64_t offspring_size(std::int64_t mu) { return FibSchedule::prev(mu); }

} // namespace evopipe
