#include "cwm/parallel.hpp"

#include <cstdlib>
#include <string>

#include "cwm/csv.hpp"

namespace cwm {

std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CWM_THREADS"); env != nullptr && *env != '\0') {
        try {
            if (const auto n = parse_unsigned(env); n > 0) return static_cast<std::size_t>(n);
        } catch (const std::exception&) {
            // Fall through to the hardware default on garbage.
        }
    }
    const auto hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace cwm
