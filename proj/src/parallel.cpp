#include "secondchange/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace secondchange {

std::optional<int> threads_from_environment() {
    const char* raw = std::getenv("SECONDCHANGE_THREADS");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    try {
        const int value = std::stoi(raw);
        if (value > 0) return value;
    } catch (const std::exception&) {
    }
    return std::nullopt;
}

void set_thread_count(int threads) {
    if (threads < 1) throw std::invalid_argument("thread count must be positive");
    omp_set_num_threads(threads);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace secondchange
