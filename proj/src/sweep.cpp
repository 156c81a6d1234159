#include "purcell/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "purcell/errors.hpp"

namespace purcell {

void SweepTable::validate() const {
    for (const Series& s : series) {
        if (s.values.size() != axis_values.size()) {
            throw InvalidGrid("sweep table: series '" + s.label + "' has " +
                              std::to_string(s.values.size()) + " values, axis has " +
                              std::to_string(axis_values.size()));
        }
    }
    if (axis_values.size() < 2) return;
    const bool increasing = axis_values[1] > axis_values[0];
    for (std::size_t i = 1; i < axis_values.size(); ++i) {
        const bool ok = increasing ? axis_values[i] > axis_values[i - 1]
                                   : axis_values[i] < axis_values[i - 1];
        if (!ok) throw InvalidGrid("sweep table: axis '" + axis_name + "' is not strictly monotone");
    }
}

const Series& SweepTable::find(const std::string& label) const {
    const auto it = std::find_if(series.begin(), series.end(),
                                 [&](const Series& s) { return s.label == label; });
    if (it == series.end()) throw InvalidGrid("sweep table: no series labelled '" + label + "'");
    return *it;
}

unsigned sweep_threads() {
    unsigned requested = 0;
    if (const char* env = std::getenv("PURCELL_ADSORB_THREADS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) requested = static_cast<unsigned>(value);
    }
    if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
    return requested;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const auto workers =
        static_cast<std::size_t>(std::min<std::size_t>(sweep_threads(), std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        const std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = count;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0 && hi > lo) || count < 2) {
        throw InvalidGrid("log grid needs 0 < lo < hi and at least 2 points");
    }
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double span = std::log(hi / lo);
    for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = lo * std::exp(span * i / (count - 1));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
    if (!(hi > lo) || count < 2) throw InvalidGrid("linear grid needs lo < hi and at least 2 points");
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
    }
    grid.back() = hi;
    return grid;
}

std::string format_number(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

}  // namespace purcell
