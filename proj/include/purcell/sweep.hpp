// sweep.hpp - tabulated sweep results and deterministic parallel evaluation

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace purcell {

struct Series {
    std::string label;
    std::vector<double> values;

    bool operator==(const Series&) const = default;
};

/// One swept axis plus any number of equally long series. Metadata is an
/// ordered map so emission order is stable.
struct SweepTable {
    std::string axis_name;
    std::vector<double> axis_values;
    std::vector<Series> series;
    std::map<std::string, std::string> metadata;

    /// Throws InvalidGrid on ragged series or a non-monotone axis.
    void validate() const;

    [[nodiscard]] const Series& find(const std::string& label) const;

    bool operator==(const SweepTable&) const = default;
};

/// Worker count from PURCELL_ADSORB_THREADS; 0, unset or unparsable means
/// hardware concurrency.
unsigned sweep_threads();

/// Calls body(i) for i in [0, count) on up to sweep_threads() threads. Each
/// index is visited exactly once; callers write results by index. The first
/// exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// count points from lo to hi inclusive, uniformly in log(x).
std::vector<double> log_grid(double lo, double hi, int count);

/// count points from lo to hi inclusive, uniformly in x.
std::vector<double> linear_grid(double lo, double hi, int count);

/// "%.12g"
std::string format_number(double value);

}  // namespace purcell
