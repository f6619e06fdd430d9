#pragma once

#include <cstddef>
#include <vector>

namespace gsde {

/// Partition 0 = t_0 < t_1 < ... < t_N = T of a time interval.
class TimeGrid {
public:
    /// Uniform grid with `steps` steps over [0, horizon].
    static TimeGrid uniform(double horizon, std::size_t steps);

    /// Custom grid; times must start at 0 and increase strictly.
    explicit TimeGrid(std::vector<double> times);

    std::size_t size() const { return times_.size(); }   ///< number of grid points, N+1
    std::size_t steps() const { return times_.size() - 1; }
    double time(std::size_t i) const { return times_[i]; }
    double dt(std::size_t k) const { return times_[k + 1] - times_[k]; }
    double horizon() const { return times_.back(); }
    double mesh() const { return mesh_; }                ///< max consecutive step
    const std::vector<double>& times() const { return times_; }

    bool operator==(const TimeGrid& other) const { return times_ == other.times_; }

private:
    std::vector<double> times_;
    double mesh_ = 0.0;
};

} // namespace gsde
