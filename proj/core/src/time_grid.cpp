#include "gsde/time_grid.hpp"

#include "gsde/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gsde {

TimeGrid TimeGrid::uniform(double horizon, std::size_t steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw InputError("TimeGrid: horizon must be positive and finite");
    if (steps < 1) throw InputError("TimeGrid: need at least one step");
    std::vector<double> t(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        t[i] = horizon * static_cast<double>(i) / static_cast<double>(steps);
    t.back() = horizon;
    return TimeGrid(std::move(t));
}

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.size() < 2) throw InputError("TimeGrid: need at least two points");
    if (times_.front() != 0.0) throw InputError("TimeGrid: grid must start at t = 0");
    for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
        if (!(times_[i] < times_[i + 1]))
            throw InputError("TimeGrid: times must be strictly increasing");
        mesh_ = std::max(mesh_, times_[i + 1] - times_[i]);
    }
    if (!std::isfinite(times_.back())) throw InputError("TimeGrid: non-finite time");
}

} // namespace gsde
