#include "fidgap/model.hpp"

#include <cmath>

namespace fidgap {

std::vector<double> make_time_grid(const TimeGrid& grid, DynKind kind, double rate_hint) {
    if (grid.points < 1) throw InvalidTime("make_time_grid: at least one point required");
    double t_max = grid.t_max;
    if (t_max <= 0.0) {
        t_max = rate_hint > 0.0 ? 10.0 / rate_hint : 10.0;
    }

    std::vector<double> times;
    if (kind == DynKind::map) {
        const int last = static_cast<int>(std::floor(t_max + 1e-9));
        for (int k = 0; k < grid.points && k <= last; ++k) times.push_back(k);
        if (times.empty()) times.push_back(0.0);
        return times;
    }

    times.push_back(0.0);
    if (grid.points == 1) return times;
    if (grid.spacing == TimeGrid::Spacing::linear) {
        for (int k = 1; k < grid.points; ++k) {
            times.push_back(t_max * k / (grid.points - 1.0));
        }
    } else {
        const double t_min = t_max * 1e-3;
        const int m = grid.points - 1;
        for (int k = 0; k < m; ++k) {
            const double frac = m == 1 ? 1.0 : static_cast<double>(k) / (m - 1);
            times.push_back(t_min * std::pow(t_max / t_min, frac));
        }
    }
    return times;
}

}  // namespace fidgap
