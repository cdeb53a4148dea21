#ifndef TPQR_ANALYSIS_HPP
#define TPQR_ANALYSIS_HPP

#include <vector>

#include "tpqr/common.hpp"

namespace tpqr::analysis {

struct Peak {
    double position;
    double value;
    double rel_height;  // value / global max
};

// Interior local maxima with value >= rel_threshold * global max.
inline std::vector<Peak> find_peaks(const RealVector& grid, const RealVector& values,
                                    double rel_threshold) {
    std::vector<Peak> peaks;
    if (grid.size() != values.size() || grid.size() < 3) return peaks;
    const double vmax = values.maxCoeff();
    if (!(vmax > 0)) return peaks;
    for (int i = 1; i + 1 < values.size(); ++i) {
        if (values[i] > values[i - 1] && values[i] > values[i + 1] &&
            values[i] >= rel_threshold * vmax)
            peaks.push_back({grid[i], values[i], values[i] / vmax});
    }
    return peaks;
}

}  // namespace tpqr::analysis

#endif
