#include "cgprof/compensation.hpp"

#include <algorithm>
#include <set>

#include "cgprof/error.hpp"

namespace cgprof {

void OverheadLedger::record_handler_cost(Nanos dt) {
    if (dt < 0) {
        throw AccountingError("negative handler cost");
    }
    cumulative_ += dt;
}

Timestamp OverheadLedger::compensated_time(Timestamp raw) const {
    if (raw.ns < cumulative_) {
        throw AccountingError("handler overhead exceeds elapsed time");
    }
    return Timestamp{raw.ns - cumulative_};
}

BiasModel calibrate(std::span<const OverheadPoint> points) {
    std::set<double> distinct;
    for (const auto& p : points) {
        distinct.insert(p.ncalls);
    }
    if (distinct.size() < 2) {
        throw DegenerateFit("need at least two distinct call counts to fit overhead");
    }

    const double n = static_cast<double>(points.size());
    double mean_x = 0;
    double mean_y = 0;
    for (const auto& p : points) {
        mean_x += p.ncalls;
        mean_y += p.overhead_seconds;
    }
    mean_x /= n;
    mean_y /= n;

    // Centered sums keep the fit well conditioned when x spans decades.
    double sxx = 0;
    double sxy = 0;
    double syy = 0;
    for (const auto& p : points) {
        const double dx = p.ncalls - mean_x;
        const double dy = p.overhead_seconds - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }

    BiasModel model;
    model.slope = sxy / sxx;
    model.intercept = mean_y - model.slope * mean_x;
    model.sample_points.assign(points.begin(), points.end());

    double ss_res = 0;
    for (const auto& p : points) {
        const double r = p.overhead_seconds - (model.slope * p.ncalls + model.intercept);
        ss_res += r * r;
    }
    if (syy == 0) {
        model.r_squared = ss_res == 0 ? 1.0 : 0.0;
    } else {
        model.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return model;
}

}  // namespace cgprof
