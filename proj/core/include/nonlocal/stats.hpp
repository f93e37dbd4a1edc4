#pragma once

#include <vector>

namespace nonlocal {

/// Ordinary least-squares line y = intercept + slope x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t points = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Fit of log|y| against log x (entries with x <= 0 or y == 0 are skipped).
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

/// Streaming mean and standard error (Welford).
class RunningStats {
public:
    void add(double v);
    MeanEstimate estimate() const;
    double variance() const;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace nonlocal
