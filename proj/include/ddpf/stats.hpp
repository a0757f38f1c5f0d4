#pragma once

#include <cmath>
#include <cstdint>

namespace ddpf {

// Welford's online mean/variance. Sample (n-1) standard deviation; zero for
// fewer than two samples.
class RunningStats {
public:
    void add(double x) {
        ++n_;
        double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    std::int64_t count() const { return n_; }
    double mean() const { return n_ > 0 ? mean_ : 0.0; }

    double sample_variance() const {
        return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
    }

    double sample_std() const { return std::sqrt(sample_variance()); }

private:
    std::int64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

} // namespace ddpf
