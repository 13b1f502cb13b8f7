#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "carla/errors.hpp"

namespace carla {

// Multivariate signal, T timesteps x Dim dimensions, row-major.
class TimeSeries {
public:
    TimeSeries() = default;
    TimeSeries(std::int64_t t, std::int64_t dim)
        : t_(t), dim_(dim), values_(static_cast<std::size_t>(t * dim), 0.0) {
        if (t < 1 || dim < 1) throw DataError("TimeSeries: T and Dim must be >= 1");
    }

    std::int64_t length() const { return t_; }
    std::int64_t dims() const { return dim_; }

    double& at(std::int64_t t, std::int64_t d) { return values_[static_cast<std::size_t>(t * dim_ + d)]; }
    double at(std::int64_t t, std::int64_t d) const { return values_[static_cast<std::size_t>(t * dim_ + d)]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    std::vector<std::string> dim_names; // optional, may be empty

    void check_finite() const {
        for (double v : values_) {
            if (!std::isfinite(v)) throw DataError("TimeSeries contains NaN/Inf");
        }
    }

private:
    std::int64_t t_ = 0;
    std::int64_t dim_ = 0;
    std::vector<double> values_;
};

// Test signal plus point-level ground truth (1 = anomalous point).
struct LabeledSeries {
    TimeSeries series;
    std::vector<std::uint8_t> labels;

    void validate() const {
        if (static_cast<std::int64_t>(labels.size()) != series.length())
            throw DataError("labels length does not match series length");
        for (auto v : labels)
            if (v > 1) throw DataError("labels must be 0 or 1");
    }
};

// Half-open window [start, start + length) of a series.
struct WindowView {
    std::int64_t start = 0;
    std::int64_t length = 0;
};

// One train/test pair; train and test must agree on Dim.
struct BenchmarkEntity {
    std::string name;
    TimeSeries train;
    LabeledSeries test;

    void validate() const {
        if (train.dims() != test.series.dims())
            throw DataError("entity '" + name + "': train and test dimension mismatch");
        test.validate();
    }
};

// Per-dimension mean/std computed on a train series.
struct NormStats {
    std::vector<double> mean;
    std::vector<double> stddev;       // population std, >= 0
    std::vector<bool> zero_variance;  // flagged dims pass through unscaled
};

NormStats compute_norm_stats(const TimeSeries& train);

// Per-dimension z-score; zero-variance dims are centered but not scaled.
TimeSeries normalize(const TimeSeries& series, const NormStats& stats);
TimeSeries denormalize(const TimeSeries& series, const NormStats& stats);

// All windows of size `ws` at the given stride, in temporal order.
// Count is floor((T - ws) / stride) + 1; throws if ws > T.
std::vector<WindowView> sliding_windows(const TimeSeries& series, std::int64_t ws, std::int64_t stride);

// Copies one window into channels-first float layout (Dim x ws).
void copy_window(const TimeSeries& series, const WindowView& view, float* out);

// Materializes all views into a (count x Dim x ws) float block.
std::vector<float> window_batch(const TimeSeries& series, const std::vector<WindowView>& views);

} // namespace carla
