#include "carla/series.hpp"

namespace carla {

NormStats compute_norm_stats(const TimeSeries& train) {
    const std::int64_t t = train.length(), dim = train.dims();
    NormStats stats;
    stats.mean.assign(dim, 0.0);
    stats.stddev.assign(dim, 0.0);
    stats.zero_variance.assign(dim, false);
    for (std::int64_t d = 0; d < dim; ++d) {
        double sum = 0.0;
        for (std::int64_t i = 0; i < t; ++i) sum += train.at(i, d);
        const double mean = sum / static_cast<double>(t);
        double sq = 0.0;
        for (std::int64_t i = 0; i < t; ++i) {
            const double dv = train.at(i, d) - mean;
            sq += dv * dv;
        }
        stats.mean[d] = mean;
        stats.stddev[d] = std::sqrt(sq / static_cast<double>(t));
        stats.zero_variance[d] = (stats.stddev[d] == 0.0);
    }
    return stats;
}

static void check_stats_dim(const TimeSeries& series, const NormStats& stats) {
    if (static_cast<std::int64_t>(stats.mean.size()) != series.dims())
        throw DataError("normalize: stats dimension mismatch");
}

TimeSeries normalize(const TimeSeries& series, const NormStats& stats) {
    check_stats_dim(series, stats);
    TimeSeries out = series;
    for (std::int64_t d = 0; d < series.dims(); ++d) {
        const double mean = stats.mean[d];
        const double scale = stats.zero_variance[d] ? 1.0 : stats.stddev[d];
        for (std::int64_t i = 0; i < series.length(); ++i)
            out.at(i, d) = (series.at(i, d) - mean) / scale;
    }
    return out;
}

TimeSeries denormalize(const TimeSeries& series, const NormStats& stats) {
    check_stats_dim(series, stats);
    TimeSeries out = series;
    for (std::int64_t d = 0; d < series.dims(); ++d) {
        const double mean = stats.mean[d];
        const double scale = stats.zero_variance[d] ? 1.0 : stats.stddev[d];
        for (std::int64_t i = 0; i < series.length(); ++i)
            out.at(i, d) = series.at(i, d) * scale + mean;
    }
    return out;
}

std::vector<WindowView> sliding_windows(const TimeSeries& series, std::int64_t ws, std::int64_t stride) {
    if (ws < 1 || stride < 1) throw DataError("sliding_windows: ws and stride must be >= 1");
    if (ws > series.length())
        throw DataError("sliding_windows: window size " + std::to_string(ws) +
                        " exceeds series length " + std::to_string(series.length()));
    const std::int64_t count = (series.length() - ws) / stride + 1;
    std::vector<WindowView> views;
    views.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) views.push_back({i * stride, ws});
    return views;
}

void copy_window(const TimeSeries& series, const WindowView& view, float* out) {
    const std::int64_t dim = series.dims();
    for (std::int64_t d = 0; d < dim; ++d)
        for (std::int64_t t = 0; t < view.length; ++t)
            out[d * view.length + t] = static_cast<float>(series.at(view.start + t, d));
}

std::vector<float> window_batch(const TimeSeries& series, const std::vector<WindowView>& views) {
    if (views.empty()) return {};
    const std::int64_t ws = views.front().length;
    std::vector<float> out(views.size() * static_cast<std::size_t>(series.dims() * ws));
    for (std::size_t i = 0; i < views.size(); ++i)
        copy_window(series, views[i], out.data() + i * static_cast<std::size_t>(series.dims() * ws));
    return out;
}

} // namespace carla
