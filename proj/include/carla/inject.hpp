#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "carla/rng.hpp"

namespace carla {

enum class AnomalyType { Seasonal, Trend, Global, Contextual, Shapelet };

const char* anomaly_type_name(AnomalyType type);
AnomalyType anomaly_type_from_name(const std::string& name); // throws UsageError

// Channels-first window buffer (dim x ws), double precision.
struct Window {
    std::int64_t ws = 0;
    std::int64_t dim = 0;
    std::vector<double> data; // data[d * ws + t]

    Window() = default;
    Window(std::int64_t ws_, std::int64_t dim_) : ws(ws_), dim(dim_), data(static_cast<std::size_t>(ws_ * dim_), 0.0) {}

    double& at(std::int64_t t, std::int64_t d) { return data[static_cast<std::size_t>(d * ws + t)]; }
    double at(std::int64_t t, std::int64_t d) const { return data[static_cast<std::size_t>(d * ws + t)]; }
};

// Record of one dimension's injection: every random draw plus the local
// stats that entered the formula.
struct DimInjection {
    std::int64_t dim = 0;
    AnomalyType type = AnomalyType::Global;
    double coefficient = 0.0; // g, x, b, or frequency factor k
    bool positive_sign = true; // spike direction (Global/Contextual only)
    double mu = 0.0;           // mu_w or mu_se
    double sigma = 0.0;        // sigma_w or sigma_se
    // Inclusive bounds of the cells this dimension's injection may touch.
    std::int64_t region_lo = 0;
    std::int64_t region_hi = 0;
};

struct AnomalySpec {
    std::int64_t s = 0; // shared start, 0-based
    std::int64_t e = 0; // shared end; subsequence types span up to e (see per-type semantics)
    std::vector<DimInjection> dims;
};

// Which anomaly types the injector may draw (ablations remove entries).
struct InjectOptions {
    std::vector<AnomalyType> type_pool = {AnomalyType::Seasonal, AnomalyType::Trend, AnomalyType::Global,
                                          AnomalyType::Contextual, AnomalyType::Shapelet};
};

// Population mean/std of w over [t0, t1) in dimension d.
void window_stats(const Window& w, std::int64_t d, std::int64_t t0, std::int64_t t1, double& mu, double& sigma);

// Point spike at s: mu_w +/- g * sigma_w over the whole window.
Window inject_global(const Window& w, std::int64_t d, std::int64_t s, double g, bool positive_sign);

// Point spike at s relative to the local stats of [s_ctx, e_ctx).
Window inject_contextual(const Window& w, std::int64_t d, std::int64_t s, double x, std::int64_t s_ctx,
                         std::int64_t e_ctx, bool positive_sign);

// Frequency warp of [s, e): k > 1 compresses (modulo segment length n = e - s),
// 0 < k < 1 stretches. Reads from the original segment.
Window inject_seasonal(const Window& w, std::int64_t d, std::int64_t s, std::int64_t e, double k);

// Adds b * sigma_w to [s, e] inclusive.
Window inject_trend(const Window& w, std::int64_t d, std::int64_t s, std::int64_t e, double b);

// Flattens [s, e] inclusive to the value at s.
Window inject_shapelet(const Window& w, std::int64_t d, std::int64_t s, std::int64_t e);

// One dim when Dim <= 10, otherwise a uniform count in [1, ceil(Dim/10)];
// distinct indices, returned sorted.
std::vector<std::int64_t> choose_dims(std::int64_t dim, RandomSource& rng);

// Full Algorithm-1 style injection: one shared [s, e] segment, one type drawn
// per affected dimension. Never mutates w.
std::pair<Window, AnomalySpec> inject_anomaly(const Window& w, RandomSource& rng,
                                              const InjectOptions& options = {});

} // namespace carla
