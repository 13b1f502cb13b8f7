#include "carla/inject.hpp"

#include <algorithm>
#include <cmath>

#include "carla/errors.hpp"

namespace carla {

const char* anomaly_type_name(AnomalyType type) {
    switch (type) {
    case AnomalyType::Seasonal: return "seasonal";
    case AnomalyType::Trend: return "trend";
    case AnomalyType::Global: return "global";
    case AnomalyType::Contextual: return "contextual";
    case AnomalyType::Shapelet: return "shapelet";
    }
    return "?";
}

AnomalyType anomaly_type_from_name(const std::string& name) {
    if (name == "seasonal") return AnomalyType::Seasonal;
    if (name == "trend") return AnomalyType::Trend;
    if (name == "global") return AnomalyType::Global;
    if (name == "contextual") return AnomalyType::Contextual;
    if (name == "shapelet") return AnomalyType::Shapelet;
    throw UsageError("unknown anomaly type: " + name);
}

void window_stats(const Window& w, std::int64_t d, std::int64_t t0, std::int64_t t1, double& mu, double& sigma) {
    const std::int64_t n = t1 - t0;
    double sum = 0.0;
    for (std::int64_t t = t0; t < t1; ++t) sum += w.at(t, d);
    mu = sum / static_cast<double>(n);
    double sq = 0.0;
    for (std::int64_t t = t0; t < t1; ++t) {
        const double dv = w.at(t, d) - mu;
        sq += dv * dv;
    }
    sigma = std::sqrt(sq / static_cast<double>(n));
}

Window inject_global(const Window& w, std::int64_t d, std::int64_t s, double g, bool positive_sign) {
    Window out = w;
    double mu = 0.0, sigma = 0.0;
    window_stats(w, d, 0, w.ws, mu, sigma);
    out.at(s, d) = positive_sign ? mu + g * sigma : mu - g * sigma;
    return out;
}

Window inject_contextual(const Window& w, std::int64_t d, std::int64_t s, double x, std::int64_t s_ctx,
                         std::int64_t e_ctx, bool positive_sign) {
    Window out = w;
    double mu = 0.0, sigma = 0.0;
    window_stats(w, d, s_ctx, e_ctx, mu, sigma);
    out.at(s, d) = positive_sign ? mu + x * sigma : mu - x * sigma;
    return out;
}

Window inject_seasonal(const Window& w, std::int64_t d, std::int64_t s, std::int64_t e, double k) {
    Window out = w;
    const std::int64_t n = e - s;
    for (std::int64_t t = s; t < e; ++t) {
        const auto offset = static_cast<std::int64_t>(std::floor(static_cast<double>(t - s) * k));
        const std::int64_t src = k > 1.0 ? s + (offset % n) : s + offset;
        out.at(t, d) = w.at(src, d);
    }
    return out;
}

Window inject_trend(const Window& w, std::int64_t d, std::int64_t s, std::int64_t e, double b) {
    Window out = w;
    double mu = 0.0, sigma = 0.0;
    window_stats(w, d, 0, w.ws, mu, sigma);
    for (std::int64_t t = s; t <= e; ++t) out.at(t, d) = w.at(t, d) + b * sigma;
    return out;
}

Window inject_shapelet(const Window& w, std::int64_t d, std::int64_t s, std::int64_t e) {
    Window out = w;
    const double v = w.at(s, d);
    for (std::int64_t t = s; t <= e; ++t) out.at(t, d) = v;
    return out;
}

std::vector<std::int64_t> choose_dims(std::int64_t dim, RandomSource& rng) {
    if (dim < 1) throw DataError("choose_dims: Dim must be >= 1");
    const std::int64_t bound = (dim + 9) / 10; // ceil(Dim / 10)
    const std::int64_t count = dim <= 10 ? 1 : rng.uniform_int(1, bound);
    // Partial Fisher-Yates over the index range.
    std::vector<std::int64_t> pool(static_cast<std::size_t>(dim));
    for (std::int64_t i = 0; i < dim; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (std::int64_t i = 0; i < count; ++i) {
        const std::int64_t j = rng.uniform_int(i, dim - 1);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(count));
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::pair<Window, AnomalySpec> inject_anomaly(const Window& w, RandomSource& rng, const InjectOptions& options) {
    if (w.ws < 2) throw DataError("inject_anomaly: window size must be >= 2");
    if (options.type_pool.empty()) throw UsageError("inject_anomaly: empty anomaly type pool");

    AnomalySpec spec;
    spec.dims.reserve(1);
    const std::vector<std::int64_t> dims = choose_dims(w.dim, rng);

    // Shared segment. The length draw keeps every type's affected span within
    // [1, floor(0.9 * ws)]: Seasonal touches [s, e), Trend/Shapelet touch
    // [s, e] inclusive, so e stays <= ws - 1 and e - s <= floor(0.9 * ws) - 1.
    const std::int64_t len_cap = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(0.9 * static_cast<double>(w.ws))) - 1);
    const std::int64_t len = rng.uniform_int(1, len_cap);
    spec.s = rng.uniform_int(0, w.ws - 1 - len);
    spec.e = spec.s + len;

    Window out = w;
    for (std::int64_t d : dims) {
        DimInjection rec;
        rec.dim = d;
        rec.type = options.type_pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(options.type_pool.size()) - 1))];
        switch (rec.type) {
        case AnomalyType::Global: {
            rec.coefficient = rng.uniform(3.0, 5.0);
            rec.positive_sign = rng.coin_flip();
            window_stats(w, d, 0, w.ws, rec.mu, rec.sigma);
            out.at(spec.s, d) = rec.positive_sign ? rec.mu + rec.coefficient * rec.sigma
                                                  : rec.mu - rec.coefficient * rec.sigma;
            rec.region_lo = rec.region_hi = spec.s;
            break;
        }
        case AnomalyType::Contextual: {
            rec.coefficient = rng.uniform(3.0, 5.0);
            rec.positive_sign = rng.coin_flip();
            window_stats(w, d, spec.s, spec.e + 1, rec.mu, rec.sigma);
            out.at(spec.s, d) = rec.positive_sign ? rec.mu + rec.coefficient * rec.sigma
                                                  : rec.mu - rec.coefficient * rec.sigma;
            rec.region_lo = rec.region_hi = spec.s;
            break;
        }
        case AnomalyType::Seasonal: {
            static constexpr double kFactors[4] = {1.0 / 3.0, 0.5, 2.0, 3.0};
            rec.coefficient = kFactors[rng.uniform_int(0, 3)];
            const Window warped = inject_seasonal(w, d, spec.s, spec.e, rec.coefficient);
            for (std::int64_t t = spec.s; t < spec.e; ++t) out.at(t, d) = warped.at(t, d);
            rec.region_lo = spec.s;
            rec.region_hi = spec.e - 1;
            break;
        }
        case AnomalyType::Trend: {
            rec.coefficient = rng.uniform(3.0, 5.0);
            window_stats(w, d, 0, w.ws, rec.mu, rec.sigma);
            for (std::int64_t t = spec.s; t <= spec.e; ++t) out.at(t, d) = w.at(t, d) + rec.coefficient * rec.sigma;
            rec.region_lo = spec.s;
            rec.region_hi = spec.e;
            break;
        }
        case AnomalyType::Shapelet: {
            const double v = w.at(spec.s, d);
            for (std::int64_t t = spec.s; t <= spec.e; ++t) out.at(t, d) = v;
            rec.region_lo = spec.s;
            rec.region_hi = spec.e;
            break;
        }
        }
        spec.dims.push_back(rec);
    }
    return {std::move(out), std::move(spec)};
}

} // namespace carla
