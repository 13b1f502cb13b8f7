#include "carla/dataset.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "carla/inject.hpp"
#include "carla/rng.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace carla {

static std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::vector<std::vector<double>> read_numeric_csv(const fs::path& path, std::vector<std::string>& header) {
    std::ifstream in(path);
    if (!in) throw DataError("missing file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    header = split_csv_line(line);

    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " cells, got " + std::to_string(cells.size()));
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const char* begin = cells[c].c_str();
            char* end = nullptr;
            errno = 0;
            const double v = std::strtod(begin, &end);
            if (end == begin || *end != '\0' || errno == ERANGE)
                throw DataError(path.string() + ":" + std::to_string(line_no) + ": non-numeric cell '" + cells[c] + "'");
            row[c] = v;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_numeric_csv(const fs::path& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    char buf[40];
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[c]);
            out << (c ? "," : "") << buf;
        }
        out << '\n';
    }
    if (!out) throw DataError("write failed for " + path.string());
}

static TimeSeries series_from_rows(const std::vector<std::vector<double>>& rows, const fs::path& origin) {
    if (rows.empty()) throw DataError("no data rows in " + origin.string());
    TimeSeries series(static_cast<std::int64_t>(rows.size()), static_cast<std::int64_t>(rows.front().size()));
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (std::size_t d = 0; d < rows[t].size(); ++d)
            series.at(static_cast<std::int64_t>(t), static_cast<std::int64_t>(d)) = rows[t][d];
    series.check_finite();
    return series;
}

BenchmarkEntity load_entity(const fs::path& dir) {
    BenchmarkEntity entity;
    entity.name = dir.filename().string();

    std::vector<std::string> header;
    entity.train = series_from_rows(read_numeric_csv(dir / "train.csv", header), dir / "train.csv");
    entity.test.series = series_from_rows(read_numeric_csv(dir / "test.csv", header), dir / "test.csv");

    const auto label_rows = read_numeric_csv(dir / "test_labels.csv", header);
    entity.test.labels.reserve(label_rows.size());
    for (std::size_t i = 0; i < label_rows.size(); ++i) {
        if (label_rows[i].size() != 1)
            throw DataError((dir / "test_labels.csv").string() + ": expected a single label column");
        const double v = label_rows[i][0];
        if (v != 0.0 && v != 1.0)
            throw DataError((dir / "test_labels.csv").string() + ":" + std::to_string(i + 2) +
                            ": label must be 0 or 1");
        entity.test.labels.push_back(static_cast<std::uint8_t>(v));
    }

    const fs::path meta = dir / "meta.json";
    if (fs::exists(meta)) {
        std::ifstream in(meta);
        json j = json::parse(in);
        if (j.contains("name")) entity.name = j["name"].get<std::string>();
        if (j.contains("dim_names")) {
            entity.train.dim_names = j["dim_names"].get<std::vector<std::string>>();
            entity.test.series.dim_names = entity.train.dim_names;
        }
    }
    entity.validate();
    return entity;
}

static std::vector<std::vector<double>> rows_from_series(const TimeSeries& series) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(series.length()),
                                          std::vector<double>(static_cast<std::size_t>(series.dims())));
    for (std::int64_t t = 0; t < series.length(); ++t)
        for (std::int64_t d = 0; d < series.dims(); ++d)
            rows[static_cast<std::size_t>(t)][static_cast<std::size_t>(d)] = series.at(t, d);
    return rows;
}

static std::vector<std::string> default_header(std::int64_t dim) {
    std::vector<std::string> header;
    for (std::int64_t d = 0; d < dim; ++d) header.push_back("d" + std::to_string(d));
    return header;
}

void save_entity(const fs::path& dir, const BenchmarkEntity& entity) {
    entity.validate();
    fs::create_directories(dir);
    const auto header = default_header(entity.train.dims());
    write_numeric_csv(dir / "train.csv", header, rows_from_series(entity.train));
    write_numeric_csv(dir / "test.csv", header, rows_from_series(entity.test.series));
    std::vector<std::vector<double>> label_rows;
    label_rows.reserve(entity.test.labels.size());
    for (auto v : entity.test.labels) label_rows.push_back({static_cast<double>(v)});
    write_numeric_csv(dir / "test_labels.csv", {"label"}, label_rows);

    json meta;
    meta["name"] = entity.name;
    if (!entity.train.dim_names.empty()) meta["dim_names"] = entity.train.dim_names;
    std::ofstream out(dir / "meta.json");
    out << meta.dump(2) << '\n';
}

std::vector<std::string> load_benchmark_manifest(const fs::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw DataError("missing file: " + (dir / "manifest.json").string());
    json j = json::parse(in);
    return j.at("entities").get<std::vector<std::string>>();
}

std::vector<BenchmarkEntity> load_benchmark(const fs::path& dir) {
    std::vector<BenchmarkEntity> entities;
    for (const auto& name : load_benchmark_manifest(dir)) entities.push_back(load_entity(dir / name));
    return entities;
}

void save_benchmark(const fs::path& dir, const std::vector<BenchmarkEntity>& entities) {
    fs::create_directories(dir);
    json manifest;
    manifest["entities"] = json::array();
    for (const auto& entity : entities) {
        save_entity(dir / entity.name, entity);
        manifest["entities"].push_back(entity.name);
    }
    std::ofstream out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
}

namespace {

// Sum-of-sinusoids process; train and test are consecutive stretches of the
// same process with independent noise.
struct SignalModel {
    struct Component {
        double amp, period, phase;
    };
    std::vector<std::vector<Component>> per_dim;

    static SignalModel draw(std::int64_t dim, RandomSource& rng) {
        SignalModel model;
        model.per_dim.resize(static_cast<std::size_t>(dim));
        for (auto& components : model.per_dim) {
            const int n = static_cast<int>(rng.uniform_int(2, 3));
            for (int c = 0; c < n; ++c)
                components.push_back({rng.uniform(0.5, 1.5), rng.uniform(20.0, 120.0), rng.uniform(0.0, 6.283185307179586)});
        }
        return model;
    }

    double value(std::int64_t t, std::int64_t d) const {
        double v = 0.0;
        for (const auto& c : per_dim[static_cast<std::size_t>(d)])
            v += c.amp * std::sin(6.283185307179586 * static_cast<double>(t) / c.period + c.phase);
        return v;
    }
};

struct Segment {
    std::int64_t start, length;
};

} // namespace

BenchmarkEntity synthesize_entity(std::uint64_t seed, std::int64_t t, std::int64_t dim, double anomaly_ratio) {
    if (t < 300 || dim < 1) throw DataError("synthesize_entity: need T >= 300 and Dim >= 1");
    if (!(anomaly_ratio > 0.0 && anomaly_ratio < 0.5))
        throw DataError("synthesize_entity: anomaly_ratio must be in (0, 0.5)");

    RandomSource params_rng(derive_seed(seed, "synth-params"));
    RandomSource train_noise(derive_seed(seed, "synth-train-noise"));
    RandomSource test_noise(derive_seed(seed, "synth-test-noise"));
    RandomSource anomaly_rng(derive_seed(seed, "synth-anomalies"));

    const SignalModel model = SignalModel::draw(dim, params_rng);
    constexpr double kNoiseSigma = 0.05;

    BenchmarkEntity entity;
    entity.name = "synthetic";
    entity.train = TimeSeries(t, dim);
    entity.test.series = TimeSeries(t, dim);
    for (std::int64_t i = 0; i < t; ++i)
        for (std::int64_t d = 0; d < dim; ++d)
            entity.train.at(i, d) = model.value(i, d) + train_noise.normal(0.0, kNoiseSigma);
    for (std::int64_t i = 0; i < t; ++i)
        for (std::int64_t d = 0; d < dim; ++d)
            entity.test.series.at(i, d) = model.value(t + i, d) + test_noise.normal(0.0, kNoiseSigma);
    const TimeSeries clean_test = entity.test.series;

    // Plan non-overlapping segments totalling ~ratio * T points.
    const auto target = static_cast<std::int64_t>(std::llround(anomaly_ratio * static_cast<double>(t)));
    std::vector<Segment> segments;
    std::int64_t planned = 0;
    constexpr std::int64_t kMargin = 25;
    int attempts = 0;
    while (planned < target) {
        std::int64_t len = anomaly_rng.uniform_int(30, 120);
        if (planned + len > target) len = target - planned;
        if (len < 1) break;
        if (len > t / 4) len = t / 4;
        bool placed = false;
        for (; attempts < 20000; ++attempts) {
            const std::int64_t start = anomaly_rng.uniform_int(kMargin, t - len - kMargin);
            bool clash = false;
            for (const auto& other : segments)
                if (start < other.start + other.length + kMargin && other.start < start + len + kMargin) {
                    clash = true;
                    break;
                }
            if (!clash) {
                segments.push_back({start, len});
                planned += len;
                placed = true;
                ++attempts;
                break;
            }
        }
        if (!placed) throw DataError("synthesize_entity: could not place anomaly segments (ratio too high?)");
    }

    // Apply each segment through the injection primitives on a padded slice.
    entity.test.labels.assign(static_cast<std::size_t>(t), 0);
    for (const auto& segment : segments) {
        constexpr std::int64_t kPad = 50;
        const std::int64_t lo = std::max<std::int64_t>(0, segment.start - kPad);
        const std::int64_t hi = std::min<std::int64_t>(t, segment.start + segment.length + kPad);
        Window slice(hi - lo, dim);
        for (std::int64_t d = 0; d < dim; ++d)
            for (std::int64_t i = lo; i < hi; ++i) slice.at(i - lo, d) = entity.test.series.at(i, d);

        const std::int64_t rel_s = segment.start - lo;
        const std::int64_t rel_e = rel_s + segment.length - 1; // inclusive
        const auto dims = choose_dims(dim, anomaly_rng);
        Window modified = slice;
        for (std::int64_t d : dims) {
            if (segment.length == 1) {
                const bool sign = anomaly_rng.coin_flip();
                const double g = anomaly_rng.uniform(3.0, 5.0);
                modified = anomaly_rng.coin_flip()
                               ? inject_global(modified, d, rel_s, g, sign)
                               : inject_contextual(modified, d, rel_s, g, std::max<std::int64_t>(0, rel_s - 25),
                                                   std::min<std::int64_t>(modified.ws, rel_s + 25), sign);
            } else {
                switch (anomaly_rng.uniform_int(0, 2)) {
                case 0: {
                    static constexpr double kFactors[4] = {1.0 / 3.0, 0.5, 2.0, 3.0};
                    modified = inject_seasonal(modified, d, rel_s, rel_e + 1, kFactors[anomaly_rng.uniform_int(0, 3)]);
                    break;
                }
                case 1:
                    modified = inject_trend(modified, d, rel_s, rel_e, anomaly_rng.uniform(3.0, 5.0));
                    break;
                default:
                    modified = inject_shapelet(modified, d, rel_s, rel_e);
                    break;
                }
            }
        }
        for (std::int64_t d = 0; d < dim; ++d)
            for (std::int64_t i = lo; i < hi; ++i) {
                const double v = modified.at(i - lo, d);
                if (v != clean_test.at(i, d)) {
                    entity.test.series.at(i, d) = v;
                    entity.test.labels[static_cast<std::size_t>(i)] = 1;
                }
            }
    }

    entity.validate();
    return entity;
}

} // namespace carla
