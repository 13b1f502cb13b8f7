#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "carla/series.hpp"

namespace carla {

// On-disk entity layout: train.csv / test.csv (header d0..d{Dim-1}),
// test_labels.csv (header "label"), optional meta.json.
BenchmarkEntity load_entity(const std::filesystem::path& dir);
void save_entity(const std::filesystem::path& dir, const BenchmarkEntity& entity);

// A benchmark is a directory of entity directories plus manifest.json
// listing entity names.
std::vector<std::string> load_benchmark_manifest(const std::filesystem::path& dir);
std::vector<BenchmarkEntity> load_benchmark(const std::filesystem::path& dir);
void save_benchmark(const std::filesystem::path& dir, const std::vector<BenchmarkEntity>& entities);

// Deterministic desk-scale entity: clean sinusoid-mix train, test with
// contiguous injected anomaly segments; labels mark exactly the modified
// points.
BenchmarkEntity synthesize_entity(std::uint64_t seed, std::int64_t t, std::int64_t dim, double anomaly_ratio);

// CSV helpers shared with the CLI (header row + numeric cells).
std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path,
                                                  std::vector<std::string>& header);
void write_numeric_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);

} // namespace carla
