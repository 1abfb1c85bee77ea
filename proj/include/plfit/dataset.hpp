#pragma once

// Measurement ingestion: CSV schema, validation with per-row rejection
// reports, geometry, LOS/NLOS partitioning.

#include <array>
#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plfit/models.hpp"

namespace plfit {

struct MeasurementRecord {
  Frequency frequency;
  Distance3D distance_3d;
  double path_loss_db;
  bool los;
  std::string campaign;
  std::optional<double> tx_height_m;
  std::optional<double> rx_height_m;
};

struct DatasetMetadata {
  std::string source;
  std::chrono::system_clock::time_point ingested_at{};
};

struct Dataset {
  std::vector<MeasurementRecord> records;
  DatasetMetadata metadata;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
};

struct LosSample {
  double distance_3d;  // m, > 0
  bool los;
};

struct RowRejection {
  std::size_t line;  // 1-based line number in the input, header is line 1
  std::string reason;
};

struct ParseResult {
  Dataset dataset;
  std::vector<RowRejection> rejections;
  std::vector<std::string> warnings;
};

// Thrown when no row survives validation. Carries the per-row report.
class EmptyDatasetError : public std::runtime_error {
 public:
  EmptyDatasetError(const std::string& what, std::vector<RowRejection> rejections)
      : std::runtime_error(what), rejections_(std::move(rejections)) {}

  const std::vector<RowRejection>& rejections() const noexcept { return rejections_; }

 private:
  std::vector<RowRejection> rejections_;
};

// Reads the measurement CSV. Required columns: freq_ghz, path_loss_db, los and
// either distance_m or tx_x,tx_y,tx_z,rx_x,rx_y,rx_z. Optional: campaign,
// tx_height_m, rx_height_m. Invalid rows are reported, never fatal.
// Throws FormatError on a bad header, EmptyDatasetError with zero valid rows.
ParseResult parse_csv(std::istream& in, std::string source = "<stream>");
ParseResult read_csv_file(const std::string& path);

// Writes the canonical column set (distance_m form) with 17 significant digits.
void serialize_csv(const Dataset& ds, std::ostream& out);

using Point3 = std::array<double, 3>;

// Euclidean T-R distance. Throws DomainError below 1 m.
Distance3D derive_distance(const Point3& tx, const Point3& rx);

// Stable split by LOS flag; either side may be empty.
std::pair<Dataset, Dataset> partition(const Dataset& ds);

// One dataset per distinct carrier frequency, keyed by GHz.
std::map<double, Dataset> split_by_frequency(const Dataset& ds);

// (distance, los) pairs sorted ascending by distance.
std::vector<LosSample> los_samples(const Dataset& ds);

}  // namespace plfit
