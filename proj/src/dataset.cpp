#include "plfit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "plfit/errors.hpp"
#include "text.hpp"

namespace plfit {

namespace {

constexpr double kDistanceMismatchWarnM = 0.5;

constexpr std::array<std::string_view, 6> kCoordinateColumns = {"tx_x", "tx_y", "tx_z",
                                                                 "rx_x", "rx_y", "rx_z"};

struct Columns {
  int freq = -1;
  int path_loss = -1;
  int los = -1;
  int distance = -1;
  std::array<int, 6> coords{-1, -1, -1, -1, -1, -1};
  int campaign = -1;
  int tx_height = -1;
  int rx_height = -1;

  bool has_coords() const {
    return std::all_of(coords.begin(), coords.end(), [](int c) { return c >= 0; });
  }
};

Columns map_header(const std::vector<std::string>& header) {
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name = detail::to_lower(detail::trim(header[i]));
    if (name.empty()) continue;
    if (!index.emplace(name, static_cast<int>(i)).second) {
      throw FormatError("duplicate column '" + name + "' in header");
    }
  }
  auto find = [&](std::string_view name) {
    const auto it = index.find(std::string(name));
    return it == index.end() ? -1 : it->second;
  };

  Columns cols;
  cols.freq = find("freq_ghz");
  cols.path_loss = find("path_loss_db");
  cols.los = find("los");
  cols.distance = find("distance_m");
  for (std::size_t i = 0; i < kCoordinateColumns.size(); ++i) {
    cols.coords[i] = find(kCoordinateColumns[i]);
  }
  cols.campaign = find("campaign");
  cols.tx_height = find("tx_height_m");
  cols.rx_height = find("rx_height_m");

  std::string missing;
  for (auto [col, name] : {std::pair{cols.freq, "freq_ghz"}, std::pair{cols.path_loss, "path_loss_db"},
                           std::pair{cols.los, "los"}}) {
    if (col < 0) missing += std::string(missing.empty() ? "" : ", ") + name;
  }
  if (!missing.empty()) {
    throw FormatError("missing required column(s): " + missing +
                      " (schema: freq_ghz, path_loss_db, los, distance_m | tx_x..rx_z)");
  }
  if (cols.distance < 0 && !cols.has_coords()) {
    throw FormatError(
        "header needs distance_m or all of tx_x, tx_y, tx_z, rx_x, rx_y, rx_z");
  }
  return cols;
}

std::optional<bool> parse_los_flag(std::string_view s) {
  const std::string v = detail::to_lower(detail::trim(s));
  if (v == "los" || v == "1") return true;
  if (v == "nlos" || v == "0") return false;
  return std::nullopt;
}

// Either a record or the reason it was rejected.
struct RowOutcome {
  std::optional<MeasurementRecord> record;
  std::string reason;
  std::string warning;
};

RowOutcome parse_row(const std::vector<std::string>& fields, const Columns& cols,
                     std::size_t expected_fields) {
  RowOutcome out;
  if (fields.size() != expected_fields) {
    out.reason = "expected " + std::to_string(expected_fields) + " fields, found " +
                 std::to_string(fields.size());
    return out;
  }
  auto number = [&](int col) { return detail::parse_double(fields[static_cast<std::size_t>(col)]); };
  auto cell_empty = [&](int col) {
    return col < 0 || detail::trim(fields[static_cast<std::size_t>(col)]).empty();
  };

  const auto freq = number(cols.freq);
  if (!freq) {
    out.reason = "freq_ghz is not a number";
    return out;
  }
  if (!std::isfinite(*freq) || *freq <= 0.0) {
    out.reason = "frequency must be finite and > 0 GHz";
    return out;
  }
  const auto pl = number(cols.path_loss);
  if (!pl) {
    out.reason = "path_loss_db is not a number";
    return out;
  }
  if (!std::isfinite(*pl) || *pl <= 0.0) {
    out.reason = "path loss must be finite and > 0 dB";
    return out;
  }
  const auto los = parse_los_flag(fields[static_cast<std::size_t>(cols.los)]);
  if (!los) {
    out.reason = "los must be los/nlos or 1/0";
    return out;
  }

  std::optional<double> coord_distance;
  if (cols.has_coords() && !std::all_of(cols.coords.begin(), cols.coords.end(), cell_empty)) {
    Point3 tx{}, rx{};
    for (std::size_t i = 0; i < 6; ++i) {
      const auto v = number(cols.coords[i]);
      if (!v || !std::isfinite(*v)) {
        out.reason = std::string(kCoordinateColumns[i]) + " is not a finite number";
        return out;
      }
      (i < 3 ? tx[i] : rx[i - 3]) = *v;
    }
    coord_distance = std::hypot(rx[0] - tx[0], rx[1] - tx[1], rx[2] - tx[2]);
  }

  double distance = 0.0;
  if (!cell_empty(cols.distance)) {
    const auto d = number(cols.distance);
    if (!d || !std::isfinite(*d)) {
      out.reason = "distance_m is not a finite number";
      return out;
    }
    distance = *d;
    if (coord_distance && std::abs(*coord_distance - distance) > kDistanceMismatchWarnM) {
      out.warning = "distance_m " + detail::format_number(distance) +
                    " differs from coordinate distance " + detail::format_number(*coord_distance) +
                    " by more than 0.5 m; using distance_m";
    }
  } else if (coord_distance) {
    distance = *coord_distance;
  } else {
    out.reason = "no distance: distance_m and coordinates are empty";
    return out;
  }
  if (distance < 1.0) {
    out.reason = "distance below 1 m reference";
    return out;
  }

  std::optional<double> heights[2];
  const int height_cols[2] = {cols.tx_height, cols.rx_height};
  for (int i = 0; i < 2; ++i) {
    if (cell_empty(height_cols[i])) continue;
    const auto h = number(height_cols[i]);
    if (!h || !std::isfinite(*h)) {
      out.reason = std::string(i == 0 ? "tx_height_m" : "rx_height_m") + " is not a finite number";
      return out;
    }
    heights[i] = *h;
  }

  std::string campaign;
  if (cols.campaign >= 0) {
    campaign = std::string(detail::trim(fields[static_cast<std::size_t>(cols.campaign)]));
  }
  out.record = MeasurementRecord{Frequency(*freq), Distance3D(distance), *pl, *los,
                                 std::move(campaign), heights[0], heights[1]};
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

ParseResult parse_csv(std::istream& in, std::string source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!detail::trim(line).empty()) {
      header = detail::split_csv_line(line);
      break;
    }
  }
  if (header.empty()) {
    throw FormatError("input has no header row");
  }
  const Columns cols = map_header(header);

  ParseResult result;
  result.dataset.metadata.source = std::move(source);
  result.dataset.metadata.ingested_at = std::chrono::system_clock::now();
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (detail::trim(line).empty()) continue;
    RowOutcome row = parse_row(detail::split_csv_line(line), cols, header.size());
    if (!row.warning.empty()) {
      result.warnings.push_back("line " + std::to_string(line_no) + ": " + row.warning);
    }
    if (row.record) {
      result.dataset.records.push_back(std::move(*row.record));
    } else {
      result.rejections.push_back({line_no, std::move(row.reason)});
    }
  }
  if (result.dataset.empty()) {
    throw EmptyDatasetError("no valid measurement rows in " + result.dataset.metadata.source,
                            std::move(result.rejections));
  }
  return result;
}

ParseResult read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError("cannot open " + path);
  }
  return parse_csv(in, path);
}

void serialize_csv(const Dataset& ds, std::ostream& out) {
  out << "freq_ghz,distance_m,path_loss_db,los,campaign,tx_height_m,rx_height_m\n";
  for (const auto& r : ds.records) {
    out << detail::format_number(r.frequency.ghz()) << ','
        << detail::format_number(r.distance_3d.meters()) << ','
        << detail::format_number(r.path_loss_db) << ',' << (r.los ? "los" : "nlos") << ','
        << detail::quote_csv_field(r.campaign) << ','
        << (r.tx_height_m ? detail::format_number(*r.tx_height_m) : "") << ','
        << (r.rx_height_m ? detail::format_number(*r.rx_height_m) : "") << '\n';
  }
}

Distance3D derive_distance(const Point3& tx, const Point3& rx) {
  for (double v : tx) {
    if (!std::isfinite(v)) throw DomainError("transmitter coordinates must be finite");
  }
  for (double v : rx) {
    if (!std::isfinite(v)) throw DomainError("receiver coordinates must be finite");
  }
  const double d = std::hypot(rx[0] - tx[0], rx[1] - tx[1], rx[2] - tx[2]);
  if (d < 1.0) {
    throw DomainError("terminals closer than the 1 m reference distance");
  }
  return Distance3D(d);
}

std::pair<Dataset, Dataset> partition(const Dataset& ds) {
  std::pair<Dataset, Dataset> out;
  out.first.metadata = ds.metadata;
  out.second.metadata = ds.metadata;
  for (const auto& r : ds.records) {
    (r.los ? out.first : out.second).records.push_back(r);
  }
  return out;
}

std::map<double, Dataset> split_by_frequency(const Dataset& ds) {
  std::map<double, Dataset> out;
  for (const auto& r : ds.records) {
    auto [it, inserted] = out.try_emplace(r.frequency.ghz());
    if (inserted) it->second.metadata = ds.metadata;
    it->second.records.push_back(r);
  }
  return out;
}

std::vector<LosSample> los_samples(const Dataset& ds) {
  std::vector<LosSample> out;
  out.reserve(ds.size());
  for (const auto& r : ds.records) {
    out.push_back({r.distance_3d.meters(), r.los});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const LosSample& a, const LosSample& b) { return a.distance_3d < b.distance_3d; });
  return out;
}

}  // namespace plfit
