#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meshtok/entropy.hpp"
#include "meshtok/geom_metrics.hpp"

namespace meshtok {

/// One row of the comparison table.
struct TableRow {
  EntropyReport report;
  /// Worst round-trip distances over the corpus, when measured.
  std::optional<SetDistances> roundtrip;
  std::size_t roundtrip_failures = 0;  ///< meshes whose decode differed
};

/// One point of the vocabulary-size sweep.
struct SweepPoint {
  std::string method;
  std::size_t vocab_size = 0;
  double compression_ratio = 0.0;  ///< token length over RAW length
  double ptme = 0.0;
  double mean_coordinates = 0.0;   ///< coordinates per token
  std::size_t usable = 0;
  std::size_t meshes = 0;
};

/// Pretty-printed JSON object; per-mesh records are included when asked.
std::string report_json(const EntropyReport& report, bool per_mesh = false);

/// Fixed-width text table: Method, Compress Ratio, PTME, PCME, round-trip CD
/// and HD, usable meshes, followed by a footnote on the CD/HD columns.
std::string format_table(std::span<const TableRow> rows);
std::string rows_json(std::span<const TableRow> rows);
std::string rows_csv(std::span<const TableRow> rows);

/// method,coordinates,tokens: token occurrences by coordinates per token.
std::string histogram_csv(std::span<const EntropyReport> reports);
/// method,vocab_size,compression_ratio,ptme,mean_coordinates,usable,meshes
std::string sweep_csv(std::span<const SweepPoint> points);
std::string sweep_json(std::span<const SweepPoint> points);
/// method,context_window,usable,meshes
std::string usable_csv(std::span<const EntropyReport> reports);

}  // namespace meshtok
