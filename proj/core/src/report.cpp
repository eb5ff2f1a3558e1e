#include "meshtok/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "detail/json_report.hpp"

namespace meshtok {

namespace detail {

nlohmann::ordered_json report_to_json(const EntropyReport& r, bool per_mesh) {
  nlohmann::ordered_json j;
  j["method"] = r.method;
  j["meshes"] = r.meshes;
  j["vocab_size"] = r.vocab_size;
  j["raw_length"] = r.raw_length;
  j["symbol_length"] = r.symbol_length;
  j["token_length"] = r.token_length;
  j["compression_ratio"] = r.compression_ratio;
  j["token_compression_ratio"] = r.token_compression_ratio;
  j["coordinate_entropy"] = r.coordinate_entropy;
  j["token_entropy"] = r.token_entropy;
  j["mean_token_length"] = r.mean_token_length;
  j["pcme"] = r.pcme;
  j["ptme"] = r.ptme;
  j["ptme_direct"] = r.ptme_direct;
  j["context_window"] = r.context_window;
  j["usable"] = r.usable;

  nlohmann::ordered_json h;
  h["tokens"] = r.histogram.tokens;
  h["coordinates"] = r.histogram.coordinates;
  h["mean_coordinates"] = r.histogram.mean_coordinates();
  h["control_symbols"] = r.histogram.control_symbols;
  h["tokens_with_controls"] = r.histogram.tokens_with_controls;
  h["max_expansion"] = r.histogram.max_expansion;
  h["max_coordinates"] = r.histogram.max_coordinates;
  auto buckets = nlohmann::ordered_json::array();
  for (const auto& [coords, count] : r.histogram.by_coordinates) buckets.push_back({coords, count});
  h["by_coordinates"] = std::move(buckets);
  j["histogram"] = std::move(h);

  if (per_mesh) {
    auto meshes = nlohmann::ordered_json::array();
    for (const auto& m : r.per_mesh) {
      meshes.push_back({{"raw_length", m.raw_length},
                        {"symbol_length", m.symbol_length},
                        {"token_length", m.token_length},
                        {"compression_ratio", m.compression_ratio},
                        {"ptme", m.ptme}});
    }
    j["per_mesh"] = std::move(meshes);
  }
  return j;
}

}  // namespace detail

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width, bool right) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return right ? fill + s : s + fill;
}

// CSV fields here are method names and numbers; quote only when needed.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string report_json(const EntropyReport& report, bool per_mesh) {
  return detail::report_to_json(report, per_mesh).dump(2) + "\n";
}

std::string format_table(std::span<const TableRow> rows) {
  const std::vector<std::string> head{"Method", "Compress Ratio", "PTME", "PCME",
                                      "RT-CD*", "RT-HD*", "Usable"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : rows) {
    const auto& r = row.report;
    std::vector<std::string> line{r.method, fixed(r.token_compression_ratio, 3), fixed(r.ptme, 3),
                                  fixed(r.pcme, 3)};
    if (row.roundtrip) {
      line.push_back(fixed(row.roundtrip->chamfer, 3));
      line.push_back(fixed(row.roundtrip->hausdorff, 3));
    } else {
      line.push_back("-");
      line.push_back("-");
    }
    line.push_back(std::to_string(r.usable) + "/" + std::to_string(r.meshes));
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& line : cells) width[c] = std::max(width[c], line[c].size());
  }

  std::ostringstream out;
  const auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) out << "  ";
      out << pad(line[c], width[c], c > 0);
    }
    out << '\n';
  };
  emit(head);
  std::size_t total = 2 * (head.size() - 1);
  for (auto w : width) total += w;
  out << std::string(total, '-') << '\n';
  for (const auto& line : cells) emit(line);

  std::size_t failures = 0;
  for (const auto& row : rows) failures += row.roundtrip_failures;
  out << "\n* Round-trip fidelity, not generation quality: Chamfer and Hausdorff distance\n"
         "  between seeded surface samples of each mesh and its decode, lattice units,\n"
         "  worst mesh. 0 means lossless.";
  if (failures) out << " " << failures << " decode(s) differed from the input.";
  out << '\n';
  return out.str();
}

std::string rows_json(std::span<const TableRow> rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    auto j = detail::report_to_json(row.report, false);
    if (row.roundtrip) {
      j["roundtrip"] = {{"chamfer", row.roundtrip->chamfer},
                        {"hausdorff", row.roundtrip->hausdorff},
                        {"failures", row.roundtrip_failures}};
    }
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string rows_csv(std::span<const TableRow> rows) {
  std::ostringstream out;
  out << "method,compress_ratio,ptme,pcme,coordinate_ratio,mean_token_length,vocab_size,"
         "roundtrip_cd,roundtrip_hd,roundtrip_failures,usable,meshes\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << csv_field(r.method) << ',' << fixed(r.token_compression_ratio, 6) << ','
        << fixed(r.ptme, 6) << ',' << fixed(r.pcme, 6) << ',' << fixed(r.compression_ratio, 6)
        << ',' << fixed(r.mean_token_length, 6) << ',' << r.vocab_size << ',';
    if (row.roundtrip) {
      out << fixed(row.roundtrip->chamfer, 6) << ',' << fixed(row.roundtrip->hausdorff, 6);
    } else {
      out << ',';
    }
    out << ',' << row.roundtrip_failures << ',' << r.usable << ',' << r.meshes << '\n';
  }
  return out.str();
}

std::string histogram_csv(std::span<const EntropyReport> reports) {
  std::ostringstream out;
  out << "method,coordinates,tokens\n";
  for (const auto& r : reports) {
    for (const auto& [coords, count] : r.histogram.by_coordinates) {
      out << csv_field(r.method) << ',' << coords << ',' << count << '\n';
    }
  }
  return out.str();
}

std::string sweep_csv(std::span<const SweepPoint> points) {
  std::ostringstream out;
  out << "method,vocab_size,compression_ratio,ptme,mean_coordinates,usable,meshes\n";
  for (const auto& p : points) {
    out << csv_field(p.method) << ',' << p.vocab_size << ',' << fixed(p.compression_ratio, 6) << ','
        << fixed(p.ptme, 6) << ',' << fixed(p.mean_coordinates, 6) << ',' << p.usable << ','
        << p.meshes << '\n';
  }
  return out.str();
}

std::string sweep_json(std::span<const SweepPoint> points) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : points) {
    arr.push_back({{"method", p.method},
                   {"vocab_size", p.vocab_size},
                   {"compression_ratio", p.compression_ratio},
                   {"ptme", p.ptme},
                   {"mean_coordinates", p.mean_coordinates},
                   {"usable", p.usable},
                   {"meshes", p.meshes}});
  }
  return arr.dump(2) + "\n";
}

std::string usable_csv(std::span<const EntropyReport> reports) {
  std::ostringstream out;
  out << "method,context_window,usable,meshes\n";
  for (const auto& r : reports) {
    out << csv_field(r.method) << ',' << r.context_window << ',' << r.usable << ',' << r.meshes << '\n';
  }
  return out.str();
}

}  // namespace meshtok
