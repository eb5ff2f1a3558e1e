#include "meshtok/obj_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "meshtok/error.hpp"

namespace meshtok {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const auto start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

double parse_double(std::string_view tok, std::size_t line) {
  double value = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("non-numeric vertex coordinate '" + std::string(tok) + "'", line);
  }
  return value;
}

long long parse_index(std::string_view tok, std::size_t line) {
  const auto slash = tok.find('/');
  const auto head = tok.substr(0, slash);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), value);
  if (head.empty() || ec != std::errc() || ptr != head.data() + head.size() || value == 0) {
    throw ParseError("bad face index '" + std::string(tok) + "'", line);
  }
  return value;
}

struct PendingFace {
  std::array<long long, 3> ids;
  std::size_t line;
};

}  // namespace

RawMesh parse_obj(std::string_view text) {
  RawMesh mesh;
  std::vector<PendingFace> pending;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;

    const auto toks = split_ws(line);
    if (toks[0] == "v") {
      if (toks.size() < 4) throw ParseError("vertex needs 3 coordinates", line_no);
      mesh.vertices.push_back({parse_double(toks[1], line_no), parse_double(toks[2], line_no),
                               parse_double(toks[3], line_no)});
    } else if (toks[0] == "f") {
      if (toks.size() < 4) throw ParseError("face needs at least 3 indices", line_no);
      std::vector<long long> ids;
      ids.reserve(toks.size() - 1);
      const auto count = static_cast<long long>(mesh.vertices.size());
      for (std::size_t i = 1; i < toks.size(); ++i) {
        const auto raw = parse_index(toks[i], line_no);
        const auto id = raw < 0 ? count + raw : raw - 1;
        if (id < 0) throw ParseError("face index out of range", line_no);
        ids.push_back(id);
      }
      for (std::size_t i = 1; i + 1 < ids.size(); ++i) {
        pending.push_back({{ids[0], ids[i], ids[i + 1]}, line_no});
      }
    }
  }

  const auto n = static_cast<long long>(mesh.vertices.size());
  mesh.faces.reserve(pending.size());
  for (const auto& p : pending) {
    for (auto id : p.ids) {
      if (id >= n) throw ParseError("face index out of range", p.line);
    }
    if (p.ids[0] == p.ids[1] || p.ids[1] == p.ids[2] || p.ids[0] == p.ids[2]) continue;
    mesh.faces.push_back({static_cast<std::uint32_t>(p.ids[0]), static_cast<std::uint32_t>(p.ids[1]),
                          static_cast<std::uint32_t>(p.ids[2])});
  }
  return mesh;
}

RawMesh read_obj(const std::filesystem::path& path) {
  return parse_obj(read_text_file(path));
}

std::string format_obj(const QuantizedMesh& mesh) {
  std::ostringstream out;
  for (const auto& v : mesh.vertices) out << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  return out.str();
}

std::string format_obj(const RawMesh& mesh) {
  std::string out;
  char buf[64];
  for (const auto& v : mesh.vertices) {
    out += 'v';
    for (double c : v) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, c);
      out += ' ';
      out.append(buf, ptr);
    }
    out += '\n';
  }
  for (const auto& f : mesh.faces) {
    out += "f " + std::to_string(f[0] + 1) + ' ' + std::to_string(f[1] + 1) + ' ' +
           std::to_string(f[2] + 1) + '\n';
  }
  return out;
}

void write_obj(const std::filesystem::path& path, const QuantizedMesh& mesh) {
  write_text_file(path, format_obj(mesh));
}

void write_obj(const std::filesystem::path& path, const RawMesh& mesh) {
  write_text_file(path, format_obj(mesh));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace meshtok
