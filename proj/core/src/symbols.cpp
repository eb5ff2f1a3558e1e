#include "meshtok/symbols.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "meshtok/error.hpp"

namespace meshtok {

namespace {

template <typename Fn>
void for_each_word(std::string_view line, Fn&& fn) {
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const auto start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) fn(line.substr(start, i - start));
  }
}

std::uint32_t parse_uint(std::string_view word) {
  std::uint32_t value = 0;
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc() || ptr != word.data() + word.size()) {
    throw ParseError("unrecognized token '" + std::string(word) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(TokenizerKind kind) noexcept {
  switch (kind) {
    case TokenizerKind::Raw: return "raw";
    case TokenizerKind::Amt: return "amt";
    case TokenizerKind::Edr: return "edr";
  }
  return "?";
}

std::optional<TokenizerKind> parse_tokenizer_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "raw") return TokenizerKind::Raw;
  if (lower == "amt") return TokenizerKind::Amt;
  if (lower == "edr") return TokenizerKind::Edr;
  return std::nullopt;
}

std::string format_symbols(std::span<const SymbolId> symbols) {
  std::string out;
  out.reserve(symbols.size() * 3);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) out += ' ';
    switch (symbols[i]) {
      case kSubEnd: out += '&'; break;
      case kDirN: out += 'N'; break;
      case kDirP: out += 'P'; break;
      default: out += std::to_string(symbols[i]);
    }
  }
  return out;
}

std::vector<SymbolId> parse_symbols(std::string_view line, TokenizerKind kind) {
  std::vector<SymbolId> out;
  const auto limit = alphabet_size(kind);
  for_each_word(line, [&](std::string_view w) {
    SymbolId s = 0;
    if (w == "&") {
      s = kSubEnd;
    } else if (w == "N") {
      s = kDirN;
    } else if (w == "P") {
      s = kDirP;
    } else {
      s = parse_uint(w);
      if (!is_coordinate(s)) throw ParseError("coordinate out of range: " + std::string(w));
    }
    if (s >= limit) {
      throw ParseError("symbol '" + std::string(w) + "' is not in the " +
                       std::string(to_string(kind)) + " alphabet");
    }
    out.push_back(s);
  });
  return out;
}

std::string format_ids(std::span<const std::uint32_t> ids) {
  std::string out;
  out.reserve(ids.size() * 4);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(ids[i]);
  }
  return out;
}

std::vector<std::uint32_t> parse_ids(std::string_view line) {
  std::vector<std::uint32_t> out;
  for_each_word(line, [&](std::string_view w) { out.push_back(parse_uint(w)); });
  return out;
}

}  // namespace meshtok
