#include "meshtok/rearrange.hpp"

#include <algorithm>
#include <string>

#include "meshtok/error.hpp"

namespace meshtok {

namespace {

void append(std::vector<SymbolId>& out, const std::vector<SymbolId>& part) {
  out.insert(out.end(), part.begin(), part.end());
}

template <typename Fn>
void for_each_run(std::span<const SymbolId> s, Fn&& fn) {
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == kSubEnd) {
      fn(s.subspan(start, i - start), true);
      start = i + 1;
    }
  }
  if (start < s.size()) fn(s.subspan(start), false);
}

}  // namespace

std::vector<SymbolId> rac_encode_block(std::span<const SymbolId> nums) {
  if (nums.size() % 3 != 0) {
    throw Error("rearrange block length " + std::to_string(nums.size()) +
                " is not a multiple of 3");
  }
  const std::size_t k = nums.size() / 3;
  std::vector<SymbolId> out(nums.size());
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = nums[3 * i];
    out[k + i] = nums[3 * i + 1];
    out[2 * k + i] = nums[3 * i + 2];
  }
  return out;
}

std::vector<SymbolId> rac_decode_block(std::span<const SymbolId> nums) {
  const std::size_t k = nums.size() / 3;
  std::vector<SymbolId> out(3 * k);
  for (std::size_t i = 0; i < k; ++i) {
    out[3 * i] = nums[i];
    out[3 * i + 1] = nums[k + i];
    out[3 * i + 2] = nums[2 * k + i];
  }
  return out;
}

std::vector<SymbolId> rac_encode_full(std::span<const SymbolId> nums) {
  if (nums.size() % 3 != 0) {
    throw Error("rearrange input length " + std::to_string(nums.size()) +
                " is not a multiple of 3");
  }
  if (nums.size() < 9) return rac_encode_block(nums);
  std::vector<SymbolId> out;
  out.reserve(nums.size());
  const std::size_t tail = nums.size() % 9;
  const std::size_t body = nums.size() - tail;
  for (std::size_t i = 0; i < body; i += 9) append(out, rac_encode_block(nums.subspan(i, 9)));
  if (tail > 0) append(out, rac_encode_block(nums.subspan(body)));
  return out;
}

std::vector<SymbolId> rac_decode_full(std::span<const SymbolId> nums) {
  if (nums.size() < 9) return rac_decode_block(nums);
  const std::size_t rem = nums.size() % 9;
  const std::size_t tail = rem < 3 ? 0 : rem < 6 ? 3 : 6;
  const std::size_t body = nums.size() - rem;
  std::vector<SymbolId> out;
  out.reserve(body + tail);
  for (std::size_t i = 0; i < body; i += 9) append(out, rac_decode_block(nums.subspan(i, 9)));
  if (tail > 0) append(out, rac_decode_block(nums.subspan(body, tail)));
  return out;
}

RearrangedSequence rearrange_sequence(const SymbolSequence& seq) {
  RearrangedSequence out{seq.kind, {}};
  out.symbols.reserve(seq.symbols.size());

  if (seq.kind == TokenizerKind::Raw) {
    for (auto s : seq.symbols) {
      if (!is_coordinate(s)) throw DecodeError("RAW sequence holds a control symbol");
    }
    if (seq.symbols.size() % 3 != 0) throw DecodeError("RAW length is not a multiple of 3");
    out.symbols = rac_encode_full(seq.symbols);
    return out;
  }

  const bool edr = seq.kind == TokenizerKind::Edr;
  std::vector<SymbolId> coords;
  for_each_run(seq.symbols, [&](std::span<const SymbolId> run, bool closed) {
    coords.clear();
    for (auto s : run) {
      if (is_coordinate(s)) {
        coords.push_back(s);
      } else if (edr && is_direction(s)) {
        out.symbols.push_back(s);
      } else {
        throw DecodeError("unexpected symbol " + std::to_string(s) + " in " +
                          std::string(to_string(seq.kind)) + " run");
      }
    }
    if (coords.size() % 3 != 0) {
      throw DecodeError("run coordinate count " + std::to_string(coords.size()) +
                        " is not a multiple of 3");
    }
    append(out.symbols, rac_encode_full(coords));
    if (closed) out.symbols.push_back(kSubEnd);
  });
  return out;
}

SymbolSequence unrearrange_sequence(const RearrangedSequence& seq, DecodeMode mode) {
  const bool strict = mode == DecodeMode::Strict;
  SymbolSequence out{seq.kind, {}};
  out.symbols.reserve(seq.symbols.size());

  if (seq.kind == TokenizerKind::Raw) {
    std::span<const SymbolId> s = seq.symbols;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!is_coordinate(s[i])) {
        if (strict) throw DecodeError("RAW sequence holds a control symbol");
        s = s.first(i);
        break;
      }
    }
    if (strict && s.size() % 3 != 0) throw DecodeError("RAW length is not a multiple of 3");
    out.symbols = rac_decode_full(s);
    return out;
  }

  const bool edr = seq.kind == TokenizerKind::Edr;
  for_each_run(seq.symbols, [&](std::span<const SymbolId> run, bool closed) {
    std::size_t dirs = 0;
    if (edr) {
      while (dirs < run.size() && is_direction(run[dirs])) ++dirs;
    }
    auto coords = run.subspan(dirs);
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (!is_coordinate(coords[i])) {
        if (strict) throw DecodeError("control symbol among rearranged coordinates");
        coords = coords.first(i);
        break;
      }
    }
    if (strict && coords.size() % 3 != 0) {
      throw DecodeError("run coordinate count " + std::to_string(coords.size()) +
                        " is not a multiple of 3");
    }
    if (edr && strict && coords.size() != 9 + 3 * dirs) {
      throw DecodeError("EDR run with " + std::to_string(dirs) + " directions needs " +
                        std::to_string(9 + 3 * dirs) + " coordinates, got " +
                        std::to_string(coords.size()));
    }
    const auto plain = rac_decode_full(coords);
    if (!edr) {
      append(out.symbols, plain);
    } else if (plain.size() >= 9) {
      const std::size_t faces = std::min(dirs, (plain.size() - 9) / 3);
      out.symbols.insert(out.symbols.end(), plain.begin(), plain.begin() + 9);
      for (std::size_t i = 0; i < faces; ++i) {
        out.symbols.push_back(run[i]);
        const auto at = plain.begin() + static_cast<std::ptrdiff_t>(9 + 3 * i);
        out.symbols.insert(out.symbols.end(), at, at + 3);
      }
    }
    if (closed) out.symbols.push_back(kSubEnd);
  });
  return out;
}

}  // namespace meshtok
