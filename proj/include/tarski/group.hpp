#pragma once

// Exact arithmetic and canonical normal forms for the four built-in group
// models: free groups, free abelian groups, finite cyclic groups and the
// group of 2x2 integer matrices of determinant one.
//
// Every element is stored as a flat vector of 64-bit integers whose layout
// depends on the model:
//   free        reduced word, letter i is +(i+1), its inverse -(i+1)
//   abelian     exponent vector of length rank
//   cyclic      single residue in [0, order)
//   sl2z        row-major entries {a, b, c, d} with ad - bc = 1
// Two elements are equal iff their normal forms are equal, so ordering and
// hashing act directly on the vector.

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tarski/error.hpp"

namespace tarski {

enum class Model { Free, FreeAbelian, Cyclic, Matrix };

struct Mat2 {
  std::int64_t a = 1, b = 0, c = 0, d = 1;
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

struct Element {
  std::vector<std::int64_t> nf;

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ e.nf.size();
    for (std::int64_t v : e.nf) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) +
           (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

/// One letter of a word over the generating data: generator `gen` or its
/// inverse.
struct Letter {
  std::size_t gen = 0;
  bool inverse = false;
  friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

namespace detail {

inline std::int64_t checked_add(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_add_overflow(x, y, &r)) {
    throw OverflowError("integer overflow in matrix arithmetic");
  }
  return r;
}

inline std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_mul_overflow(x, y, &r)) {
    throw OverflowError("integer overflow in matrix arithmetic");
  }
  return r;
}

inline std::int64_t checked_neg(std::int64_t x) {
  if (x == INT64_MIN) throw OverflowError("integer overflow in matrix arithmetic");
  return -x;
}

inline Mat2 mat_mul(const Mat2& x, const Mat2& y) {
  return {checked_add(checked_mul(x.a, y.a), checked_mul(x.b, y.c)),
          checked_add(checked_mul(x.a, y.b), checked_mul(x.b, y.d)),
          checked_add(checked_mul(x.c, y.a), checked_mul(x.d, y.c)),
          checked_add(checked_mul(x.c, y.b), checked_mul(x.d, y.d))};
}

inline bool det_is_one(const Mat2& m) {
  __int128 det = static_cast<__int128>(m.a) * m.d -
                 static_cast<__int128>(m.b) * m.c;
  return det == 1;
}

inline bool valid_symbol(std::string_view s) {
  if (s.empty() || s == "1") return false;
  if (!std::isalpha(static_cast<unsigned char>(s.front())) && s.front() != '_')
    return false;
  return std::all_of(s.begin(), s.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
  });
}

inline std::vector<std::string> default_names(std::size_t count, bool upper) {
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (count <= 26) {
      out.emplace_back(1, static_cast<char>((upper ? 'A' : 'a') + i));
    } else {
      out.push_back((upper ? "X" : "x") + std::to_string(i + 1));
    }
  }
  return out;
}

}  // namespace detail

/// Immutable description of a supported group together with its generating
/// data.
class GroupSpec {
 public:
  static GroupSpec free(std::size_t rank) {
    if (rank < 1) throw PreconditionError("free group rank must be >= 1");
    return GroupSpec(Model::Free, rank, detail::default_names(rank, false), {});
  }

  static GroupSpec free_abelian(std::size_t rank) {
    if (rank < 1) throw PreconditionError("free abelian rank must be >= 1");
    return GroupSpec(Model::FreeAbelian, rank,
                     detail::default_names(rank, false), {});
  }

  static GroupSpec cyclic(std::size_t order) {
    if (order < 1) throw PreconditionError("cyclic order must be >= 1");
    return GroupSpec(Model::Cyclic, order, {"a"}, {});
  }

  /// SL(2,Z) generated by the given matrices; defaults to the classical free
  /// pair [[1,2],[0,1]], [[1,0],[2,1]].
  static GroupSpec sl2z(std::vector<Mat2> gens = {{1, 2, 0, 1}, {1, 0, 2, 1}}) {
    if (gens.empty()) throw PreconditionError("sl2z needs at least one generator");
    for (const Mat2& m : gens) {
      if (!detail::det_is_one(m))
        throw PreconditionError("sl2z generator does not have determinant 1");
    }
    auto names = detail::default_names(gens.size(), true);
    const std::size_t n = gens.size();
    return GroupSpec(Model::Matrix, n, std::move(names), std::move(gens));
  }

  /// Replaces the generator symbols. Count must match and symbols must be
  /// distinct identifiers.
  GroupSpec with_names(std::vector<std::string> names) const {
    if (names.size() != names_.size())
      throw PreconditionError("generator name count does not match the model");
    std::unordered_set<std::string> seen;
    for (const auto& n : names) {
      if (!detail::valid_symbol(n))
        throw PreconditionError("invalid generator symbol '" + n + "'");
      if (!seen.insert(n).second)
        throw PreconditionError("duplicate generator symbol '" + n + "'");
    }
    GroupSpec out = *this;
    out.names_ = std::move(names);
    return out;
  }

  Model model() const noexcept { return model_; }
  /// Rank for free / abelian models, order for cyclic, generator count for
  /// matrices.
  std::size_t parameter() const noexcept { return param_; }
  std::size_t generator_count() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<Mat2>& matrices() const noexcept { return mats_; }

  /// Mini-language form, e.g. `free:3`, `cyclic:12`, `sl2z:1,2,0,1,1,0,2,1`.
  std::string to_string() const {
    switch (model_) {
      case Model::Free: return "free:" + std::to_string(param_);
      case Model::FreeAbelian: return "abelian:" + std::to_string(param_);
      case Model::Cyclic: return "cyclic:" + std::to_string(param_);
      case Model::Matrix: {
        std::string s = "sl2z:";
        bool first = true;
        for (const Mat2& m : mats_) {
          for (std::int64_t v : {m.a, m.b, m.c, m.d}) {
            if (!first) s += ',';
            s += std::to_string(v);
            first = false;
          }
        }
        return s;
      }
    }
    return {};
  }

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

 private:
  GroupSpec(Model m, std::size_t p, std::vector<std::string> names,
            std::vector<Mat2> mats)
      : model_(m), param_(p), names_(std::move(names)), mats_(std::move(mats)) {}

  Model model_;
  std::size_t param_;
  std::vector<std::string> names_;
  std::vector<Mat2> mats_;
};

inline Element identity(const GroupSpec& spec) {
  switch (spec.model()) {
    case Model::Free: return {};
    case Model::FreeAbelian:
      return {std::vector<std::int64_t>(spec.parameter(), 0)};
    case Model::Cyclic: return {{0}};
    case Model::Matrix: return {{1, 0, 0, 1}};
  }
  return {};
}

/// Checks the model invariants of a normal form.
inline bool is_valid(const GroupSpec& spec, const Element& x) {
  const auto& v = x.nf;
  switch (spec.model()) {
    case Model::Free: {
      const auto r = static_cast<std::int64_t>(spec.parameter());
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0 || v[i] > r || v[i] < -r) return false;
        if (i > 0 && v[i] == -v[i - 1]) return false;
      }
      return true;
    }
    case Model::FreeAbelian: return v.size() == spec.parameter();
    case Model::Cyclic:
      return v.size() == 1 && v[0] >= 0 &&
             static_cast<std::uint64_t>(v[0]) < spec.parameter();
    case Model::Matrix:
      return v.size() == 4 && detail::det_is_one({v[0], v[1], v[2], v[3]});
  }
  return false;
}

/// Validating constructor from a raw normal form.
inline Element make_element(const GroupSpec& spec, std::vector<std::int64_t> nf) {
  Element e{std::move(nf)};
  if (!is_valid(spec, e)) throw PreconditionError("not a valid normal form");
  return e;
}

inline Element generator(const GroupSpec& spec, std::size_t i) {
  if (i >= spec.generator_count())
    throw PreconditionError("generator index out of range");
  switch (spec.model()) {
    case Model::Free: return {{static_cast<std::int64_t>(i) + 1}};
    case Model::FreeAbelian: {
      Element e = identity(spec);
      e.nf[i] = 1;
      return e;
    }
    case Model::Cyclic: return {{spec.parameter() == 1 ? 0 : 1}};
    case Model::Matrix: {
      const Mat2& m = spec.matrices()[i];
      return {{m.a, m.b, m.c, m.d}};
    }
  }
  return {};
}

inline Element multiply(const GroupSpec& spec, const Element& x, const Element& y) {
  switch (spec.model()) {
    case Model::Free: {
      // Free reduction at the junction; both inputs are already reduced.
      std::size_t cancel = 0;
      const std::size_t n = x.nf.size(), m = y.nf.size();
      while (cancel < n && cancel < m && x.nf[n - 1 - cancel] == -y.nf[cancel])
        ++cancel;
      Element out;
      out.nf.reserve(n + m - 2 * cancel);
      out.nf.insert(out.nf.end(), x.nf.begin(), x.nf.end() - cancel);
      out.nf.insert(out.nf.end(), y.nf.begin() + cancel, y.nf.end());
      return out;
    }
    case Model::FreeAbelian: {
      Element out = x;
      for (std::size_t i = 0; i < out.nf.size(); ++i)
        out.nf[i] = detail::checked_add(out.nf[i], y.nf[i]);
      return out;
    }
    case Model::Cyclic: {
      const auto n = static_cast<std::int64_t>(spec.parameter());
      return {{(x.nf[0] + y.nf[0]) % n}};
    }
    case Model::Matrix: {
      const Mat2 p = detail::mat_mul({x.nf[0], x.nf[1], x.nf[2], x.nf[3]},
                                     {y.nf[0], y.nf[1], y.nf[2], y.nf[3]});
      return {{p.a, p.b, p.c, p.d}};
    }
  }
  return {};
}

inline Element invert(const GroupSpec& spec, const Element& x) {
  switch (spec.model()) {
    case Model::Free: {
      Element out;
      out.nf.reserve(x.nf.size());
      for (auto it = x.nf.rbegin(); it != x.nf.rend(); ++it) out.nf.push_back(-*it);
      return out;
    }
    case Model::FreeAbelian: {
      Element out = x;
      for (auto& v : out.nf) v = detail::checked_neg(v);
      return out;
    }
    case Model::Cyclic: {
      const auto n = static_cast<std::int64_t>(spec.parameter());
      return {{(n - x.nf[0]) % n}};
    }
    case Model::Matrix:
      // adjugate of a determinant-one matrix
      return {{x.nf[3], detail::checked_neg(x.nf[1]), detail::checked_neg(x.nf[2]),
               x.nf[0]}};
  }
  return {};
}

inline Element letter_element(const GroupSpec& spec, Letter l) {
  Element g = generator(spec, l.gen);
  return l.inverse ? invert(spec, g) : g;
}

/// Left-to-right product of the letters.
inline Element evaluate_word(const GroupSpec& spec, std::span<const Letter> letters) {
  Element acc = identity(spec);
  for (Letter l : letters) acc = multiply(spec, acc, letter_element(spec, l));
  return acc;
}

/// Rough size of an element: word length for free groups, l1 norm for
/// abelian, cyclic distance to 0, and sum of absolute entries minus 2 for
/// matrices. Only used to order candidates; not a word metric in general.
inline std::int64_t height(const GroupSpec& spec, const Element& x) {
  switch (spec.model()) {
    case Model::Free: return static_cast<std::int64_t>(x.nf.size());
    case Model::FreeAbelian: {
      std::int64_t s = 0;
      for (auto v : x.nf) s += v < 0 ? -v : v;
      return s;
    }
    case Model::Cyclic: {
      const auto n = static_cast<std::int64_t>(spec.parameter());
      return std::min(x.nf[0], n - x.nf[0]);
    }
    case Model::Matrix: {
      std::int64_t s = 0;
      for (auto v : x.nf) s += v < 0 ? -v : v;
      return s - 2;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Text syntax

namespace detail {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t base_column = 0;

  bool done() const { return pos >= text.size(); }
  char peek() const { return done() ? '\0' : text[pos]; }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, 1, base_column + pos + 1);
  }
  std::int64_t integer() {
    skip_ws();
    const std::size_t start = pos;
    if (peek() == '-' || peek() == '+') ++pos;
    const std::size_t digits = pos;
    while (!done() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == digits) {
      pos = start;
      fail("expected integer");
    }
    try {
      return std::stoll(std::string(text.substr(start, pos - start)));
    } catch (const std::out_of_range&) {
      pos = start;
      fail("integer out of range");
    }
  }
  void expect(char ch) {
    skip_ws();
    if (peek() != ch) fail(std::string("expected '") + ch + "'");
    ++pos;
  }
};

// Parses `[..]` nesting of integers and returns the flattened list plus the
// shape (number of inner lists, 0 for a flat list).
inline std::vector<std::int64_t> parse_bracket(Cursor& cur, std::size_t& rows) {
  std::vector<std::int64_t> out;
  rows = 0;
  cur.expect('[');
  cur.skip_ws();
  if (cur.peek() == ']') {
    ++cur.pos;
    return out;
  }
  const bool nested = cur.peek() == '[';
  while (true) {
    cur.skip_ws();
    if (nested) {
      std::size_t inner_rows = 0;
      auto row = parse_bracket(cur, inner_rows);
      if (inner_rows != 0) cur.fail("matrix nesting too deep");
      out.insert(out.end(), row.begin(), row.end());
      ++rows;
    } else {
      out.push_back(cur.integer());
    }
    cur.skip_ws();
    if (cur.peek() == ',') {
      ++cur.pos;
      continue;
    }
    cur.expect(']');
    return out;
  }
}

}  // namespace detail

inline std::string format_letter(const GroupSpec& spec, Letter l) {
  return spec.names().at(l.gen) + (l.inverse ? "^-1" : "");
}

inline std::string format_word(const GroupSpec& spec, std::span<const Letter> w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += format_letter(spec, w[i]);
  }
  return s;
}

/// Canonical text of an element: a word for free groups, a bracketed list
/// otherwise (`[1,-2]`, `[3]`, `[[1,2],[0,1]]`).
inline std::string format_element(const GroupSpec& spec, const Element& x) {
  switch (spec.model()) {
    case Model::Free: {
      Word w;
      for (auto v : x.nf)
        w.push_back({static_cast<std::size_t>((v < 0 ? -v : v) - 1), v < 0});
      return format_word(spec, w);
    }
    case Model::FreeAbelian:
    case Model::Cyclic: {
      std::string s = "[";
      for (std::size_t i = 0; i < x.nf.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(x.nf[i]);
      }
      return s + "]";
    }
    case Model::Matrix:
      return "[[" + std::to_string(x.nf[0]) + "," + std::to_string(x.nf[1]) +
             "],[" + std::to_string(x.nf[2]) + "," + std::to_string(x.nf[3]) + "]]";
  }
  return {};
}

/// Parses `a b^-1 c` style words; `1` denotes the identity and `x^k` any
/// nonzero integer power. Tokens are whitespace separated.
inline Word parse_word(const GroupSpec& spec, std::string_view text,
                       std::size_t base_column = 0) {
  detail::Cursor cur{text, 0, base_column};
  Word out;
  while (true) {
    cur.skip_ws();
    if (cur.done()) break;
    const std::size_t start = cur.pos;
    while (!cur.done() && !std::isspace(static_cast<unsigned char>(cur.peek())) &&
           cur.peek() != '^')
      ++cur.pos;
    const std::string sym(text.substr(start, cur.pos - start));
    std::int64_t power = 1;
    if (cur.peek() == '^') {
      ++cur.pos;
      power = cur.integer();
    }
    if (sym == "1") continue;
    const auto& names = spec.names();
    auto it = std::find(names.begin(), names.end(), sym);
    if (it == names.end()) {
      cur.pos = start;
      cur.fail("unknown generator symbol '" + sym + "'");
    }
    const auto gen = static_cast<std::size_t>(it - names.begin());
    const bool inv = power < 0;
    for (std::int64_t k = 0; k < (inv ? -power : power); ++k) out.push_back({gen, inv});
  }
  return out;
}

/// Parses an element in word syntax or, for non-free models, the bracketed
/// normal form.
inline Element parse_element(const GroupSpec& spec, std::string_view text,
                             std::size_t base_column = 0) {
  detail::Cursor cur{text, 0, base_column};
  cur.skip_ws();
  if (cur.peek() != '[') {
    Word w = parse_word(spec, text, base_column);
    return evaluate_word(spec, w);
  }
  if (spec.model() == Model::Free) cur.fail("free group elements use word syntax");
  std::size_t rows = 0;
  auto nf = detail::parse_bracket(cur, rows);
  cur.skip_ws();
  if (!cur.done()) cur.fail("trailing characters after element");
  if (spec.model() == Model::Matrix) {
    if (rows != 2 || nf.size() != 4) cur.fail("expected [[a,b],[c,d]]");
  } else if (rows != 0) {
    cur.fail("expected a flat integer list");
  }
  if (spec.model() == Model::Cyclic && nf.size() == 1) {
    const auto n = static_cast<std::int64_t>(spec.parameter());
    nf[0] = ((nf[0] % n) + n) % n;
  }
  Element e{std::move(nf)};
  if (!is_valid(spec, e)) throw ParseError("not a valid element of " + spec.to_string(), 1, base_column + 1);
  return e;
}

/// Splits on commas that are not nested inside brackets, trimming spaces.
inline std::vector<std::pair<std::string, std::size_t>> split_top_level(
    std::string_view text) {
  std::vector<std::pair<std::string, std::size_t>> out;
  int depth = 0;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::size_t b = start, e = end;
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    out.emplace_back(std::string(text.substr(b, e - b)), b);
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '[') ++depth;
    else if (text[i] == ']') --depth;
    else if (text[i] == ',' && depth == 0) {
      flush(i);
      start = i + 1;
    }
  }
  flush(text.size());
  return out;
}

/// Comma-separated element list, e.g. `1,a` or `1, b, c`.
inline std::vector<Element> parse_element_list(const GroupSpec& spec,
                                               std::string_view text) {
  std::vector<Element> out;
  for (auto& [item, col] : split_top_level(text)) {
    if (item.empty()) throw ParseError("empty list item", 1, col + 1);
    out.push_back(parse_element(spec, item, col));
  }
  return out;
}

/// Parses `free:r`, `abelian:r`, `cyclic:n`, `sl2z` or `sl2z:<4k integers>`.
inline GroupSpec parse_group_spec(std::string_view text) {
  const auto colon = text.find(':');
  const std::string head(text.substr(0, colon));
  const std::string_view rest =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  auto positive = [&](std::string_view s) -> std::size_t {
    detail::Cursor cur{s, 0, colon + 1};
    const auto v = cur.integer();
    cur.skip_ws();
    if (!cur.done()) cur.fail("trailing characters in group spec");
    if (v < 1) throw ParseError("group parameter must be positive", 1, colon + 2);
    return static_cast<std::size_t>(v);
  };
  if (head == "free" || head == "abelian" || head == "cyclic") {
    if (colon == std::string_view::npos)
      throw ParseError("missing ':' parameter in group spec", 1, text.size() + 1);
    const std::size_t p = positive(rest);
    if (head == "free") return GroupSpec::free(p);
    if (head == "abelian") return GroupSpec::free_abelian(p);
    return GroupSpec::cyclic(p);
  }
  if (head == "sl2z") {
    if (colon == std::string_view::npos) return GroupSpec::sl2z();
    std::vector<std::int64_t> vals;
    for (auto& [item, col] : split_top_level(rest)) {
      detail::Cursor cur{item, 0, colon + 1 + col};
      vals.push_back(cur.integer());
      cur.skip_ws();
      if (!cur.done()) cur.fail("expected integer");
    }
    if (vals.empty() || vals.size() % 4 != 0)
      throw ParseError("sl2z generators need a multiple of 4 integers", 1, colon + 2);
    std::vector<Mat2> mats;
    for (std::size_t i = 0; i < vals.size(); i += 4)
      mats.push_back({vals[i], vals[i + 1], vals[i + 2], vals[i + 3]});
    try {
      return GroupSpec::sl2z(std::move(mats));
    } catch (const PreconditionError& e) {
      throw ParseError(e.what(), 1, colon + 2);
    }
  }
  throw ParseError("unknown group model '" + head + "'", 1, 1);
}

}  // namespace tarski

template <>
struct std::hash<tarski::Element> : tarski::ElementHash {};
