#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "cjfeast/error.hpp"
#include "cjfeast/sparse_matrix.hpp"

namespace cjfeast {

namespace {

enum class Format { Coordinate, Array };
enum class Field { Real, Integer, Pattern };
enum class Symmetry { General, Symmetric, SkewSymmetric };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next line that is neither blank nor a comment. False at end of input.
  bool next_data(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (blank(line) || line.front() == '%') continue;
      return true;
    }
    return false;
  }

  bool next_raw(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

std::size_t parse_index(const std::string& tok, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected a nonnegative integer, got '" + tok + "'");
  }
  return v;
}

double parse_value(const std::string& tok, std::size_t line) {
  // strtod accepts the Fortran-style exponents MM files sometimes carry once
  // 'd'/'D' is rewritten.
  std::string t = tok;
  std::replace(t.begin(), t.end(), 'd', 'e');
  std::replace(t.begin(), t.end(), 'D', 'e');
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) throw ParseError(line, "expected a number, got '" + tok + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite value '" + tok + "'");
  return v;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

}  // namespace

SparseMatrix parse_matrix_market(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next_raw(line)) throw ParseError(1, "empty input, missing %%MatrixMarket banner");

  const auto banner = tokens(line);
  if (banner.size() != 5 || lower(banner[0]) != "%%matrixmarket" || lower(banner[1]) != "matrix") {
    throw ParseError(1, "malformed banner '" + line + "'");
  }
  Format format;
  if (const auto f = lower(banner[2]); f == "coordinate") {
    format = Format::Coordinate;
  } else if (f == "array") {
    format = Format::Array;
  } else {
    throw ParseError(1, "unsupported format '" + banner[2] + "'");
  }
  Field field;
  if (const auto f = lower(banner[3]); f == "real" || f == "double") {
    field = Field::Real;
  } else if (f == "integer") {
    field = Field::Integer;
  } else if (f == "pattern") {
    field = Field::Pattern;
  } else {
    throw ParseError(1, "unsupported field '" + banner[3] + "' (only real, integer, pattern)");
  }
  Symmetry symmetry;
  if (const auto s = lower(banner[4]); s == "general") {
    symmetry = Symmetry::General;
  } else if (s == "symmetric") {
    symmetry = Symmetry::Symmetric;
  } else if (s == "skew-symmetric") {
    symmetry = Symmetry::SkewSymmetric;
  } else {
    throw ParseError(1, "unsupported symmetry '" + banner[4] + "'");
  }
  if (format == Format::Array && field == Field::Pattern) {
    throw ParseError(1, "pattern field is not valid for array format");
  }

  if (!reader.next_data(line)) throw ParseError(reader.number() + 1, "missing size line");
  const auto size = tokens(line);
  const std::size_t size_tokens = format == Format::Coordinate ? 3 : 2;
  if (size.size() != size_tokens) throw ParseError(reader.number(), "malformed size line");
  const std::size_t m = parse_index(size[0], reader.number());
  const std::size_t n = parse_index(size[1], reader.number());
  if (m == 0 || n == 0) throw ParseError(reader.number(), "matrix dimensions must be positive");
  if (symmetry != Symmetry::General && m != n) {
    throw ParseError(reader.number(), "symmetric storage requires a square matrix");
  }

  std::vector<Triplet> entries;
  auto add = [&](std::size_t i, std::size_t j, double v, std::size_t at) {
    if (symmetry == Symmetry::SkewSymmetric && i == j && v != 0.0) {
      throw ParseError(at, "skew-symmetric matrix with nonzero diagonal entry");
    }
    entries.push_back({i, j, v});
    if (symmetry != Symmetry::General && i != j) {
      entries.push_back({j, i, symmetry == Symmetry::SkewSymmetric ? -v : v});
    }
  };

  if (format == Format::Coordinate) {
    const std::size_t declared = parse_index(size[2], reader.number());
    entries.reserve(symmetry == Symmetry::General ? declared : 2 * declared);
    const std::size_t want = field == Field::Pattern ? 2 : 3;
    std::size_t seen = 0;
    while (reader.next_data(line)) {
      const std::size_t at = reader.number();
      if (seen == declared) throw ParseError(at, "more entries than the declared " + std::to_string(declared));
      const auto t = tokens(line);
      if (t.size() != want) throw ParseError(at, "expected " + std::to_string(want) + " fields");
      const std::size_t i = parse_index(t[0], at);
      const std::size_t j = parse_index(t[1], at);
      if (i < 1 || i > m || j < 1 || j > n) {
        throw ParseError(at, "index (" + t[0] + ", " + t[1] + ") outside declared bounds");
      }
      const double v = field == Field::Pattern ? 1.0 : parse_value(t[2], at);
      add(i - 1, j - 1, v, at);
      ++seen;
    }
    if (seen != declared) {
      throw ParseError(reader.number() + 1, "found " + std::to_string(seen) +
                                                " entries, declared " + std::to_string(declared));
    }
  } else {
    // Column-major; symmetric lists the lower triangle, skew the strict lower.
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t first = 0;
      if (symmetry == Symmetry::Symmetric) first = j;
      if (symmetry == Symmetry::SkewSymmetric) first = j + 1;
      for (std::size_t i = first; i < m; ++i) slots.emplace_back(i, j);
    }
    std::size_t seen = 0;
    while (reader.next_data(line)) {
      const std::size_t at = reader.number();
      for (const auto& tok : tokens(line)) {
        if (seen == slots.size()) throw ParseError(at, "more array entries than the matrix holds");
        const double v = parse_value(tok, at);
        add(slots[seen].first, slots[seen].second, v, at);
        ++seen;
      }
    }
    if (seen != slots.size()) {
      throw ParseError(reader.number() + 1, "found " + std::to_string(seen) +
                                                " array entries, expected " +
                                                std::to_string(slots.size()));
    }
  }
  return SparseMatrix::from_triplets(m, n, std::move(entries));
}

}  // namespace cjfeast
