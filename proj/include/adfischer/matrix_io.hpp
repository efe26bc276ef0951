#pragma once

// Plain-text matrix format: one row per line, entries separated by
// whitespace, each entry written as `a+bi` / `a-bi` with 17 significant
// digits. Blank lines and lines starting with '#' are ignored. Reading
// accepts `a`, `bi`, `i`, `a+i` and `a-i` as well.

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "adfischer/linalg.hpp"

namespace adfischer {

// Shortest round-trip form when precision < 0, otherwise %.{precision}g.
inline std::string format_double(double v, int precision = -1) {
  char buf[64];
  const auto res = precision < 0 ? std::to_chars(buf, buf + sizeof buf, v)
                                 : std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
  return std::string(buf, res.ptr);
}

inline std::string format_complex(Complex z) {
  std::string s = format_double(z.real(), 17);
  s += std::signbit(z.imag()) ? '-' : '+';
  s += format_double(std::abs(z.imag()), 17);
  s += 'i';
  return s;
}

namespace detail {

// Parses an optionally signed decimal at the start of `s`; returns chars consumed.
inline std::size_t parse_signed(std::string_view s, double& out) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    negative = s[pos] == '-';
    ++pos;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) return 0;
  }
  double v = 0;
  const auto res = std::from_chars(s.data() + pos, s.data() + s.size(), v);
  if (res.ec != std::errc{}) return 0;
  out = negative ? -v : v;
  return static_cast<std::size_t>(res.ptr - s.data());
}

}  // namespace detail

inline Complex parse_complex(std::string_view tok) {
  const auto fail = [&] { return ParseError("malformed complex entry '" + std::string(tok) + "'"); };
  if (tok.empty()) throw fail();
  if (tok == "i" || tok == "+i") return {0, 1};
  if (tok == "-i") return {0, -1};

  double first = 0;
  const std::size_t used = detail::parse_signed(tok, first);
  if (used == 0) throw fail();
  std::string_view rest = tok.substr(used);
  if (rest.empty()) return {first, 0};
  if (rest == "i") return {0, first};
  if (rest.back() != 'i' || (rest.front() != '+' && rest.front() != '-')) throw fail();
  rest.remove_suffix(1);
  if (rest == "+") return {first, 1};
  if (rest == "-") return {first, -1};
  double second = 0;
  if (detail::parse_signed(rest, second) != rest.size()) throw fail();
  return {first, second};
}

inline ComplexMatrix read_matrix(std::istream& in) {
  std::vector<Complex> entries;
  std::size_t cols = 0, rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    std::size_t count = 0;
    while (ls >> tok) {
      const Complex z = parse_complex(tok);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw ParseError("non-finite entry on line " + std::to_string(line_no));
      entries.push_back(z);
      ++count;
    }
    if (rows == 0) cols = count;
    else if (count != cols)
      throw ParseError("line " + std::to_string(line_no) + " has " + std::to_string(count) + " entries, expected " +
                       std::to_string(cols));
    ++rows;
  }
  if (rows == 0) throw ParseError("matrix input is empty");
  return ComplexMatrix(rows, cols, std::move(entries));
}

inline ComplexMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

inline void write_matrix(std::ostream& out, const ComplexMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_complex(m(i, j));
    }
    out << '\n';
  }
}

inline std::string matrix_to_string(const ComplexMatrix& m) {
  std::ostringstream os;
  write_matrix(os, m);
  return os.str();
}

inline ComplexMatrix matrix_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_matrix(is);
}

}  // namespace adfischer
