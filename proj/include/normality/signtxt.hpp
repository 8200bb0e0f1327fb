#pragma once

// Plain-text matrix format: one row per line, whitespace-separated entries,
// '#' starts a comment line, blank lines are skipped. Sign matrices accept
// '+', '-', '+1', '-1' and '1'; integer matrices take signed decimals.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"

namespace normality {

namespace detail {

inline std::vector<std::vector<std::string>> tokenize_rows(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    rows.push_back(std::move(tok));
  }
  return rows;
}

inline int parse_sign_token(const std::string& t) {
  if (t == "+" || t == "+1" || t == "1") return 1;
  if (t == "-" || t == "-1") return -1;
  throw InputError("signtxt: bad entry '" + t + "'");
}

inline std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

}  // namespace detail

inline SignMatrix parse_sign_matrix(std::istream& in) {
  const auto rows = detail::tokenize_rows(in);
  const std::size_t n = rows.size();
  if (n == 0) throw InputError("signtxt: no rows");
  std::vector<std::int8_t> e;
  e.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw InputError("signtxt: matrix is not square");
    for (const auto& t : r) e.push_back(static_cast<std::int8_t>(detail::parse_sign_token(t)));
  }
  return SignMatrix(n, std::move(e));
}

inline SignMatrix parse_sign_matrix(const std::string& text) {
  std::istringstream in(text);
  return parse_sign_matrix(in);
}

// Rectangular +/-1 matrix (for property-P inputs).
inline IntMatrix parse_pm1_matrix(std::istream& in) {
  const auto rows = detail::tokenize_rows(in);
  std::vector<std::vector<std::int64_t>> v;
  for (const auto& r : rows) {
    std::vector<std::int64_t> row;
    for (const auto& t : r) row.push_back(detail::parse_sign_token(t));
    v.push_back(std::move(row));
  }
  return IntMatrix::from_rows(v);
}

inline IntMatrix parse_int_matrix(std::istream& in) {
  const auto rows = detail::tokenize_rows(in);
  std::vector<std::vector<std::int64_t>> v;
  for (const auto& r : rows) {
    std::vector<std::int64_t> row;
    for (const auto& t : r) {
      std::size_t used = 0;
      std::int64_t x = 0;
      try {
        x = std::stoll(t, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != t.size()) throw InputError("matrix text: bad integer '" + t + "'");
      row.push_back(x);
    }
    v.push_back(std::move(row));
  }
  return IntMatrix::from_rows(v);
}

inline IntMatrix parse_int_matrix(const std::string& text) {
  std::istringstream in(text);
  return parse_int_matrix(in);
}

inline SignMatrix read_sign_matrix(const std::string& path) {
  auto in = detail::open_or_throw(path);
  return parse_sign_matrix(in);
}

inline IntMatrix read_int_matrix(const std::string& path) {
  auto in = detail::open_or_throw(path);
  return parse_int_matrix(in);
}

inline IntMatrix read_pm1_matrix(const std::string& path) {
  auto in = detail::open_or_throw(path);
  return parse_pm1_matrix(in);
}

inline std::string format_sign_matrix(const SignMatrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.n(); ++r) {
    for (std::size_t c = 0; c < m.n(); ++c) {
      if (c != 0) out += ' ';
      out += m(r, c) > 0 ? '+' : '-';
    }
    out += '\n';
  }
  return out;
}

inline std::string format_int_matrix(const IntMatrix& a) {
  std::string out;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (c != 0) out += ' ';
      out += std::to_string(a(r, c));
    }
    out += '\n';
  }
  return out;
}

// +/-1 rectangular matrices print with the sign alphabet.
inline std::string format_pm1_matrix(const IntMatrix& a) {
  std::string out;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (c != 0) out += ' ';
      out += a(r, c) > 0 ? '+' : '-';
    }
    out += '\n';
  }
  return out;
}

}  // namespace normality
