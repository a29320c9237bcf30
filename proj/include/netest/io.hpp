#pragma once

// Plain-text file formats:
//   dense CSV    one matrix row per line, comma separated, no header
//   edge list    "i j w" per line, 1-based, whitespace separated; '#' comments
//   modules      one module id per line, line k is node k
//   mask         dense CSV of 0/1 flags (1 = missing)

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "netest/netcore.hpp"

namespace netest::io {

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes to a sibling temporary file and renames it over the target.
inline void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::IoFailure, "cannot rename into " + path.string());
  }
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline double parse_double(std::string_view tok, std::size_t line) {
  tok = trim(tok);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ": bad number '" + std::string(tok) + "'");
  }
  return v;
}

inline long parse_long(std::string_view tok, std::size_t line) {
  tok = trim(tok);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ": bad integer '" + std::string(tok) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    lines.push_back(text.substr(pos, end - pos));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

}  // namespace detail

/// Parses a dense CSV matrix without validating it.
inline Matrix parse_csv_matrix(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  for (auto line : detail::split_lines(text)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      row.push_back(detail::parse_double(line.substr(pos, comma - pos), line_no));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  const auto r = static_cast<Index>(rows.size());
  const auto c = rows.empty() ? Index{0} : static_cast<Index>(rows.front().size());
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

/// 17 significant digits, so a write/read round trip is exact.
inline std::string format_csv_matrix(const Matrix& m) {
  std::string out;
  char buf[40];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

inline Matrix read_csv_matrix(const std::filesystem::path& path) {
  return parse_csv_matrix(read_text(path));
}

inline WeightMatrix load_dense(const std::filesystem::path& path) {
  return validate(read_csv_matrix(path));
}

inline void save_dense(const std::filesystem::path& path, const Matrix& m) {
  write_text_atomic(path, format_csv_matrix(m));
}

/// Edge list to dense matrix. Pairs listed in one direction only are
/// mirrored; unlisted pairs are 0. `n` fixes the node count, otherwise the
/// largest index seen is used.
inline Matrix parse_edge_list(std::string_view text, std::optional<Index> n = std::nullopt) {
  struct Edge {
    Index i, j;
    double w;
  };
  std::vector<Edge> edges;
  Index max_index = 0;
  std::size_t line_no = 0;
  for (auto line : detail::split_lines(text)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    std::vector<std::string_view> toks;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto start = line.find_first_not_of(" \t", pos);
      if (start == std::string_view::npos) break;
      const auto end = line.find_first_of(" \t", start);
      toks.push_back(line.substr(start, end == std::string_view::npos ? end : end - start));
      pos = end == std::string_view::npos ? line.size() : end;
    }
    if (toks.size() != 3) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": expected 'i j w'");
    }
    const long i = detail::parse_long(toks[0], line_no);
    const long j = detail::parse_long(toks[1], line_no);
    if (i < 1 || j < 1) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": indices are 1-based");
    }
    edges.push_back({i - 1, j - 1, detail::parse_double(toks[2], line_no)});
    max_index = std::max<Index>(max_index, std::max<Index>(i, j));
  }
  const Index size = n.value_or(max_index);
  if (max_index > size) {
    throw Error(ErrorCode::IndexOutOfRange, "edge index " + std::to_string(max_index) +
                                                " exceeds node count " + std::to_string(size));
  }
  Matrix m = Matrix::Zero(size, size);
  BoolMatrix seen = BoolMatrix::Constant(size, size, false);
  for (const auto& e : edges) {
    m(e.i, e.j) = e.w;
    seen(e.i, e.j) = true;
  }
  for (const auto& e : edges) {
    if (!seen(e.j, e.i)) m(e.j, e.i) = e.w;
  }
  return m;
}

inline WeightMatrix load_edge_list(const std::filesystem::path& path,
                                   std::optional<Index> n = std::nullopt) {
  return validate(parse_edge_list(read_text(path), n));
}

inline std::string format_edge_list(const Matrix& m) {
  std::string out;
  char buf[96];
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = i + 1; j < m.cols(); ++j) {
      if (m(i, j) == 0.0) continue;
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", static_cast<long>(i + 1),
                    static_cast<long>(j + 1), m(i, j));
      out += buf;
    }
  return out;
}

inline ModuleAssignment parse_modules(std::string_view text) {
  std::vector<int> ids;
  std::size_t line_no = 0;
  for (auto line : detail::split_lines(text)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) continue;
    ids.push_back(static_cast<int>(detail::parse_long(line, line_no)));
  }
  return ModuleAssignment(std::move(ids));
}

inline ModuleAssignment load_modules(const std::filesystem::path& path) {
  return parse_modules(read_text(path));
}

inline std::string format_modules(const ModuleAssignment& modules) {
  std::string out;
  for (int id : modules.modules()) out += std::to_string(id) + '\n';
  return out;
}

inline MissingMask load_mask(const std::filesystem::path& path) {
  const Matrix flags = read_csv_matrix(path);
  require_square(flags);
  BoolMatrix missing(flags.rows(), flags.cols());
  for (Index i = 0; i < flags.rows(); ++i)
    for (Index j = 0; j < flags.cols(); ++j) {
      if (flags(i, j) != 0.0 && flags(i, j) != 1.0) {
        throw Error(ErrorCode::ParseError, "mask entries must be 0 or 1", EntryIndex{i, j});
      }
      missing(i, j) = flags(i, j) == 1.0;
    }
  return MissingMask(std::move(missing));
}

inline std::string format_mask(const MissingMask& mask) {
  return format_csv_matrix(mask.selector());
}

}  // namespace netest::io
