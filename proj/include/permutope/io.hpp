#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "permutope/iso.hpp"
#include "permutope/ratmat.hpp"

namespace permutope {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Header "n <count> [directed]", then one "u v" edge per line (0-based).
/// Blank lines and '#' comments are ignored.
Graph parse_graph(std::istream& in, const std::string& source = "<input>");
Graph read_graph_file(const std::string& path);

/// Header "rows cols", then `rows` lines of `cols` rationals.
RatMatrix parse_matrix(std::istream& in, const std::string& source = "<input>");
RatMatrix read_matrix_file(const std::string& path);

/// Single-line JSON.
std::string verdict_to_json(const Verdict& v);
Verdict verdict_from_json(std::string_view text);

}  // namespace permutope
