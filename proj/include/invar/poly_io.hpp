#pragma once

// The polynomial file format:
//
//   field: 3^1
//   order: grevlex
//   vars: x1 x2 x3
//   poly: x1^2*x2 + 2
//
// Lines are `key: value`; blank lines and `#` comments are ignored.  Keys
// other than field/order/vars/poly are kept in order as annotations so that
// certificates and reports can reuse the same reader.

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "invar/mpoly.hpp"

namespace invar {

struct PolyFile {
  RingPtr ring;
  std::vector<Polynomial> polys;
  // Every non-header line in file order, including the poly: lines.
  std::vector<std::pair<std::string, std::string>> entries;

  // Values of every line with this key.
  std::vector<std::string> values(std::string_view key) const;
};

PolyFile parse_poly_file(std::string_view text);
PolyFile read_poly_file(const std::string& path);

std::string ring_header(const Ring& ring);
std::string format_poly_file(const Ring& ring, const std::vector<Polynomial>& polys);

void write_text_file(const std::string& path, std::string_view text);
std::string read_text_file(const std::string& path);

// 64-bit FNV-1a, rendered as 16 hex digits.
std::string content_hash(std::string_view text);

}  // namespace invar
