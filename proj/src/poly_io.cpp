#include "invar/poly_io.hpp"

#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <optional>
#include <fstream>
#include <sstream>

#include "invar/error.hpp"

namespace invar {

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::vector<std::string> PolyFile::values(std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries) {
    if (k == key) out.push_back(v);
  }
  return out;
}

PolyFile parse_poly_file(std::string_view text) {
  std::optional<gf::Field> field;
  MonomialOrder order;
  std::optional<std::vector<std::string>> vars;
  PolyFile file;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = strip(text.substr(offset, end - offset));
    const std::size_t line_start = offset;
    offset = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", line_start);
    const std::string key(strip(line.substr(0, colon)));
    const std::string_view value = strip(line.substr(colon + 1));
    const auto value_offset = static_cast<std::size_t>(value.data() - text.data());
    if (key == "field") {
      try {
        field = gf::Field::parse_spec(value);
      } catch (const ParseError& e) {
        throw ParseError("bad field header: " + e.message(), value_offset + e.position());
      }
    } else if (key == "order") {
      order = MonomialOrder::parse(value);
    } else if (key == "vars") {
      vars = split_ws(value);
    } else {
      if (key == "poly" || key == "element" || key == "remainder") {
        if (!file.ring) {
          if (!field || !vars) throw ParseError("polynomial before the field/vars header", line_start);
          file.ring = Ring::make(*field, *vars, order);
        }
        try {
          Polynomial p = Polynomial::parse(file.ring, value);
          if (key == "poly") file.polys.push_back(std::move(p));
        } catch (const ParseError& e) {
          throw ParseError(e.message(), value_offset + e.position());
        }
      }
      file.entries.emplace_back(key, std::string(value));
    }
    if (end == text.size()) break;
  }
  if (!file.ring) {
    if (!field || !vars) throw ParseError("missing field or vars header", 0);
    file.ring = Ring::make(*field, *vars, order);
  }
  return file;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  // Write to a sibling temp file and rename so readers never see a torn file.
  static std::atomic<unsigned> counter{0};
  const std::string tmp = path + ".tmp" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
    if (!out) throw UsageError("write to '" + path + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw UsageError("cannot move '" + tmp + "' into place");
}

PolyFile read_poly_file(const std::string& path) { return parse_poly_file(read_text_file(path)); }

std::string ring_header(const Ring& ring) {
  std::string s = "field: " + ring.field().spec_string() + "\norder: " + ring.order().name() + "\nvars:";
  for (const auto& n : ring.names()) s += " " + n;
  s += "\n";
  return s;
}

std::string format_poly_file(const Ring& ring, const std::vector<Polynomial>& polys) {
  std::string s = ring_header(ring);
  for (const auto& p : polys) {
    require_same_context(*p.ring(), ring);
    s += "poly: " + p.to_string() + "\n";
  }
  return s;
}

std::string content_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace invar
