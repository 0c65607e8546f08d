#include "invar/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "invar/error.hpp"
#include "invar/poly_io.hpp"

namespace invar::fsing {

std::string format_log2_bound(double log2_bound) {
  if (std::isinf(log2_bound) && log2_bound < 0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "2^%.1f", log2_bound);
  return buf;
}

std::string format_params(const Report& r, char sep) {
  std::string s;
  for (const auto& [k, v] : r.params) {
    if (!s.empty()) s += sep;
    s += k + "=" + v;
  }
  return s;
}

namespace {

std::string format_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", ms);
  return buf;
}

std::string verdict_text(const Report& r) {
  std::string s = verdict_name(r.verdict);
  if (r.verdict == Verdict::Probable && r.log2_bound) s += " (error bound " + format_log2_bound(*r.log2_bound) + ")";
  return s;
}

}  // namespace

std::string format_text(const Report& r, const std::string& witness_file) {
  std::string s = "claim: " + r.claim_id + "\n";
  s += "params: " + format_params(r, ' ') + "\n";
  s += "verdict: " + verdict_text(r) + "\n";
  for (const auto& m : r.memberships) s += "witness: " + m.label + (m.member ? ": member" : ": not a member") + "\n";
  for (const auto& id : r.identities) {
    s += "witness: " + id.label + (id.equal ? ": equal, hash " + id.hash : ": differs at " + id.monomial) + "\n";
  }
  for (const auto& ev : r.evaluations) {
    s += "witness: " + ev.label + ": " + std::to_string(ev.trials) + " trials over " + ev.field +
         (ev.equal ? ", bound " + format_log2_bound(ev.log2_bound) : ", differs at a recorded point") + "\n";
  }
  if (!witness_file.empty()) s += "witness-file: " + witness_file + "\n";
  s += "elapsed-ms: " + format_ms(r.elapsed_ms) + "\n";
  if (!r.note.empty()) s += "note: " + r.note + "\n";
  return s;
}

std::string format_machine(const Report& r, const std::string& witness_file) {
  std::string s = "claim=" + r.claim_id;
  s += "\tparams=" + format_params(r, ',');
  s += "\tverdict=" + verdict_name(r.verdict);
  s += "\tbound=" + (r.log2_bound ? format_log2_bound(*r.log2_bound) : std::string("-"));
  s += "\telapsed-ms=" + format_ms(r.elapsed_ms);
  s += "\twitness-file=" + (witness_file.empty() ? std::string("-") : witness_file);
  s += "\tnote=" + r.note;
  return s;
}

std::string witness_file_name(const Report& r) {
  std::string s = r.claim_id;
  for (const auto& [k, v] : r.params) {
    if (k == "seed" || k == "candidate" || k == "closure-e") continue;
    s += "_" + k + v;
  }
  for (char& c : s) {
    if (c == '=' || c == ' ' || c == '/') c = '-';
  }
  return s + ".witness";
}

std::string format_witness_file(const Report& r) {
  std::ostringstream out;
  out << "claim: " << r.claim_id << "\n";
  out << "params: " << format_params(r, ' ') << "\n";
  out << "verdict: " << verdict_name(r.verdict) << "\n";
  if (r.witness_ring) out << ring_header(*r.witness_ring);
  for (const auto& m : r.memberships) {
    out << "witness: membership\nlabel: " << m.label << "\nmember: " << (m.member ? "yes" : "no") << "\n";
    out << "element: " << m.element.to_string() << "\n";
    for (const auto& g : m.generators) out << "generator: " << g.to_string() << "\n";
    if (m.member) {
      for (std::size_t k = 0; k < m.cofactors.size(); ++k) {
        if (m.cofactors[k].is_zero()) continue;
        out << "cofactor-of: " << k << "\npoly: " << m.cofactors[k].to_string() << "\n";
      }
    } else {
      for (const auto& b : m.basis) out << "basis: " << b.to_string() << "\n";
      out << "remainder: " << m.remainder.to_string() << "\n";
      for (std::size_t i = 0; i < m.basis_cofactors.size(); ++i) {
        for (std::size_t k = 0; k < m.basis_cofactors[i].size(); ++k) {
          if (m.basis_cofactors[i][k].is_zero()) continue;
          out << "basis-cofactor-of: " << i << " " << k << "\npoly: " << m.basis_cofactors[i][k].to_string() << "\n";
        }
      }
    }
  }
  for (const auto& t : r.tuples) {
    out << "witness: tuple\ntuple:";
    for (auto a : t) out << " " << a;
    out << "\n";
  }
  for (const auto& id : r.identities) {
    out << "witness: identity\nlabel: " << id.label << "\nequal: " << (id.equal ? "yes" : "no") << "\nterms: " << id.terms
        << "\nhash: " << id.hash << "\n";
    if (!id.equal) out << "monomial: " << id.monomial << "\n";
  }
  for (const auto& ev : r.evaluations) {
    out << "witness: evaluation\nlabel: " << ev.label << "\neval-field: " << ev.field << "\nseed: " << ev.seed
        << "\ntrials: " << ev.trials << "\ndegree: " << ev.degree << "\nbound: " << format_log2_bound(ev.log2_bound)
        << "\nequal: " << (ev.equal ? "yes" : "no") << "\n";
    for (const auto& x : ev.point) out << "point: " << x << "\n";
    if (!ev.equal) out << "lhs-value: " << ev.lhs_value << "\nrhs-value: " << ev.rhs_value << "\n";
  }
  return out.str();
}

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

WitnessFile parse_witness_file(std::string_view text) {
  WitnessFile file;
  std::optional<gf::Field> field;
  MonomialOrder order;
  std::optional<std::vector<std::string>> vars;
  std::optional<MembershipWitness> cur;
  // Target of the next poly: line.
  enum class Slot { None, Cofactor, BasisCofactor } slot = Slot::None;
  std::size_t slot_i = 0, slot_k = 0;

  auto ring = [&]() -> const RingPtr& {
    if (!file.ring) {
      if (!field || !vars) throw ParseError("polynomial before the field/vars header", 0);
      file.ring = Ring::make(*field, *vars, order);
    }
    return file.ring;
  };
  auto flush = [&] {
    if (cur) file.memberships.push_back(std::move(*cur));
    cur.reset();
  };
  auto need_cur = [&](std::size_t at) -> MembershipWitness& {
    if (!cur) throw ParseError("membership field outside a membership record", at);
    return *cur;
  };

  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = strip(text.substr(offset, end - offset));
    const std::size_t at = offset;
    offset = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", at);
    const std::string key(strip(line.substr(0, colon)));
    const std::string value(strip(line.substr(colon + 1)));
    auto poly = [&]() { return Polynomial::parse(ring(), value); };

    if (key == "claim") {
      file.claim = value;
    } else if (key == "params") {
      file.params = value;
    } else if (key == "verdict") {
      file.verdict = value;
    } else if (key == "field") {
      field = gf::Field::parse_spec(value);
    } else if (key == "order") {
      order = MonomialOrder::parse(value);
    } else if (key == "vars") {
      std::istringstream is(value);
      std::vector<std::string> names;
      for (std::string n; is >> n;) names.push_back(n);
      vars = std::move(names);
    } else if (key == "witness") {
      flush();
      slot = Slot::None;
      if (value == "membership") {
        cur.emplace(MembershipWitness{"", false, Polynomial(ring()), {}, {}, {}, {}, Polynomial(ring())});
      } else {
        file.other.emplace_back(key, value);
      }
    } else if (cur && key == "label") {
      cur->label = value;
    } else if (key == "member") {
      need_cur(at).member = value == "yes";
    } else if (key == "element") {
      need_cur(at).element = poly();
    } else if (key == "generator") {
      need_cur(at).generators.push_back(poly());
    } else if (key == "basis") {
      need_cur(at).basis.push_back(poly());
    } else if (key == "remainder") {
      need_cur(at).remainder = poly();
    } else if (key == "cofactor-of") {
      need_cur(at);
      slot = Slot::Cofactor;
      slot_k = std::stoul(value);
    } else if (key == "basis-cofactor-of") {
      need_cur(at);
      std::istringstream is(value);
      if (!(is >> slot_i >> slot_k)) throw ParseError("expected 'basis-cofactor-of: i k'", at);
      slot = Slot::BasisCofactor;
    } else if (key == "poly") {
      MembershipWitness& m = need_cur(at);
      const Polynomial p = poly();
      if (slot == Slot::Cofactor) {
        if (slot_k >= m.generators.size()) throw ParseError("cofactor index out of range", at);
        m.cofactors.resize(m.generators.size(), Polynomial(ring()));
        m.cofactors[slot_k] = p;
      } else if (slot == Slot::BasisCofactor) {
        if (slot_i >= m.basis.size() || slot_k >= m.generators.size()) throw ParseError("cofactor index out of range", at);
        m.basis_cofactors.resize(m.basis.size());
        for (auto& row : m.basis_cofactors) row.resize(m.generators.size(), Polynomial(ring()));
        m.basis_cofactors[slot_i][slot_k] = p;
      } else {
        throw ParseError("poly: line without a cofactor-of annotation", at);
      }
      slot = Slot::None;
    } else if (key == "tuple") {
      std::istringstream is(value);
      std::vector<std::uint64_t> t;
      for (std::uint64_t a; is >> a;) t.push_back(a);
      file.tuples.push_back(std::move(t));
    } else {
      file.other.emplace_back(key, value);
    }
  }
  flush();
  // A member with all-zero cofactors writes no cofactor lines.
  for (auto& m : file.memberships) {
    if (m.member) m.cofactors.resize(m.generators.size(), Polynomial(m.element.ring()));
    if (!m.member) {
      m.basis_cofactors.resize(m.basis.size());
      for (auto& row : m.basis_cofactors) row.resize(m.generators.size(), Polynomial(m.element.ring()));
    }
  }
  return file;
}

bool check_witness_file(const WitnessFile& file, std::string* why) {
  for (const auto& m : file.memberships) {
    if (!check_membership_witness(m, why)) return false;
  }
  return true;
}

}  // namespace invar::fsing
