#pragma once

// Report rendering and witness files.
//
// A text report is a block of `key: value` lines:
//
//   claim: sp4-fpurity
//   params: q=2 e_max=4 relation=yes closure-e=1 seed=1
//   verdict: VERIFIED
//   witness: w in (u, v, F): not a member
//   witness-file: out/sp4-fpurity_q2.witness
//   elapsed-ms: 0.8
//   note: ...
//
// The machine form is one tab-separated line of key=value fields in a fixed
// order: claim, params, verdict, bound, elapsed-ms, witness-file, note.
//
// Witness files use the polynomial file format: the ring header, then one
// `witness:` record per fact with its polynomials on `element:`,
// `generator:`, `basis:`, `remainder:` lines and cofactors on `poly:` lines
// announced by `cofactor-of: k` or `basis-cofactor-of: i k`.

#include <string>
#include <string_view>
#include <vector>

#include "invar/fsing.hpp"

namespace invar::fsing {

// "2^-478.3", or "0" for a syntactic match.
std::string format_log2_bound(double log2_bound);

std::string format_params(const Report& r, char sep);
std::string format_text(const Report& r, const std::string& witness_file = {});
std::string format_machine(const Report& r, const std::string& witness_file = {});

// File name derived from the claim id and its parameters (seed excluded).
std::string witness_file_name(const Report& r);
std::string format_witness_file(const Report& r);

struct WitnessFile {
  std::string claim;
  std::string params;
  std::string verdict;
  RingPtr ring;
  std::vector<MembershipWitness> memberships;
  std::vector<std::vector<std::uint64_t>> tuples;
  std::vector<std::pair<std::string, std::string>> other;  // identity and evaluation lines, kept verbatim
};

WitnessFile parse_witness_file(std::string_view text);
// Re-checks every membership certificate in the file.
bool check_witness_file(const WitnessFile& file, std::string* why = nullptr);

}  // namespace invar::fsing
