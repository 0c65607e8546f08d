// invar: constructors, Groebner tools and the claim checks on the command line.
//
// Exit codes: 0 success (VERIFIED / PROBABLE, or member), 1 REFUTED (or not a
// member), 2 usage, parse or resource errors and SKIPPED claims.

#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "invar/cache.hpp"
#include "invar/error.hpp"
#include "invar/fsing.hpp"
#include "invar/groebner.hpp"
#include "invar/invariants.hpp"
#include "invar/poly_io.hpp"
#include "invar/report.hpp"

using namespace invar;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitError = 2;

struct Flags {
  std::optional<std::uint64_t> p;
  unsigned e = 1;
  std::optional<unsigned> n;
  std::optional<std::uint64_t> q;
  std::optional<unsigned> i;
  std::string order = "grevlex";
  bool order_given = false;
  std::uint64_t seed = 1;
  unsigned trials = 20;
  unsigned ext_degree = 32;
  unsigned e_max = 4;
  std::size_t max_terms = 10'000'000;
  std::size_t max_pairs = 1'000'000;
  std::string cache_dir;
  std::string output = "text";
  std::string out;
  std::string mode;
};

// The shared flags; each mirrors an INVAR_* environment variable.
void add_config_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--seed", f.seed, "Seed for every random choice")->envname("INVAR_SEED");
  sub->add_option("--trials", f.trials, "Trials for probabilistic identity checks")->envname("INVAR_TRIALS");
  sub->add_option("--ext-degree", f.ext_degree, "Degree k of the evaluation field GF(p^k)")->envname("INVAR_EXT_DEGREE");
  sub->add_option("--e-max", f.e_max, "Largest Frobenius exponent tried by closure searches")->envname("INVAR_E_MAX");
  sub->add_option("--max-terms", f.max_terms, "Term guard per polynomial")->envname("INVAR_MAX_TERMS");
  sub->add_option("--max-pairs", f.max_pairs, "S-pair guard for Buchberger")->envname("INVAR_MAX_PAIRS");
  sub->add_option("--cache-dir", f.cache_dir, "Directory for cached constructions")->envname("INVAR_CACHE_DIR");
  sub->add_option("--output", f.output, "Report format")
      ->envname("INVAR_OUTPUT")
      ->check(CLI::IsMember({"text", "machine"}));
}

void add_order_flag(CLI::App* sub, Flags& f) {
  sub->add_option("--order", f.order, "Monomial order: grevlex, lex or elim:k")->envname("INVAR_ORDER");
}

fsing::CheckConfig make_config(const Flags& f) {
  fsing::CheckConfig c;
  c.seed = f.seed;
  c.trials = f.trials;
  c.ext_degree = f.ext_degree;
  c.e_max = f.e_max;
  c.limits.max_terms = f.max_terms;
  c.max_pairs = f.max_pairs;
  std::optional<cache::DiskCache> disk;
  if (!f.cache_dir.empty()) disk.emplace(f.cache_dir);
  c.dickson = cache::dickson_provider(std::move(disk));
  return c;
}

void emit(const Flags& f, const std::string& text) {
  if (f.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(f.out, text);
  }
}

std::uint64_t required(const std::optional<std::uint64_t>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing --") + flag);
  return *v;
}

unsigned required(const std::optional<unsigned>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing --") + flag);
  return *v;
}

RingPtr x_ring(const Flags& f, std::size_t n) {
  PolyLimits limits;
  limits.max_terms = f.max_terms;
  return Ring::indexed(gf::Field::make(required(f.p, "p")), n, "x", MonomialOrder::parse(f.order), limits);
}

std::uint64_t field_order(const Flags& f) {
  std::uint64_t q = 1;
  for (unsigned k = 0; k < f.e; ++k) q *= required(f.p, "p");
  return q;
}

std::string labelled_file(const Ring& ring, const std::vector<std::pair<std::string, Polynomial>>& polys) {
  std::string s = ring_header(ring);
  for (const auto& [label, poly] : polys) s += "# " + label + "\npoly: " + poly.to_string() + "\n";
  return s;
}

// ---------------------------------------------------------------------------

int cmd_dickson(const Flags& f) {
  const unsigned n = required(f.n, "n");
  const RingPtr ring = x_ring(f, n);
  const auto config = make_config(f);
  const auto c = config.dickson_of(ring, field_order(f));
  std::vector<std::pair<std::string, Polynomial>> out;
  for (std::size_t i = 0; i < c.size(); ++i) out.emplace_back("c_" + std::to_string(i) + ", degree " + std::to_string(c[i].degree()), c[i]);
  emit(f, labelled_file(*ring, out));
  return kExitOk;
}

int cmd_symplectic(const Flags& f) {
  const unsigned n = required(f.n, "n");
  const RingPtr ring = x_ring(f, 2 * n);
  const std::uint64_t q = field_order(f);
  std::vector<std::pair<std::string, Polynomial>> out;
  for (unsigned i = 1; i <= 2 * n - 1; ++i) out.emplace_back("xi_" + std::to_string(i), inv::symplectic_xi(ring, q, i));
  emit(f, labelled_file(*ring, out));
  return kExitOk;
}

int cmd_altn(const Flags& f) {
  const unsigned n = required(f.n, "n");
  const RingPtr ring = x_ring(f, n);
  std::vector<std::pair<std::string, Polynomial>> out;
  for (unsigned i = 1; i <= n; ++i) out.emplace_back("e_" + std::to_string(i), inv::elementary_symmetric(ring, i));
  out.emplace_back("Delta", inv::vandermonde(ring));
  emit(f, labelled_file(*ring, out));
  return kExitOk;
}

IdealBasis read_ideal(const std::string& path, const Flags& f) {
  PolyFile file = read_poly_file(path);
  if (file.polys.empty()) throw UsageError("'" + path + "' holds no poly: lines");
  IdealBasis basis(file.polys);
  if (f.order_given) basis = basis.change_ring(basis.ring()->with_order(MonomialOrder::parse(f.order)));
  return basis;
}

int cmd_gb(const std::string& ideal_path, const Flags& f) {
  const IdealBasis basis = read_ideal(ideal_path, f);
  fsing::CheckConfig config = make_config(f);
  const GroebnerBasis gb = buchberger(basis, config.groebner());
  emit(f, format_poly_file(*gb.ring(), gb.elements()));
  return kExitOk;
}

int cmd_member(const std::string& ideal_path, const std::string& element_path, const Flags& f) {
  const IdealBasis basis = read_ideal(ideal_path, f);
  PolyFile element_file = read_poly_file(element_path);
  if (element_file.polys.empty()) throw UsageError("'" + element_path + "' holds no poly: lines");
  const Polynomial element = element_file.polys.front().change_ring(basis.ring());
  fsing::CheckConfig config = make_config(f);
  fsing::Report r;
  r.claim_id = "member";
  r.witness_ring = basis.ring();
  r.memberships.push_back(fsing::membership_witness("element in ideal", element, basis.gens(), config.groebner()));
  const bool member = r.memberships.back().member;
  r.verdict = fsing::Verdict::Verified;
  std::cout << (member ? "member" : "not a member") << "\n";
  if (!f.out.empty()) write_text_file(f.out, fsing::format_witness_file(r));
  return member ? kExitOk : kExitRefuted;
}

int exit_for(fsing::Verdict v) {
  switch (v) {
    case fsing::Verdict::Verified:
    case fsing::Verdict::Probable: return kExitOk;
    case fsing::Verdict::Refuted: return kExitRefuted;
    case fsing::Verdict::Skipped: return kExitError;
  }
  return kExitError;
}

fsing::ClaimRequest request_from(const std::string& id, const Flags& f) {
  fsing::ClaimRequest rq;
  rq.id = id;
  rq.n = f.n;
  rq.p = f.p;
  rq.q = f.q;
  rq.i = f.i;
  rq.mode = f.mode;
  return rq;
}

int cmd_verify(const std::string& id, const Flags& f) {
  const fsing::CheckConfig config = make_config(f);
  const fsing::Report r = fsing::run_claim(request_from(id, f), config);
  std::string witness;
  if (!f.out.empty() && r.verdict != fsing::Verdict::Skipped) {
    witness = f.out + ".witness";
    write_text_file(witness, fsing::format_witness_file(r));
  }
  const std::string text = f.output == "machine" ? fsing::format_machine(r, witness) + "\n" : fsing::format_text(r, witness);
  std::cout << text;
  if (!f.out.empty()) write_text_file(f.out, text);
  return exit_for(r.verdict);
}

int cmd_replay(const std::string& path) {
  const fsing::WitnessFile file = fsing::parse_witness_file(read_text_file(path));
  std::string why;
  if (!fsing::check_witness_file(file, &why)) {
    std::cout << "invalid: " << why << "\n";
    return kExitRefuted;
  }
  std::cout << "valid: " << file.memberships.size() << " membership certificate(s)";
  if (!file.claim.empty()) std::cout << " for " << file.claim;
  std::cout << "\n";
  return kExitOk;
}

std::string summary_table(const std::vector<fsing::Report>& reports) {
  std::string s = "\nclaim            params                                        verdict        ms\n";
  for (const auto& r : reports) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-16s %-45s %-9s %9.1f\n", r.claim_id.c_str(), fsing::format_params(r, ' ').c_str(),
                  fsing::verdict_name(r.verdict).c_str(), r.elapsed_ms);
    s += buf;
  }
  return s;
}

int cmd_suite(const std::string& profile, const Flags& f) {
  const auto claims = fsing::suite_claims(profile);
  const fsing::CheckConfig config = make_config(f);
  if (!f.out.empty()) std::filesystem::create_directories(f.out);

  std::vector<std::optional<fsing::Report>> done(claims.size());
  std::vector<std::string> errors(claims.size());
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < claims.size();) {
      fsing::Report r;
      std::string err;
      try {
        r = fsing::run_claim(claims[k], config);
      } catch (const std::exception& e) {
        err = e.what();
      }
      std::lock_guard lock(mu);
      done[k] = std::move(r);
      errors[k] = std::move(err);
      cv.notify_all();
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), claims.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);

  // The single writer: records leave in registry order.
  std::vector<fsing::Report> reports;
  bool refuted = false, failed = false;
  for (std::size_t k = 0; k < claims.size(); ++k) {
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return done[k].has_value(); });
    fsing::Report r = std::move(*done[k]);
    const std::string err = errors[k];
    lock.unlock();
    if (!err.empty()) {
      std::cerr << "error in " << claims[k].id << ": " << err << "\n";
      failed = true;
      continue;
    }
    std::string witness;
    if (!f.out.empty() && r.verdict != fsing::Verdict::Skipped) {
      witness = (std::filesystem::path(f.out) / fsing::witness_file_name(r)).string();
      write_text_file(witness, fsing::format_witness_file(r));
    }
    if (f.output == "machine") {
      std::cout << fsing::format_machine(r, witness) << "\n" << std::flush;
    } else {
      std::cout << fsing::format_text(r, witness) << "\n" << std::flush;
    }
    refuted = refuted || r.verdict == fsing::Verdict::Refuted;
    reports.push_back(std::move(r));
  }
  for (auto& t : pool) t.join();
  const std::string table = summary_table(reports);
  if (f.output == "text") std::cout << table;
  if (!f.out.empty()) write_text_file((std::filesystem::path(f.out) / "summary.txt").string(), table);
  if (refuted) return kExitRefuted;
  return failed ? kExitError : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invar: modular invariants, Groebner bases and claim checks"};
  app.require_subcommand(1);
  Flags f;
  std::string claim, profile, ideal_path, element_path, witness_path;

  auto add_field_flags = [&](CLI::App* sub) {
    sub->add_option("--p", f.p, "Characteristic")->envname("INVAR_P");
    sub->add_option("--e", f.e, "Extension degree, q = p^e")->envname("INVAR_E");
    sub->add_option("--n", f.n, "Size parameter n")->envname("INVAR_N");
  };
  auto add_out = [&](CLI::App* sub, const char* what) {
    sub->add_option("--out", f.out, what)->envname("INVAR_OUT");
  };

  CLI::App* dickson = app.add_subcommand("dickson", "Dickson invariants c_0 .. c_(n-1) over F_q");
  add_field_flags(dickson);
  add_order_flag(dickson, f);
  add_config_flags(dickson, f);
  add_out(dickson, "Write the polynomial file here instead of stdout");

  CLI::App* symplectic = app.add_subcommand("symplectic", "xi_1 .. xi_(2n-1) in 2n variables over F_q");
  add_field_flags(symplectic);
  add_order_flag(symplectic, f);
  add_out(symplectic, "Write the polynomial file here instead of stdout");

  CLI::App* altn = app.add_subcommand("altn", "e_1 .. e_n and Delta over F_p");
  add_field_flags(altn);
  add_order_flag(altn, f);
  add_out(altn, "Write the polynomial file here instead of stdout");

  CLI::App* gb = app.add_subcommand("gb", "Reduced Groebner basis of an ideal file");
  gb->add_option("ideal", ideal_path, "Polynomial file with one generator per poly: line")->required();
  add_order_flag(gb, f);
  add_config_flags(gb, f);
  add_out(gb, "Write the basis here instead of stdout");

  CLI::App* member = app.add_subcommand("member", "Ideal membership with a certificate");
  member->add_option("ideal", ideal_path, "Polynomial file of generators")->required();
  member->add_option("element", element_path, "Polynomial file whose first poly: line is tested")->required();
  add_order_flag(member, f);
  add_config_flags(member, f);
  add_out(member, "Write the certificate file here");

  CLI::App* verify = app.add_subcommand("verify", "Run one claim check");
  verify->add_option("claim", claim, "Claim id")->required()->check(CLI::IsMember(fsing::claim_ids()));
  add_field_flags(verify);
  verify->add_option("--q", f.q, "Field order q")->envname("INVAR_Q");
  verify->add_option("--i", f.i, "Relation index (relations-n3; default all)");
  verify->add_option("--mode", f.mode, "exact, probabilistic or auto (sp4-c0, relations-n3)");
  add_config_flags(verify, f);
  add_out(verify, "Also write the report here, with the witness next to it");

  CLI::App* suite = app.add_subcommand("suite", "Run a profile of claim checks");
  suite->add_option("profile", profile, "quick or full")->required()->check(CLI::IsMember({"quick", "full"}));
  add_config_flags(suite, f);
  add_out(suite, "Directory for witness files and the summary table");

  CLI::App* replay = app.add_subcommand("replay", "Re-check the certificates in a witness file");
  replay->add_option("witness", witness_path, "Witness file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }
  for (auto* sub : {dickson, symplectic, altn, gb, member}) {
    if (auto* opt = sub->get_option_no_throw("--order"); opt && opt->count() > 0) f.order_given = true;
  }
  if (std::getenv("INVAR_ORDER")) f.order_given = true;

  try {
    if (*dickson) return cmd_dickson(f);
    if (*symplectic) return cmd_symplectic(f);
    if (*altn) return cmd_altn(f);
    if (*gb) return cmd_gb(ideal_path, f);
    if (*member) return cmd_member(ideal_path, element_path, f);
    if (*verify) return cmd_verify(claim, f);
    if (*suite) return cmd_suite(profile, f);
    if (*replay) return cmd_replay(witness_path);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitError;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
