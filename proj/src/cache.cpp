#include "invar/cache.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "invar/error.hpp"
#include "invar/invariants.hpp"
#include "invar/poly_io.hpp"

namespace invar::cache {

namespace {

constexpr std::string_view kHashKey = "content-hash: ";

}  // namespace

DiskCache::DiskCache(std::string dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw UsageError("cannot create cache directory '" + dir_ + "': " + ec.message());
}

std::string DiskCache::path_for(const std::string& construction, std::size_t n, std::uint64_t q, const Ring& ring) const {
  // The ring header pins field, order and variable names.
  const std::string ring_key = content_hash(ring_header(ring)).substr(0, 8);
  return (std::filesystem::path(dir_) /
          (construction + "-n" + std::to_string(n) + "-q" + std::to_string(q) + "-" + ring_key + ".poly"))
      .string();
}

std::optional<std::vector<Polynomial>> DiskCache::load(const std::string& construction, std::size_t n, std::uint64_t q,
                                                       const RingPtr& ring) const {
  const std::string path = path_for(construction, n, q, *ring);
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    const std::string text = read_text_file(path);
    if (text.compare(0, kHashKey.size(), kHashKey) != 0) return std::nullopt;
    const std::size_t eol = text.find('\n');
    if (eol == std::string::npos) return std::nullopt;
    const std::string stored = text.substr(kHashKey.size(), eol - kHashKey.size());
    const std::string_view body = std::string_view(text).substr(eol + 1);
    if (content_hash(body) != stored) {
      std::cerr << "cache: hash mismatch in " << path << ", recomputing\n";
      return std::nullopt;
    }
    PolyFile file = parse_poly_file(body);
    if (!file.ring->same_context(*ring)) return std::nullopt;
    std::vector<Polynomial> out;
    for (const auto& p : file.polys) out.push_back(p.change_ring(ring));
    return out;
  } catch (const Error& e) {
    std::cerr << "cache: unreadable entry " << path << " (" << e.what() << "), recomputing\n";
    return std::nullopt;
  }
}

void DiskCache::store(const std::string& construction, std::size_t n, std::uint64_t q, const Ring& ring,
                      const std::vector<Polynomial>& polys) const {
  const std::string body = format_poly_file(ring, polys);
  write_text_file(path_for(construction, n, q, ring), std::string(kHashKey) + content_hash(body) + "\n" + body);
}

fsing::DicksonProvider dickson_provider(std::optional<DiskCache> cache) {
  struct State {
    std::mutex mu;
    std::map<std::tuple<std::string, std::uint64_t>, std::vector<Polynomial>> memo;
  };
  auto state = std::make_shared<State>();
  return [state, cache = std::move(cache)](const RingPtr& ring, std::uint64_t q) {
    const auto key = std::make_tuple(ring_header(*ring), q);
    {
      std::lock_guard lock(state->mu);
      if (auto it = state->memo.find(key); it != state->memo.end()) return it->second;
    }
    std::optional<std::vector<Polynomial>> polys;
    if (cache) polys = cache->load("dickson", ring->nvars(), q, ring);
    if (!polys) {
      polys = inv::dickson_invariants(ring, q);
      if (cache) cache->store("dickson", ring->nvars(), q, *ring, *polys);
    }
    std::lock_guard lock(state->mu);
    state->memo.emplace(key, *polys);
    return *polys;
  };
}

}  // namespace invar::cache
