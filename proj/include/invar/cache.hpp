#pragma once

// On-disk cache for expensive constructions, keyed by (construction, n, q,
// ring).  Each entry is a polynomial file preceded by a content hash of the
// body; a mismatch means the entry is recomputed, never reused.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "invar/fsing.hpp"
#include "invar/mpoly.hpp"

namespace invar::cache {

class DiskCache {
 public:
  explicit DiskCache(std::string dir);

  const std::string& dir() const { return dir_; }
  std::string path_for(const std::string& construction, std::size_t n, std::uint64_t q, const Ring& ring) const;

  // nullopt when absent, unreadable or failing its hash.
  std::optional<std::vector<Polynomial>> load(const std::string& construction, std::size_t n, std::uint64_t q,
                                              const RingPtr& ring) const;
  void store(const std::string& construction, std::size_t n, std::uint64_t q, const Ring& ring,
             const std::vector<Polynomial>& polys) const;

 private:
  std::string dir_;
};

// Dickson invariants served from memory, then from `cache` (when given), then
// computed and stored.  Safe to call from several threads.
fsing::DicksonProvider dickson_provider(std::optional<DiskCache> cache);

}  // namespace invar::cache
