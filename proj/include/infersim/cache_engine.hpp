#pragma once

#include <cstdint>
#include <list>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "infersim/catalog.hpp"
#include "infersim/trace_io.hpp"

namespace infersim {

struct CacheStats {
    std::int64_t lookups = 0;  // eligible prompts only
    std::int64_t hits = 0;
    std::int64_t misses = 0;
    std::int64_t insertions = 0;
    std::int64_t evictions = 0;
};

// hits / lookups; throws std::domain_error when no lookup ever happened.
double cache_hit_ratio(const CacheStats& stats);

struct CacheDecision {
    bool eligible = false;
    bool hit = false;
};

// Exact-match prompt-prefix cache, LRU per session with a fixed per-session
// capacity (in prompts). A prompt is eligible only when it is strictly longer
// than prefix_len tokens; the key is its first prefix_len token IDs. Hits
// refresh recency, eligible misses insert (evicting the least recently used
// entry when full), ineligible prompts touch neither the cache nor the stats.
class PrefixCache {
  public:
    PrefixCache(std::int64_t capacity, std::int64_t prefix_len);

    CacheDecision access(const std::string& session_id,
                         std::span<const std::int32_t> input_token_ids);

    const CacheStats& stats() const { return stats_; }

  private:
    struct VecHash {
        std::size_t operator()(const std::vector<std::int32_t>& v) const;
    };
    struct Session {
        std::list<std::vector<std::int32_t>> order;  // front = MRU
        std::unordered_map<std::vector<std::int32_t>, std::list<std::vector<std::int32_t>>::iterator,
                           VecHash>
            index;
    };

    std::size_t capacity_;
    std::size_t prefix_len_;
    std::unordered_map<std::string, Session> sessions_;
    CacheStats stats_;
};

// Cache step of the task pipeline: consults the cache only when prefix
// caching is enabled (prefix_min_len > 0) and the task carries token IDs.
CacheDecision try_prefix_hit(PrefixCache& cache, const WorkloadTask& task,
                             const SimParams& params);

// Bytes held by the KV cache for n_tokens context:
//   2 (K and V) * layers * heads * head_dim * n_tokens * bytes_per_param.
std::int64_t kv_cache_bytes(const LlmConfig& llm, std::int64_t n_tokens);

}  // namespace infersim
