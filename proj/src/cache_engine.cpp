#include "infersim/cache_engine.hpp"

#include <stdexcept>

namespace infersim {

double cache_hit_ratio(const CacheStats& stats) {
    if (stats.lookups == 0)
        throw std::domain_error("cache hit ratio undefined: no eligible lookups");
    return static_cast<double>(stats.hits) / static_cast<double>(stats.lookups);
}

std::size_t PrefixCache::VecHash::operator()(const std::vector<std::int32_t>& v) const {
    // FNV-1a over the token IDs
    std::size_t h = 14695981039346656037ull;
    for (std::int32_t id : v) {
        h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(id));
        h *= 1099511628211ull;
    }
    return h;
}

PrefixCache::PrefixCache(std::int64_t capacity, std::int64_t prefix_len)
    : capacity_(static_cast<std::size_t>(capacity)),
      prefix_len_(static_cast<std::size_t>(prefix_len)) {
    if (capacity < 1) throw std::invalid_argument("prefix cache capacity must be >= 1");
    if (prefix_len < 0) throw std::invalid_argument("prefix length must be >= 0");
}

CacheDecision PrefixCache::access(const std::string& session_id,
                                  std::span<const std::int32_t> input_token_ids) {
    // strictly longer than the prefix: a prompt of exactly prefix_len tokens
    // is not cacheable, and prefix_len 0 disables the cache entirely
    if (prefix_len_ == 0 || input_token_ids.size() <= prefix_len_) return {false, false};

    std::vector<std::int32_t> key(input_token_ids.begin(),
                                  input_token_ids.begin() + static_cast<std::ptrdiff_t>(prefix_len_));
    Session& session = sessions_[session_id];
    stats_.lookups += 1;

    if (auto it = session.index.find(key); it != session.index.end()) {
        stats_.hits += 1;
        session.order.splice(session.order.begin(), session.order, it->second);  // refresh to MRU
        return {true, true};
    }

    stats_.misses += 1;
    if (session.order.size() >= capacity_) {
        session.index.erase(session.order.back());
        session.order.pop_back();
        stats_.evictions += 1;
    }
    session.order.push_front(std::move(key));
    session.index.emplace(session.order.front(), session.order.begin());
    stats_.insertions += 1;
    return {true, false};
}

CacheDecision try_prefix_hit(PrefixCache& cache, const WorkloadTask& task,
                             const SimParams& params) {
    if (params.prefix_min_len <= 0 || task.input_token_ids.empty()) return {false, false};
    return cache.access(task.session_id, task.input_token_ids);
}

std::int64_t kv_cache_bytes(const LlmConfig& llm, std::int64_t n_tokens) {
    if (n_tokens < 0) throw std::invalid_argument("kv_cache_bytes: n_tokens must be >= 0");
    return 2 * llm.layers * llm.heads * llm.head_dim * n_tokens * llm.bytes_per_param;
}

}  // namespace infersim
