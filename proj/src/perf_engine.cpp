#include "infersim/perf_engine.hpp"

#include <cmath>
#include <stdexcept>

namespace infersim {

double prefill_time(const LlmConfig& llm, const GpuConfig& gpu, const SimParams& params,
                    std::int64_t n_input_tokens) {
    if (n_input_tokens < 0) throw std::invalid_argument("prefill_time: n_input_tokens must be >= 0");
    const double flops = static_cast<double>(n_input_tokens) * static_cast<double>(llm.params) * 2.0;
    return flops / (gpu.fp16_flops_per_s * params.compute_efficiency) + params.prefill_overhead_s;
}

TokenTiming token_timing(const LlmConfig& llm, const GpuConfig& gpu, const SimParams& params) {
    TokenTiming t;
    const double weights = static_cast<double>(llm.params);
    t.compute_bound_s = 2.0 * weights / (gpu.fp16_flops_per_s * params.compute_efficiency);
    t.memory_bound_s = static_cast<double>(llm.bytes_per_param) * weights /
                       (gpu.bandwidth_bytes_per_s * params.memory_efficiency);
    t.per_token_s = std::max(t.compute_bound_s, t.memory_bound_s);
    return t;
}

double decode_time(const SimParams& params, const TokenTiming& timing,
                   std::int64_t n_output_tokens) {
    if (n_output_tokens < 0)
        throw std::invalid_argument("decode_time: n_output_tokens must be >= 0");
    const double n = static_cast<double>(n_output_tokens);
    if (params.kv_cache_enabled) return n * timing.per_token_s;
    // every step re-processes the whole context: 1 + 2 + ... + n weight passes
    return n * (n + 1.0) / 2.0 * timing.per_token_s;
}

std::int64_t snapshot_count(double prefill_s, double decode_s, double interval_s) {
    if (interval_s <= 0.0) throw std::invalid_argument("snapshot interval must be > 0");
    if (prefill_s < 0.0 || decode_s < 0.0)
        throw std::invalid_argument("phase durations must be >= 0");
    return static_cast<std::int64_t>(std::ceil((prefill_s + decode_s) / interval_s));
}

double gpu_utilization_at(double t, double prefill_s, double decode_s, const SimParams& params) {
    if (t < params.warm_s) return 0.5;
    if (t < prefill_s + decode_s - params.cool_s) return params.max_gpu_utilization;
    return 0.5;
}

TaskTiming task_timing(double prefill_s, double decode_s, const SimParams& params) {
    TaskTiming t;
    t.prefill_s = prefill_s;
    t.decode_s = decode_s;
    t.snapshot_interval_s = params.export_rate_s;
    t.snapshot_count = snapshot_count(prefill_s, decode_s, params.export_rate_s);
    return t;
}

void schedule_fragments(const WorkloadTask& task, const TaskTiming& timing,
                        std::int64_t kv_per_token_bytes, double start_s, const SimParams& params,
                        std::vector<FragmentSample>& out) {
    out.clear();
    out.reserve(static_cast<std::size_t>(timing.snapshot_count));
    const double total_s = timing.prefill_s + timing.decode_s;
    const double n_input = static_cast<double>(task.n_input_tokens);
    const double n_output = static_cast<double>(task.n_output_tokens);
    const double kv_per_token =
        params.kv_cache_enabled ? static_cast<double>(kv_per_token_bytes) : 0.0;

    for (std::int64_t k = 0; k < timing.snapshot_count; ++k) {
        const double t = static_cast<double>(k) * timing.snapshot_interval_s;
        FragmentSample frag;
        frag.task_index = task.task_index;
        frag.ts_s = start_s + t;
        frag.gpu_utilization = gpu_utilization_at(t, timing.prefill_s, timing.decode_s, params);

        const bool in_prefill = t < timing.prefill_s;
        if (t < params.warm_s)
            frag.phase = fragment_phase::warmup;
        else if (!(t < total_s - params.cool_s))
            frag.phase = fragment_phase::cooldown;
        else
            frag.phase = in_prefill ? fragment_phase::prefill : fragment_phase::decode;

        if (kv_per_token > 0.0) {
            if (in_prefill) {
                frag.kv_cache_bytes = static_cast<std::int64_t>(kv_per_token * n_input);
            } else {
                // context grows linearly from n_input to n_input + n_output
                const double generated =
                    timing.decode_s > 0.0
                        ? n_output * (t - timing.prefill_s) / timing.decode_s
                        : n_output;
                frag.kv_cache_bytes =
                    std::llround(kv_per_token * (n_input + generated));
            }
        }
        out.push_back(frag);
    }
}

std::vector<FragmentSample> schedule_fragments(const WorkloadTask& task, const TaskTiming& timing,
                                               std::int64_t kv_per_token_bytes, double start_s,
                                               const SimParams& params) {
    std::vector<FragmentSample> out;
    schedule_fragments(task, timing, kv_per_token_bytes, start_s, params, out);
    return out;
}

}  // namespace infersim
