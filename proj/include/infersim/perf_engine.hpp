#pragma once

#include <cstdint>
#include <vector>

#include "infersim/catalog.hpp"
#include "infersim/trace_io.hpp"

namespace infersim {

// Roofline split for one generated token: compute-bound time (weight FLOPs at
// effective compute rate) vs memory-bound time (weight bytes at effective
// bandwidth); the realised per-token latency is the larger of the two.
struct TokenTiming {
    double compute_bound_s = 0.0;
    double memory_bound_s = 0.0;
    double per_token_s = 0.0;
};

struct TaskTiming {
    double prefill_s = 0.0;
    double decode_s = 0.0;
    std::int64_t snapshot_count = 0;
    double snapshot_interval_s = 0.0;
};

// (n_input * params * 2) / (flops * compute_efficiency) + prefill_overhead;
// n_input == 0 degenerates to the overhead alone.
double prefill_time(const LlmConfig& llm, const GpuConfig& gpu, const SimParams& params,
                    std::int64_t n_input_tokens);

TokenTiming token_timing(const LlmConfig& llm, const GpuConfig& gpu, const SimParams& params);

// With the KV cache every step re-reads the weights once: n_output * per_token.
// Without it step k recomputes the k-token context: sum k=1..n, i.e.
// n*(n+1)/2 * per_token.
double decode_time(const SimParams& params, const TokenTiming& timing,
                   std::int64_t n_output_tokens);

// ceil((prefill_s + decode_s) / interval); throws on a non-positive interval.
std::int64_t snapshot_count(double prefill_s, double decode_s, double interval_s);

// Step profile over task-relative time t: 0.5 while warming up, the
// configured ceiling during steady state, 0.5 again during the cool-down tail.
double gpu_utilization_at(double t, double prefill_s, double decode_s, const SimParams& params);

TaskTiming task_timing(double prefill_s, double decode_s, const SimParams& params);

// Expands one task into its export-grid fragments at start_s + k*interval,
// k = 0..snapshot_count-1. Phase is prefill/decode by task-relative time,
// overridden to warmup/cooldown on the utilization tails. KV footprint is
// kv_per_token * n_input during prefill and grows linearly to
// n_input + n_output across decode; identically 0 when the KV cache is off.
// Power is left at 0 for the sustainability engine to fill in.
void schedule_fragments(const WorkloadTask& task, const TaskTiming& timing,
                        std::int64_t kv_per_token_bytes, double start_s, const SimParams& params,
                        std::vector<FragmentSample>& out);

std::vector<FragmentSample> schedule_fragments(const WorkloadTask& task, const TaskTiming& timing,
                                               std::int64_t kv_per_token_bytes, double start_s,
                                               const SimParams& params);

}  // namespace infersim
