#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace infersim {

// Architectural description of a transformer model. `params` is the absolute
// parameter count (not billions); `bytes_per_param` is the weight precision
// (1 = int8, 2 = fp16/bf16, 4 = fp32).
struct LlmConfig {
    std::string name;
    std::int64_t params = 0;
    std::int64_t layers = 0;
    std::int64_t heads = 0;
    std::int64_t head_dim = 0;
    std::int64_t hidden_dim = 0;
    std::int64_t bytes_per_param = 2;
};

// Device description. Rates are decimal (bandwidth in bytes/s, compute in
// FLOP/s at fp16); power bounds in watts.
struct GpuConfig {
    std::string name;
    std::int64_t memory_bytes = 0;
    double bandwidth_bytes_per_s = 0.0;
    double fp16_flops_per_s = 0.0;
    std::int64_t cuda_cores = 0;
    std::int64_t boost_mhz = 0;
    double p_idle_w = 0.0;
    double p_max_w = 0.0;
};

enum class power_model_kind {
    sqrt,
    linear,
    square,
    cubic,
    mse,
    asymptotic,
    asymptotic_dvfs,
};

power_model_kind parse_power_model(const std::string& name);
std::string to_string(power_model_kind kind);

// Tunables shared by every engine. Defaults reproduce the reference setup:
// fp16 efficiency factors calibrated against SURF A10 measurements, 100 ms
// warm-up/cool-down tails at 50% utilization, 10 Hz export grid.
struct SimParams {
    double compute_efficiency = 0.30;
    double memory_efficiency = 0.60;
    double prefill_overhead_s = 0.025;
    double max_gpu_utilization = 0.95;
    double warm_s = 0.1;
    double cool_s = 0.1;
    double export_rate_s = 0.1;
    bool kv_cache_enabled = true;
    std::int64_t prefix_min_len = 256;
    std::int64_t prefix_cache_capacity = 8;
    power_model_kind power_model = power_model_kind::linear;
    double alpha = 0.3;
    double r = 1.4;
    double price_per_hour = 1.2;
};

SimParams default_params();
void validate(const SimParams& params);

// Validating constructors for user-defined entries; throw std::invalid_argument
// on violated invariants (positive counts, heads*head_dim == hidden_dim,
// bytes_per_param in {1,2,4}, 0 < p_idle < p_max).
void validate(const LlmConfig& llm);
void validate(const GpuConfig& gpu);

// Catalog of known hardware/model configurations. Prefabs are embedded;
// register_* adds user entries (name collisions overwrite); load_*_csv reads
// a comma-separated file whose header row matches the struct field names.
class Catalog {
  public:
    Catalog();  // seeded with the four prefab LLMs and two prefab GPUs

    const LlmConfig& lookup_llm(const std::string& name) const;
    const GpuConfig& lookup_gpu(const std::string& name) const;

    void register_llm(LlmConfig llm);
    void register_gpu(GpuConfig gpu);

    std::size_t load_llm_csv(const std::string& path);
    std::size_t load_gpu_csv(const std::string& path);

    std::vector<std::string> llm_names() const;
    std::vector<std::string> gpu_names() const;

  private:
    std::vector<LlmConfig> llms_;
    std::vector<GpuConfig> gpus_;
};

}  // namespace infersim
