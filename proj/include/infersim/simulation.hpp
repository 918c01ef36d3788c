#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "infersim/cache_engine.hpp"
#include "infersim/catalog.hpp"
#include "infersim/efficiency.hpp"
#include "infersim/trace_io.hpp"

namespace infersim {

struct RunConfig {
    LlmConfig llm;
    GpuConfig gpu;
    SimParams params;
    std::vector<WorkloadTask> tasks;
    std::vector<CarbonSample> carbon;  // empty = no carbon trace, CO2 omitted
    std::filesystem::path output_dir = "data/output_traces";
    std::size_t flush_size = 10000;
    bool write_outputs = true;
    bool collect_task_results = false;  // fill RunSummary::task_results (tests, embedding)
};

struct RunSummary {
    std::int64_t task_count = 0;
    double total_prefill_s = 0.0;
    double total_decode_s = 0.0;
    double total_gpu_hours = 0.0;
    double mean_throughput_tps = 0.0;
    std::int64_t total_input_tokens = 0;
    std::int64_t total_output_tokens = 0;
    CacheStats cache;
    double total_energy_wh = 0.0;
    std::optional<double> total_co2_g;
    std::optional<EfficiencyReport> efficiency;  // absent for zero-token runs
    double wall_clock_s = 0.0;                   // printed, never serialized
    std::vector<TaskResult> task_results;        // only on collect_task_results
};

// Sequential single-GPU pipeline: tasks run back to back in trace order, the
// clock starts at 0, and each task flows cache decision → prefill/decode
// times → export-grid fragments → power/energy/CO2 → accumulation. Writes
// tasks.csv, fragments.csv and summary.csv into output_dir (unless
// write_outputs is off). Module errors are rethrown with task-index context.
RunSummary run_simulation(const RunConfig& config);

// Deterministic key,value serialization of the summary (excludes wall_clock_s
// so identical runs stay byte-identical); the same rows summary.csv holds.
std::string summary_csv(const RunSummary& summary);

// Human-readable table for standard output (includes wall clock).
std::string summary_table(const RunSummary& summary);

}  // namespace infersim
