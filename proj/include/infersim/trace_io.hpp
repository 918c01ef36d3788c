#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace infersim {

// One inference request. Simple traces carry only the two token counts;
// tokenized multi-turn traces add session/turn identity and the token IDs
// themselves. `arrival_ts_s` is parsed for completeness but the simulator
// executes tasks back to back.
struct WorkloadTask {
    std::int64_t task_index = 0;
    std::string session_id;  // empty = absent
    std::optional<std::int64_t> turn_id;
    std::optional<double> arrival_ts_s;
    std::int64_t n_input_tokens = 0;
    std::int64_t n_output_tokens = 0;
    std::vector<std::int32_t> input_token_ids;   // empty = absent
    std::vector<std::int32_t> output_token_ids;  // empty = absent
};

// Grid carbon intensity sample; the value holds from start_ts_s (relative to
// simulation start) until the next sample.
struct CarbonSample {
    double start_ts_s = 0.0;
    double intensity_g_per_kwh = 0.0;
};

struct TaskResult {
    std::int64_t task_index = 0;
    std::string session_id;
    std::int64_t n_input_tokens = 0;
    std::int64_t n_output_tokens = 0;
    double start_s = 0.0;
    double prefill_s = 0.0;
    double decode_s = 0.0;
    double latency_s = 0.0;
    double throughput_tps = 0.0;
    bool prefix_cache_hit = false;
};

enum class fragment_phase { warmup, prefill, decode, cooldown };

const char* to_string(fragment_phase phase);

// One export-grid snapshot of device state.
struct FragmentSample {
    std::int64_t task_index = 0;
    double ts_s = 0.0;
    fragment_phase phase = fragment_phase::prefill;
    double gpu_utilization = 0.0;
    double power_w = 0.0;
    std::int64_t kv_cache_bytes = 0;
};

// Workload readers accept two layouts, detected from the header row:
//   n_input_tokens,n_output_tokens
//   session_id,turn_id,ts,n_input_tokens,n_output_tokens,input_token_ids,output_token_ids
// Token-ID lists are space-separated integers inside one quoted field
// (bracketed, comma-separated lists are tolerated). The Marconi aggregate
// export's column names (num_in_t, num_out_t, input_tokens, output_tokens)
// are accepted as aliases. Throws std::runtime_error on a missing mandatory
// column, a non-integer token count, or a token-ID list whose length differs
// from the declared count.
std::vector<WorkloadTask> read_workload(const std::string& path);

// Header start_ts_s,intensity_g_per_kwh. Throws on empty files, timestamps
// not strictly increasing (duplicates included), or negative intensity.
std::vector<CarbonSample> read_carbon(const std::string& path);

// Re-reads a tasks.csv produced by write_results (values carry six fractional
// digits, so doubles round-trip to within 5e-7).
std::vector<TaskResult> read_task_results(const std::string& path);

struct WriteSummary {
    std::filesystem::path tasks_path;
    std::filesystem::path fragments_path;
    std::size_t task_rows = 0;
    std::size_t fragment_rows = 0;
    std::size_t flushes = 0;
};

// Streaming writer for tasks.csv + fragments.csv. Rows are buffered and both
// files are flushed together after every `flush_size` tasks and once at
// close; headers are written immediately so an empty run still yields
// header-only files. Times are printed with six fractional digits.
class ResultWriter {
  public:
    ResultWriter(const std::filesystem::path& out_dir, std::size_t flush_size);
    ~ResultWriter();

    void add(const TaskResult& task, const std::vector<FragmentSample>& fragments);
    WriteSummary close();

  private:
    void flush();

    std::ofstream tasks_out_;
    std::ofstream fragments_out_;
    std::string tasks_buf_;
    std::string fragments_buf_;
    std::size_t flush_size_;
    std::size_t buffered_tasks_ = 0;
    WriteSummary summary_;
    bool closed_ = false;
};

// One-shot convenience over ResultWriter: fragments are grouped with their
// task by task_index (both sequences in simulation order).
WriteSummary write_results(const std::vector<TaskResult>& tasks,
                           const std::vector<FragmentSample>& fragments,
                           const std::filesystem::path& out_dir,
                           std::size_t flush_size);

}  // namespace infersim
