#include "infersim/trace_io.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>
#include <stdexcept>
#include <unordered_map>

namespace infersim {

namespace {

// Splits one CSV line; quoted fields may contain commas, doubled quotes
// unescape to one.
std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::int64_t parse_int(const std::string& text, const std::string& column, std::size_t line_no) {
    const std::string t = trim(text);
    try {
        std::size_t pos = 0;
        std::int64_t v = std::stoll(t, &pos);
        if (pos != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": column '" + column +
                                 "': expected an integer, got '" + t + "'");
    }
}

double parse_double(const std::string& text, const std::string& column, std::size_t line_no) {
    const std::string t = trim(text);
    try {
        std::size_t pos = 0;
        double v = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": column '" + column +
                                 "': expected a number, got '" + t + "'");
    }
}

// Token-ID lists are space-separated; tolerate bracketed, comma-separated
// exports of the same data.
std::vector<std::int32_t> parse_token_ids(const std::string& text, const std::string& column,
                                          std::size_t line_no) {
    std::vector<std::int32_t> ids;
    std::string token;
    auto take = [&]() {
        if (token.empty()) return;
        ids.push_back(
            static_cast<std::int32_t>(parse_int(token, column, line_no)));
        token.clear();
    };
    for (char c : text) {
        if (c == ' ' || c == ',' || c == '[' || c == ']' || c == '\t')
            take();
        else
            token += c;
    }
    take();
    return ids;
}

struct HeaderIndex {
    std::unordered_map<std::string, std::size_t> columns;

    bool has(const std::string& name) const { return columns.count(name) != 0; }

    // Index of the first present name among the canonical one and its aliases.
    std::optional<std::size_t> find(std::initializer_list<const char*> names) const {
        for (const char* n : names) {
            auto it = columns.find(n);
            if (it != columns.end()) return it->second;
        }
        return std::nullopt;
    }
};

HeaderIndex index_header(const std::vector<std::string>& fields) {
    HeaderIndex idx;
    for (std::size_t i = 0; i < fields.size(); ++i) idx.columns[trim(fields[i])] = i;
    return idx;
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

constexpr const char* kTasksHeader =
    "task_index,session_id,n_input_tokens,n_output_tokens,start_s,prefill_s,decode_s,latency_s,"
    "throughput_tps,prefix_cache_hit\n";
constexpr const char* kFragmentsHeader =
    "task_index,ts_s,phase,gpu_utilization,power_w,kv_cache_bytes\n";

}  // namespace

const char* to_string(fragment_phase phase) {
    switch (phase) {
        case fragment_phase::warmup: return "warmup";
        case fragment_phase::prefill: return "prefill";
        case fragment_phase::decode: return "decode";
        case fragment_phase::cooldown: return "cooldown";
    }
    return "prefill";
}

std::vector<WorkloadTask> read_workload(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("workload trace: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("workload trace '" + path + "': missing header row");
    const HeaderIndex header = index_header(split_line(line));

    const auto col_in = header.find({"n_input_tokens", "num_in_t"});
    const auto col_out = header.find({"n_output_tokens", "num_out_t"});
    if (!col_in || !col_out)
        throw std::runtime_error("workload trace '" + path +
                                 "': missing mandatory column n_input_tokens/n_output_tokens");
    const auto col_session = header.find({"session_id"});
    const auto col_turn = header.find({"turn_id"});
    const auto col_ts = header.find({"ts", "arrival_ts_s"});
    const auto col_in_ids = header.find({"input_token_ids", "input_tokens"});
    const auto col_out_ids = header.find({"output_token_ids", "output_tokens"});

    std::vector<WorkloadTask> tasks;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const std::vector<std::string> fields = split_line(line);
        auto field = [&](std::size_t idx) -> const std::string& {
            static const std::string empty;
            return idx < fields.size() ? fields[idx] : empty;
        };

        WorkloadTask task;
        task.task_index = static_cast<std::int64_t>(tasks.size());
        task.n_input_tokens = parse_int(field(*col_in), "n_input_tokens", line_no);
        task.n_output_tokens = parse_int(field(*col_out), "n_output_tokens", line_no);
        if (task.n_input_tokens < 0 || task.n_output_tokens < 0)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": token counts must be >= 0");
        if (col_session && !trim(field(*col_session)).empty())
            task.session_id = trim(field(*col_session));
        if (col_turn && !trim(field(*col_turn)).empty())
            task.turn_id = parse_int(field(*col_turn), "turn_id", line_no);
        if (col_ts && !trim(field(*col_ts)).empty())
            task.arrival_ts_s = parse_double(field(*col_ts), "ts", line_no);
        if (col_in_ids) task.input_token_ids = parse_token_ids(field(*col_in_ids), "input_token_ids", line_no);
        if (col_out_ids)
            task.output_token_ids = parse_token_ids(field(*col_out_ids), "output_token_ids", line_no);

        if (!task.input_token_ids.empty() &&
            std::ssize(task.input_token_ids) != task.n_input_tokens)
            throw std::runtime_error(
                "line " + std::to_string(line_no) + ": input_token_ids holds " +
                std::to_string(task.input_token_ids.size()) + " tokens but n_input_tokens is " +
                std::to_string(task.n_input_tokens));
        if (!task.output_token_ids.empty() &&
            std::ssize(task.output_token_ids) != task.n_output_tokens)
            throw std::runtime_error(
                "line " + std::to_string(line_no) + ": output_token_ids holds " +
                std::to_string(task.output_token_ids.size()) + " tokens but n_output_tokens is " +
                std::to_string(task.n_output_tokens));
        tasks.push_back(std::move(task));
    }
    return tasks;
}

std::vector<CarbonSample> read_carbon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("carbon trace: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("carbon trace '" + path + "': missing header row");
    const HeaderIndex header = index_header(split_line(line));
    const auto col_ts = header.find({"start_ts_s"});
    const auto col_ci = header.find({"intensity_g_per_kwh"});
    if (!col_ts || !col_ci)
        throw std::runtime_error("carbon trace '" + path +
                                 "': missing mandatory column start_ts_s/intensity_g_per_kwh");

    std::vector<CarbonSample> samples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const std::vector<std::string> fields = split_line(line);
        if (fields.size() <= std::max(*col_ts, *col_ci))
            throw std::runtime_error("line " + std::to_string(line_no) + ": too few fields");
        CarbonSample s;
        s.start_ts_s = parse_double(fields[*col_ts], "start_ts_s", line_no);
        s.intensity_g_per_kwh = parse_double(fields[*col_ci], "intensity_g_per_kwh", line_no);
        if (s.intensity_g_per_kwh < 0.0)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": negative carbon intensity");
        if (!samples.empty() && s.start_ts_s <= samples.back().start_ts_s)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": start_ts_s must be strictly increasing");
        samples.push_back(s);
    }
    if (samples.empty())
        throw std::runtime_error("carbon trace '" + path + "': no samples");
    return samples;
}

std::vector<TaskResult> read_task_results(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("task results: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("task results '" + path + "': missing header row");
    const HeaderIndex header = index_header(split_line(line));
    auto col = [&](const char* name) {
        auto idx = header.find({name});
        if (!idx)
            throw std::runtime_error("task results '" + path + "': missing column '" +
                                     std::string(name) + "'");
        return *idx;
    };
    const std::size_t c_idx = col("task_index"), c_sess = col("session_id"),
                      c_in = col("n_input_tokens"), c_out = col("n_output_tokens"),
                      c_start = col("start_s"), c_pre = col("prefill_s"), c_dec = col("decode_s"),
                      c_lat = col("latency_s"), c_tps = col("throughput_tps"),
                      c_hit = col("prefix_cache_hit");

    std::vector<TaskResult> results;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const std::vector<std::string> f = split_line(line);
        TaskResult r;
        r.task_index = parse_int(f[c_idx], "task_index", line_no);
        r.session_id = f[c_sess];
        r.n_input_tokens = parse_int(f[c_in], "n_input_tokens", line_no);
        r.n_output_tokens = parse_int(f[c_out], "n_output_tokens", line_no);
        r.start_s = parse_double(f[c_start], "start_s", line_no);
        r.prefill_s = parse_double(f[c_pre], "prefill_s", line_no);
        r.decode_s = parse_double(f[c_dec], "decode_s", line_no);
        r.latency_s = parse_double(f[c_lat], "latency_s", line_no);
        r.throughput_tps = parse_double(f[c_tps], "throughput_tps", line_no);
        r.prefix_cache_hit = parse_int(f[c_hit], "prefix_cache_hit", line_no) != 0;
        results.push_back(std::move(r));
    }
    return results;
}

ResultWriter::ResultWriter(const std::filesystem::path& out_dir, std::size_t flush_size)
    : flush_size_(flush_size) {
    if (flush_size_ == 0) throw std::invalid_argument("flush_size must be >= 1");
    std::filesystem::create_directories(out_dir);
    summary_.tasks_path = out_dir / "tasks.csv";
    summary_.fragments_path = out_dir / "fragments.csv";
    tasks_out_.open(summary_.tasks_path, std::ios::binary | std::ios::trunc);
    fragments_out_.open(summary_.fragments_path, std::ios::binary | std::ios::trunc);
    if (!tasks_out_ || !fragments_out_)
        throw std::runtime_error("cannot open output files under '" + out_dir.string() + "'");
    tasks_out_ << kTasksHeader;
    fragments_out_ << kFragmentsHeader;
    tasks_buf_.reserve(1 << 16);
    fragments_buf_.reserve(1 << 20);
}

ResultWriter::~ResultWriter() {
    if (!closed_) {
        try {
            close();
        } catch (...) {
        }
    }
}

void ResultWriter::add(const TaskResult& task, const std::vector<FragmentSample>& fragments) {
    char buf[192];
    int n = std::snprintf(buf, sizeof buf, "%lld,%s,%lld,%lld,%.6f,%.6f,%.6f,%.6f,%.6f,%d\n",
                          static_cast<long long>(task.task_index),
                          csv_escape(task.session_id).c_str(),
                          static_cast<long long>(task.n_input_tokens),
                          static_cast<long long>(task.n_output_tokens), task.start_s,
                          task.prefill_s, task.decode_s, task.latency_s, task.throughput_tps,
                          task.prefix_cache_hit ? 1 : 0);
    tasks_buf_.append(buf, static_cast<std::size_t>(n));
    for (const FragmentSample& f : fragments) {
        n = std::snprintf(buf, sizeof buf, "%lld,%.6f,%s,%.6f,%.6f,%lld\n",
                          static_cast<long long>(f.task_index), f.ts_s, to_string(f.phase),
                          f.gpu_utilization, f.power_w, static_cast<long long>(f.kv_cache_bytes));
        fragments_buf_.append(buf, static_cast<std::size_t>(n));
    }
    summary_.task_rows += 1;
    summary_.fragment_rows += fragments.size();
    if (++buffered_tasks_ >= flush_size_) flush();
}

void ResultWriter::flush() {
    if (buffered_tasks_ == 0) return;
    tasks_out_.write(tasks_buf_.data(), static_cast<std::streamsize>(tasks_buf_.size()));
    fragments_out_.write(fragments_buf_.data(),
                         static_cast<std::streamsize>(fragments_buf_.size()));
    tasks_out_.flush();
    fragments_out_.flush();
    tasks_buf_.clear();
    fragments_buf_.clear();
    buffered_tasks_ = 0;
    summary_.flushes += 1;
}

WriteSummary ResultWriter::close() {
    if (closed_) return summary_;
    flush();
    tasks_out_.close();
    fragments_out_.close();
    closed_ = true;
    if (tasks_out_.fail() || fragments_out_.fail())
        throw std::runtime_error("failed writing result files");
    return summary_;
}

WriteSummary write_results(const std::vector<TaskResult>& tasks,
                           const std::vector<FragmentSample>& fragments,
                           const std::filesystem::path& out_dir, std::size_t flush_size) {
    ResultWriter writer(out_dir, flush_size);
    std::size_t next = 0;
    std::vector<FragmentSample> batch;
    for (const TaskResult& task : tasks) {
        batch.clear();
        while (next < fragments.size() && fragments[next].task_index == task.task_index)
            batch.push_back(fragments[next++]);
        writer.add(task, batch);
    }
    return writer.close();
}

}  // namespace infersim
