#include "infersim/simulation.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>

#include "infersim/perf_engine.hpp"
#include "infersim/sustain_engine.hpp"

namespace infersim {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string num(std::int64_t v) { return std::to_string(v); }

struct Row {
    std::string key;
    std::string value;
};

// Shared row list keeps summary.csv and the stdout table in step.
std::vector<Row> summary_rows(const RunSummary& s) {
    std::vector<Row> rows;
    rows.push_back({"task_count", num(s.task_count)});
    rows.push_back({"total_prefill_s", num(s.total_prefill_s)});
    rows.push_back({"total_decode_s", num(s.total_decode_s)});
    rows.push_back({"total_gpu_hours", num(s.total_gpu_hours)});
    rows.push_back({"mean_throughput_tps", num(s.mean_throughput_tps)});
    rows.push_back({"total_input_tokens", num(s.total_input_tokens)});
    rows.push_back({"total_output_tokens", num(s.total_output_tokens)});
    rows.push_back({"cache_lookups", num(s.cache.lookups)});
    rows.push_back({"cache_hits", num(s.cache.hits)});
    rows.push_back({"cache_misses", num(s.cache.misses)});
    rows.push_back({"cache_insertions", num(s.cache.insertions)});
    rows.push_back({"cache_evictions", num(s.cache.evictions)});
    rows.push_back(
        {"cache_hit_ratio", s.cache.lookups > 0 ? num(cache_hit_ratio(s.cache)) : "n/a"});
    rows.push_back({"total_energy_wh", num(s.total_energy_wh)});
    rows.push_back({"total_co2_g", s.total_co2_g ? num(*s.total_co2_g) : "n/a"});
    if (s.efficiency) {
        const EfficiencyReport& e = *s.efficiency;
        rows.push_back({"financial_eff", num(e.financial_eff)});
        rows.push_back({"sustainability_eff_energy", num(e.sustainability_eff_energy)});
        rows.push_back({"sustainability_eff_co2",
                        e.sustainability_eff_co2 ? num(*e.sustainability_eff_co2) : "n/a"});
        rows.push_back({"cost_per_mtoken", num(e.cost_per_mtoken)});
        rows.push_back({"co2_per_mtoken", e.co2_per_mtoken ? num(*e.co2_per_mtoken) : "n/a"});
        rows.push_back({"total_cost", num(e.total_cost)});
        rows.push_back({"total_tokens", num(e.total_tokens)});
        rows.push_back({"total_time_s", num(e.total_time_s)});
    } else {
        for (const char* key : {"financial_eff", "sustainability_eff_energy",
                                "sustainability_eff_co2", "cost_per_mtoken", "co2_per_mtoken"})
            rows.push_back({key, "n/a"});
        rows.push_back({"total_cost", num(0.0)});
        rows.push_back({"total_tokens", num(0.0)});
        rows.push_back({"total_time_s", num(s.total_prefill_s + s.total_decode_s)});
    }
    return rows;
}

}  // namespace

RunSummary run_simulation(const RunConfig& config) {
    const auto wall_start = std::chrono::steady_clock::now();

    validate(config.llm);
    validate(config.gpu);
    validate(config.params);
    const SimParams& params = config.params;

    const TokenTiming timing = token_timing(config.llm, config.gpu, params);
    const std::int64_t kv_per_token = kv_cache_bytes(config.llm, 1);
    PrefixCache cache(params.prefix_cache_capacity, params.prefix_min_len);

    std::optional<ResultWriter> writer;
    if (config.write_outputs) writer.emplace(config.output_dir, config.flush_size);

    RunSummary summary;
    if (!config.carbon.empty()) summary.total_co2_g = 0.0;

    double clock_s = 0.0;
    double throughput_sum = 0.0;
    std::vector<FragmentSample> fragments;

    for (const WorkloadTask& task : config.tasks) {
        try {
            const CacheDecision decision = try_prefix_hit(cache, task, params);
            // an exact prefix hit restores the prefill state: no forward pass,
            // no overhead
            const double prefill_s =
                decision.hit ? 0.0 : prefill_time(config.llm, config.gpu, params, task.n_input_tokens);
            const double decode_s = decode_time(params, timing, task.n_output_tokens);
            const TaskTiming task_time = task_timing(prefill_s, decode_s, params);

            schedule_fragments(task, task_time, kv_per_token, clock_s, params, fragments);
            for (FragmentSample& frag : fragments)
                frag.power_w = power_draw(config.gpu, params, frag.gpu_utilization);

            summary.total_energy_wh += integrate_energy(fragments, params.export_rate_s);
            if (summary.total_co2_g)
                *summary.total_co2_g +=
                    co2_emissions(fragments, params.export_rate_s, config.carbon);

            TaskResult result;
            result.task_index = task.task_index;
            result.session_id = task.session_id;
            result.n_input_tokens = task.n_input_tokens;
            result.n_output_tokens = task.n_output_tokens;
            result.start_s = clock_s;
            result.prefill_s = prefill_s;
            result.decode_s = decode_s;
            result.latency_s = prefill_s + decode_s;
            result.throughput_tps =
                result.latency_s > 0.0
                    ? static_cast<double>(task.n_input_tokens + task.n_output_tokens) /
                          result.latency_s
                    : 0.0;
            result.prefix_cache_hit = decision.hit;

            if (writer) writer->add(result, fragments);
            if (config.collect_task_results) summary.task_results.push_back(result);

            summary.task_count += 1;
            summary.total_prefill_s += prefill_s;
            summary.total_decode_s += decode_s;
            summary.total_input_tokens += task.n_input_tokens;
            summary.total_output_tokens += task.n_output_tokens;
            throughput_sum += result.throughput_tps;
            clock_s += result.latency_s;
        } catch (const std::exception& e) {
            throw std::runtime_error("task " + std::to_string(task.task_index) + ": " + e.what());
        }
    }

    summary.cache = cache.stats();
    summary.total_gpu_hours = (summary.total_prefill_s + summary.total_decode_s) / 3600.0;
    summary.mean_throughput_tps =
        summary.task_count > 0 ? throughput_sum / static_cast<double>(summary.task_count) : 0.0;

    if (summary.total_input_tokens + summary.total_output_tokens > 0) {
        const double cost =
            run_cost(params.price_per_hour, summary.total_prefill_s + summary.total_decode_s);
        summary.efficiency = build_efficiency_report(
            cost, summary.total_energy_wh, summary.total_co2_g, summary.total_input_tokens,
            summary.total_output_tokens, summary.total_prefill_s, summary.total_decode_s);
    }

    if (writer) {
        writer->close();
        std::ofstream out(config.output_dir / "summary.csv", std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open '" +
                                     (config.output_dir / "summary.csv").string() + "'");
        out << summary_csv(summary);
    }

    summary.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return summary;
}

std::string summary_csv(const RunSummary& summary) {
    std::string out = "metric,value\n";
    for (const Row& row : summary_rows(summary)) {
        out += row.key;
        out += ',';
        out += row.value;
        out += '\n';
    }
    return out;
}

std::string summary_table(const RunSummary& summary) {
    std::string out;
    auto add = [&out](const std::string& key, const std::string& value) {
        out += key;
        out.append(key.size() < 28 ? 28 - key.size() : 1, ' ');
        out += value;
        out += '\n';
    };
    for (const Row& row : summary_rows(summary)) add(row.key, row.value);
    add("wall_clock_s", num(summary.wall_clock_s));
    return out;
}

}  // namespace infersim
