#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "infersim/simulation.hpp"

namespace {

struct CliOptions {
    std::string llm = "Llama-3-8B";
    std::string gpu = "A10";
    std::string trace;
    std::string output_folder = "data/output_traces";
    std::string kv_cache = "on";
    std::int64_t prefix_len = 256;
    double export_rate = 0.1;
    std::size_t flush_size = 10000;
    std::string carbon_trace;
    std::int64_t prefix_cache_capacity = 8;
    std::string power_model = "linear";
    double price_per_hour = 1.2;
    double alpha = 0.3;
    double r = 1.4;
    std::string llm_catalog;
    std::string gpu_catalog;
};

void register_flags(CLI::App& app, CliOptions& opt) {
    app.add_option("--llm", opt.llm, "LLM prefab name")->capture_default_str();
    app.add_option("--gpu", opt.gpu, "GPU prefab name")->capture_default_str();
    app.add_option("--trace", opt.trace, "workload trace CSV")->required();
    app.add_option("--output_folder", opt.output_folder, "directory for result CSVs")
        ->capture_default_str();
    app.add_option("--kv_cache", opt.kv_cache, "KV-caching during decode")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    app.add_option("--prefix_len,--prefix_cache_min_len", opt.prefix_len,
                   "prefix-cache key length in tokens (0 disables)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--export_rate", opt.export_rate, "snapshot interval in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--flush_size", opt.flush_size, "tasks buffered between file flushes")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--carbon_trace", opt.carbon_trace,
                   "grid carbon-intensity trace CSV (enables CO2 reporting)");
    app.add_option("--prefix_cache_capacity", opt.prefix_cache_capacity,
                   "cached prompts per session")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--power_model", opt.power_model, "utilization-to-power curve")
        ->check(CLI::IsMember(
            {"sqrt", "linear", "square", "cubic", "mse", "asymptotic", "asymptotic_dvfs"}))
        ->capture_default_str();
    app.add_option("--price_per_hour", opt.price_per_hour, "flat GPU-hour price")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--alpha", opt.alpha, "asymptotic power-model knee")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--r", opt.r, "mse power-model calibration exponent")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--llm_catalog", opt.llm_catalog, "CSV of user LLM entries");
    app.add_option("--gpu_catalog", opt.gpu_catalog, "CSV of user GPU entries");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "infersim: trace-driven simulator for LLM inference latency, energy, CO2 and cost on a "
        "single GPU"};
    CliOptions opt;
    register_flags(app, opt);
    CLI11_PARSE(app, argc, argv);

    try {
        infersim::Catalog catalog;
        if (!opt.llm_catalog.empty()) catalog.load_llm_csv(opt.llm_catalog);
        if (!opt.gpu_catalog.empty()) catalog.load_gpu_csv(opt.gpu_catalog);

        infersim::RunConfig config;
        config.llm = catalog.lookup_llm(opt.llm);
        config.gpu = catalog.lookup_gpu(opt.gpu);
        config.params = infersim::default_params();
        config.params.kv_cache_enabled = opt.kv_cache == "on";
        config.params.prefix_min_len = opt.prefix_len;
        config.params.export_rate_s = opt.export_rate;
        config.params.prefix_cache_capacity = opt.prefix_cache_capacity;
        config.params.power_model = infersim::parse_power_model(opt.power_model);
        config.params.price_per_hour = opt.price_per_hour;
        config.params.alpha = opt.alpha;
        config.params.r = opt.r;
        infersim::validate(config.params);

        config.tasks = infersim::read_workload(opt.trace);
        if (!opt.carbon_trace.empty()) config.carbon = infersim::read_carbon(opt.carbon_trace);
        config.output_dir = opt.output_folder;
        config.flush_size = opt.flush_size;

        const infersim::RunSummary summary = infersim::run_simulation(config);
        std::cout << infersim::summary_table(summary);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
