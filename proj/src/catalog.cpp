#include "infersim/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace infersim {

namespace {

std::string known_names(const auto& entries) {
    std::string out;
    for (const auto& e : entries) {
        if (!out.empty()) out += ", ";
        out += e.name;
    }
    return out;
}

double to_double(const std::string& field, const std::string& text) {
    try {
        std::size_t pos = 0;
        double value = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw std::runtime_error("catalog: field '" + field + "': cannot parse number '" + text +
                                 "'");
    }
}

std::int64_t to_count(const std::string& field, const std::string& text) {
    double value = to_double(field, text);
    return static_cast<std::int64_t>(value);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        auto b = field.find_first_not_of(" \t\r");
        auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

// Reads a header-mapped CSV and hands each row to `consume` as a name→value map.
void for_each_csv_row(const std::string& path,
                      const std::function<void(const std::unordered_map<std::string, std::string>&)>&
                          consume) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("catalog: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("catalog: '" + path + "' is empty");
    const std::vector<std::string> header = split_csv_line(line);
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::runtime_error("catalog: '" + path + "': row has " +
                                     std::to_string(fields.size()) + " fields, header has " +
                                     std::to_string(header.size()));
        std::unordered_map<std::string, std::string> row;
        for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = fields[i];
        consume(row);
    }
}

const std::string& pick(const std::unordered_map<std::string, std::string>& row,
                        const std::string& key, const std::string& path) {
    auto it = row.find(key);
    if (it == row.end())
        throw std::runtime_error("catalog: '" + path + "' is missing column '" + key + "'");
    return it->second;
}

}  // namespace

power_model_kind parse_power_model(const std::string& name) {
    static const std::unordered_map<std::string, power_model_kind> table = {
        {"sqrt", power_model_kind::sqrt},
        {"linear", power_model_kind::linear},
        {"square", power_model_kind::square},
        {"cubic", power_model_kind::cubic},
        {"mse", power_model_kind::mse},
        {"asymptotic", power_model_kind::asymptotic},
        {"asymptotic_dvfs", power_model_kind::asymptotic_dvfs},
    };
    auto it = table.find(name);
    if (it == table.end())
        throw std::invalid_argument(
            "unknown power model '" + name +
            "' (known: sqrt, linear, square, cubic, mse, asymptotic, asymptotic_dvfs)");
    return it->second;
}

std::string to_string(power_model_kind kind) {
    switch (kind) {
        case power_model_kind::sqrt: return "sqrt";
        case power_model_kind::linear: return "linear";
        case power_model_kind::square: return "square";
        case power_model_kind::cubic: return "cubic";
        case power_model_kind::mse: return "mse";
        case power_model_kind::asymptotic: return "asymptotic";
        case power_model_kind::asymptotic_dvfs: return "asymptotic_dvfs";
    }
    return "linear";
}

SimParams default_params() { return SimParams{}; }

void validate(const SimParams& params) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("sim params: ") + what);
    };
    require(params.compute_efficiency > 0.0 && params.compute_efficiency <= 1.0,
            "compute_efficiency must be in (0, 1]");
    require(params.memory_efficiency > 0.0 && params.memory_efficiency <= 1.0,
            "memory_efficiency must be in (0, 1]");
    require(params.max_gpu_utilization > 0.0 && params.max_gpu_utilization <= 1.0,
            "max_gpu_utilization must be in (0, 1]");
    require(params.export_rate_s > 0.0, "export_rate_s must be > 0");
    require(params.warm_s >= 0.0, "warm_s must be >= 0");
    require(params.cool_s >= 0.0, "cool_s must be >= 0");
    require(params.prefill_overhead_s >= 0.0, "prefill_overhead_s must be >= 0");
    require(params.prefix_min_len >= 0, "prefix_min_len must be >= 0");
    require(params.prefix_cache_capacity >= 1, "prefix_cache_capacity must be >= 1");
    require(params.alpha > 0.0, "alpha must be > 0");
    require(params.r > 0.0, "r must be > 0");
    require(params.price_per_hour >= 0.0, "price_per_hour must be >= 0");
}

void validate(const LlmConfig& llm) {
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("llm config '" + llm.name + "': " + what);
    };
    if (llm.name.empty()) fail("name must be non-empty");
    if (llm.params <= 0) fail("params must be > 0");
    if (llm.layers <= 0) fail("layers must be > 0");
    if (llm.heads <= 0) fail("heads must be > 0");
    if (llm.head_dim <= 0) fail("head_dim must be > 0");
    if (llm.bytes_per_param != 1 && llm.bytes_per_param != 2 && llm.bytes_per_param != 4)
        fail("bytes_per_param must be 1, 2 or 4");
    if (llm.heads * llm.head_dim != llm.hidden_dim)
        fail("heads * head_dim must equal hidden_dim (" + std::to_string(llm.heads) + " * " +
             std::to_string(llm.head_dim) + " != " + std::to_string(llm.hidden_dim) + ")");
}

void validate(const GpuConfig& gpu) {
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("gpu config '" + gpu.name + "': " + what);
    };
    if (gpu.name.empty()) fail("name must be non-empty");
    if (!(gpu.p_idle_w > 0.0 && gpu.p_idle_w < gpu.p_max_w))
        fail("power bounds must satisfy 0 < p_idle_w < p_max_w");
    if (gpu.bandwidth_bytes_per_s <= 0.0) fail("bandwidth_bytes_per_s must be > 0");
    if (gpu.fp16_flops_per_s <= 0.0) fail("fp16_flops_per_s must be > 0");
}

Catalog::Catalog() {
    llms_ = {
        {"Llama-3-8B", 8'000'000'000, 32, 32, 128, 4096, 2},
        {"Llama-2-13B", 13'000'000'000, 40, 40, 128, 5120, 2},
        {"Granite-20B", 20'000'000'000, 52, 48, 128, 6144, 2},
        {"MPT-30B", 30'000'000'000, 48, 64, 112, 7168, 2},
    };
    gpus_ = {
        {"A10", 24'000'000'000, 600e9, 125e12, 9216, 1695, 20.0, 150.0},
        {"A100-80GB", 80'000'000'000, 2039e9, 312e12, 6912, 1410, 50.0, 400.0},
    };
}

const LlmConfig& Catalog::lookup_llm(const std::string& name) const {
    auto it = std::find_if(llms_.begin(), llms_.end(),
                           [&](const LlmConfig& l) { return l.name == name; });
    if (it == llms_.end())
        throw std::invalid_argument("unknown LLM '" + name + "' (known: " + known_names(llms_) +
                                    ")");
    return *it;
}

const GpuConfig& Catalog::lookup_gpu(const std::string& name) const {
    auto it = std::find_if(gpus_.begin(), gpus_.end(),
                           [&](const GpuConfig& g) { return g.name == name; });
    if (it == gpus_.end())
        throw std::invalid_argument("unknown GPU '" + name + "' (known: " + known_names(gpus_) +
                                    ")");
    return *it;
}

void Catalog::register_llm(LlmConfig llm) {
    validate(llm);
    auto it = std::find_if(llms_.begin(), llms_.end(),
                           [&](const LlmConfig& l) { return l.name == llm.name; });
    if (it != llms_.end())
        *it = std::move(llm);
    else
        llms_.push_back(std::move(llm));
}

void Catalog::register_gpu(GpuConfig gpu) {
    validate(gpu);
    auto it = std::find_if(gpus_.begin(), gpus_.end(),
                           [&](const GpuConfig& g) { return g.name == gpu.name; });
    if (it != gpus_.end())
        *it = std::move(gpu);
    else
        gpus_.push_back(std::move(gpu));
}

std::size_t Catalog::load_llm_csv(const std::string& path) {
    std::size_t count = 0;
    for_each_csv_row(path, [&](const auto& row) {
        LlmConfig llm;
        llm.name = pick(row, "name", path);
        llm.params = to_count("params", pick(row, "params", path));
        llm.layers = to_count("layers", pick(row, "layers", path));
        llm.heads = to_count("heads", pick(row, "heads", path));
        llm.head_dim = to_count("head_dim", pick(row, "head_dim", path));
        llm.hidden_dim = to_count("hidden_dim", pick(row, "hidden_dim", path));
        llm.bytes_per_param = to_count("bytes_per_param", pick(row, "bytes_per_param", path));
        register_llm(std::move(llm));
        ++count;
    });
    return count;
}

std::size_t Catalog::load_gpu_csv(const std::string& path) {
    std::size_t count = 0;
    for_each_csv_row(path, [&](const auto& row) {
        GpuConfig gpu;
        gpu.name = pick(row, "name", path);
        gpu.memory_bytes = to_count("memory_bytes", pick(row, "memory_bytes", path));
        gpu.bandwidth_bytes_per_s =
            to_double("bandwidth_bytes_per_s", pick(row, "bandwidth_bytes_per_s", path));
        gpu.fp16_flops_per_s = to_double("fp16_flops_per_s", pick(row, "fp16_flops_per_s", path));
        gpu.cuda_cores = to_count("cuda_cores", pick(row, "cuda_cores", path));
        gpu.boost_mhz = to_count("boost_mhz", pick(row, "boost_mhz", path));
        gpu.p_idle_w = to_double("p_idle_w", pick(row, "p_idle_w", path));
        gpu.p_max_w = to_double("p_max_w", pick(row, "p_max_w", path));
        register_gpu(std::move(gpu));
        ++count;
    });
    return count;
}

std::vector<std::string> Catalog::llm_names() const {
    std::vector<std::string> names;
    names.reserve(llms_.size());
    for (const auto& l : llms_) names.push_back(l.name);
    return names;
}

std::vector<std::string> Catalog::gpu_names() const {
    std::vector<std::string> names;
    names.reserve(gpus_.size());
    for (const auto& g : gpus_) names.push_back(g.name);
    return names;
}

}  // namespace infersim
