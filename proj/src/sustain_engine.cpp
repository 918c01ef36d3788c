#include "infersim/sustain_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace infersim {

double power_draw(const GpuConfig& gpu, const SimParams& params, double utilization) {
    if (!(utilization >= 0.0 && utilization <= 1.0))
        throw std::domain_error("power_draw: utilization must be within [0, 1]");
    const double u = utilization;
    const double span = gpu.p_max_w - gpu.p_idle_w;
    switch (params.power_model) {
        case power_model_kind::sqrt:
            return gpu.p_idle_w + span * std::sqrt(u);
        case power_model_kind::linear:
            return gpu.p_idle_w + span * u;
        case power_model_kind::square:
            return gpu.p_idle_w + span * u * u;
        case power_model_kind::cubic:
            return gpu.p_idle_w + span * u * u * u;
        case power_model_kind::mse:
            return gpu.p_idle_w + span * (2.0 * u - std::pow(u, params.r));
        case power_model_kind::asymptotic:
            return gpu.p_idle_w + span / 2.0 * (1.0 + u - std::exp(-u / params.alpha));
        case power_model_kind::asymptotic_dvfs: {
            const double u3 = u * u * u;  // DVFS: frequency-scaled utilization
            return gpu.p_idle_w + span / 2.0 * (1.0 + u3 - std::exp(-u3 / params.alpha));
        }
    }
    throw std::logic_error("power_draw: unhandled power model");
}

double integrate_energy(const std::vector<FragmentSample>& fragments, double interval_s) {
    if (interval_s <= 0.0) throw std::invalid_argument("integrate_energy: interval must be > 0");
    double wh = 0.0;
    for (const FragmentSample& f : fragments) wh += f.power_w * interval_s / 3600.0;
    return wh;
}

double carbon_intensity_at(const std::vector<CarbonSample>& samples, double ts_s) {
    if (samples.empty()) throw std::invalid_argument("carbon schedule is empty");
    // last sample whose start_ts_s <= ts rules; clamp to the first before it
    auto it = std::upper_bound(samples.begin(), samples.end(), ts_s,
                               [](double ts, const CarbonSample& s) { return ts < s.start_ts_s; });
    if (it == samples.begin()) return samples.front().intensity_g_per_kwh;
    return std::prev(it)->intensity_g_per_kwh;
}

double co2_emissions(const std::vector<FragmentSample>& fragments, double interval_s,
                     const std::vector<CarbonSample>& samples) {
    if (interval_s <= 0.0) throw std::invalid_argument("co2_emissions: interval must be > 0");
    if (samples.empty()) throw std::invalid_argument("co2_emissions: carbon schedule is empty");
    double grams = 0.0;
    for (const FragmentSample& f : fragments) {
        // power_w * interval / 3.6e6 == energy in kWh; one multiply keeps the
        // round-number cases exact
        grams += f.power_w * interval_s * carbon_intensity_at(samples, f.ts_s) / 3.6e6;
    }
    return grams;
}

double grid_carbon_intensity(const std::vector<CarbonSource>& sources) {
    double weighted = 0.0;
    double total = 0.0;
    for (const CarbonSource& s : sources) {
        if (s.energy_share < 0.0)
            throw std::domain_error("grid_carbon_intensity: negative energy share");
        weighted += s.intensity_g_per_kwh * s.energy_share;
        total += s.energy_share;
    }
    if (total <= 0.0)
        throw std::domain_error("grid_carbon_intensity: total energy must be > 0");
    return weighted / total;
}

}  // namespace infersim
