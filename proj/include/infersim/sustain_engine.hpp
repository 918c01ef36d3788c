#pragma once

#include <vector>

#include "infersim/catalog.hpp"
#include "infersim/trace_io.hpp"

namespace infersim {

// Instantaneous device power at utilization u in [0, 1] (out of range throws
// std::domain_error). All seven models pin power_draw(0) == p_idle; the four
// polynomial models and mse also pin power_draw(1) == p_max, while the
// asymptotic pair saturates below p_max. alpha is the utilization scale of
// the asymptotic knee, r the mse calibration exponent.
double power_draw(const GpuConfig& gpu, const SimParams& params, double utilization);

// Left-rectangle integral of fragment power over the export grid, in Wh:
// sum power_w * interval_s / 3600.
double integrate_energy(const std::vector<FragmentSample>& fragments, double interval_s);

// Step-function lookup: the sample with the greatest start_ts_s <= ts rules;
// timestamps before the first sample use the first. Samples must be
// non-empty and strictly increasing.
double carbon_intensity_at(const std::vector<CarbonSample>& samples, double ts_s);

// Grams of CO2: each fragment's energy (kWh) times the intensity in force at
// its timestamp.
double co2_emissions(const std::vector<FragmentSample>& fragments, double interval_s,
                     const std::vector<CarbonSample>& samples);

struct CarbonSource {
    double intensity_g_per_kwh = 0.0;
    double energy_share = 0.0;  // any non-negative energy unit, consistent across sources
};

// Energy-weighted mean intensity of a mixed grid: sum ci_s*e_s / sum e_s.
// Throws std::domain_error when the total energy is zero (or any share is
// negative).
double grid_carbon_intensity(const std::vector<CarbonSource>& sources);

}  // namespace infersim
