#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace infersim {

enum class sustainability_metric { energy_wh, co2_g };

// Efficiency of a run: cost (or energy/CO2) weighted by seconds per token.
// The *_eff figures have units currency·s/token (resp. Wh·s/token, g·s/token);
// the *_per_mtoken figures are the prototype-style unit costs. CO2 fields are
// absent when the run had no carbon trace.
struct EfficiencyReport {
    double financial_eff = 0.0;
    double sustainability_eff_energy = 0.0;
    std::optional<double> sustainability_eff_co2;
    double cost_per_mtoken = 0.0;
    std::optional<double> co2_per_mtoken;
    double total_cost = 0.0;
    double total_tokens = 0.0;
    double total_time_s = 0.0;
};

// cost × (time_prefill + time_decode)/(tokens_prefill + tokens_decode);
// throws std::domain_error when the token total is zero.
double financial_efficiency(double cost, std::int64_t tokens_prefill, std::int64_t tokens_decode,
                            double time_prefill_s, double time_decode_s);

// Same shape with an energy or CO2 cost in place of currency.
double sustainability_efficiency(double s_cost, std::int64_t tokens_prefill,
                                 std::int64_t tokens_decode, double time_prefill_s,
                                 double time_decode_s);

// Flat GPU-hour pricing.
double run_cost(double price_per_hour, double total_time_s);

double per_mtoken(double total_cost, double total_tokens);

EfficiencyReport build_efficiency_report(double total_cost, double energy_wh,
                                         std::optional<double> co2_g, std::int64_t tokens_prefill,
                                         std::int64_t tokens_decode, double time_prefill_s,
                                         double time_decode_s);

// e1/e2. Under the same-token, price-proportional-to-time assumption this
// reduces to (time1/time2)^2; the general form is what is computed.
double financial_efficiency_ratio(double e1, double e2);

// (S1×time1×tokens2)/(S2×time2×tokens1), i.e. the ratio of the two E_s
// values for the chosen metric. Throws when the metric is missing from
// either report or a denominator term is zero.
double sustainability_efficiency_ratio(const EfficiencyReport& r1, const EfficiencyReport& r2,
                                       sustainability_metric metric);

// Mean absolute percentage error: mean |real-sim|/|real| × 100. Throws on
// length mismatch, empty input, or a zero real value.
double mape(std::span<const double> real, std::span<const double> sim);

}  // namespace infersim
