#include "infersim/efficiency.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace infersim {

namespace {

double weighted_seconds_per_token(double cost, std::int64_t tokens_prefill,
                                  std::int64_t tokens_decode, double time_prefill_s,
                                  double time_decode_s, const char* what) {
    const std::int64_t tokens = tokens_prefill + tokens_decode;
    if (tokens <= 0)
        throw std::domain_error(std::string(what) + ": token total must be > 0");
    return cost * (time_prefill_s + time_decode_s) / static_cast<double>(tokens);
}

}  // namespace

double financial_efficiency(double cost, std::int64_t tokens_prefill, std::int64_t tokens_decode,
                            double time_prefill_s, double time_decode_s) {
    return weighted_seconds_per_token(cost, tokens_prefill, tokens_decode, time_prefill_s,
                                      time_decode_s, "financial_efficiency");
}

double sustainability_efficiency(double s_cost, std::int64_t tokens_prefill,
                                 std::int64_t tokens_decode, double time_prefill_s,
                                 double time_decode_s) {
    return weighted_seconds_per_token(s_cost, tokens_prefill, tokens_decode, time_prefill_s,
                                      time_decode_s, "sustainability_efficiency");
}

double run_cost(double price_per_hour, double total_time_s) {
    return price_per_hour * total_time_s / 3600.0;
}

double per_mtoken(double total_cost, double total_tokens) {
    if (total_tokens <= 0.0) throw std::domain_error("per_mtoken: token total must be > 0");
    return total_cost / total_tokens * 1e6;
}

EfficiencyReport build_efficiency_report(double total_cost, double energy_wh,
                                         std::optional<double> co2_g, std::int64_t tokens_prefill,
                                         std::int64_t tokens_decode, double time_prefill_s,
                                         double time_decode_s) {
    EfficiencyReport report;
    report.total_cost = total_cost;
    report.total_tokens = static_cast<double>(tokens_prefill + tokens_decode);
    report.total_time_s = time_prefill_s + time_decode_s;
    report.financial_eff = financial_efficiency(total_cost, tokens_prefill, tokens_decode,
                                                time_prefill_s, time_decode_s);
    report.sustainability_eff_energy = sustainability_efficiency(
        energy_wh, tokens_prefill, tokens_decode, time_prefill_s, time_decode_s);
    report.cost_per_mtoken = per_mtoken(total_cost, report.total_tokens);
    if (co2_g) {
        report.sustainability_eff_co2 = sustainability_efficiency(
            *co2_g, tokens_prefill, tokens_decode, time_prefill_s, time_decode_s);
        report.co2_per_mtoken = per_mtoken(*co2_g, report.total_tokens);
    }
    return report;
}

double financial_efficiency_ratio(double e1, double e2) {
    if (!(e2 > 0.0)) throw std::domain_error("financial_efficiency_ratio: denominator must be > 0");
    return e1 / e2;
}

double sustainability_efficiency_ratio(const EfficiencyReport& r1, const EfficiencyReport& r2,
                                       sustainability_metric metric) {
    auto pick = [metric](const EfficiencyReport& r) -> double {
        if (metric == sustainability_metric::energy_wh) return r.sustainability_eff_energy;
        if (!r.sustainability_eff_co2)
            throw std::domain_error(
                "sustainability_efficiency_ratio: reports do not share the CO2 metric");
        return *r.sustainability_eff_co2;
    };
    const double e1 = pick(r1);
    const double e2 = pick(r2);
    if (!(e2 > 0.0))
        throw std::domain_error("sustainability_efficiency_ratio: denominator must be > 0");
    return e1 / e2;
}

double mape(std::span<const double> real, std::span<const double> sim) {
    if (real.size() != sim.size()) throw std::invalid_argument("mape: length mismatch");
    if (real.empty()) throw std::invalid_argument("mape: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < real.size(); ++i) {
        if (real[i] == 0.0) throw std::domain_error("mape: real value of 0 at index " +
                                                    std::to_string(i));
        sum += std::abs(real[i] - sim[i]) / std::abs(real[i]);
    }
    return sum / static_cast<double>(real.size()) * 100.0;
}

}  // namespace infersim
