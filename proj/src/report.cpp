#include "endoscope/report.hpp"

namespace endoscope::report {

nlohmann::json cyc_json(const cyclo::CycNum& v) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : v.coeffs()) coeffs.push_back(c.get_str());
    auto z = v.complex_approx();
    return nlohmann::json{{"M", v.ring().M()},
                          {"coeffs", coeffs},
                          {"approx", {z.real(), z.imag()}}};
}

nlohmann::json VerifyReport::to_json() const {
    nlohmann::json j{{"check", check_id},
                     {"inputs", inputs},
                     {"outcome", outcome_str(outcome)}};
    if (!values.empty()) j["values"] = values;
    if (!reason.empty()) j["reason"] = reason;
    if (timing_ms) j["timing_ms"] = *timing_ms;
    return j;
}

} // namespace endoscope::report
