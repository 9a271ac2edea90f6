#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "endoscope/cyclo.hpp"

namespace endoscope::report {

enum class Outcome { Pass, Fail, Skipped };

inline const char* outcome_str(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::Fail: return "fail";
        default: return "skipped";
    }
}

nlohmann::json cyc_json(const cyclo::CycNum& v);

// Machine-readable outcome of one check.  A failing report carries both
// conflicting values; a skipped one carries the reason.
struct VerifyReport {
    std::string check_id;
    nlohmann::json inputs = nlohmann::json::object();
    Outcome outcome = Outcome::Pass;
    std::vector<nlohmann::json> values;
    std::string reason;
    std::optional<double> timing_ms;

    bool passed() const { return outcome == Outcome::Pass; }
    nlohmann::json to_json() const;

    static VerifyReport pass(std::string id, nlohmann::json in = nlohmann::json::object()) {
        VerifyReport r;
        r.check_id = std::move(id);
        r.inputs = std::move(in);
        return r;
    }
    static VerifyReport fail(std::string id, std::string why,
                             nlohmann::json in = nlohmann::json::object()) {
        VerifyReport r;
        r.check_id = std::move(id);
        r.inputs = std::move(in);
        r.outcome = Outcome::Fail;
        r.reason = std::move(why);
        return r;
    }
    static VerifyReport skipped(std::string id, std::string why,
                                nlohmann::json in = nlohmann::json::object()) {
        VerifyReport r;
        r.check_id = std::move(id);
        r.inputs = std::move(in);
        r.outcome = Outcome::Skipped;
        r.reason = std::move(why);
        return r;
    }
};

} // namespace endoscope::report
