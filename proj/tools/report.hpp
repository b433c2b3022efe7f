#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "syzlab/numerics.hpp"

namespace syz::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

struct Check {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
};

// Report assembled by one command.  Keys keep insertion order so the output
// is byte-stable for fixed inputs.
struct Report {
    std::string command;
    json inputs = json::object();
    json results = json::object();
    std::vector<Check> checks;
    std::vector<DecaySample> curve;  // optional CSV payload

    // measured <= tolerance
    void check_le(const std::string& name, double measured, double tolerance);
    // measured >= tolerance
    void check_ge(const std::string& name, double measured, double tolerance);
    // lo <= measured <= hi, reported against the half-width of the window
    void check_in(const std::string& name, double measured, double lo, double hi);
    void check_true(const std::string& name, bool pass);

    bool all_pass() const;
    json to_json(bool with_timestamp) const;
};

// UTC time in ISO 8601 form.
std::string utc_timestamp();

// Writes the curve as CSV with columns r,value.
void write_csv(const std::string& path, const std::vector<DecaySample>& curve);

json fit_json(const DecayFit& f);
json cplx_json(cplx z);

}  // namespace syz::cli
