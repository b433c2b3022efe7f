#include "report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "syzlab/errors.hpp"

namespace syz::cli {

void Report::check_le(const std::string& name, double measured, double tolerance) {
    checks.push_back({name, measured <= tolerance, measured, tolerance});
}

void Report::check_ge(const std::string& name, double measured, double tolerance) {
    checks.push_back({name, measured >= tolerance, measured, tolerance});
}

void Report::check_in(const std::string& name, double measured, double lo, double hi) {
    checks.push_back({name, measured >= lo && measured <= hi, measured, 0.5 * (hi - lo)});
}

void Report::check_true(const std::string& name, bool pass) {
    checks.push_back({name, pass, pass ? 1.0 : 0.0, 1.0});
}

bool Report::all_pass() const {
    for (const Check& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

json Report::to_json(bool with_timestamp) const {
    json out;
    out["command"] = command;
    out["inputs"] = inputs;
    out["results"] = results;
    json cs = json::array();
    for (const Check& c : checks) {
        cs.push_back({{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}, {"tolerance", c.tolerance}});
    }
    out["checks"] = cs;
    out["version"] = kVersion;
    if (with_timestamp) out["timestamp"] = utc_timestamp();
    return out;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_csv(const std::string& path, const std::vector<DecaySample>& curve) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open CSV output " + path);
    out << "r,value\n";
    char buf[64];
    for (const DecaySample& s : curve) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s.r, s.value);
        out << buf;
    }
}

json fit_json(const DecayFit& f) {
    return {{"exponent", f.exponent}, {"intercept", f.intercept}, {"r_squared", f.r_squared},
            {"n_samples", f.n_samples}};
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace syz::cli
