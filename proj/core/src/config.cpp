#include "floqmag/config.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "floqmag/errors.hpp"

namespace floqmag {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            fail("ConfigError", "unknown key \"" + it.key() + "\" in " + where);
    }
}

double need_number(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key))
        fail("ConfigError", std::string("missing key \"") + key + "\" in " + where);
    if (!obj[key].is_number())
        fail("ConfigError", std::string("key \"") + key + "\" in " + where +
                                " must be a number");
    return obj[key].get<double>();
}

Profile parse_profile(const json& p, double period) {
    if (!p.is_object()) fail("ConfigError", "\"profile\" must be an object");
    if (!p.contains("kind")) fail("ConfigError", "missing key \"kind\" in profile");
    const std::string kind = p["kind"].get<std::string>();
    if (kind == "constant") {
        reject_unknown(p, {"kind", "B0"}, "profile");
        return ConstantProfile{need_number(p, "B0", "profile")};
    }
    if (kind == "pulsed") {
        reject_unknown(p, {"kind", "B0", "T0"}, "profile");
        return PulsedProfile{need_number(p, "B0", "profile"),
                             need_number(p, "T0", "profile")};
    }
    if (kind == "sinusoidal") {
        reject_unknown(p, {"kind", "Bdc", "Bac"}, "profile");
        return SinusoidalProfile{need_number(p, "Bdc", "profile"),
                                 need_number(p, "Bac", "profile")};
    }
    if (kind == "sampled") {
        reject_unknown(p, {"kind", "times", "values", "interpolation"}, "profile");
        SampledProfile sp;
        if (!p.contains("times") || !p.contains("values"))
            fail("ConfigError", "sampled profile needs \"times\" and \"values\"");
        sp.times = p["times"].get<std::vector<double>>();
        sp.values = p["values"].get<std::vector<double>>();
        std::string interp = p.value("interpolation", "cubic");
        if (interp == "linear") sp.interpolation = Interpolation::Linear;
        else if (interp == "cubic") sp.interpolation = Interpolation::Cubic;
        else fail("ConfigError", "interpolation must be \"linear\" or \"cubic\"");
        (void)period;
        return sp;
    }
    fail("ConfigError", "unknown profile kind \"" + kind + "\"");
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("ConfigError", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("ConfigError", "top level must be an object");
    reject_unknown(doc,
                   {"period", "mass", "charge", "profile", "potential", "grid",
                    "tolerances", "output_dir"},
                   "top level");
    const double period = need_number(doc, "period", "top level");
    const double mass = need_number(doc, "mass", "top level");
    const double charge = need_number(doc, "charge", "top level");
    if (!doc.contains("profile")) fail("ConfigError", "missing key \"profile\"");
    FieldSpec field(period, mass, charge, parse_profile(doc["profile"], period));

    RunConfig cfg{field, std::nullopt, GridSpec(), Tolerances(), "."};
    if (doc.contains("potential")) {
        const auto& p = doc["potential"];
        reject_unknown(p, {"v0", "rho"}, "potential");
        cfg.potential = PotentialSpec(need_number(p, "v0", "potential"),
                                      need_number(p, "rho", "potential"));
    }
    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        reject_unknown(g, {"n", "L"}, "grid");
        cfg.grid = GridSpec(static_cast<std::size_t>(need_number(g, "n", "grid")),
                            need_number(g, "L", "grid"));
    }
    if (doc.contains("tolerances")) {
        const auto& t = doc["tolerances"];
        reject_unknown(t, {"tau_D", "gamma_min", "wronskian_tol"}, "tolerances");
        if (t.contains("tau_D")) cfg.tolerances.tau_D = t["tau_D"].get<double>();
        if (t.contains("gamma_min"))
            cfg.tolerances.gamma_min = t["gamma_min"].get<double>();
        if (t.contains("wronskian_tol"))
            cfg.tolerances.wronskian_tol = t["wronskian_tol"].get<double>();
        require(cfg.tolerances.tau_D > 0.0 && cfg.tolerances.gamma_min > 0.0 &&
                    cfg.tolerances.wronskian_tol > 0.0,
                "ConfigError", "tolerances must be positive");
    }
    if (doc.contains("output_dir")) cfg.output_dir = doc["output_dir"].get<std::string>();
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is.good()) fail("ConfigError", "cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return from_json_text(ss.str());
}

std::string RunConfig::to_json_text() const {
    json doc;
    doc["period"] = field.period();
    doc["mass"] = field.mass();
    doc["charge"] = field.charge();
    json prof;
    std::visit(
        [&](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, ConstantProfile>) {
                prof["kind"] = "constant";
                prof["B0"] = p.B0;
            } else if constexpr (std::is_same_v<P, PulsedProfile>) {
                prof["kind"] = "pulsed";
                prof["B0"] = p.B0;
                prof["T0"] = p.T0;
            } else if constexpr (std::is_same_v<P, SinusoidalProfile>) {
                prof["kind"] = "sinusoidal";
                prof["Bdc"] = p.Bdc;
                prof["Bac"] = p.Bac;
            } else {
                prof["kind"] = "sampled";
                prof["times"] = p.times;
                prof["values"] = p.values;
                prof["interpolation"] =
                    p.interpolation == Interpolation::Linear ? "linear" : "cubic";
            }
        },
        field.profile());
    doc["profile"] = prof;
    if (potential) {
        doc["potential"] = {{"v0", potential->v0()}, {"rho", potential->rho()}};
    }
    doc["grid"] = {{"n", grid.n}, {"L", grid.half_extent}};
    doc["tolerances"] = {{"tau_D", tolerances.tau_D},
                         {"gamma_min", tolerances.gamma_min},
                         {"wronskian_tol", tolerances.wronskian_tol}};
    doc["output_dir"] = output_dir;
    return doc.dump(2);
}

std::string RunConfig::hash() const {
    const std::string s = to_json_text();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hex[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace floqmag
