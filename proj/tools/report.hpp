#pragma once

// JSON and CSV rendering of library results for kolmo-lab.

#include <kolmo/besov.hpp>
#include <kolmo/euclid.hpp>
#include <kolmo/frames.hpp>
#include <kolmo/operators.hpp>

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#ifndef KOLMO_VERSION
#define KOLMO_VERSION "0.0.0"
#endif

namespace kolmo::report {

using json = nlohmann::ordered_json;

inline constexpr const char *schema_id = "kolmo-lab/report/1";

inline json complex_json(Complex c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

/// Non-finite doubles become null so every report stays valid JSON.
inline json number(double x)
{
    if (!std::isfinite(x))
        return nullptr;
    return x;
}

inline json numbers(const std::vector<double> &v)
{
    json a = json::array();
    for (double x : v)
        a.push_back(number(x));
    return a;
}

inline std::string utc_timestamp()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline json envelope(const std::string &command, const json &config, bool timestamp)
{
    json j;
    j["schema"] = schema_id;
    j["tool"] = "kolmo-lab";
    j["version"] = KOLMO_VERSION;
    j["command"] = command;
    if (timestamp)
        j["timestamp"] = utc_timestamp();
    j["config"] = config;
    return j;
}

inline json profile_points(const std::vector<BerezinProfilePoint> &pts)
{
    json a = json::array();
    for (const auto &p : pts)
        a.push_back({{"r", p.r},
                     {"max_abs", number(p.max_abs)},
                     {"min_abs", number(p.min_abs)},
                     {"truncation_remainder", number(p.truncation_remainder)},
                     {"grid_id", p.grid_id}});
    return a;
}

inline json diagnostic(const DiagnosticReport &r)
{
    json j;
    j["kind"] = r.kind;
    j["symbol"] = r.symbol;
    j["deg"] = r.deg;
    j["berezin_profile"] = profile_points(r.berezin_profile);
    j["operator_profile"] = profile_points(r.operator_profile);
    j["singular_values"] = numbers(r.singular_values);
    j["matrix_grid_id"] = r.matrix_grid_id;
    j["numerical_rank"] = r.numerical_rank;
    j["sv_ratio"] = number(r.sv_ratio);
    if (r.has_localization) {
        json loc;
        loc["p"] = r.p;
        loc["delta"] = r.delta;
        loc["rows_sup"] = number(r.rows_sup);
        loc["sup_sample"] = r.sup_sample;
        loc["grid_id"] = r.localization_grid_id;
        json rows = json::array();
        for (const auto &row : r.localization)
            rows.push_back({{"R", row.R},
                            {"columns_sup", number(row.columns_sup)},
                            {"complements_sup", number(row.complements_sup)}});
        loc["rows"] = rows;
        j["localization"] = loc;
    }
    if (r.kind == "hankel") {
        json v = json::array();
        for (const auto &row : r.vmo)
            v.push_back({{"r", row.r}, {"modulus", number(row.modulus)}});
        j["vmo"] = v;
        j["vmo_grid_id"] = r.vmo_grid_id;
        j["conjugation_convention"] = r.conjugation_convention;
    }
    j["verdict"] = to_string(r.verdict);
    j["verdict_rule"] = r.verdict_rule;
    j["note"] = r.note;
    return j;
}

inline json tail_profile(const TailProfile &p, const char *level_name)
{
    json rows = json::array();
    for (std::size_t n = 0; n < p.values.size(); ++n)
        rows.push_back({{"level", n + 1},
                        {level_name, p.levels[n]},
                        {"value", number(p.values[n])},
                        {"argmax", p.argmax[n]},
                        {"grid_id", p.grid_ids[n]}});
    return rows;
}

inline json bp(const BpAdmissibility &b)
{
    return {{"sigma_integral", number(b.sigma_integral)},
            {"dual_integral", number(b.dual_integral)},
            {"sigma_converged", b.sigma_converged},
            {"dual_converged", b.dual_converged},
            {"admissible_hint", b.admissible_hint},
            {"refinements", b.refinements}};
}

inline json umbrella(const UmbrellaCapacity &c)
{
    return {{"bound", c.bound},
            {"log10_bound", number(c.log10_bound)},
            {"saturated", c.saturated},
            {"level", c.level},
            {"tail", number(c.tail)},
            {"umbrella_mass", number(c.umbrella_mass)},
            {"cells", c.cells},
            {"cube_side", number(c.cube_side)}};
}

/// Fixed, locale-free rendering for CSV cells.
inline std::string csv_num(double x)
{
    if (!std::isfinite(x))
        return "nan";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << x;
    return os.str();
}

/// Long-format plot data: series,x,y.
class SeriesCsv
{
public:
    void add(const std::string &series, double x, double y)
    {
        rows_ << series << ',' << csv_num(x) << ',' << csv_num(y) << '\n';
    }

    void write(std::ostream &os) const { os << "series,x,y\n" << rows_.str(); }

private:
    std::ostringstream rows_;
};

} // namespace kolmo::report
