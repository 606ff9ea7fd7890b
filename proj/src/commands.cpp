#include "secrecy/commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "secrecy/errors.hpp"
#include "secrecy/format.hpp"

namespace secrecy {

using Json = nlohmann::ordered_json;

namespace {

// JSON has no infinities; non-finite values travel as their text form.
Json num(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

Json law_json(const PowerDistribution& law) {
    Json j;
    j["describe"] = law.describe();
    if (law.kind() == PowerDistribution::Kind::uniform_linear) {
        j["kind"] = "uniform";
        j["rho_min"] = num(law.min());
        j["rho_max"] = num(law.max());
    } else {
        j["kind"] = "discrete";
        Json levels = Json::array();
        for (const auto& l : law.levels()) levels.push_back({{"power", num(l.power)}, {"probability", num(l.probability)}});
        j["levels"] = levels;
    }
    return j;
}

Json profile_json(const MisclassProfile& p) {
    Json j;
    const char* rows[] = {"(A,B)", "(A,Bc)", "(Ac,B)"};
    for (std::size_t r = 0; r < 3; ++r) j[rows[r]] = {{"A", num(p.p[r][0])}, {"B", num(p.p[r][1])}, {"other", num(p.p[r][2])}};
    j["p_e|(A,B)->A"] = num(p.p_e_both_as_a);
    j["p_e|(A,B)->B"] = num(p.p_e_both_as_b);
    return j;
}

Json profile_json(const TdmDetectionProfile& p) {
    return {{"p_m", num(p.p_m)}, {"p_f", num(p.p_f)}, {"p_e|m", num(p.p_e_given_m)}};
}

std::vector<std::pair<std::string, double>> breakdown_fields(const RateBreakdownTwoWay& b) {
    return {{"r_M", b.r_M},   {"p_e_M", b.p_e_M}, {"d_A", b.d_A},   {"d_B", b.d_B},  {"p_e_EA", b.p_e_EA},
            {"p_e_EB", b.p_e_EB}, {"r_EA", b.r_EA}, {"r_EB", b.r_EB}, {"r_s", b.r_s}};
}

std::vector<std::pair<std::string, double>> breakdown_fields(const RateBreakdownTdm& b) {
    return {{"alpha_M", b.alpha_M}, {"alpha_E", b.alpha_E}, {"p_e_M", b.p_e_M}, {"p_e_E", b.p_e_E},
            {"r_M", b.r_M},         {"r_E", b.r_E},         {"r_s", b.r_s}};
}

template <typename B>
Json breakdown_json(const B& b) {
    Json j;
    for (const auto& [k, v] : breakdown_fields(b)) j[k] = num(v);
    return j;
}

void base_record(OutputRecord& rec, const std::string& command, const RunConfig& cfg) {
    rec.command = command;
    rec.input = cfg.echo();
    rec.provenance = {{"tool", kToolVersion}, {"seed", std::to_string(cfg.seed)}};
}

void add_quantity(OutputRecord& rec, const std::string& name, double value) {
    rec.csv_rows.push_back({name, format_number(value)});
}

std::pair<MisclassProfile, RateBreakdownTwoWay> twoway_point(const RunConfig& cfg) {
    const auto law = cfg.power.build();
    const auto setup = cfg.problem_setup();
    const auto cls = build_classifier(cfg.classifier_spec(), cfg.geometry, law, cfg.channel);
    const auto prof = misclass_profile(cfg.geometry, law, cls, cfg.channel, setup.method);
    const auto bd = twoway_bounds(cfg.p_t, prof, cfg.geometry, law.min(), cfg.fec, cfg.channel.legit_noise_variance);
    return {prof, bd};
}

std::pair<TdmDetectionProfile, RateBreakdownTdm> tdm_point(const RunConfig& cfg) {
    const auto data = cfg.power.build();
    const auto jam = cfg.jam_power.build();
    const auto setup = cfg.problem_setup();
    const auto det = build_detector(cfg.classifier_spec(), cfg.geometry, data);
    const auto prof = tdm_detection_profile(cfg.geometry, data, jam, det, cfg.channel, setup.method);
    const auto bd = tdm_bounds(cfg.beta, prof, cfg.geometry, data.min(), cfg.fec, cfg.channel.legit_noise_variance);
    return {prof, bd};
}

Json estimate_json(const Estimate& e) {
    Json j;
    if (e.defined()) {
        j["value"] = num(e.value);
        j["std_error"] = num(e.std_error);
    } else {
        j["value"] = nullptr;
        j["std_error"] = nullptr;
    }
    j["n"] = e.n;
    j["low_confidence"] = e.n < kLowConfidenceCount;
    return j;
}

void add_estimate(OutputRecord& rec, Json& into, const std::string& name, const Estimate& e) {
    into[name] = estimate_json(e);
    rec.csv_rows.push_back({name, e.defined() ? format_number(e.value) : "", e.defined() ? format_number(e.std_error) : "",
                            std::to_string(e.n), e.n < kLowConfidenceCount ? "low_confidence" : ""});
}

Json comparison_json(OutputRecord& rec, const ComparisonReport& report) {
    Json j;
    j["sigma"] = report.sigma;
    j["min_fraction"] = report.min_fraction;
    j["fraction_within"] = num(report.fraction_within);
    j["pass"] = report.pass;
    Json entries = Json::array();
    for (const auto& e : report.entries) {
        entries.push_back({{"name", e.name},
                           {"analytic", num(e.analytic)},
                           {"empirical", e.empirical ? num(*e.empirical) : Json(nullptr)},
                           {"n", e.n},
                           {"z", num(e.z)},
                           {"within", e.within}});
        rec.csv_rows.push_back({"z:" + e.name, format_number(e.z), "", std::to_string(e.n), e.within ? "" : "outside"});
    }
    j["entries"] = entries;
    rec.csv_rows.push_back({"comparison_pass", report.pass ? "1" : "0", "", "", ""});
    return j;
}

Json maxmin_json(const MaxMinResult& r) {
    Json j;
    j["scheme"] = to_string(r.scheme);
    j["r_sec"] = num(r.r_sec);
    j["inner_min"] = num(r.inner_min);
    j["argmax_param"] = num(r.param);
    j["law"] = law_json(r.law);
    if (r.jam_law) j["jam_law"] = law_json(*r.jam_law);
    j["argmin_theta"] = num(r.theta);
    j["argmin_classifier"] = r.classifier.describe();
    j["legit_index"] = {{"param", r.legit.param}, {"law", r.legit.law}, {"jam_law", r.legit.jam_law}};
    j["adversary_index"] = {{"theta", r.adversary.theta}, {"classifier", r.adversary.classifier}};
    return j;
}

constexpr const char* kFamilyNote = "uniform-linear power laws with endpoints on the law grid";

}  // namespace

std::string OutputRecord::render(OutputFormat format) const {
    if (format == OutputFormat::json) {
        Json j;
        j["command"] = command;
        Json in = Json::object();
        for (const auto& [k, v] : input) in[k] = v;
        j["input"] = in;
        j["result"] = result;
        Json prov = Json::object();
        for (const auto& [k, v] : provenance) prov[k] = v;
        j["provenance"] = prov;
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "# command = " << command << '\n';
    for (const auto& [k, v] : input) out << "# " << k << " = " << v << '\n';
    for (const auto& [k, v] : provenance) out << "# provenance." << k << " = " << v << '\n';
    for (std::size_t i = 0; i < csv_header.size(); ++i) out << (i ? "," : "") << csv_field(csv_header[i]);
    out << '\n';
    for (const auto& row : csv_rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
        out << '\n';
    }
    return out.str();
}

OutputRecord cmd_rates(const RunConfig& cfg) {
    OutputRecord rec;
    base_record(rec, "rates", cfg);
    rec.csv_header = {"quantity", "value"};
    const auto law = cfg.power.build();
    const double solo_share = cfg.scheme == Scheme::tdm ? 1.0 - cfg.beta : cfg.p_t * (1.0 - cfg.p_t);
    const double avg_pe =
        average_legit_error_prob(law, cfg.geometry.d_ab, cfg.geometry.alpha, cfg.fec, cfg.channel.legit_noise_variance);
    const double r_m_average = solo_share * (1.0 - binary_entropy(avg_pe));
    rec.result["scheme"] = to_string(cfg.scheme);
    rec.result[cfg.scheme == Scheme::tdm ? "beta" : "p_t"] = num(cfg.scheme_param());
    rec.result["rho_min"] = num(law.min());
    if (cfg.scheme == Scheme::twoway) {
        const auto [prof, bd] = twoway_point(cfg);
        rec.result["profile"] = profile_json(prof);
        rec.result["breakdown"] = breakdown_json(bd);
        rec.result["r_sec_point"] = num(bd.r_s);
        const char* rows[] = {"(A,B)", "(A,Bc)", "(Ac,B)"};
        const char* cols[] = {"A", "B", "other"};
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c) add_quantity(rec, std::string(rows[r]) + "->" + cols[c], prof.p[r][c]);
        add_quantity(rec, "p_e|(A,B)->A", prof.p_e_both_as_a);
        add_quantity(rec, "p_e|(A,B)->B", prof.p_e_both_as_b);
        for (const auto& [k, v] : breakdown_fields(bd)) add_quantity(rec, k, v);
        add_quantity(rec, "r_sec_point", bd.r_s);
    } else {
        const auto [prof, bd] = tdm_point(cfg);
        rec.result["profile"] = profile_json(prof);
        rec.result["breakdown"] = breakdown_json(bd);
        rec.result["r_sec_point"] = num(0.5 * bd.r_s);
        add_quantity(rec, "p_m", prof.p_m);
        add_quantity(rec, "p_f", prof.p_f);
        add_quantity(rec, "p_e|m", prof.p_e_given_m);
        for (const auto& [k, v] : breakdown_fields(bd)) add_quantity(rec, k, v);
        add_quantity(rec, "r_sec_point", 0.5 * bd.r_s);
    }
    // Main-channel rate with the error probability averaged over the power
    // law instead of taken at rho_min.
    rec.result["r_M_average"] = num(r_m_average);
    add_quantity(rec, "r_M_average", r_m_average);
    return rec;
}

OutputRecord cmd_optimize(const RunConfig& cfg, int threads) {
    OutputRecord rec;
    base_record(rec, "optimize", cfg);
    const auto grid = cfg.search_grid(cfg.scheme);
    const auto setup = cfg.problem_setup();
    const auto r = optimize(cfg.scheme, grid, setup, threads);
    const double check = secrecy_rate_at(cfg.scheme, r.legit, r.adversary, grid, setup);
    const double expected = cfg.scheme == Scheme::tdm ? 0.5 * check : check;
    if (std::abs(expected - r.r_sec) > 1e-12)
        throw ContractViolation("optimizer result does not match the rate recomputed at its arg points");
    rec.result = maxmin_json(r);
    rec.provenance.emplace_back("grid", grid.describe());
    rec.provenance.emplace_back("law_family", kFamilyNote);
    rec.csv_header = {"quantity", "value"};
    rec.csv_rows = {{"scheme", to_string(r.scheme)},
                    {"r_sec", format_number(r.r_sec)},
                    {"inner_min", format_number(r.inner_min)},
                    {"argmax_param", format_number(r.param)},
                    {"law", r.law.describe()},
                    {"jam_law", r.jam_law ? r.jam_law->describe() : ""},
                    {"argmin_theta", format_number(r.theta)},
                    {"argmin_classifier", r.classifier.describe()}};
    return rec;
}

OutputRecord cmd_sweep(const RunConfig& cfg, int threads) {
    OutputRecord rec;
    base_record(rec, "sweep", cfg);
    const auto ratios = ratio_points(cfg.sweep_ratio_min, cfg.sweep_ratio_max, cfg.sweep_steps);
    SweepOptions options;
    options.d_ab = cfg.geometry.d_ab;
    options.r_e = cfg.geometry.r_e;
    options.alpha = cfg.geometry.alpha;
    options.placement = cfg.sweep_placement;
    const auto setup = cfg.problem_setup();

    std::vector<std::vector<SweepRow>> per_scheme;
    for (Scheme s : cfg.sweep_schemes) {
        per_scheme.push_back(sweep_ratio(ratios, {s}, cfg.search_grid(s), setup, options, threads));
    }
    rec.csv_header = {"ratio", "scheme", "r_sec", "argmax_param", "argmin_theta", "classifier_desc"};
    Json rows = Json::array();
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        for (const auto& scheme_rows : per_scheme) {
            const auto& row = scheme_rows[i];
            Json j;
            j["ratio"] = num(row.ratio);
            j["scheme"] = to_string(row.scheme);
            if (row.realizable) {
                j.update(maxmin_json(row.result));
                rec.csv_rows.push_back({format_number(row.ratio), to_string(row.scheme), format_number(row.result.r_sec),
                                        format_number(row.result.param), format_number(row.result.theta),
                                        row.result.classifier.describe()});
            } else {
                j["error"] = "unrealizable_ratio";
                rec.csv_rows.push_back(
                    {format_number(row.ratio), to_string(row.scheme), "", "", "", "error=unrealizable_ratio"});
            }
            rows.push_back(j);
        }
    }
    rec.result["rows"] = rows;
    rec.provenance.emplace_back("grid", cfg.search_grid(cfg.sweep_schemes.front()).describe());
    rec.provenance.emplace_back("law_family", kFamilyNote);
    return rec;
}

OutputRecord cmd_simulate(const RunConfig& cfg, int threads) {
    OutputRecord rec;
    base_record(rec, "simulate", cfg);
    rec.csv_header = {"quantity", "value", "std_error", "n", "flag"};
    const auto sim = cfg.sim_config();
    sim.validate();
    std::ofstream trace;
    if (!cfg.trace_path.empty()) {
        trace.open(cfg.trace_path);
        if (!trace) throw ConfigError("simulate.trace: cannot open " + cfg.trace_path);
    }
    Json estimates;
    rec.result["scheme"] = to_string(cfg.scheme);
    rec.result["frames"] = cfg.frames;
    if (cfg.scheme == Scheme::twoway) {
        // The serial loop gives the same tallies; it is only used when a
        // trace is requested.
        const auto run = cfg.trace_path.empty() ? simulate_twoway(sim, threads) : reference::simulate_twoway(sim, &trace);
        const auto& p = run.profile;
        const char* rows[] = {"(A,B)", "(A,Bc)", "(Ac,B)"};
        const char* cols[] = {"A", "B", "other"};
        const Event events[] = {Event::both, Event::a_only, Event::b_only};
        const Label labels[] = {Label::a, Label::b, Label::other};
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c)
                add_estimate(rec, estimates, std::string(rows[r]) + "->" + cols[c], p.misclass(events[r], labels[c]));
        add_estimate(rec, estimates, "p_e|(A,B)->A", p.capture_error(Label::a));
        add_estimate(rec, estimates, "p_e|(A,B)->B", p.capture_error(Label::b));
        add_estimate(rec, estimates, "legit_error_rate", p.legit_error_rate());
        const double n = static_cast<double>(p.twoway.frames);
        add_estimate(rec, estimates, "a_active",
                     {p.twoway.a_active / n, std::sqrt((p.twoway.a_active / n) * (1 - p.twoway.a_active / n) / n),
                      p.twoway.frames});
        rec.result["estimates"] = estimates;
        rec.result["undefined"] = p.undefined_estimates();
        if (run.rates) {
            rec.result["empirical_rates"] = breakdown_json(*run.rates);
            for (const auto& [k, v] : breakdown_fields(*run.rates))
                rec.csv_rows.push_back({"empirical." + k, format_number(v), "", "", ""});
        } else {
            rec.result["empirical_rates"] = nullptr;
            rec.csv_rows.push_back({"empirical.r_s", "", "", "", "absent"});
        }
        const auto [prof, bd] = twoway_point(cfg);
        rec.result["analytic_profile"] = profile_json(prof);
        rec.result["analytic_rates"] = breakdown_json(bd);
        for (const auto& [k, v] : breakdown_fields(bd)) rec.csv_rows.push_back({"analytic." + k, format_number(v), "", "", ""});
        rec.result["comparison"] = comparison_json(rec, compare_profiles(prof, p));
    } else {
        const auto run = cfg.trace_path.empty() ? simulate_tdm(sim, threads) : reference::simulate_tdm(sim, &trace);
        const auto& p = run.profile;
        add_estimate(rec, estimates, "p_m", p.p_m());
        add_estimate(rec, estimates, "p_f", p.p_f());
        add_estimate(rec, estimates, "p_e|m", p.p_e_given_m());
        add_estimate(rec, estimates, "legit_error_rate", p.legit_error_rate());
        rec.result["estimates"] = estimates;
        rec.result["undefined"] = p.undefined_estimates();
        if (run.rates) {
            rec.result["empirical_rates"] = breakdown_json(*run.rates);
            for (const auto& [k, v] : breakdown_fields(*run.rates))
                rec.csv_rows.push_back({"empirical." + k, format_number(v), "", "", ""});
        } else {
            rec.result["empirical_rates"] = nullptr;
            rec.csv_rows.push_back({"empirical.r_s", "", "", "", "absent"});
        }
        const auto [prof, bd] = tdm_point(cfg);
        rec.result["analytic_profile"] = profile_json(prof);
        rec.result["analytic_rates"] = breakdown_json(bd);
        for (const auto& [k, v] : breakdown_fields(bd)) rec.csv_rows.push_back({"analytic." + k, format_number(v), "", "", ""});
        rec.result["comparison"] = comparison_json(rec, compare_profiles(prof, p));
    }
    return rec;
}

}  // namespace secrecy
