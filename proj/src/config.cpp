#include "secrecy/config.hpp"

#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "secrecy/errors.hpp"
#include "secrecy/format.hpp"

namespace secrecy {

PowerDistribution LawConfig::build() const {
    if (kind == Kind::uniform) return PowerDistribution::uniform_db(min_db, max_db);
    if (levels_db.size() != probabilities.size())
        throw ConfigError("levels_db and probabilities must have the same length");
    std::vector<PowerDistribution::Level> levels;
    for (std::size_t i = 0; i < levels_db.size(); ++i) levels.push_back({from_db(levels_db[i]), probabilities[i]});
    return PowerDistribution::discrete(std::move(levels));
}

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& why) {
    throw ConfigError(key + ": " + why);
}

double number_value(const std::string& key, const std::string& text) {
    double v = 0.0;
    if (!parse_number(text, v)) bad_value(key, "expected a number, got '" + text + "'");
    return v;
}

std::uint64_t count_value(const std::string& key, const std::string& text) {
    const double v = number_value(key, text);
    if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e18) bad_value(key, "expected a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

bool bool_value(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    bad_value(key, "expected true or false, got '" + text + "'");
}

Scheme scheme_value(const std::string& key, const std::string& text) {
    if (text == "twoway") return Scheme::twoway;
    if (text == "tdm") return Scheme::tdm;
    bad_value(key, "expected twoway or tdm, got '" + text + "'");
}

std::string join_numbers(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_number(values[i]);
    }
    return out;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

void check_probability(const std::string& key, double v) {
    if (!(v >= 0.0 && v <= 1.0)) bad_value(key, "must lie in [0,1], got " + format_number(v));
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

void law_setters(std::map<std::string, Setter>& s, const std::string& prefix, LawConfig RunConfig::*law) {
    s[prefix + ".kind"] = [law, prefix](RunConfig& c, const std::string& v) {
        if (v == "uniform") (c.*law).kind = LawConfig::Kind::uniform;
        else if (v == "discrete") (c.*law).kind = LawConfig::Kind::discrete;
        else bad_value(prefix + ".kind", "expected uniform or discrete, got '" + v + "'");
    };
    s[prefix + ".min_db"] = [law, prefix](RunConfig& c, const std::string& v) {
        (c.*law).min_db = number_value(prefix + ".min_db", v);
    };
    s[prefix + ".max_db"] = [law, prefix](RunConfig& c, const std::string& v) {
        (c.*law).max_db = number_value(prefix + ".max_db", v);
    };
    s[prefix + ".levels_db"] = [law, prefix](RunConfig& c, const std::string& v) {
        (c.*law).levels_db = parse_number_list(v, prefix + ".levels_db");
    };
    s[prefix + ".probabilities"] = [law, prefix](RunConfig& c, const std::string& v) {
        (c.*law).probabilities = parse_number_list(v, prefix + ".probabilities");
    };
}

const std::map<std::string, Setter>& setters() {
    static const auto table = [] {
        std::map<std::string, Setter> s;
        s["scheme"] = [](RunConfig& c, const std::string& v) { c.scheme = scheme_value("scheme", v); };
        s["p_t"] = [](RunConfig& c, const std::string& v) { c.p_t = number_value("p_t", v); };
        s["beta"] = [](RunConfig& c, const std::string& v) { c.beta = number_value("beta", v); };
        s["geometry.d_ab"] = [](RunConfig& c, const std::string& v) { c.geometry.d_ab = number_value("geometry.d_ab", v); };
        s["geometry.r_e"] = [](RunConfig& c, const std::string& v) { c.geometry.r_e = number_value("geometry.r_e", v); };
        s["geometry.theta"] = [](RunConfig& c, const std::string& v) {
            c.geometry.theta = number_value("geometry.theta", v);
        };
        s["geometry.alpha"] = [](RunConfig& c, const std::string& v) {
            c.geometry.alpha = number_value("geometry.alpha", v);
        };
        law_setters(s, "power", &RunConfig::power);
        law_setters(s, "jam_power", &RunConfig::jam_power);
        s["channel.mode"] = [](RunConfig& c, const std::string& v) {
            if (v == "incoherent") c.channel.mode = Superposition::incoherent;
            else if (v == "coherent") c.channel.mode = Superposition::coherent;
            else bad_value("channel.mode", "expected incoherent or coherent, got '" + v + "'");
        };
        s["channel.wave_number"] = [](RunConfig& c, const std::string& v) {
            c.channel.wave_number = number_value("channel.wave_number", v);
        };
        s["channel.eve_noiseless"] = [](RunConfig& c, const std::string& v) {
            c.channel.eve_noiseless = bool_value("channel.eve_noiseless", v);
        };
        s["channel.legit_noise_variance"] = [](RunConfig& c, const std::string& v) {
            c.channel.legit_noise_variance = number_value("channel.legit_noise_variance", v);
        };
        s["channel.eve_noise_power"] = [](RunConfig& c, const std::string& v) {
            c.channel.eve_noise_power = number_value("channel.eve_noise_power", v);
        };
        s["channel.silence_floor_db"] = [](RunConfig& c, const std::string& v) {
            c.channel.silence_floor_db = number_value("channel.silence_floor_db", v);
        };
        s["classifier.kind"] = [](RunConfig& c, const std::string& v) {
            if (v != "threshold" && v != "ml" && v != "blind" && v != "oracle")
                bad_value("classifier.kind", "expected threshold, ml, blind or oracle, got '" + v + "'");
            c.classifier_kind = v;
        };
        s["classifier.t1_db"] = [](RunConfig& c, const std::string& v) { c.t1_db = number_value("classifier.t1_db", v); };
        s["classifier.t2_db"] = [](RunConfig& c, const std::string& v) { c.t2_db = number_value("classifier.t2_db", v); };
        s["classifier.relative"] = [](RunConfig& c, const std::string& v) {
            c.relative = bool_value("classifier.relative", v);
        };
        s["classifier.ml_table"] = [](RunConfig& c, const std::string& v) { c.ml_table = v; };
        s["classifier.ml_sigma_db"] = [](RunConfig& c, const std::string& v) {
            c.ml_sigma_db = number_value("classifier.ml_sigma_db", v);
        };
        s["fec.mode"] = [](RunConfig& c, const std::string& v) {
            if (v == "ideal") c.fec.ideal = true;
            else if (v == "off") c.fec.ideal = false;
            else bad_value("fec.mode", "expected ideal or off, got '" + v + "'");
        };
        s["fec.threshold_db"] = [](RunConfig& c, const std::string& v) {
            c.fec_threshold_db = number_value("fec.threshold_db", v);
            c.fec.threshold_snr = from_db(c.fec_threshold_db);
        };
        s["profile.method"] = [](RunConfig& c, const std::string& v) {
            if (v == "analytic") c.profile_method = ProfileMethod::Kind::analytic;
            else if (v == "montecarlo") c.profile_method = ProfileMethod::Kind::montecarlo;
            else bad_value("profile.method", "expected analytic or montecarlo, got '" + v + "'");
        };
        s["profile.samples"] = [](RunConfig& c, const std::string& v) {
            c.profile_samples = count_value("profile.samples", v);
        };
        s["seed"] = [](RunConfig& c, const std::string& v) { c.seed = count_value("seed", v); };
        s["frames"] = [](RunConfig& c, const std::string& v) { c.frames = count_value("frames", v); };
        s["output.format"] = [](RunConfig& c, const std::string& v) {
            if (v == "csv") c.format = OutputFormat::csv;
            else if (v == "json") c.format = OutputFormat::json;
            else bad_value("output.format", "expected csv or json, got '" + v + "'");
        };
        s["output.path"] = [](RunConfig& c, const std::string& v) { c.out_path = v; };
        s["grid.params"] = [](RunConfig& c, const std::string& v) { c.grid_params = v; };
        s["grid.law_endpoints_db"] = [](RunConfig& c, const std::string& v) { c.grid_law_endpoints_db = v; };
        s["grid.jam_law_endpoints_db"] = [](RunConfig& c, const std::string& v) { c.grid_jam_law_endpoints_db = v; };
        s["grid.thetas"] = [](RunConfig& c, const std::string& v) { c.grid_thetas = v; };
        s["grid.classifiers"] = [](RunConfig& c, const std::string& v) { c.grid_classifiers = v; };
        s["sweep.ratio_min"] = [](RunConfig& c, const std::string& v) {
            c.sweep_ratio_min = number_value("sweep.ratio_min", v);
        };
        s["sweep.ratio_max"] = [](RunConfig& c, const std::string& v) {
            c.sweep_ratio_max = number_value("sweep.ratio_max", v);
        };
        s["sweep.steps"] = [](RunConfig& c, const std::string& v) {
            const auto n = count_value("sweep.steps", v);
            if (n < 1 || n > 100000) bad_value("sweep.steps", "must lie in [1, 100000]");
            c.sweep_steps = static_cast<int>(n);
        };
        s["sweep.schemes"] = [](RunConfig& c, const std::string& v) {
            c.sweep_schemes.clear();
            for (const auto& part : split(v, ',')) c.sweep_schemes.push_back(scheme_value("sweep.schemes", part));
            if (c.sweep_schemes.empty()) bad_value("sweep.schemes", "empty scheme list");
        };
        s["sweep.tdm_placement"] = [](RunConfig& c, const std::string& v) {
            if (v == "transmitter_near") c.sweep_placement = TdmPlacement::transmitter_near;
            else if (v == "transmitter_far") c.sweep_placement = TdmPlacement::transmitter_far;
            else bad_value("sweep.tdm_placement", "expected transmitter_near or transmitter_far, got '" + v + "'");
        };
        s["simulate.trace"] = [](RunConfig& c, const std::string& v) { c.trace_path = v; };
        return s;
    }();
    return table;
}

void validate_law(const std::string& prefix, const LawConfig& law) {
    if (law.kind == LawConfig::Kind::uniform) {
        if (!std::isfinite(law.min_db)) bad_value(prefix + ".min_db", "must be finite");
        if (!std::isfinite(law.max_db)) bad_value(prefix + ".max_db", "must be finite");
        if (!(law.min_db <= law.max_db)) bad_value(prefix + ".max_db", "must be >= " + prefix + ".min_db");
    } else {
        if (law.levels_db.empty()) bad_value(prefix + ".levels_db", "discrete law needs at least one level");
        if (law.levels_db.size() != law.probabilities.size())
            bad_value(prefix + ".probabilities", "needs one entry per level");
        for (double l : law.levels_db) {
            if (!std::isfinite(l)) bad_value(prefix + ".levels_db", "levels must be finite");
        }
    }
    try {
        (void)law.build();
    } catch (const std::exception& e) {
        bad_value(prefix, e.what());
    }
}

void validate(const RunConfig& c, const ConfigEntries& entries) {
    check_probability("p_t", c.p_t);
    check_probability("beta", c.beta);
    try {
        c.geometry.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("geometry: ") + e.what());
    }
    validate_law("power", c.power);
    validate_law("jam_power", c.jam_power);
    try {
        c.channel.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("channel: ") + e.what());
    }
    if (std::isnan(c.t1_db)) bad_value("classifier.t1_db", "must be a number");
    if (!c.relative && !(c.t1_db <= c.t2_db)) bad_value("classifier.t2_db", "must be >= classifier.t1_db");
    if (!(c.ml_sigma_db > 0.0)) bad_value("classifier.ml_sigma_db", "must be > 0");
    if (c.scheme == Scheme::tdm && c.classifier_kind == "ml")
        bad_value("classifier.kind", "ml applies to the two-way scheme only");
    if (c.frames < 1) bad_value("frames", "must be >= 1");
    if (c.profile_samples < 1) bad_value("profile.samples", "must be >= 1");
    if (!(c.sweep_ratio_min > 0.0 && c.sweep_ratio_min <= 1.0))
        bad_value("sweep.ratio_min", "must lie in (0,1]");
    if (!(c.sweep_ratio_max > 0.0 && c.sweep_ratio_max <= 1.0))
        bad_value("sweep.ratio_max", "must lie in (0,1]");
    if (c.sweep_ratio_min > c.sweep_ratio_max) bad_value("sweep.ratio_max", "must be >= sweep.ratio_min");
    // Parse the grids now so that errors surface at load time.
    for (const auto& [key, text] : {std::pair<std::string, std::string>{"grid.params", c.grid_params},
                                    {"grid.law_endpoints_db", c.grid_law_endpoints_db},
                                    {"grid.thetas", c.grid_thetas}}) {
        (void)parse_number_list(text, key);
    }
    for (double p : parse_number_list(c.grid_params, "grid.params")) check_probability("grid.params", p);
    if (!c.grid_jam_law_endpoints_db.empty())
        (void)parse_number_list(c.grid_jam_law_endpoints_db, "grid.jam_law_endpoints_db");
    (void)parse_classifier_list(c.grid_classifiers, c);
    if (c.classifier_kind == "ml") (void)c.classifier_spec();
    (void)entries;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text, const std::string& key) {
    const auto trimmed = std::string(trim(text));
    if (trimmed.empty()) bad_value(key, "empty list");
    if (trimmed.find(':') != std::string::npos) {
        const auto parts = split(trimmed, ':');
        if (parts.size() != 3) bad_value(key, "range must be lo:hi:n");
        const double lo = number_value(key, parts[0]);
        const double hi = number_value(key, parts[1]);
        const auto n = count_value(key, parts[2]);
        if (n < 1 || n > 100000) bad_value(key, "range count must lie in [1, 100000]");
        if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) bad_value(key, "range needs finite lo <= hi");
        if (n == 1) return {lo};
        std::vector<double> out;
        for (std::uint64_t i = 0; i < n; ++i) {
            out.push_back(i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
        }
        return out;
    }
    std::vector<double> out;
    for (const auto& part : split(trimmed, ',')) out.push_back(number_value(key, part));
    return out;
}

std::vector<ClassifierSpec> parse_classifier_list(const std::string& text, const RunConfig& cfg) {
    const std::string key = "grid.classifiers";
    std::vector<ClassifierSpec> out;
    for (const auto& token : split(text, ';')) {
        if (token == "default") {
            for (auto& s : SearchGrid::default_adversaries()) out.push_back(std::move(s));
        } else if (token == "no-erasure") {
            out.push_back(ClassifierSpec::no_erasure());
        } else if (token == "blind") {
            out.push_back(ClassifierSpec::blind());
        } else if (token == "oracle") {
            out.push_back(ClassifierSpec::oracle());
        } else if (token == "ml") {
            RunConfig probe = cfg;
            probe.classifier_kind = "ml";
            out.push_back(probe.classifier_spec());
        } else if ((token.rfind("window(", 0) == 0 || token.rfind("rel(", 0) == 0) && token.back() == ')') {
            const bool relative = token[0] == 'r';
            const auto inner = token.substr(token.find('(') + 1, token.size() - token.find('(') - 2);
            const auto bounds = split(inner, ',');
            if (bounds.size() != 2) bad_value(key, "window needs two bounds: '" + token + "'");
            try {
                out.push_back(ClassifierSpec::window(number_value(key, bounds[0]), number_value(key, bounds[1]),
                                                     relative));
            } catch (const ConfigError& e) {
                bad_value(key, e.what());
            }
        } else {
            bad_value(key, "unknown adversary '" + token + "'");
        }
    }
    if (out.empty()) bad_value(key, "empty classifier list");
    return out;
}

ClassifierSpec RunConfig::classifier_spec() const {
    if (classifier_kind == "blind") return ClassifierSpec::blind();
    if (classifier_kind == "oracle") return ClassifierSpec::oracle();
    if (classifier_kind == "ml") {
        ClassifierSpec spec;
        spec.kind = ClassifierSpec::Kind::ml;
        try {
            if (!ml_table.empty()) {
                spec.ml = std::make_shared<const MlClassifier>(MlClassifier::load_file(ml_table));
            } else {
                spec.ml = std::make_shared<const MlClassifier>(
                    MlClassifier::for_levels(geometry, power.build(), ml_sigma_db));
            }
        } catch (const std::exception& e) {
            bad_value("classifier.ml_table", e.what());
        }
        return spec;
    }
    if (t1_db == -kInf && t2_db == kInf) return ClassifierSpec::no_erasure();
    return ClassifierSpec::window(t1_db, t2_db, relative);
}

SearchGrid RunConfig::search_grid(Scheme for_scheme) const {
    SearchGrid g;
    g.scheme_params = parse_number_list(grid_params, "grid.params");
    g.laws = SearchGrid::uniform_laws_db(parse_number_list(grid_law_endpoints_db, "grid.law_endpoints_db"));
    if (for_scheme == Scheme::tdm && !grid_jam_law_endpoints_db.empty())
        g.jam_laws = SearchGrid::uniform_laws_db(parse_number_list(grid_jam_law_endpoints_db, "grid.jam_law_endpoints_db"));
    g.thetas = parse_number_list(grid_thetas, "grid.thetas");
    g.classifiers = parse_classifier_list(grid_classifiers, *this);
    return g;
}

ProblemSetup RunConfig::problem_setup() const {
    ProblemSetup s;
    s.geometry = geometry;
    s.channel = channel;
    s.fec = fec;
    s.method.kind = profile_method;
    s.method.samples = profile_samples;
    s.method.seed = seed;
    return s;
}

SimConfig RunConfig::sim_config() const {
    SimConfig s;
    s.scheme = scheme;
    s.frames = frames;
    s.seed = seed;
    s.p_t = p_t;
    s.beta = beta;
    s.geometry = geometry;
    s.power = power.build();
    s.jam_power = jam_power.build();
    s.channel = channel;
    s.classifier = classifier_spec();
    s.fec = fec;
    return s;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> out;
    const auto add = [&out](std::string key, std::string value) { out.emplace_back(std::move(key), std::move(value)); };
    add("scheme", to_string(scheme));
    if (scheme == Scheme::tdm) add("beta", format_number(beta));
    else add("p_t", format_number(p_t));
    add("geometry.d_ab", format_number(geometry.d_ab));
    add("geometry.r_e", format_number(geometry.r_e));
    add("geometry.theta", format_number(geometry.theta));
    add("geometry.alpha", format_number(geometry.alpha));
    for (const auto& [prefix, law] : {std::pair<std::string, const LawConfig*>{"power", &power}, {"jam_power", &jam_power}}) {
        if (law->kind == LawConfig::Kind::uniform) {
            add(prefix + ".kind", "uniform");
            add(prefix + ".min_db", format_number(law->min_db));
            add(prefix + ".max_db", format_number(law->max_db));
        } else {
            add(prefix + ".kind", "discrete");
            add(prefix + ".levels_db", join_numbers(law->levels_db));
            add(prefix + ".probabilities", join_numbers(law->probabilities));
        }
    }
    add("channel.mode", channel.mode == Superposition::coherent ? "coherent" : "incoherent");
    add("channel.wave_number", format_number(channel.wave_number));
    add("channel.eve_noiseless", bool_text(channel.eve_noiseless));
    add("channel.legit_noise_variance", format_number(channel.legit_noise_variance));
    add("channel.eve_noise_power", format_number(channel.eve_noise_power));
    add("channel.silence_floor_db", format_number(channel.silence_floor_db));
    add("classifier.kind", classifier_kind);
    add("classifier.t1_db", format_number(t1_db));
    add("classifier.t2_db", format_number(t2_db));
    add("classifier.relative", bool_text(relative));
    add("classifier.ml_table", ml_table);
    add("classifier.ml_sigma_db", format_number(ml_sigma_db));
    add("fec.mode", fec.ideal ? "ideal" : "off");
    add("fec.threshold_db", format_number(fec_threshold_db));
    add("profile.method", profile_method == ProfileMethod::Kind::analytic ? "analytic" : "montecarlo");
    add("profile.samples", std::to_string(profile_samples));
    add("seed", std::to_string(seed));
    add("frames", std::to_string(frames));
    add("output.format", format == OutputFormat::csv ? "csv" : "json");
    add("grid.params", grid_params);
    add("grid.law_endpoints_db", grid_law_endpoints_db);
    add("grid.jam_law_endpoints_db", grid_jam_law_endpoints_db);
    add("grid.thetas", grid_thetas);
    add("grid.classifiers", grid_classifiers);
    add("sweep.ratio_min", format_number(sweep_ratio_min));
    add("sweep.ratio_max", format_number(sweep_ratio_max));
    add("sweep.steps", std::to_string(sweep_steps));
    std::string schemes;
    for (std::size_t i = 0; i < sweep_schemes.size(); ++i) schemes += (i ? "," : "") + to_string(sweep_schemes[i]);
    add("sweep.schemes", schemes);
    add("sweep.tdm_placement", to_string(sweep_placement));
    return out;
}

ConfigEntries parse_config_text(const std::string& text) {
    ConfigEntries entries;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("JSON parse error: ") + e.what());
        }
        const auto& obj = doc.contains("input") ? doc.at("input") : doc;
        if (!obj.is_object()) throw ConfigError("JSON config must be an object of key/value pairs");
        for (const auto& [key, value] : obj.items()) {
            if (value.is_string()) entries[key] = value.get<std::string>();
            else if (value.is_boolean()) entries[key] = bool_text(value.get<bool>());
            else if (value.is_number_integer()) entries[key] = std::to_string(value.get<std::int64_t>());
            else if (value.is_number()) entries[key] = format_number(value.get<double>());
            else throw ConfigError(key + ": JSON value must be a string, number or boolean");
        }
        return entries;
    }
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    if (text.rfind("# command = ", 0) == 0) {
        // A CSV record: its leading comment block is the resolved input.
        while (std::getline(in, line) && line.rfind("# ", 0) == 0) {
            const auto body = std::string_view(line).substr(2);
            const auto eq = body.find(" = ");
            if (eq == std::string_view::npos) continue;
            const std::string key(body.substr(0, eq));
            if (key == "command" || key.rfind("provenance.", 0) == 0) continue;
            entries[key] = std::string(trim(body.substr(eq + 3)));
        }
        return entries;
    }
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key(trim(body.substr(0, eq)));
        const std::string value(trim(body.substr(eq + 1)));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        if (!entries.emplace(key, value).second) throw ConfigError(key + ": key set more than once");
    }
    return entries;
}

RunConfig resolve_config(const ConfigEntries& entries) {
    const auto& table = setters();
    for (const auto& [key, value] : entries) {
        if (!table.count(key)) throw ConfigError(key + ": unknown key");
    }
    const bool has_pt = entries.count("p_t") > 0;
    const bool has_beta = entries.count("beta") > 0;
    if (has_pt && has_beta) throw ConfigError("p_t, beta: set only one (p_t selects twoway, beta selects tdm)");

    RunConfig c;
    if (has_beta) c.scheme = Scheme::tdm;
    for (const auto& [key, value] : entries) table.at(key)(c, value);
    if (entries.count("scheme")) {
        if (c.scheme == Scheme::tdm && has_pt) throw ConfigError("p_t: conflicts with scheme = tdm");
        if (c.scheme == Scheme::twoway && has_beta) throw ConfigError("beta: conflicts with scheme = twoway");
    }
    validate(c, entries);
    return c;
}

RunConfig load_config(const std::string& path, const ConfigEntries& overrides) {
    ConfigEntries entries;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError(path + ": cannot open config file");
        std::ostringstream text;
        text << in.rdbuf();
        entries = parse_config_text(text.str());
    }
    for (const auto& [key, value] : overrides) entries[key] = value;
    return resolve_config(entries);
}

}  // namespace secrecy
