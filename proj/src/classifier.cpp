#include "secrecy/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "secrecy/errors.hpp"
#include "secrecy/format.hpp"

namespace secrecy {

std::string to_string(ClassOutcome outcome) {
    switch (outcome) {
        case ClassOutcome::a: return "A";
        case ClassOutcome::b: return "B";
        case ClassOutcome::a_or_b: return "AorB";
        case ClassOutcome::erase: return "Erase";
        case ClassOutcome::silence: return "Silence";
    }
    return "?";
}

LabelWeights label_weights(ClassOutcome outcome) {
    switch (outcome) {
        case ClassOutcome::a: return {1.0, 0.0, 0.0};
        case ClassOutcome::b: return {0.0, 1.0, 0.0};
        case ClassOutcome::a_or_b: return {0.5, 0.5, 0.0};
        case ClassOutcome::erase:
        case ClassOutcome::silence: return {0.0, 0.0, 1.0};
    }
    return {0.0, 0.0, 1.0};
}

void MisclassProfile::validate(double tol) const {
    for (const auto& row : p) {
        double sum = 0.0;
        for (double v : row) {
            if (!(v >= -tol && v <= 1.0 + tol)) throw ContractViolation("misclassification entry outside [0,1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > tol) throw ContractViolation("misclassification row does not sum to 1");
    }
    for (double e : {p_e_both_as_a, p_e_both_as_b}) {
        if (!(e >= -tol && e <= 0.5 + tol)) throw ContractViolation("conditional capture error outside [0, 0.5]");
    }
}

MisclassProfile MisclassProfile::swapped() const {
    MisclassProfile out;
    const auto swap_cols = [](const LabelWeights& row) { return LabelWeights{row[1], row[0], row[2]}; };
    out.p[0] = swap_cols(p[0]);
    out.p[1] = swap_cols(p[2]);
    out.p[2] = swap_cols(p[1]);
    out.p_e_both_as_a = p_e_both_as_b;
    out.p_e_both_as_b = p_e_both_as_a;
    return out;
}

void TdmDetectionProfile::validate(double tol) const {
    for (double v : {p_m, p_f, p_e_given_m}) {
        if (!(v >= -tol && v <= 1.0 + tol)) throw ContractViolation("detection probability outside [0,1]");
    }
    if (p_e_given_m > 0.5 + tol) throw ContractViolation("p_e_given_m exceeds 0.5");
}

// ---------------------------------------------------------------------------
// Threshold classifier

void ThresholdClassifier::validate() const {
    if (!(t1_db <= t2_db)) throw ConfigError("classifier window requires t1_db <= t2_db");
    if (!(a_min <= a_max) || !(b_min <= b_max)) throw ConfigError("classifier support endpoints out of order");
}

ThresholdClassifier ThresholdClassifier::for_geometry(const Geometry& geom, const PowerDistribution& law_a,
                                                      const PowerDistribution& law_b, double t1_db, double t2_db) {
    const auto d = distances(geom);
    ThresholdClassifier c;
    c.t1_db = t1_db;
    c.t2_db = t2_db;
    c.a_min = to_db(received_power(law_a.min(), d.d_ae, geom.alpha));
    c.a_max = to_db(received_power(law_a.max(), d.d_ae, geom.alpha));
    c.b_min = to_db(received_power(law_b.min(), d.d_be, geom.alpha));
    c.b_max = to_db(received_power(law_b.max(), d.d_be, geom.alpha));
    c.mirrored = d.d_ae < d.d_be;
    c.validate();
    return c;
}

ClassOutcome classify_threshold(double r_db, const ThresholdClassifier& c) {
    if (r_db == -kInf || r_db < c.silence_floor_db) return ClassOutcome::silence;
    if (r_db < c.t1_db || r_db > c.t2_db) return ClassOutcome::erase;

    // Canonical orientation: "far" plays Alice, "near" plays Bob.
    const double far_min = c.mirrored ? c.b_min : c.a_min;
    const double far_max = c.mirrored ? c.b_max : c.a_max;
    const double near_min = c.mirrored ? c.a_min : c.b_min;

    ClassOutcome far = ClassOutcome::a;
    ClassOutcome near = ClassOutcome::b;
    if (c.mirrored) std::swap(far, near);

    if (far_min < r_db && r_db < std::min(far_max, near_min)) return far;
    if (r_db > far_max) return near;
    return ClassOutcome::a_or_b;
}

// ---------------------------------------------------------------------------
// Maximum-likelihood classifier

MlClassifier::MlClassifier(std::vector<GaussianLevel> levels, double silence_floor_db)
    : levels_(std::move(levels)), silence_floor_db_(silence_floor_db) {
    bool has_a = false;
    bool has_b = false;
    for (const auto& level : levels_) {
        if (!(level.variance_db2 > 0.0) || !std::isfinite(level.variance_db2))
            throw ConfigError("ML classifier variances must be > 0");
        if (!std::isfinite(level.mean_db)) throw ConfigError("ML classifier means must be finite");
        (level.source == Source::a ? has_a : has_b) = true;
    }
    if (!has_a || !has_b) throw ConfigError("ML classifier needs at least one level per source");
}

MlClassifier MlClassifier::load(std::istream& in) {
    std::vector<GaussianLevel> levels;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string source;
        if (!(fields >> source)) continue;
        GaussianLevel level{};
        std::string rest;
        if (!(fields >> level.level >> level.mean_db >> level.variance_db2) || (fields >> rest))
            throw ConfigError("ML table line " + std::to_string(line_no) + ": expected 'source level mean_db variance'");
        if (source == "A" || source == "a") {
            level.source = Source::a;
        } else if (source == "B" || source == "b") {
            level.source = Source::b;
        } else {
            throw ConfigError("ML table line " + std::to_string(line_no) + ": source must be A or B");
        }
        levels.push_back(level);
    }
    return MlClassifier(std::move(levels));
}

MlClassifier MlClassifier::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open ML table '" + path + "'");
    return load(in);
}

MlClassifier MlClassifier::fit(const std::vector<Observation>& training) {
    struct Moments {
        double n = 0, sum = 0, sum_sq = 0;
    };
    std::map<std::pair<int, int>, Moments> groups;
    for (const auto& obs : training) {
        auto& m = groups[{static_cast<int>(obs.source), obs.level}];
        m.n += 1;
        m.sum += obs.power_db;
        m.sum_sq += obs.power_db * obs.power_db;
    }
    std::vector<GaussianLevel> levels;
    for (const auto& [key, m] : groups) {
        const double mean = m.sum / m.n;
        const double var = std::max(0.0, m.sum_sq / m.n - mean * mean);
        levels.push_back({static_cast<Source>(key.first), key.second, mean, var});
    }
    return MlClassifier(std::move(levels));
}

MlClassifier MlClassifier::for_levels(const Geometry& geom, const PowerDistribution& law, double sigma_db) {
    if (law.kind() == PowerDistribution::Kind::uniform_linear && !law.is_point_mass())
        throw ConfigError("ML observation models need a discrete-levels power law");
    if (!(sigma_db > 0.0)) throw ConfigError("ML observation spread must be > 0 dB");
    const auto d = distances(geom);
    std::vector<PowerDistribution::Level> atoms = law.levels();
    if (atoms.empty()) atoms.push_back({law.min(), 1.0});
    std::vector<GaussianLevel> levels;
    int index = 0;
    for (const auto& atom : atoms) {
        levels.push_back({Source::a, index, to_db(received_power(atom.power, d.d_ae, geom.alpha)), sigma_db * sigma_db});
        levels.push_back({Source::b, index, to_db(received_power(atom.power, d.d_be, geom.alpha)), sigma_db * sigma_db});
        ++index;
    }
    return MlClassifier(std::move(levels));
}

namespace {

double log_density(const GaussianLevel& g, double y) {
    const double z = y - g.mean_db;
    return -0.5 * std::log(2.0 * std::numbers::pi * g.variance_db2) - z * z / (2.0 * g.variance_db2);
}

}  // namespace

double MlClassifier::max_log_density(Source source, double y_db) const {
    double best = -kInf;
    for (const auto& level : levels_) {
        if (level.source == source) best = std::max(best, log_density(level, y_db));
    }
    return best;
}

std::vector<double> MlClassifier::decision_boundaries_db() const {
    std::vector<double> roots;
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        for (std::size_t j = i + 1; j < levels_.size(); ++j) {
            const auto& gi = levels_[i];
            const auto& gj = levels_[j];
            // log f_i(y) - log f_j(y) = c2 y^2 + c1 y + c0
            const double c2 = 1.0 / (2.0 * gj.variance_db2) - 1.0 / (2.0 * gi.variance_db2);
            const double c1 = gi.mean_db / gi.variance_db2 - gj.mean_db / gj.variance_db2;
            const double c0 = gj.mean_db * gj.mean_db / (2.0 * gj.variance_db2) -
                              gi.mean_db * gi.mean_db / (2.0 * gi.variance_db2) - 0.5 * std::log(gi.variance_db2) +
                              0.5 * std::log(gj.variance_db2);
            if (std::abs(c2) < 1e-15 * (std::abs(c1) + 1.0)) {
                if (c1 != 0.0) roots.push_back(-c0 / c1);
                continue;
            }
            const double disc = c1 * c1 - 4.0 * c2 * c0;
            if (disc < 0.0) continue;
            const double s = std::sqrt(disc);
            roots.push_back((-c1 - s) / (2.0 * c2));
            roots.push_back((-c1 + s) / (2.0 * c2));
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

std::string MlClassifier::write() const {
    std::ostringstream out;
    out << "# source level mean_db variance_db2\n";
    for (const auto& level : levels_) {
        out << (level.source == Source::a ? 'A' : 'B') << ' ' << level.level << ' ' << format_number(level.mean_db)
            << ' ' << format_number(level.variance_db2) << '\n';
    }
    return out.str();
}

ClassOutcome classify_ml(double y_db, const MlClassifier& m) {
    if (y_db == -kInf || y_db < m.silence_floor_db()) return ClassOutcome::silence;
    const double la = m.max_log_density(Source::a, y_db);
    const double lb = m.max_log_density(Source::b, y_db);
    if (la > lb) return ClassOutcome::a;
    if (lb > la) return ClassOutcome::b;
    return ClassOutcome::a_or_b;
}

// ---------------------------------------------------------------------------
// Dispatch

ClassOutcome classify(const Classifier& c, double power, Event truth) {
    struct Visitor {
        double power;
        Event truth;
        ClassOutcome operator()(const ThresholdClassifier& t) const { return classify_threshold(to_db(power), t); }
        ClassOutcome operator()(const MlClassifier& m) const { return classify_ml(to_db(power), m); }
        ClassOutcome operator()(const BlindClassifier& b) const {
            const double db = to_db(power);
            return (db == -kInf || db < b.silence_floor_db) ? ClassOutcome::silence : ClassOutcome::a_or_b;
        }
        ClassOutcome operator()(const OracleClassifier&) const {
            switch (truth) {
                case Event::a_only: return ClassOutcome::a;
                case Event::b_only: return ClassOutcome::b;
                case Event::both: return ClassOutcome::erase;
                case Event::none: return ClassOutcome::silence;
            }
            return ClassOutcome::silence;
        }
    };
    return std::visit(Visitor{power, truth}, c);
}

int capture_decode(int s_a, int s_b, double p_a_rx, double p_b_rx, RandomStream& rng) {
    if (p_a_rx > p_b_rx) return s_a;
    if (p_b_rx > p_a_rx) return s_b;
    return rng.coin() ? s_a : s_b;
}

ClassifierSpec ClassifierSpec::window(double t1_db, double t2_db, bool relative) {
    if (std::isnan(t1_db) || std::isnan(t2_db)) throw ConfigError("classifier window bounds must be numbers");
    // Relative offsets hang off different anchors, so only absolute windows
    // are ordered here.
    if (!relative && !(t1_db <= t2_db)) throw ConfigError("classifier window requires t1 <= t2");
    ClassifierSpec spec;
    spec.t1_db = t1_db;
    spec.t2_db = t2_db;
    spec.relative = relative;
    return spec;
}

std::string ClassifierSpec::describe() const {
    switch (kind) {
        case Kind::blind: return "blind";
        case Kind::oracle: return "oracle";
        case Kind::ml: return "ml(" + std::to_string(ml ? ml->levels().size() : 0) + " levels)";
        case Kind::threshold: break;
    }
    if (!erases()) return "threshold(no-erasure)";
    const auto bound = [this](double v, const char* anchor) {
        if (std::isinf(v)) return format_number(v);
        if (!relative) return format_number(v) + "dB";
        return std::string(anchor) + (v >= 0 ? "+" : "") + format_number(v) + "dB";
    };
    return "threshold(t1=" + bound(t1_db, "lo") + ";t2=" + bound(t2_db, "hi") + ")";
}

namespace {

std::pair<double, double> resolve_window(const ClassifierSpec& spec, double lo_anchor_db, double hi_anchor_db) {
    if (!spec.relative) return {spec.t1_db, spec.t2_db};
    const double t1 = std::isinf(spec.t1_db) ? spec.t1_db : lo_anchor_db + spec.t1_db;
    const double t2 = std::isinf(spec.t2_db) ? spec.t2_db : hi_anchor_db + spec.t2_db;
    // Offsets wider than the support leave nothing to accept.
    if (t1 > t2) return {kInf, kInf};
    return {t1, t2};
}

}  // namespace

Classifier build_classifier(const ClassifierSpec& spec, const Geometry& geom, const PowerDistribution& law,
                            const ChannelConfig& channel) {
    const double floor = channel.eve_noiseless ? -kInf : channel.silence_floor_db;
    switch (spec.kind) {
        case ClassifierSpec::Kind::oracle: return OracleClassifier{};
        case ClassifierSpec::Kind::blind: return BlindClassifier{floor};
        case ClassifierSpec::Kind::ml: {
            if (!spec.ml) throw ConfigError("ML classifier selected without a model table");
            MlClassifier m = *spec.ml;
            m.set_silence_floor_db(floor);
            return m;
        }
        case ClassifierSpec::Kind::threshold: break;
    }
    auto c = ThresholdClassifier::for_geometry(geom, law, law, -kInf, kInf);
    const auto [t1, t2] = resolve_window(spec, std::min(c.a_min, c.b_min), std::max(c.a_max, c.b_max));
    c.t1_db = t1;
    c.t2_db = t2;
    c.silence_floor_db = floor;
    c.validate();
    return c;
}

bool WindowDetector::accepts(double power) const {
    const double db = to_db(power);
    return !(db < t1_db) && !(db > t2_db);
}

WindowDetector build_detector(const ClassifierSpec& spec, const Geometry& geom, const PowerDistribution& data_law) {
    switch (spec.kind) {
        case ClassifierSpec::Kind::oracle: return {-kInf, kInf, true};
        case ClassifierSpec::Kind::blind: return {};
        case ClassifierSpec::Kind::ml: throw UsageError("the ML classifier applies to the two-way scheme only");
        case ClassifierSpec::Kind::threshold: break;
    }
    const auto d = distances(geom);
    const double lo = to_db(received_power(data_law.min(), d.d_ae, geom.alpha));
    const double hi = to_db(received_power(data_law.max(), d.d_ae, geom.alpha));
    const auto [t1, t2] = resolve_window(spec, lo, hi);
    return {t1, t2, false};
}

double eve_observation(double p_a_rx, double p_b_rx, int sign_product, double phase_diff,
                       const ChannelConfig& channel, RandomStream& noise) {
    double power = superpose(p_a_rx, p_b_rx, channel.mode, phase_diff, sign_product);
    if (!channel.eve_noiseless) power += noise.exponential(channel.eve_noise_power);
    return power;
}

// ---------------------------------------------------------------------------
// Exact masses over received-power laws
//
// A power-only decision is piecewise constant in the observed power between
// a finite set of breakpoints. Uniform laws then integrate in closed form:
// solo masses are interval-overlap fractions, and the sum of two uniform laws
// has a piecewise-linear integrand whose kinks are enumerable.

namespace {

struct DecisionMap {
    std::vector<double> breakpoints;  // sorted, finite, > 0
    std::function<LabelWeights(double)> at;
};

void add_to(LabelWeights& acc, const LabelWeights& w, double mass) {
    for (std::size_t i = 0; i < 3; ++i) acc[i] += w[i] * mass;
}

std::vector<PowerDistribution::Level> atoms_of(const PowerDistribution& law) {
    if (law.kind() == PowerDistribution::Kind::discrete_levels) return law.levels();
    return {{law.min(), 1.0}};
}

bool is_atomic(const PowerDistribution& law) {
    return law.kind() == PowerDistribution::Kind::discrete_levels || law.is_point_mass();
}

// Cut [lo, hi] at the given breakpoints (plus `extra`) and visit each piece.
template <typename Fn>
void for_each_piece(double lo, double hi, const std::vector<double>& breakpoints, double extra, Fn&& fn) {
    std::vector<double> cuts{lo};
    for (double b : breakpoints) {
        if (b > lo && b < hi) cuts.push_back(b);
    }
    if (extra > lo && extra < hi) cuts.push_back(extra);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] > cuts[i]) fn(cuts[i], cuts[i + 1]);
    }
}

LabelWeights solo_masses(const PowerDistribution& law, const DecisionMap& map) {
    LabelWeights out{};
    if (is_atomic(law)) {
        for (const auto& atom : atoms_of(law)) add_to(out, map.at(atom.power), atom.probability);
        return out;
    }
    const double width = law.max() - law.min();
    for_each_piece(law.min(), law.max(), map.breakpoints, law.min(),
                   [&](double u, double v) { add_to(out, map.at(0.5 * (u + v)), (v - u) / width); });
    return out;
}

// P(X + Y in [s1, s2], Y > X) (or X > Y), X ~ U[a1, a2], Y ~ U[b1, b2].
double uniform_pair_mass(double a1, double a2, double b1, double b2, double s1, double s2, bool y_greater) {
    std::vector<double> kinks{a1, a2};
    for (double k : {b1, b2, s1 - b1, s1 - b2, s2 - b1, s2 - b2, 0.5 * s1, 0.5 * s2}) {
        if (std::isfinite(k) && k > a1 && k < a2) kinks.push_back(k);
    }
    std::sort(kinks.begin(), kinks.end());
    const auto integrand = [&](double x) {
        double lo = std::max(b1, s1 - x);
        double hi = std::min(b2, s2 - x);
        if (y_greater) {
            lo = std::max(lo, x);
        } else {
            hi = std::min(hi, x);
        }
        return std::max(0.0, hi - lo);
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < kinks.size(); ++i) {
        const double w = kinks[i + 1] - kinks[i];
        if (w > 0.0) total += w * integrand(0.5 * (kinks[i] + kinks[i + 1]));
    }
    return total / ((a2 - a1) * (b2 - b1));
}

struct SumMasses {
    LabelWeights total{};
    LabelWeights y_greater{};
    LabelWeights x_greater{};
    LabelWeights tie{};
};

SumMasses sum_masses(const PowerDistribution& x_law, const PowerDistribution& y_law, const DecisionMap& map) {
    SumMasses out;
    const auto credit = [&](const LabelWeights& w, double mass, int relation) {
        add_to(out.total, w, mass);
        add_to(relation > 0 ? out.y_greater : relation < 0 ? out.x_greater : out.tie, w, mass);
    };

    if (is_atomic(x_law) && is_atomic(y_law)) {
        for (const auto& xa : atoms_of(x_law)) {
            for (const auto& ya : atoms_of(y_law)) {
                const int rel = ya.power > xa.power ? 1 : (ya.power < xa.power ? -1 : 0);
                credit(map.at(xa.power + ya.power), xa.probability * ya.probability, rel);
            }
        }
        return out;
    }
    if (is_atomic(x_law) || is_atomic(y_law)) {
        const bool x_atomic = is_atomic(x_law);
        const auto& atomic = x_atomic ? x_law : y_law;
        const auto& spread = x_atomic ? y_law : x_law;
        const double width = spread.max() - spread.min();
        for (const auto& atom : atoms_of(atomic)) {
            const double c = atom.power;
            for_each_piece(c + spread.min(), c + spread.max(), map.breakpoints, 2.0 * c, [&](double u, double v) {
                const double mid = 0.5 * (u + v);
                // The spread variable equals mid - c; it exceeds the atom iff mid > 2c.
                const int spread_greater = (mid - c) > c ? 1 : -1;
                const int rel = x_atomic ? spread_greater : -spread_greater;
                credit(map.at(mid), atom.probability * (v - u) / width, rel);
            });
        }
        return out;
    }
    const double a1 = x_law.min(), a2 = x_law.max();
    const double b1 = y_law.min(), b2 = y_law.max();
    for_each_piece(a1 + b1, a2 + b2, map.breakpoints, a1 + b1, [&](double s1, double s2) {
        const auto w = map.at(0.5 * (s1 + s2));
        credit(w, uniform_pair_mass(a1, a2, b1, b2, s1, s2, true), 1);
        credit(w, uniform_pair_mass(a1, a2, b1, b2, s1, s2, false), -1);
    });
    return out;
}

std::vector<double> linear_breakpoints(const std::vector<double>& db_values) {
    std::vector<double> out;
    for (double db : db_values) {
        if (!std::isfinite(db)) continue;
        const double lin = from_db(db);
        if (lin > 0.0 && std::isfinite(lin)) out.push_back(lin);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

DecisionMap decision_map(const Classifier& cls) {
    DecisionMap map;
    if (const auto* t = std::get_if<ThresholdClassifier>(&cls)) {
        map.breakpoints = linear_breakpoints({t->t1_db, t->t2_db, t->a_min, t->a_max, t->b_min, t->b_max});
    } else if (const auto* m = std::get_if<MlClassifier>(&cls)) {
        map.breakpoints = linear_breakpoints(m->decision_boundaries_db());
    }
    map.at = [&cls](double power) { return label_weights(classify(cls, power, Event::both)); };
    return map;
}

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double binomial_se(double p, std::uint64_t n) { return n > 0 ? std::sqrt(std::max(0.0, p * (1.0 - p)) / n) : 0.0; }

double path_gain(double d, double alpha) { return received_power(1.0, d, alpha); }

}  // namespace

MisclassProfile misclass_profile(const Geometry& geom, const PowerDistribution& law, const Classifier& cls,
                                 const ChannelConfig& channel, const ProfileMethod& method) {
    geom.validate();
    if (std::holds_alternative<OracleClassifier>(cls)) {
        MisclassProfile perfect;
        perfect.p[static_cast<int>(Event::both)] = {0.0, 0.0, 1.0};
        perfect.p[static_cast<int>(Event::a_only)] = {1.0, 0.0, 0.0};
        perfect.p[static_cast<int>(Event::b_only)] = {0.0, 1.0, 0.0};
        return perfect;
    }
    if (method.kind == ProfileMethod::Kind::montecarlo || !channel.closed_form()) {
        return sample_misclass_profile(geom, law, cls, channel, method.samples, method.seed).value;
    }

    const auto d = distances(geom);
    const auto rx_a = law.scaled(path_gain(d.d_ae, geom.alpha));
    const auto rx_b = law.scaled(path_gain(d.d_be, geom.alpha));
    const auto map = decision_map(cls);

    MisclassProfile prof;
    prof.p[static_cast<int>(Event::a_only)] = solo_masses(rx_a, map);
    prof.p[static_cast<int>(Event::b_only)] = solo_masses(rx_b, map);
    const auto both = sum_masses(rx_a, rx_b, map);
    prof.p[static_cast<int>(Event::both)] = both.total;
    // A collision labelled A is wrong half the time when Bob's symbol is the
    // one captured (stronger), and a quarter of the time on an exact tie.
    const auto err = [&](std::size_t col, const LabelWeights& other_stronger) {
        return ratio_or_zero(0.5 * other_stronger[col] + 0.25 * both.tie[col], both.total[col]);
    };
    prof.p_e_both_as_a = err(0, both.y_greater);
    prof.p_e_both_as_b = err(1, both.x_greater);
    return prof;
}

TdmDetectionProfile tdm_detection_profile(const Geometry& geom, const PowerDistribution& data_law,
                                          const PowerDistribution& jam_law, const WindowDetector& detector,
                                          const ChannelConfig& channel, const ProfileMethod& method) {
    geom.validate();
    if (detector.oracle) return {0.0, 0.0, 0.0};
    if (method.kind == ProfileMethod::Kind::montecarlo || !channel.closed_form()) {
        return sample_tdm_profile(geom, data_law, jam_law, detector, channel, method.samples, method.seed).value;
    }
    const auto d = distances(geom);
    const auto rx_data = data_law.scaled(path_gain(d.d_ae, geom.alpha));
    const auto rx_jam = jam_law.scaled(path_gain(d.d_be, geom.alpha));

    DecisionMap map;
    map.breakpoints = linear_breakpoints({detector.t1_db, detector.t2_db});
    map.at = [&detector](double power) { return LabelWeights{detector.accepts(power) ? 1.0 : 0.0, 0.0, 0.0}; };

    TdmDetectionProfile prof;
    prof.p_f = 1.0 - solo_masses(rx_data, map)[0];
    const auto jammed = sum_masses(rx_data, rx_jam, map);
    prof.p_m = jammed.total[0];
    prof.p_e_given_m = ratio_or_zero(0.5 * jammed.y_greater[0] + 0.25 * jammed.tie[0], prof.p_m);
    // Clean up rounding below zero.
    prof.p_f = std::max(0.0, prof.p_f);
    return prof;
}

SampledMisclassProfile sample_misclass_profile(const Geometry& geom, const PowerDistribution& law,
                                               const Classifier& cls, const ChannelConfig& channel,
                                               std::uint64_t samples, std::uint64_t seed) {
    geom.validate();
    const auto d = distances(geom);
    const double gain_a = path_gain(d.d_ae, geom.alpha);
    const double gain_b = path_gain(d.d_be, geom.alpha);
    const double phase = channel.phase_difference(d);

    std::array<std::array<std::uint64_t, 3>, 3> counts{};
    std::array<std::uint64_t, 2> errors{};
    for (Event event : {Event::both, Event::a_only, Event::b_only}) {
        const auto shard = static_cast<std::uint64_t>(event);
        RandomStream power(seed, Substream::power, shard);
        RandomStream symbols(seed, Substream::symbols, shard);
        RandomStream ties(seed, Substream::tie_break, shard);
        RandomStream noise(seed, Substream::noise, shard);
        const bool a_on = event != Event::b_only;
        const bool b_on = event != Event::a_only;
        auto& row = counts[static_cast<std::size_t>(event)];
        for (std::uint64_t n = 0; n < samples; ++n) {
            const double pa = a_on ? law.sample(power) * gain_a : 0.0;
            const double pb = b_on ? law.sample(power) * gain_b : 0.0;
            const int sa = symbols.sign();
            const int sb = symbols.sign();
            const double obs = eve_observation(pa, pb, sa * sb, phase, channel, noise);
            auto outcome = classify(cls, obs, event);
            if (outcome == ClassOutcome::a_or_b) outcome = ties.coin() ? ClassOutcome::a : ClassOutcome::b;
            const auto col = outcome == ClassOutcome::a ? 0 : outcome == ClassOutcome::b ? 1 : 2;
            ++row[col];
            if (event == Event::both && col < 2) {
                const int decoded = capture_decode(sa, sb, pa, pb, ties);
                if (decoded != (col == 0 ? sa : sb)) ++errors[col];
            }
        }
    }

    SampledMisclassProfile out;
    for (std::size_t r = 0; r < 3; ++r) {
        out.row_count[r] = samples;
        for (std::size_t c = 0; c < 3; ++c) {
            const double p = ratio_or_zero(static_cast<double>(counts[r][c]), static_cast<double>(samples));
            out.value.p[r][c] = p;
            out.std_error.p[r][c] = binomial_se(p, samples);
        }
    }
    const auto& both = counts[static_cast<std::size_t>(Event::both)];
    out.both_as_a_count = both[0];
    out.both_as_b_count = both[1];
    out.value.p_e_both_as_a = ratio_or_zero(static_cast<double>(errors[0]), static_cast<double>(both[0]));
    out.value.p_e_both_as_b = ratio_or_zero(static_cast<double>(errors[1]), static_cast<double>(both[1]));
    out.std_error.p_e_both_as_a = binomial_se(out.value.p_e_both_as_a, both[0]);
    out.std_error.p_e_both_as_b = binomial_se(out.value.p_e_both_as_b, both[1]);
    return out;
}

SampledTdmProfile sample_tdm_profile(const Geometry& geom, const PowerDistribution& data_law,
                                     const PowerDistribution& jam_law, const WindowDetector& detector,
                                     const ChannelConfig& channel, std::uint64_t samples, std::uint64_t seed) {
    geom.validate();
    const auto d = distances(geom);
    const double gain_data = path_gain(d.d_ae, geom.alpha);
    const double gain_jam = path_gain(d.d_be, geom.alpha);
    const double phase = channel.phase_difference(d);

    std::uint64_t rejected = 0;
    std::uint64_t missed = 0;
    std::uint64_t missed_errors = 0;
    {
        RandomStream power(seed, Substream::power, 0);
        RandomStream noise(seed, Substream::noise, 0);
        for (std::uint64_t n = 0; n < samples; ++n) {
            const double obs = eve_observation(data_law.sample(power) * gain_data, 0.0, 1, phase, channel, noise);
            if (detector.oracle ? false : !detector.accepts(obs)) ++rejected;
        }
    }
    {
        RandomStream power(seed, Substream::power, 1);
        RandomStream symbols(seed, Substream::symbols, 1);
        RandomStream ties(seed, Substream::tie_break, 1);
        RandomStream noise(seed, Substream::noise, 1);
        for (std::uint64_t n = 0; n < samples; ++n) {
            const double pd = data_law.sample(power) * gain_data;
            const double pj = jam_law.sample(power) * gain_jam;
            const int sd = symbols.sign();
            const int sj = symbols.sign();
            const double obs = eve_observation(pd, pj, sd * sj, phase, channel, noise);
            if (detector.oracle || !detector.accepts(obs)) continue;
            ++missed;
            if (capture_decode(sd, sj, pd, pj, ties) != sd) ++missed_errors;
        }
    }
    SampledTdmProfile out;
    out.clean_count = samples;
    out.jammed_count = samples;
    out.missed_count = missed;
    const double n = static_cast<double>(samples);
    out.value.p_f = ratio_or_zero(static_cast<double>(rejected), n);
    out.value.p_m = ratio_or_zero(static_cast<double>(missed), n);
    out.value.p_e_given_m = ratio_or_zero(static_cast<double>(missed_errors), static_cast<double>(missed));
    out.std_error.p_f = binomial_se(out.value.p_f, samples);
    out.std_error.p_m = binomial_se(out.value.p_m, samples);
    out.std_error.p_e_given_m = binomial_se(out.value.p_e_given_m, missed);
    return out;
}

}  // namespace secrecy
