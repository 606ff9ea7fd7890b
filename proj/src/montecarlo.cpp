#include "secrecy/montecarlo.hpp"

#include <omp.h>

#include <cmath>

#include "secrecy/errors.hpp"
#include "secrecy/format.hpp"

namespace secrecy {

std::string to_string(Scheme scheme) { return scheme == Scheme::twoway ? "twoway" : "tdm"; }

void SimConfig::validate() const {
    if (frames < 1) throw ConfigError("frames must be >= 1");
    if (!(p_t >= 0.0 && p_t <= 1.0)) throw ConfigError("p_t must be in [0,1]");
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must be in [0,1]");
    geometry.validate();
    channel.validate();
    if (scheme == Scheme::tdm && classifier.kind == ClassifierSpec::Kind::ml)
        throw ConfigError("classifier.kind = ml applies to the two-way scheme only");
}

TwoWayTally& TwoWayTally::operator+=(const TwoWayTally& o) {
    frames += o.frames;
    a_active += o.a_active;
    b_active += o.b_active;
    for (std::size_t i = 0; i < event_count.size(); ++i) event_count[i] += o.event_count[i];
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) class_count[r][c] += o.class_count[r][c];
    capture_errors[0] += o.capture_errors[0];
    capture_errors[1] += o.capture_errors[1];
    legit_decodable += o.legit_decodable;
    legit_errors += o.legit_errors;
    return *this;
}

TdmTally& TdmTally::operator+=(const TdmTally& o) {
    frames += o.frames;
    clean += o.clean;
    clean_rejected += o.clean_rejected;
    jammed += o.jammed;
    jammed_accepted += o.jammed_accepted;
    missed_errors += o.missed_errors;
    legit_decodable += o.legit_decodable;
    legit_errors += o.legit_errors;
    return *this;
}

namespace {

Estimate estimate(std::uint64_t hits, std::uint64_t n) {
    if (n == 0) return {};
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
}

const char* event_name(Event e) {
    switch (e) {
        case Event::both: return "(A,B)";
        case Event::a_only: return "(A,Bc)";
        case Event::b_only: return "(Ac,B)";
        case Event::none: return "(Ac,Bc)";
    }
    return "?";
}

const char* label_name(Label l) {
    switch (l) {
        case Label::a: return "A";
        case Label::b: return "B";
        case Label::other: return "other";
    }
    return "?";
}

constexpr std::array<Event, 3> kRowEvents{Event::both, Event::a_only, Event::b_only};
constexpr std::array<Label, 3> kLabels{Label::a, Label::b, Label::other};

}  // namespace

Estimate EmpiricalProfile::misclass(Event event, Label label) const {
    const auto r = static_cast<std::size_t>(event);
    return estimate(twoway.class_count[r][static_cast<std::size_t>(label)], twoway.event_count[r]);
}

Estimate EmpiricalProfile::capture_error(Label label) const {
    const auto c = static_cast<std::size_t>(label);
    return estimate(twoway.capture_errors[c], twoway.class_count[static_cast<std::size_t>(Event::both)][c]);
}

Estimate EmpiricalProfile::p_m() const { return estimate(tdm.jammed_accepted, tdm.jammed); }
Estimate EmpiricalProfile::p_f() const { return estimate(tdm.clean_rejected, tdm.clean); }
Estimate EmpiricalProfile::p_e_given_m() const { return estimate(tdm.missed_errors, tdm.jammed_accepted); }

Estimate EmpiricalProfile::legit_error_rate() const {
    return scheme == Scheme::twoway ? estimate(twoway.legit_errors, twoway.legit_decodable)
                                    : estimate(tdm.legit_errors, tdm.legit_decodable);
}

std::vector<std::string> EmpiricalProfile::undefined_estimates() const {
    std::vector<std::string> out;
    if (scheme == Scheme::twoway) {
        for (Event e : kRowEvents) {
            if (twoway.event_count[static_cast<std::size_t>(e)] == 0) out.push_back(std::string(event_name(e)) + "->*");
        }
        if (!capture_error(Label::a).defined()) out.emplace_back("p_e|(A,B)->A");
        if (!capture_error(Label::b).defined()) out.emplace_back("p_e|(A,B)->B");
    } else {
        if (!p_m().defined()) out.emplace_back("p_m");
        if (!p_f().defined()) out.emplace_back("p_f");
        if (!p_e_given_m().defined()) out.emplace_back("p_e|m");
    }
    if (!legit_error_rate().defined()) out.emplace_back("legit_error_rate");
    return out;
}

MisclassProfile as_misclass_profile(const EmpiricalProfile& prof) {
    MisclassProfile out;
    for (Event e : kRowEvents)
        for (Label l : kLabels)
            out.p[static_cast<std::size_t>(e)][static_cast<std::size_t>(l)] = prof.misclass(e, l).value;
    out.p_e_both_as_a = prof.capture_error(Label::a).value;
    out.p_e_both_as_b = prof.capture_error(Label::b).value;
    return out;
}

TdmDetectionProfile as_detection_profile(const EmpiricalProfile& prof) {
    return {prof.p_m().value, prof.p_f().value, prof.p_e_given_m().value};
}

std::optional<RateBreakdownTwoWay> empirical_twoway_bounds(const SimConfig& cfg, const EmpiricalProfile& prof) {
    const double both = cfg.p_t * cfg.p_t;
    const double solo = cfg.p_t * (1.0 - cfg.p_t);
    auto packed = as_misclass_profile(prof);
    // An undefined row is harmless only if its event has zero probability.
    const auto row_ok = [&](Event e, double weight) {
        if (prof.twoway.event_count[static_cast<std::size_t>(e)] > 0) return true;
        if (weight != 0.0) return false;
        packed.p[static_cast<std::size_t>(e)] = {0.0, 0.0, 1.0};
        return true;
    };
    if (!row_ok(Event::both, both) || !row_ok(Event::a_only, solo) || !row_ok(Event::b_only, solo)) return std::nullopt;
    if (!prof.capture_error(Label::a).defined() && both * packed.at(Event::both, Label::a) != 0.0) return std::nullopt;
    if (!prof.capture_error(Label::b).defined() && both * packed.at(Event::both, Label::b) != 0.0) return std::nullopt;
    // A weaker disagreeing symbol never wins capture, so the true conditional
    // error is at most one half; sampling noise alone can push it over.
    packed.p_e_both_as_a = std::min(packed.p_e_both_as_a, 0.5);
    packed.p_e_both_as_b = std::min(packed.p_e_both_as_b, 0.5);
    return twoway_bounds(cfg.p_t, packed, cfg.geometry, cfg.power.min(), cfg.fec, cfg.channel.legit_noise_variance);
}

std::optional<RateBreakdownTdm> empirical_tdm_bounds(const SimConfig& cfg, const EmpiricalProfile& prof) {
    auto packed = as_detection_profile(prof);
    packed.p_e_given_m = std::min(packed.p_e_given_m, 0.5);
    if (!prof.p_m().defined() && cfg.beta != 0.0) return std::nullopt;
    if (!prof.p_f().defined() && cfg.beta != 1.0) return std::nullopt;
    if (!prof.p_e_given_m().defined() && cfg.beta * packed.p_m != 0.0) return std::nullopt;
    return tdm_bounds(cfg.beta, packed, cfg.geometry, cfg.power.min(), cfg.fec, cfg.channel.legit_noise_variance);
}

namespace {

struct Streams {
    RandomStream scheduling;
    RandomStream power;
    RandomStream symbols;
    RandomStream ties;
    RandomStream noise;

    Streams(std::uint64_t seed, std::uint64_t shard)
        : scheduling(seed, Substream::scheduling, shard),
          power(seed, Substream::power, shard),
          symbols(seed, Substream::symbols, shard),
          ties(seed, Substream::tie_break, shard),
          noise(seed, Substream::noise, shard) {}
};

std::string db_field(double power) { return power > 0.0 ? format_number(to_db(power)) : "-inf"; }

// Per-interval behaviour shared by the OpenMP kernel and the serial reference.
class FrameModel {
public:
    explicit FrameModel(const SimConfig& cfg)
        : cfg_(cfg), classifier_(build_classifier(cfg.classifier, cfg.geometry, cfg.power, cfg.channel)) {
        const auto d = distances(cfg.geometry);
        gain_a_ = received_power(1.0, d.d_ae, cfg.geometry.alpha);
        gain_b_ = received_power(1.0, d.d_be, cfg.geometry.alpha);
        gain_ab_ = received_power(1.0, cfg.geometry.d_ab, cfg.geometry.alpha);
        phase_ = cfg.channel.phase_difference(d);
        if (cfg.scheme == Scheme::tdm) detector_ = build_detector(cfg.classifier, cfg.geometry, cfg.power);
    }

    void twoway_step(std::uint64_t index, Streams& s, TwoWayTally& t, std::ostream* trace) const {
        const bool a_on = s.scheduling.bernoulli(cfg_.p_t);
        const bool b_on = s.scheduling.bernoulli(cfg_.p_t);
        const double rho_a = cfg_.power.sample(s.power);
        const double rho_b = cfg_.power.sample(s.power);
        const int sa = s.symbols.sign();
        const int sb = s.symbols.sign();
        const double pa = a_on ? rho_a * gain_a_ : 0.0;
        const double pb = b_on ? rho_b * gain_b_ : 0.0;
        const double obs = eve_observation(pa, pb, sa * sb, phase_, cfg_.channel, s.noise);

        const Event event = a_on ? (b_on ? Event::both : Event::a_only) : (b_on ? Event::b_only : Event::none);
        ++t.frames;
        t.a_active += a_on;
        t.b_active += b_on;
        ++t.event_count[static_cast<std::size_t>(event)];

        auto outcome = classify(classifier_, obs, event);
        if (outcome == ClassOutcome::a_or_b) outcome = s.ties.coin() ? ClassOutcome::a : ClassOutcome::b;
        const int col = outcome == ClassOutcome::a ? 0 : outcome == ClassOutcome::b ? 1 : 2;

        const char* correct = "";
        if (event != Event::none) {
            ++t.class_count[static_cast<std::size_t>(event)][col];
            if (event == Event::both && col < 2) {
                const int decoded = capture_decode(sa, sb, pa, pb, s.ties);
                const bool ok = decoded == (col == 0 ? sa : sb);
                if (!ok) ++t.capture_errors[col];
                correct = ok ? "1" : "0";
            } else if (col < 2) {
                correct = (col == 0) == (event == Event::a_only) ? "1" : "na";
            }
        }
        if (a_on != b_on) {
            ++t.legit_decodable;
            if (legit_error(a_on ? rho_a : rho_b, a_on ? sa : sb, s.noise)) ++t.legit_errors;
        }
        if (trace) {
            *trace << index << ',' << a_on << ',' << b_on << ',' << db_field(pa) << ',' << db_field(pb) << ','
                   << db_field(obs) << ',' << to_string(outcome) << ',' << correct << '\n';
        }
    }

    void tdm_step(std::uint64_t index, Streams& s, TdmTally& t, std::ostream* trace) const {
        const bool jam = s.scheduling.bernoulli(cfg_.beta);
        const double rho_d = cfg_.power.sample(s.power);
        const double rho_j = cfg_.jam_power.sample(s.power);
        const int sd = s.symbols.sign();
        const int sj = s.symbols.sign();
        const double pd = rho_d * gain_a_;
        const double pj = jam ? rho_j * gain_b_ : 0.0;
        const double obs = eve_observation(pd, pj, sd * sj, phase_, cfg_.channel, s.noise);
        const bool accepted = detector_.oracle ? !jam : detector_.accepts(obs);

        ++t.frames;
        const char* correct = "";
        if (jam) {
            ++t.jammed;
            if (accepted) {
                ++t.jammed_accepted;
                const bool ok = capture_decode(sd, sj, pd, pj, s.ties) == sd;
                if (!ok) ++t.missed_errors;
                correct = ok ? "1" : "0";
            }
        } else {
            ++t.clean;
            if (!accepted) ++t.clean_rejected;
            if (accepted) correct = "1";
            ++t.legit_decodable;
            if (legit_error(rho_d, sd, s.noise)) ++t.legit_errors;
        }
        if (trace) {
            *trace << index << ",1," << jam << ',' << db_field(pd) << ',' << db_field(pj) << ',' << db_field(obs) << ','
                   << (accepted ? "Accept" : "Erase") << ',' << correct << '\n';
        }
    }

private:
    bool legit_error(double rho_tx, int symbol, RandomStream& noise) const {
        const double snr = rho_tx * gain_ab_ / cfg_.channel.legit_noise_variance;
        if (cfg_.fec.ideal && snr >= cfg_.fec.threshold_snr) return false;
        const double y = symbol * std::sqrt(snr) + noise.standard_normal();
        return (y >= 0.0 ? 1 : -1) != symbol;
    }

    const SimConfig& cfg_;
    Classifier classifier_;
    WindowDetector detector_;
    double gain_a_ = 0.0;
    double gain_b_ = 0.0;
    double gain_ab_ = 0.0;
    double phase_ = 0.0;
};

constexpr const char* kTraceHeader = "index,a_active,b_active,p_a_db,p_b_db,eve_db,outcome,decode_correct\n";

template <typename Tally, typename Step>
Tally run_sharded(const SimConfig& cfg, int threads, Step step) {
    const std::uint64_t shards = (cfg.frames + kShardFrames - 1) / kShardFrames;
    std::vector<Tally> partial(shards);
    const int workers = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(workers)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(shards); ++k) {
        const auto shard = static_cast<std::uint64_t>(k);
        Streams streams(cfg.seed, shard);
        const std::uint64_t begin = shard * kShardFrames;
        const std::uint64_t end = std::min(cfg.frames, begin + kShardFrames);
        for (std::uint64_t i = begin; i < end; ++i) step(i, streams, partial[shard]);
    }
    Tally total;
    for (const auto& p : partial) total += p;
    return total;
}

}  // namespace

TwoWaySimulation simulate_twoway(const SimConfig& cfg, int threads) {
    cfg.validate();
    if (cfg.scheme != Scheme::twoway) throw UsageError("simulate_twoway needs scheme = twoway");
    const FrameModel model(cfg);
    TwoWaySimulation out;
    out.profile.scheme = Scheme::twoway;
    out.profile.seed = cfg.seed;
    out.profile.twoway = run_sharded<TwoWayTally>(
        cfg, threads, [&](std::uint64_t i, Streams& s, TwoWayTally& t) { model.twoway_step(i, s, t, nullptr); });
    out.rates = empirical_twoway_bounds(cfg, out.profile);
    return out;
}

TdmSimulation simulate_tdm(const SimConfig& cfg, int threads) {
    cfg.validate();
    if (cfg.scheme != Scheme::tdm) throw UsageError("simulate_tdm needs scheme = tdm");
    const FrameModel model(cfg);
    TdmSimulation out;
    out.profile.scheme = Scheme::tdm;
    out.profile.seed = cfg.seed;
    out.profile.tdm = run_sharded<TdmTally>(
        cfg, threads, [&](std::uint64_t i, Streams& s, TdmTally& t) { model.tdm_step(i, s, t, nullptr); });
    out.rates = empirical_tdm_bounds(cfg, out.profile);
    return out;
}

namespace reference {

TwoWaySimulation simulate_twoway(const SimConfig& cfg, std::ostream* trace) {
    cfg.validate();
    if (cfg.scheme != Scheme::twoway) throw UsageError("simulate_twoway needs scheme = twoway");
    const FrameModel model(cfg);
    TwoWaySimulation out;
    out.profile.scheme = Scheme::twoway;
    out.profile.seed = cfg.seed;
    if (trace) *trace << kTraceHeader;
    std::optional<Streams> streams;
    for (std::uint64_t i = 0; i < cfg.frames; ++i) {
        if (i % kShardFrames == 0) streams.emplace(cfg.seed, i / kShardFrames);
        model.twoway_step(i, *streams, out.profile.twoway, trace);
    }
    out.rates = empirical_twoway_bounds(cfg, out.profile);
    return out;
}

TdmSimulation simulate_tdm(const SimConfig& cfg, std::ostream* trace) {
    cfg.validate();
    if (cfg.scheme != Scheme::tdm) throw UsageError("simulate_tdm needs scheme = tdm");
    const FrameModel model(cfg);
    TdmSimulation out;
    out.profile.scheme = Scheme::tdm;
    out.profile.seed = cfg.seed;
    if (trace) *trace << kTraceHeader;
    std::optional<Streams> streams;
    for (std::uint64_t i = 0; i < cfg.frames; ++i) {
        if (i % kShardFrames == 0) streams.emplace(cfg.seed, i / kShardFrames);
        model.tdm_step(i, *streams, out.profile.tdm, trace);
    }
    out.rates = empirical_tdm_bounds(cfg, out.profile);
    return out;
}

}  // namespace reference

namespace {

ComparisonEntry compare_entry(std::string name, double analytic, const Estimate& est, double sigma) {
    ComparisonEntry e;
    e.name = std::move(name);
    e.analytic = analytic;
    e.n = est.n;
    if (!est.defined()) return e;
    e.empirical = est.value;
    const double se = std::sqrt(std::max(0.0, analytic * (1.0 - analytic)) / static_cast<double>(est.n));
    const double diff = est.value - analytic;
    if (se > 0.0) {
        e.z = diff / se;
    } else {
        e.z = std::abs(diff) <= 1e-12 ? 0.0 : (diff > 0 ? kInf : -kInf);
    }
    e.within = std::abs(e.z) <= sigma;
    return e;
}

void finish(ComparisonReport& report) {
    std::size_t defined = 0;
    std::size_t within = 0;
    for (const auto& e : report.entries) {
        if (!e.empirical) continue;
        ++defined;
        within += e.within;
    }
    report.fraction_within = defined ? static_cast<double>(within) / static_cast<double>(defined) : 0.0;
    report.pass = defined > 0 && report.fraction_within >= report.min_fraction;
}

}  // namespace

ComparisonReport compare_profiles(const MisclassProfile& analytic, const EmpiricalProfile& empirical, double sigma,
                                  double min_fraction) {
    if (empirical.scheme != Scheme::twoway)
        throw UsageError("compare_profiles: misclassification profile needs a two-way empirical profile");
    ComparisonReport report;
    report.sigma = sigma;
    report.min_fraction = min_fraction;
    for (Event e : kRowEvents) {
        for (Label l : kLabels) {
            report.entries.push_back(compare_entry(std::string(event_name(e)) + "->" + label_name(l),
                                                   analytic.at(e, l), empirical.misclass(e, l), sigma));
        }
    }
    report.entries.push_back(
        compare_entry("p_e|(A,B)->A", analytic.p_e_both_as_a, empirical.capture_error(Label::a), sigma));
    report.entries.push_back(
        compare_entry("p_e|(A,B)->B", analytic.p_e_both_as_b, empirical.capture_error(Label::b), sigma));
    finish(report);
    return report;
}

ComparisonReport compare_profiles(const TdmDetectionProfile& analytic, const EmpiricalProfile& empirical,
                                  double sigma, double min_fraction) {
    if (empirical.scheme != Scheme::tdm)
        throw UsageError("compare_profiles: detection profile needs a TDM empirical profile");
    ComparisonReport report;
    report.sigma = sigma;
    report.min_fraction = min_fraction;
    report.entries.push_back(compare_entry("p_m", analytic.p_m, empirical.p_m(), sigma));
    report.entries.push_back(compare_entry("p_f", analytic.p_f, empirical.p_f(), sigma));
    report.entries.push_back(compare_entry("p_e|m", analytic.p_e_given_m, empirical.p_e_given_m(), sigma));
    finish(report);
    return report;
}

}  // namespace secrecy
