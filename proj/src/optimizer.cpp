#include "secrecy/optimizer.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "secrecy/errors.hpp"
#include "secrecy/format.hpp"

namespace secrecy {

void SearchGrid::validate(Scheme scheme) const {
    if (scheme_params.empty()) throw UsageError(scheme == Scheme::tdm ? "empty beta grid" : "empty p_t grid");
    if (laws.empty()) throw UsageError("empty power-law grid");
    if (thetas.empty()) throw UsageError("empty theta grid");
    if (classifiers.empty()) throw UsageError("empty classifier grid");
    if (scheme == Scheme::tdm && feedback_laws().empty()) throw UsageError("empty feedback power-law grid");
    for (double p : scheme_params) {
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("grid scheme parameters must lie in [0,1]");
    }
    for (double t : thetas) {
        if (!std::isfinite(t)) throw ConfigError("grid angles must be finite");
    }
    for (const auto& c : classifiers) {
        if (scheme == Scheme::tdm && c.kind == ClassifierSpec::Kind::ml)
            throw ConfigError("the ML classifier applies to the two-way scheme only");
        if (c.kind == ClassifierSpec::Kind::ml && !c.ml) throw ConfigError("ML classifier without a model table");
    }
}

std::vector<PowerDistribution> SearchGrid::uniform_laws_db(const std::vector<double>& endpoints_db) {
    std::vector<PowerDistribution> laws;
    for (std::size_t i = 0; i < endpoints_db.size(); ++i) {
        for (std::size_t j = i; j < endpoints_db.size(); ++j) {
            if (endpoints_db[i] <= endpoints_db[j]) laws.push_back(PowerDistribution::uniform_db(endpoints_db[i], endpoints_db[j]));
        }
    }
    return laws;
}

std::vector<ClassifierSpec> SearchGrid::default_adversaries() {
    std::vector<ClassifierSpec> out{ClassifierSpec::no_erasure()};
    for (double t1 : {-kInf, 0.0, 3.0}) {
        for (double t2 : {-3.0, 0.0, 3.0, kInf}) {
            if (t1 == -kInf && t2 == kInf) continue;
            out.push_back(ClassifierSpec::window(t1, t2, true));
        }
    }
    return out;
}

SearchGrid SearchGrid::defaults() {
    SearchGrid grid;
    for (int i = 0; i <= 20; ++i) grid.scheme_params.push_back(i / 20.0);
    std::vector<double> endpoints;
    for (int i = 0; i <= 20; ++i) endpoints.push_back(2.0 * i);
    grid.laws = uniform_laws_db(endpoints);
    for (int i = 0; i <= 18; ++i) grid.thetas.push_back(std::numbers::pi * i / 18.0);
    grid.classifiers = default_adversaries();
    return grid;
}

std::string SearchGrid::describe() const {
    std::ostringstream out;
    out << "params=" << scheme_params.size() << ";laws=" << laws.size() << "(uniform family)";
    if (!jam_laws.empty()) out << ";jam_laws=" << jam_laws.size();
    out << ";thetas=" << thetas.size() << ";classifiers=" << classifiers.size();
    return out.str();
}

namespace {

Geometry at_theta(const Geometry& base, double theta) {
    Geometry g = base;
    g.theta = theta;
    return g;
}

TdmDetectionProfile tdm_profile(const Geometry& geom, const PowerDistribution& data, const PowerDistribution& jam,
                                const ClassifierSpec& spec, const ProblemSetup& setup) {
    return tdm_detection_profile(geom, data, jam, build_detector(spec, geom, data), setup.channel, setup.method);
}

MisclassProfile twoway_profile(const Geometry& geom, const PowerDistribution& law, const ClassifierSpec& spec,
                               const ProblemSetup& setup) {
    return misclass_profile(geom, law, build_classifier(spec, geom, law, setup.channel), setup.channel, setup.method);
}

double tdm_rate(double beta, const TdmDetectionProfile& prof, const Geometry& geom, const PowerDistribution& data,
                const ProblemSetup& setup) {
    return tdm_bounds(beta, prof, geom, data.min(), setup.fec, setup.channel.legit_noise_variance).r_s;
}

double twoway_rate(double p_t, const MisclassProfile& prof, const Geometry& geom, const PowerDistribution& law,
                   const ProblemSetup& setup) {
    return twoway_bounds(p_t, prof, geom, law.min(), setup.fec, setup.channel.legit_noise_variance).r_s;
}

std::size_t legit_count(Scheme scheme, const SearchGrid& grid) {
    const std::size_t base = grid.scheme_params.size() * grid.laws.size();
    return scheme == Scheme::tdm ? base * grid.feedback_laws().size() : base;
}

LegitPoint legit_at(Scheme scheme, const SearchGrid& grid, std::size_t index) {
    LegitPoint p;
    if (scheme == Scheme::tdm) {
        const std::size_t nj = grid.feedback_laws().size();
        p.jam_law = index % nj;
        index /= nj;
    }
    p.law = index % grid.laws.size();
    p.param = index / grid.laws.size();
    return p;
}

MaxMinResult assemble(Scheme scheme, const SearchGrid& grid, const LegitPoint& legit, const WorstCase& inner) {
    MaxMinResult r;
    r.scheme = scheme;
    r.inner_min = inner.r_s;
    r.r_sec = scheme == Scheme::tdm ? 0.5 * inner.r_s : inner.r_s;
    r.legit = legit;
    r.adversary = inner.arg;
    r.param = grid.scheme_params[legit.param];
    r.law = grid.laws[legit.law];
    if (scheme == Scheme::tdm) r.jam_law = grid.feedback_laws()[legit.jam_law];
    r.theta = grid.thetas[inner.arg.theta];
    r.classifier = grid.classifiers[inner.arg.classifier];
    return r;
}

// Outer maximum over a table of inner minima, smallest index on ties.
MaxMinResult reduce(Scheme scheme, const SearchGrid& grid, const std::vector<WorstCase>& table, bool keep_table) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (table[i].r_s > table[best].r_s) best = i;
    }
    auto result = assemble(scheme, grid, legit_at(scheme, grid, best), table[best]);
    if (keep_table) {
        result.inner_minimum.reserve(table.size());
        for (const auto& w : table) result.inner_minimum.push_back(w.r_s);
    }
    return result;
}

int worker_count(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

}  // namespace

double secrecy_rate_at(Scheme scheme, const LegitPoint& legit, const AdversaryPoint& adversary,
                       const SearchGrid& grid, const ProblemSetup& setup) {
    const auto geom = at_theta(setup.geometry, grid.thetas[adversary.theta]);
    const auto& spec = grid.classifiers[adversary.classifier];
    const double param = grid.scheme_params[legit.param];
    const auto& law = grid.laws[legit.law];
    if (scheme == Scheme::tdm) {
        const auto& jam = grid.feedback_laws()[legit.jam_law];
        return tdm_rate(param, tdm_profile(geom, law, jam, spec, setup), geom, law, setup);
    }
    return twoway_rate(param, twoway_profile(geom, law, spec, setup), geom, law, setup);
}

WorstCase worst_case_eve(Scheme scheme, const LegitPoint& legit, const SearchGrid& grid, const ProblemSetup& setup) {
    WorstCase worst{kInf, {}};
    for (std::size_t t = 0; t < grid.thetas.size(); ++t) {
        for (std::size_t c = 0; c < grid.classifiers.size(); ++c) {
            const double r = secrecy_rate_at(scheme, legit, {t, c}, grid, setup);
            if (r < worst.r_s) worst = {r, {t, c}};
        }
    }
    return worst;
}

MaxMinResult optimize_tdm(const SearchGrid& grid, const ProblemSetup& setup, int threads, bool keep_table) {
    grid.validate(Scheme::tdm);
    const auto& jams = grid.feedback_laws();
    const std::size_t n_theta = grid.thetas.size();
    const std::size_t n_cls = grid.classifiers.size();
    const std::size_t n_law = grid.laws.size();
    const std::size_t n_jam = jams.size();
    const std::size_t n_adv = n_theta * n_cls;

    std::vector<Geometry> geoms;
    for (double theta : grid.thetas) {
        geoms.push_back(at_theta(setup.geometry, theta));
        geoms.back().validate();
    }

    // Detection profiles do not depend on beta: evaluate once per
    // (f1, f2, theta, classifier).
    std::vector<TdmDetectionProfile> profiles(n_law * n_jam * n_adv);
    const int workers = worker_count(threads);
#pragma omp parallel for schedule(dynamic, 16) num_threads(workers)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(n_law * n_jam); ++k) {
        const auto pair = static_cast<std::size_t>(k);
        const auto& data = grid.laws[pair / n_jam];
        const auto& jam = jams[pair % n_jam];
        for (std::size_t t = 0; t < n_theta; ++t) {
            for (std::size_t c = 0; c < n_cls; ++c) {
                profiles[pair * n_adv + t * n_cls + c] = tdm_profile(geoms[t], data, jam, grid.classifiers[c], setup);
            }
        }
    }

    const std::size_t n_legit = legit_count(Scheme::tdm, grid);
    std::vector<WorstCase> table(n_legit);
#pragma omp parallel for schedule(static) num_threads(workers)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(n_legit); ++k) {
        const auto idx = static_cast<std::size_t>(k);
        const auto legit = legit_at(Scheme::tdm, grid, idx);
        const double beta = grid.scheme_params[legit.param];
        const auto& data = grid.laws[legit.law];
        const std::size_t base = (legit.law * n_jam + legit.jam_law) * n_adv;
        WorstCase worst{kInf, {}};
        for (std::size_t t = 0; t < n_theta; ++t) {
            for (std::size_t c = 0; c < n_cls; ++c) {
                const double r = tdm_rate(beta, profiles[base + t * n_cls + c], geoms[t], data, setup);
                if (r < worst.r_s) worst = {r, {t, c}};
            }
        }
        table[idx] = worst;
    }
    return reduce(Scheme::tdm, grid, table, keep_table);
}

MaxMinResult optimize_twoway(const SearchGrid& grid, const ProblemSetup& setup, int threads, bool keep_table) {
    grid.validate(Scheme::twoway);
    const std::size_t n_theta = grid.thetas.size();
    const std::size_t n_cls = grid.classifiers.size();
    const std::size_t n_law = grid.laws.size();
    const std::size_t n_adv = n_theta * n_cls;

    std::vector<Geometry> geoms;
    for (double theta : grid.thetas) {
        geoms.push_back(at_theta(setup.geometry, theta));
        geoms.back().validate();
    }

    std::vector<MisclassProfile> profiles(n_law * n_adv);
    const int workers = worker_count(threads);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers) collapse(2)
    for (std::int64_t l = 0; l < static_cast<std::int64_t>(n_law); ++l) {
        for (std::int64_t a = 0; a < static_cast<std::int64_t>(n_adv); ++a) {
            const auto law = static_cast<std::size_t>(l);
            const auto adv = static_cast<std::size_t>(a);
            profiles[law * n_adv + adv] =
                twoway_profile(geoms[adv / n_cls], grid.laws[law], grid.classifiers[adv % n_cls], setup);
        }
    }

    const std::size_t n_legit = legit_count(Scheme::twoway, grid);
    std::vector<WorstCase> table(n_legit);
#pragma omp parallel for schedule(static) num_threads(workers)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(n_legit); ++k) {
        const auto idx = static_cast<std::size_t>(k);
        const auto legit = legit_at(Scheme::twoway, grid, idx);
        const double p_t = grid.scheme_params[legit.param];
        const auto& law = grid.laws[legit.law];
        WorstCase worst{kInf, {}};
        for (std::size_t t = 0; t < n_theta; ++t) {
            for (std::size_t c = 0; c < n_cls; ++c) {
                const double r = twoway_rate(p_t, profiles[legit.law * n_adv + t * n_cls + c], geoms[t], law, setup);
                if (r < worst.r_s) worst = {r, {t, c}};
            }
        }
        table[idx] = worst;
    }
    return reduce(Scheme::twoway, grid, table, keep_table);
}

MaxMinResult optimize(Scheme scheme, const SearchGrid& grid, const ProblemSetup& setup, int threads,
                      bool keep_table) {
    return scheme == Scheme::tdm ? optimize_tdm(grid, setup, threads, keep_table)
                                 : optimize_twoway(grid, setup, threads, keep_table);
}

namespace reference {

MaxMinResult optimize(Scheme scheme, const SearchGrid& grid, const ProblemSetup& setup) {
    grid.validate(scheme);
    const std::size_t n = legit_count(scheme, grid);
    std::vector<WorstCase> table;
    table.reserve(n);
    for (std::size_t i = 0; i < n; ++i) table.push_back(worst_case_eve(scheme, legit_at(scheme, grid, i), grid, setup));
    return reduce(scheme, grid, table, false);
}

}  // namespace reference

std::string to_string(TdmPlacement placement) {
    return placement == TdmPlacement::transmitter_near ? "transmitter_near" : "transmitter_far";
}

std::vector<double> ratio_points(double ratio_min, double ratio_max, int steps) {
    if (steps < 1) throw UsageError("sweep steps must be >= 1");
    if (!(ratio_min > 0.0) || !(ratio_max <= 1.0) || !(ratio_min <= ratio_max))
        throw ConfigError("sweep ratios must satisfy 0 < ratio_min <= ratio_max <= 1");
    if (steps == 1) return {ratio_max};
    std::vector<double> out;
    for (int i = 0; i < steps; ++i) {
        out.push_back(i == steps - 1 ? ratio_max : ratio_min + (ratio_max - ratio_min) * i / (steps - 1));
    }
    return out;
}

std::vector<SweepRow> sweep_ratio(const std::vector<double>& ratios, const std::vector<Scheme>& schemes,
                                  const SearchGrid& grid, const ProblemSetup& setup, const SweepOptions& options,
                                  int threads) {
    std::vector<SweepRow> rows;
    ProblemSetup local = setup;
    local.geometry.d_ab = options.d_ab;
    local.geometry.r_e = options.r_e;
    local.geometry.alpha = options.alpha;
    for (double ratio : ratios) {
        const double theta = theta_for_distance_ratio(ratio, options.d_ab, options.r_e);
        for (Scheme scheme : schemes) {
            SweepRow row;
            row.ratio = ratio;
            row.scheme = scheme;
            row.realizable = theta >= 0.0;
            if (row.realizable) {
                SearchGrid g = grid;
                // theta puts Bob (the receiver in TDM) nearer; pi - theta
                // puts Alice nearer.
                const double mirror = std::numbers::pi - theta;
                if (scheme == Scheme::tdm) {
                    g.thetas = {options.placement == TdmPlacement::transmitter_near ? mirror : theta};
                } else {
                    g.thetas = {theta};
                    if (mirror != theta) g.thetas.push_back(mirror);
                }
                row.result = optimize(scheme, g, local, threads);
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace secrecy
