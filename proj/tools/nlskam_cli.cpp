// Command-line front end: resonance geometry, spectra, Melnikov scans,
// measure estimates and KAM runs, with JSON/CSV report emission.

#include "nlskam/kam.hpp"
#include "nlskam/melnikov.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace nlskam;

namespace {

constexpr const char* kSchemaVersion = "1";
constexpr const char* kToolkitVersion = "0.1.0";

std::vector<std::int64_t> parse_ints(const std::string& csv) {
    std::vector<std::int64_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoll(item));
    }
    if (out.empty()) throw CLI::ValidationError("expected a comma-separated integer list");
    return out;
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw CLI::ValidationError("expected a comma-separated number list");
    return out;
}

Eigen::VectorXd to_vec(const std::vector<double>& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

json site_json(const Site& s) { return json::array({s.m, s.n}); }

json tuple_json(const AdmissibleTuple& t) {
    json sites = json::array();
    for (std::size_t i = 0; i < t.sites.size(); ++i)
        sites.push_back(json{{"site", site_json(t.sites[i])}, {"sign", t.signs[i]}});
    return json{{"sites", sites}, {"ell", t.ell}};
}

json decomposition_json(const DivisorDecomposition& dec) {
    json terms = json::array();
    for (const auto& t : dec.terms) {
        const char* kind = t.kind == KFTerm::Kind::EllLinear ? "ell_linear"
                           : t.kind == KFTerm::Kind::Mu      ? "mu"
                           : t.kind == KFTerm::Kind::MuPlus  ? "mu_plus"
                                                             : "mu_minus";
        terms.push_back(json{{"kind", kind}, {"i", t.i}, {"k", t.k}, {"sign", t.sign}});
    }
    return json{{"K", dec.K}, {"ell", dec.ell}, {"terms", terms}};
}

// Paths resolve against NLSKAM_OUT_DIR when relative.
std::filesystem::path resolve_out(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute()) return p;
    if (const char* dir = std::getenv("NLSKAM_OUT_DIR")) return std::filesystem::path(dir) / p;
    return p;
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    const auto full = resolve_out(path);
    std::ofstream out(full);
    if (!out) throw std::runtime_error("cannot open output file: " + full.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + full.string());
}

struct Emitter {
    std::string out_path = "-";
    std::string csv_path;
    std::string trace_path;

    void emit(const json& report, const std::string& csv_text = "", const std::string& trace_text = "") const {
        write_text(out_path, report.dump(2) + "\n");
        if (!csv_path.empty()) write_text(csv_path, csv_text);
        if (!trace_path.empty()) write_text(trace_path, trace_text);
    }
};

json envelope(const std::string& command, json config, json results, std::int64_t wall_ms) {
    return json{{"schema_version", kSchemaVersion}, {"toolkit_version", kToolkitVersion},
                {"command", command},              {"config", std::move(config)},
                {"results", std::move(results)},   {"wall_time_ms", wall_ms}};
}

struct GenericityOpts {
    std::string support;
    int L = 0;
    std::string norm = "l1";
    std::int64_t density_R = 0;
    std::uint64_t density_samples = 0;
    bool exhaustive = false;
    std::uint64_t seed = 1;
    int workers = 1;
};

int run_genericity(const GenericityOpts& o, const Emitter& em) {
    const auto t0 = std::chrono::steady_clock::now();
    SupportSet s0(parse_ints(o.support));
    const EllNorm norm = (o.norm == "linf") ? EllNorm::LInf : EllNorm::L1;
    const auto rep = check_genericity(s0, o.L, norm);

    json violations = json::array();
    for (const auto& v : rep.violations) {
        json entry;
        switch (v.kind) {
            case GenericityViolation::Kind::SCIntersection:
                entry = {{"kind", "SC-intersection"}, {"witness", site_json(v.witness_site)}};
                break;
            case GenericityViolation::Kind::CCIntersection:
                entry = {{"kind", "CC-intersection"}, {"witness", site_json(v.witness_site)}};
                break;
            case GenericityViolation::Kind::MomentumCombination:
                entry = {{"kind", "momentum-combination"}, {"witness", v.witness_ell}};
                break;
        }
        violations.push_back(entry);
    }

    json results{{"support", s0.sites()}, {"d", s0.d()},       {"R", nullptr},
                 {"L", o.L},              {"generic", rep.generic}, {"L_generic", rep.L_generic},
                 {"violations", violations}, {"fraction", nullptr}};

    if (o.density_samples > 0 || o.exhaustive) {
        if (o.density_R < s0.d()) throw std::invalid_argument("genericity: --density-R must be >= d");
        const auto dens = density_experiment(s0.d(), o.density_R, o.L,
                                             o.exhaustive ? DensityMode::Exhaustive : DensityMode::Sampled,
                                             o.density_samples, o.seed, o.workers, norm);
        results["R"] = o.density_R;
        results["fraction"] = dens.fraction;
        results["density_total"] = dens.total;
        results["density_generic"] = dens.generic_count;
    }

    json config{{"support", o.support}, {"L", o.L},     {"norm", o.norm},
                {"density_R", o.density_R}, {"density_samples", o.density_samples},
                {"exhaustive", o.exhaustive}, {"seed", o.seed}, {"workers", o.workers}};
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    em.emit(envelope("genericity", config, results, ms.count()));
    return rep.generic ? 0 : 0;
}

struct SpectraOpts {
    std::string lambda;
    int grid = 0;
    std::string box_lo, box_hi;
    double gamma_tilde = 1e-6;
};

int run_spectra(const SpectraOpts& o, const Emitter& em) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto lambda = to_vec(parse_doubles(o.lambda));
    const auto data = make_spectral_data(lambda);

    json mu = json::array();
    for (Eigen::Index i = 0; i < data.mu.size(); ++i) mu.push_back(data.mu[i]);
    json mu_pm = json::array();
    json reality = json::array();
    for (const auto& [ik, pair] : data.mu_pm) {
        mu_pm.push_back(json{{"i", ik.first},
                             {"k", ik.second},
                             {"mu_plus", {pair.first.real(), pair.first.imag()}},
                             {"mu_minus", {pair.second.real(), pair.second.imag()}}});
        const auto diag = reality_diagnostics(lambda[ik.first], lambda[ik.second]);
        reality.push_back(json{{"i", ik.first},
                               {"k", ik.second},
                               {"radicand", diag.radicand},
                               {"real_distinct", diag.real_distinct},
                               {"cpm_cone_value", diag.cpm_cone_value},
                               {"cpm_cone_positive", diag.cpm_cone_positive},
                               {"radicand_ratio_roots", {diag.radicand_ratio_roots[0], diag.radicand_ratio_roots[1]}}});
    }

    json results{{"lambda", parse_doubles(o.lambda)},
                 {"mu", mu},
                 {"mu_pm", mu_pm},
                 {"gap", std::isinf(data.gap) ? json(nullptr) : json(data.gap)},
                 {"all_real", data.all_real},
                 {"real_distinct_map", reality},
                 {"O1_sample", json::array()}};

    if (o.grid > 0) {
        const auto lo = o.box_lo.empty() ? Eigen::VectorXd::Constant(lambda.size(), 0.5).eval()
                                         : to_vec(parse_doubles(o.box_lo));
        const auto hi = o.box_hi.empty() ? Eigen::VectorXd::Constant(lambda.size(), 1.0).eval()
                                         : to_vec(parse_doubles(o.box_hi));
        const auto scan = find_domain_O1(lo, hi, o.grid, o.gamma_tilde);
        json sample = json::array();
        for (const auto& pt : scan.feasible_points) {
            json p = json::array();
            for (Eigen::Index i = 0; i < pt.size(); ++i) p.push_back(pt[i]);
            sample.push_back(p);
        }
        results["O1_sample"] = sample;
        results["O1_empty"] = scan.empty;
    }

    json config{{"lambda", o.lambda}, {"grid", o.grid},         {"box_lo", o.box_lo},
                {"box_hi", o.box_hi}, {"gamma_tilde", o.gamma_tilde}};
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    em.emit(envelope("spectra", config, results, ms.count()));
    return 0;
}

struct ResonancesOpts {
    std::string support;
    std::int64_t n_cutoff = 4;
};

int run_resonances(const ResonancesOpts& o, const Emitter& em) {
    const auto t0 = std::chrono::steady_clock::now();
    SupportSet s0(parse_ints(o.support));
    const auto monos = enumerate_birkhoff_resonant(s0, o.n_cutoff);
    json list = json::array();
    for (const auto& m : monos) {
        const char* fam = m.family == BirkhoffMonomial::Family::I    ? "i"
                          : m.family == BirkhoffMonomial::Family::II ? "ii"
                                                                     : "iii";
        list.push_back(json{{"family", fam},
                            {"ell", m.ell},
                            {"sites", json::array({json{{"site", site_json(m.site1)}, {"sign", m.sign1}},
                                                   json{{"site", site_json(m.site2)}, {"sign", m.sign2}}})}});
    }
    json config{{"support", o.support}, {"n_cutoff", o.n_cutoff}};
    json results{{"count", list.size()}, {"monomials", list}};
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    em.emit(envelope("resonances", config, results, ms.count()));
    return 0;
}

struct MelnikovOpts {
    std::string support, lambda;
    double eps = 1e-3, gamma = 0.01, tau = 0.0, M0 = 0.0;
    int order = 3;
    std::int64_t ell_max = 2, m_box = 3, n_box = 2;
    bool no_c1_skip = false;
};

int run_melnikov(const MelnikovOpts& o, const Emitter& em) {
    const auto t0 = std::chrono::steady_clock::now();
    SupportSet s0(parse_ints(o.support));
    FrequencyContext ctx(s0, to_vec(parse_doubles(o.lambda)), o.eps);

    ScanConfig cfg;
    cfg.order = o.order;
    cfg.gamma = o.gamma;
    cfg.tau = o.tau;
    cfg.eps = o.eps;
    cfg.bounds = EnumBounds{o.ell_max, o.m_box, o.n_box};
    cfg.budget = CorrectionBudget{o.M0};
    cfg.apply_c1_skip = !o.no_c1_skip;
    const auto rep = melnikov_scan(ctx, cfg);

    json violations = json::array();
    for (const auto& v : rep.violations)
        violations.push_back(json{{"tuple", tuple_json(v.tuple)},
                                  {"decomposition", decomposition_json(kf_decompose(ctx, v.tuple))},
                                  {"divisor", v.divisor_abs},
                                  {"threshold", v.threshold}});
    json cases = json::object();
    for (const auto& [name, count] : rep.per_case_counts) cases[name] = count;

    json results{{"tuples_scanned", rep.tuples_scanned},
                 {"skipped_c1", rep.skipped_c1},
                 {"complex_skipped", rep.complex_skipped},
                 {"per_case_counts", cases},
                 {"violations", violations}};
    if (rep.worst)
        results["worst"] = json{{"tuple", tuple_json(rep.worst->tuple)}, {"value", rep.worst->divisor_abs}};
    else
        results["worst"] = nullptr;

    json config{{"support", o.support}, {"lambda", o.lambda},   {"eps", o.eps},
                {"order", o.order},     {"gamma", o.gamma},     {"tau", rep.config.tau},
                {"ell_max", o.ell_max}, {"m_box", o.m_box},     {"n_box", o.n_box},
                {"M0", o.M0},           {"c1_skip", !o.no_c1_skip}};
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    em.emit(envelope("melnikov", config, results, ms.count()));
    return 0;
}

struct MeasureOpts {
    std::string support, gammas = "0.04,0.02,0.01,0.005";
    double eps = 1e-3, tau = 0.0, alpha = 0.05;
    std::int64_t ell_max = 2, m_box = 3, n_box = 2;
    std::uint64_t samples = 10000, seed = 1;
    int workers = 1;
};

int run_measure(const MeasureOpts& o, const Emitter& em) {
    const auto t0 = std::chrono::steady_clock::now();
    SupportSet s0(parse_ints(o.support));

    MeasureConfig cfg;
    cfg.gamma_list = parse_doubles(o.gammas);
    cfg.tau = o.tau;
    cfg.eps = o.eps;
    cfg.bounds = EnumBounds{o.ell_max, o.m_box, o.n_box};
    cfg.nsamples = o.samples;
    cfg.seed = o.seed;
    cfg.workers = o.workers;
    cfg.per_tuple_alpha = o.alpha;
    const auto rep = measure_estimate(s0, cfg);

    json points = json::array();
    std::ostringstream csv;
    csv << "gamma,excluded_fraction,ci_lo,ci_hi\n";
    for (const auto& pt : rep.points) {
        points.push_back(json{{"gamma", pt.gamma},
                              {"excluded_fraction", pt.excluded_fraction},
                              {"ci_lo", pt.ci_lo},
                              {"ci_hi", pt.ci_hi}});
        csv << pt.gamma << "," << pt.excluded_fraction << "," << pt.ci_lo << "," << pt.ci_hi << "\n";
    }

    json results{{"tuples_used", rep.tuples_used},
                 {"complex_skipped", rep.complex_skipped},
                 {"points", points}};

    json config{{"support", o.support}, {"gamma", o.gammas}, {"eps", o.eps},
                {"tau", rep.config.tau}, {"ell_max", o.ell_max}, {"m_box", o.m_box},
                {"n_box", o.n_box},      {"samples", o.samples}, {"seed", o.seed},
                {"workers", o.workers},  {"alpha", o.alpha}};
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    em.emit(envelope("measure", config, results, ms.count()), csv.str());
    return 0;
}

struct KamOpts {
    std::string support, lambda;
    int Mx = 6, Ny = 2, Lmax = 4, nu_max = 4;
    double p = 2.0, eps = 1e-3, gamma = 0.05, tau = 4.0, eta0 = 1e-3, s = 1.0, tol_lie = 1e-14;
};

int run_kam(const KamOpts& o, const Emitter& em) {
    const auto t0 = std::chrono::steady_clock::now();
    SupportSet s0(parse_ints(o.support));
    const auto lambda = to_vec(parse_doubles(o.lambda));
    TruncationGrid grid(s0, o.Mx, o.Ny, o.Lmax, o.p);
    FrequencyContext ctx(s0, lambda, o.eps);
    const auto D0 = build_diag_initial(ctx, grid);
    const auto fo = build_H1_Z1(s0, lambda, o.eps, grid);

    TruncatedQuadHam Q0 = fo.H1;
    TruncatedQuadHam negZ = fo.Z1;
    negZ.scale(-1.0);
    Q0 += negZ;
    Q0.prune(0.0);

    KamIterateConfig cfg;
    cfg.s = o.s;
    cfg.eta0 = o.eta0;
    cfg.gamma = o.gamma;
    cfg.tau = o.tau;
    cfg.eps = o.eps;
    cfg.nu_max = o.nu_max;
    cfg.tol_lie = o.tol_lie;
    const auto trace = kam_iterate(D0, Q0, cfg);

    json steps = json::array();
    std::ostringstream csv, jsonl;
    csv << "nu,s_nu,N_nu,q_norm,drift\n";
    for (const auto& st : trace.steps) {
        json row{{"nu", st.nu},
                 {"s_nu", st.s_nu},
                 {"N_nu", st.N_nu},
                 {"eta_target", st.eta_target},
                 {"q_norm", st.q_norm},
                 {"q_norm_inf", st.q_norm_inf},
                 {"freq_drift", st.freq_drift},
                 {"target_met", st.target_met},
                 {"excluded", st.excluded},
                 {"lie_terms", st.lie_terms},
                 {"dropped_mass", st.dropped_mass}};
        steps.push_back(row);
        jsonl << row.dump() << "\n";
        csv << st.nu << "," << st.s_nu << "," << st.N_nu << "," << st.q_norm << "," << st.freq_drift << "\n";
    }

    json results{{"excluded", trace.excluded},
                 {"first_target_failure", trace.first_target_failure},
                 {"total_drift", trace.total_drift},
                 {"trace", steps}};
    if (trace.exclusion) {
        const auto& e = *trace.exclusion;
        results["exclusion"] = json{{"divisor", e.divisor}, {"threshold", e.threshold},
                                    {"m1", e.key.m1},       {"m2", e.key.m2},
                                    {"n", e.key.n},         {"sigma", e.key.sigma}};
    }

    json config{{"grid", json{{"Mx", o.Mx}, {"Ny", o.Ny}, {"d", s0.d()}, {"Lmax", o.Lmax}, {"p", o.p}}},
                {"support", o.support},
                {"lambda", parse_doubles(o.lambda)},
                {"eps", o.eps},
                {"gamma", o.gamma},
                {"tau", o.tau},
                {"eta0", o.eta0},
                {"s", o.s},
                {"nu_max", o.nu_max},
                {"tol_lie", o.tol_lie}};
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    em.emit(envelope("kam", config, results, ms.count()), csv.str(), jsonl.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resonance geometry, Melnikov conditions and KAM reducibility "
                 "for the 2D cubic NLS around finite-gap tori"};
    app.require_subcommand(1);

    Emitter em;
    app.add_option("--out", em.out_path, "report JSON path ('-' for stdout)")->capture_default_str();
    app.add_option("--csv", em.csv_path, "CSV output path for tabular payloads");
    app.add_option("--trace", em.trace_path, "JSON-lines trace path (kam)");

    GenericityOpts gen;
    auto* cgen = app.add_subcommand("genericity", "genericity report for a support set");
    cgen->add_option("--support", gen.support, "comma-separated tangential sites")->required();
    cgen->add_option("--L", gen.L, "momentum-combination bound")->capture_default_str();
    cgen->add_option("--norm", gen.norm, "l1 or linf")->check(CLI::IsMember({"l1", "linf"}))->capture_default_str();
    cgen->add_option("--density-R", gen.density_R, "box radius for the density experiment");
    cgen->add_option("--density-samples", gen.density_samples, "sample count (0 = no density run)");
    cgen->add_flag("--exhaustive", gen.exhaustive, "exhaustive density enumeration");
    cgen->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
    cgen->add_option("--workers", gen.workers, "worker threads")->capture_default_str();

    SpectraOpts spec;
    auto* cspec = app.add_subcommand("spectra", "eigenvalues, gaps and reality diagnostics");
    cspec->add_option("--lambda", spec.lambda, "comma-separated parameter vector")->required();
    cspec->add_option("--grid", spec.grid, "grid per dimension for the feasible-domain scan");
    cspec->add_option("--box-lo", spec.box_lo, "scan box lower corner");
    cspec->add_option("--box-hi", spec.box_hi, "scan box upper corner");
    cspec->add_option("--gamma-tilde", spec.gamma_tilde, "eigenvalue gap requirement")->capture_default_str();

    ResonancesOpts res;
    auto* cres = app.add_subcommand("resonances", "Birkhoff-resonant quadratic monomials");
    cres->add_option("--support", res.support, "comma-separated tangential sites")->required();
    cres->add_option("--n-cutoff", res.n_cutoff, "vertical cutoff")->capture_default_str();

    MelnikovOpts mel;
    auto* cmel = app.add_subcommand("melnikov", "small-divisor scan at fixed lambda");
    cmel->add_option("--support", mel.support)->required();
    cmel->add_option("--lambda", mel.lambda)->required();
    cmel->add_option("--eps", mel.eps)->capture_default_str();
    cmel->add_option("--order", mel.order)->check(CLI::IsMember({2, 3}))->capture_default_str();
    cmel->add_option("--gamma", mel.gamma)->capture_default_str();
    cmel->add_option("--tau", mel.tau, "0 picks the default d+2")->capture_default_str();
    cmel->add_option("--ell-max", mel.ell_max)->capture_default_str();
    cmel->add_option("--m-box", mel.m_box)->capture_default_str();
    cmel->add_option("--n-box", mel.n_box)->capture_default_str();
    cmel->add_option("--M0", mel.M0, "second-order correction budget")->capture_default_str();
    cmel->add_flag("--no-c1-skip", mel.no_c1_skip, "disable the large-K skip");

    MeasureOpts mea;
    auto* cmea = app.add_subcommand("measure", "Monte-Carlo excluded-set estimate");
    cmea->add_option("--support", mea.support)->required();
    cmea->add_option("--gamma", mea.gammas, "comma-separated gamma list")->capture_default_str();
    cmea->add_option("--eps", mea.eps)->capture_default_str();
    cmea->add_option("--tau", mea.tau, "0 picks the default d+2")->capture_default_str();
    cmea->add_option("--ell-max", mea.ell_max)->capture_default_str();
    cmea->add_option("--m-box", mea.m_box)->capture_default_str();
    cmea->add_option("--n-box", mea.n_box)->capture_default_str();
    cmea->add_option("--samples", mea.samples)->capture_default_str();
    cmea->add_option("--seed", mea.seed)->capture_default_str();
    cmea->add_option("--workers", mea.workers)->capture_default_str();
    cmea->add_option("--alpha", mea.alpha, "per-tuple probe threshold")->capture_default_str();

    KamOpts kam;
    auto* ckam = app.add_subcommand("kam", "reducibility iteration on a truncation grid");
    ckam->add_option("--support", kam.support)->required();
    ckam->add_option("--lambda", kam.lambda)->required();
    ckam->add_option("--Mx", kam.Mx)->capture_default_str();
    ckam->add_option("--Ny", kam.Ny)->capture_default_str();
    ckam->add_option("--Lmax", kam.Lmax)->capture_default_str();
    ckam->add_option("--p", kam.p)->capture_default_str();
    ckam->add_option("--eps", kam.eps)->capture_default_str();
    ckam->add_option("--gamma", kam.gamma)->capture_default_str();
    ckam->add_option("--tau", kam.tau)->capture_default_str();
    ckam->add_option("--eta0", kam.eta0)->capture_default_str();
    ckam->add_option("--s", kam.s)->capture_default_str();
    ckam->add_option("--nu-max", kam.nu_max)->capture_default_str();
    ckam->add_option("--tol-lie", kam.tol_lie)->capture_default_str();

    for (auto* sub : {cgen, cspec, cres, cmel, cmea, ckam}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_name() == "CallForHelp" ? 0 : 2;
    }

    try {
        if (*cgen) return run_genericity(gen, em);
        if (*cspec) return run_spectra(spec, em);
        if (*cres) return run_resonances(res, em);
        if (*cmel) return run_melnikov(mel, em);
        if (*cmea) return run_measure(mea, em);
        if (*ckam) return run_kam(kam, em);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const SmallDivisorError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
