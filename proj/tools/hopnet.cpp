#include "cli_config.hpp"

#include "hopnet/conductivity.hpp"
#include "hopnet/crossings.hpp"
#include "hopnet/errors.hpp"
#include "hopnet/fkg.hpp"
#include "hopnet/graph.hpp"
#include "hopnet/io.hpp"
#include "hopnet/mott_walk.hpp"
#include "hopnet/percolation.hpp"
#include "hopnet/point_process.hpp"
#include "hopnet/stats.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace hopnet;
using namespace hopnet::cli;

namespace {

constexpr const char* kVersion = "hopnet 1.0.0";

/// Files of one run, written together after the command succeeds.
class Artifacts {
public:
    std::ostream& csv(const std::string& name) { return files_[name]; }
    void json(const std::string& name, const Json& j) { files_[name] << j.dump(2) << '\n'; }

    Json write(const fs::path& dir) const {
        Json listing = Json::array();
        for (const auto& [name, body] : files_) {
            const std::string s = body.str();
            std::ofstream(dir / name, std::ios::binary) << s;
            listing.push_back({{"file", name}, {"sha1", git_blob_sha1(s)}});
        }
        return listing;
    }

private:
    std::map<std::string, std::ostringstream> files_;
};

EnergyLaw law_of(const Json& p) {
    const double c0 = number(p, "c0"), alpha = number(p, "alpha");
    return text(p, "law") == "positive" ? EnergyLaw::positive_power(c0, alpha) : EnergyLaw::signed_power(c0, alpha);
}

RngSeed seed_of(const Json& p) { return {integer(p, "seed"), integer(p, "stream")}; }
int dim_of(const Json& p) { return static_cast<int>(integer(p, "dim")); }

void write_points(std::ostream& out, const MarkedConfiguration& c) {
    std::vector<std::string> head{"index"};
    for (int k = 0; k < c.dim; ++k) head.push_back("x" + std::to_string(k + 1));
    head.push_back("e");
    for (std::size_t k = 0; k < head.size(); ++k) out << (k ? "," : "") << head[k];
    out << '\n';
    for (std::size_t i = 0; i < c.size(); ++i) {
        out << i;
        for (int k = 0; k < c.dim; ++k) out << ',' << format_double(c.points[i].x[k]);
        out << ',' << format_double(c.points[i].e) << '\n';
    }
}

Json threshold_json(const ThresholdEstimate& t, const Json& params) {
    Json probes = Json::array();
    for (const auto& p : t.probes) probes.push_back({{"value", p.value}, {"freq", p.freq}, {"n", p.n}});
    return {{"parameter", t.parameter},
            {"estimate", t.value},
            {"half_width", t.half_width},
            {"bracket", {t.bracket_lo, t.bracket_hi}},
            {"replicas_per_probe", t.replicas_per_probe},
            {"box_side", t.box_side},
            {"probes", probes},
            {"seed", {{"seed", t.seed.seed}, {"stream", t.seed.stream}}},
            {"params", params}};
}

void write_probes(std::ostream& out, const ThresholdEstimate& t) {
    CsvWriter w(out, {"step", "value", "freq", "n"});
    for (std::size_t k = 0; k < t.probes.size(); ++k) {
        w.cell(k).cell(t.probes[k].value).cell(t.probes[k].freq).cell(t.probes[k].n);
        w.end_row();
    }
}

BisectionOptions bisection_of(const Json& p) {
    BisectionOptions o;
    o.replicas = integer(p, "replicas");
    o.tol = number(p, "tol");
    if (number(p, "hi") > 0.0) o.hi = number(p, "hi");
    o.max_expansions = static_cast<int>(integer(p, "max_expansions"));
    return o;
}

Json run_sample(const Json& p, Artifacts& out) {
    auto c = sample_marked_ppp(number(p, "rho"), law_of(p), Box::centered(dim_of(p), number(p, "radius")), seed_of(p));
    if (flag(p, "palm")) c = palm_augment(c, law_of(p), seed_of(p).with_stream(seed_of(p).stream + 1));
    out.json("configuration.json", to_json(c));
    write_points(out.csv("points.csv"), c);
    return {{"points", c.size()}, {"dimension", c.dim}};
}

Json run_graph(const Json& p, Artifacts& out) {
    const int dim = dim_of(p);
    WeightedGraph g;
    if (text(p, "network") == "threshold") {
        const auto c = sample_marked_ppp(number(p, "rho"), law_of(p), Box::centered(dim, number(p, "radius")), seed_of(p));
        g = build_threshold_graph(c, number(p, "zeta"), number(p, "beta"));
    } else {
        const StripeGeometry geo{dim, number(p, "ell")};
        const auto c = sample_marked_ppp(number(p, "rho"), law_of(p), geo.window(number(p, "padding")), seed_of(p));
        double c_min = number(p, "c_min");
        if (c_min < 0.0) c_min = default_cutoff(c, number(p, "beta"), geo).c_min;
        g = build_ma_network(c, number(p, "beta"), geo, c_min);
    }
    {
        std::vector<std::string> head{"index"};
        for (int k = 0; k < dim; ++k) head.push_back("x" + std::to_string(k + 1));
        head.push_back("e");
        auto& vs = out.csv("vertices.csv");
        for (std::size_t k = 0; k < head.size(); ++k) vs << (k ? "," : "") << head[k];
        vs << '\n';
        for (std::size_t i = 0; i < g.vertex_count(); ++i) {
            vs << i;
            for (int k = 0; k < dim; ++k) vs << ',' << format_double(g.positions[i][k]);
            vs << ',' << format_double(g.energies[i]) << '\n';
        }
    }
    CsvWriter w(out.csv("edges.csv"), {"i", "j", "weight"});
    for (const auto& ed : g.edges) {
        w.cell(static_cast<std::size_t>(ed.i)).cell(static_cast<std::size_t>(ed.j)).cell(ed.weight);
        w.end_row();
    }
    out.json("graph.json", to_json(g.meta));
    return {{"vertices", g.vertex_count()}, {"edges", g.edges.size()}, {"meta", to_json(g.meta)}};
}

Json run_percolate(const Json& p, Artifacts& out) {
    const PppModel model{number(p, "rho"), law_of(p), dim_of(p), number(p, "zeta"), number(p, "beta")};
    const double pad = number(p, "padding");
    const auto est = crossing_probability(model, number(p, "L"), integer(p, "replicas"), seed_of(p), Execution::parallel,
                                          pad < 0.0 ? std::nan("") : pad);
    Json summary{{"crossing_probability", est.mean}, {"stderr", est.se}, {"replicas", est.n}};
    if (const auto n = integer(p, "palm_replicas"); n > 0) {
        const auto d = palm_cluster_diameter(model.rho, model.law, model.zeta, model.beta, model.dim,
                                             number(p, "palm_radius"), n, seed_of(p).with_stream(seed_of(p).stream + 1));
        double top = 0.0;
        for (double x : d.diameter) top = std::max(top, x);
        std::vector<double> levels;
        for (int k = 0; k <= 20; ++k) levels.push_back(top * k / 20.0);
        CsvWriter w(out.csv("palm_survival.csv"), {"n", "survival", "count"});
        for (const auto& s : survival_curve(d.diameter, levels)) {
            w.cell(s.n).cell(s.survival).cell(s.count);
            w.end_row();
        }
        summary["palm"] = {{"replicas", n}, {"truncation_rate", d.truncation_rate}, {"valid", d.valid}};
    }
    out.json("crossing.json", summary);
    return summary;
}

Json run_threshold_zeta(const Json& p, Artifacts& out) {
    const auto t = estimate_zeta_c(number(p, "beta"), number(p, "rho"), law_of(p), dim_of(p), number(p, "L"), bisection_of(p), seed_of(p));
    const auto j = threshold_json(t, p);
    out.json("threshold.json", j);
    write_probes(out.csv("probes.csv"), t);
    return j;
}

Json run_threshold_lambda(const Json& p, Artifacts& out) {
    const auto t = estimate_lambda_c(number(p, "alpha"), sign_mode_from_string(text(p, "sign")), dim_of(p), number(p, "L"),
                                     bisection_of(p), seed_of(p));
    const auto j = threshold_json(t, p);
    out.json("threshold.json", j);
    write_probes(out.csv("probes.csv"), t);
    return j;
}

Json run_crossings(const Json& p, Artifacts& out) {
    const PppModel model{number(p, "rho"), law_of(p), dim_of(p), number(p, "zeta"), number(p, "beta")};
    const auto scan = crossing_density_scan(model, numbers(p, "L"), integer(p, "replicas"), seed_of(p));
    CsvWriter w(out.csv("crossings.csv"), {"L", "mean", "stderr", "replicas"});
    for (const auto& r : scan.rows) {
        w.cell(r.L).cell(r.mean).cell(r.se).cell(r.replicas);
        w.end_row();
    }
    Json rows = Json::array();
    for (const auto& r : scan.rows) rows.push_back({{"L", r.L}, {"mean", r.mean}, {"crossing_fraction", r.crossing_fraction}});
    const Json summary{{"rows", rows}, {"warnings", scan.warnings}};
    out.json("crossings.json", summary);
    return summary;
}

Json run_conductivity(const Json& p, Artifacts& out) {
    const StripeGeometry geo{dim_of(p), number(p, "ell")};
    ConductivityOptions opts;
    if (number(p, "c_min") >= 0.0) opts.c_min = number(p, "c_min");
    opts.solver.tol = number(p, "tol");
    const auto n = integer(p, "replicas");
    std::vector<ConductivityResult> res(n);
    const auto law = law_of(p);
    for_each_index(n, Execution::parallel, [&](std::size_t r) {
        const auto c = sample_marked_ppp(number(p, "rho"), law, geo.window(number(p, "padding")), seed_of(p).with_stream(seed_of(p).stream + r));
        res[r] = rescaled_conductivity(c, number(p, "beta"), geo, opts);
    });
    CsvWriter w(out.csv("conductivity.csv"),
                {"replica", "sigma", "rescaled", "c_min", "zeta_cut", "dropped_weight", "nodes", "edges", "iterations"});
    std::vector<double> vals;
    for (std::size_t r = 0; r < n; ++r) {
        const auto& x = res[r];
        w.cell(r).cell(x.sigma).cell(x.rescaled).cell(x.c_min).cell(x.zeta_cut).cell(x.dropped_weight).cell(x.nodes).cell(x.edges).cell(x.iterations);
        w.end_row();
        vals.push_back(x.rescaled);
    }
    const auto m = mean_stderr(vals);
    const Json summary{{"mean_rescaled_sigma", m.mean}, {"stderr", m.se}, {"replicas", n}};
    out.json("summary.json", summary);
    return summary;
}

Json run_mott_scan(const Json& p, Artifacts& out) {
    MottScanPlan plan;
    plan.betas = numbers(p, "beta");
    plan.rho = number(p, "rho");
    plan.law = law_of(p);
    plan.dim = dim_of(p);
    plan.L_factor = number(p, "L_factor");
    plan.ell_scale = number(p, "ell_scale");
    plan.cut_factor = number(p, "cut_factor");
    plan.replicas = integer(p, "replicas");
    plan.solver.tol = number(p, "tol");
    plan.seed = seed_of(p);
    Json lambda_info;
    plan.lambda_star = number(p, "lambda_star");
    if (plan.lambda_star <= 0.0) {
        BisectionOptions o;
        o.replicas = integer(p, "lambda_replicas");
        const auto mode = text(p, "law") == "positive" ? SignMode::positive : SignMode::signed_marks;
        const auto t = estimate_lambda_c(number(p, "alpha"), mode, plan.dim, number(p, "lambda_L"), o, seed_of(p).with_stream(seed_of(p).stream + (1ull << 40)));
        plan.lambda_star = t.value;
        lambda_info = {{"estimate", t.value}, {"half_width", t.half_width}};
    }
    const auto res = mott_scan(plan);
    CsvWriter w(out.csv("scan.csv"), {"beta", "beta_pow", "mean_ln_sigma", "stderr", "censored_fraction", "ell", "replicas",
                                      "zeta_cut", "mean_ln_lower_bound"});
    for (const auto& r : res.rows) {
        w.cell(r.beta).cell(r.beta_pow).cell(r.mean_ln_sigma).cell(r.se).cell(r.censored_fraction).cell(r.ell).cell(r.replicas)
            .cell(r.zeta_cut).cell(r.mean_ln_lower_bound);
        w.end_row();
    }
    Json summary{{"slope", res.fit.slope},
                 {"slope_ci95", {res.fit.slope_lo, res.fit.slope_hi}},
                 {"intercept", res.fit.intercept},
                 {"predicted_slope", res.predicted_slope},
                 {"lambda_star", plan.lambda_star}};
    if (!lambda_info.is_null()) summary["lambda_estimate"] = lambda_info;
    out.json("slope.json", summary);
    return summary;
}

Json run_walk(const Json& p, Artifacts& out) {
    WalkExperiment plan;
    plan.rho = number(p, "rho");
    plan.law = law_of(p);
    plan.dim = dim_of(p);
    plan.beta = number(p, "beta");
    plan.window_radius = number(p, "radius");
    plan.t_max = number(p, "t_max");
    plan.trajectories = integer(p, "trajectories");
    plan.walk.zeta_cut = number(p, "zeta_cut");
    plan.walk.record_path = false;
    plan.seed = seed_of(p);
    const auto s = run_walk_experiment(plan);
    std::vector<std::string> head{"trajectory", "t"};
    for (int k = 0; k < plan.dim; ++k) head.push_back("x" + std::to_string(k + 1));
    head.insert(head.end(), {"jumps", "absorbed"});
    auto& csv = out.csv("trajectories.csv");
    for (std::size_t k = 0; k < head.size(); ++k) csv << (k ? "," : "") << head[k];
    csv << '\n';
    for (std::size_t r = 0; r < s.trajectories.size(); ++r) {
        const auto& tr = s.trajectories[r];
        csv << r << ',' << format_double(tr.t_max);
        for (int k = 0; k < plan.dim; ++k) csv << ',' << format_double(tr.displacement[k]);
        csv << ',' << tr.jumps << ',' << (tr.absorbed ? 1 : 0) << '\n';
    }
    const Json summary{{"D", s.diffusion.D},
                       {"stderr", s.diffusion.se},
                       {"t", s.diffusion.t},
                       {"trajectories", s.diffusion.trajectories},
                       {"suppression_fraction", s.suppression_fraction},
                       {"absorbed_fraction", s.absorbed_fraction},
                       {"mean_jumps", s.mean_jumps}};
    out.json("msd.json", summary);
    return summary;
}

Json run_fkg(const Json& p, Artifacts& out) {
    const auto e = fkg_probabilities(integer(p, "samples"), seed_of(p));
    const Json summary{{"PA", e.PA}, {"PB", e.PB}, {"PAB", e.PAB}, {"samples", e.samples}, {"seed", integer(p, "seed")},
                       {"stderr", {{"A", e.se_A}, {"B", e.se_B}, {"AB", e.se_AB}}}};
    out.json("fkg.json", summary);
    return summary;
}

const std::map<std::string, Json (*)(const Json&, Artifacts&)> kRunners{
    {"sample", run_sample},
    {"graph", run_graph},
    {"percolate", run_percolate},
    {"threshold-zeta", run_threshold_zeta},
    {"threshold-lambda", run_threshold_lambda},
    {"crossings", run_crossings},
    {"conductivity", run_conductivity},
    {"mott-scan", run_mott_scan},
    {"walk", run_walk},
    {"fkg-demo", run_fkg},
};

std::string utc_stamp(const char* fmt) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, fmt, &tm);
    return buf;
}

fs::path run_directory(const std::string& out, const std::string& hash) {
    if (!out.empty()) return out;
    const fs::path base = fs::path("runs") / (utc_stamp("%Y%m%dT%H%M%SZ") + "-" + hash.substr(0, 10));
    fs::path dir = base;
    for (int k = 1; fs::exists(dir); ++k) dir = base.string() + "-" + std::to_string(k);
    return dir;
}

const char* error_kind(const std::exception& e) {
    if (dynamic_cast<const ParameterError*>(&e)) return "parameter error";
    if (dynamic_cast<const DomainError*>(&e)) return "domain error";
    if (dynamic_cast<const PreconditionError*>(&e)) return "precondition error";
    if (dynamic_cast<const SearchError*>(&e)) return "search error";
    if (dynamic_cast<const SolverError*>(&e)) return "solver error";
    if (dynamic_cast<const StatisticsError*>(&e)) return "statistics error";
    return "error";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Miller-Abrahams networks and Mott's random walk on marked point processes"};
    app.set_version_flag("--version", kVersion);
    std::string config_path, out_dir;
    bool quiet = false;
    app.add_option("--config", config_path, "JSON config or manifest {schema, command, params}");
    app.add_option("--out", out_dir, "output directory (default runs/<timestamp>-<hash>)");
    app.add_flag("--quiet", quiet, "do not print the summary JSON");
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::map<std::string, std::map<std::string, std::string>> raw;
    std::map<std::string, CLI::App*> subs;
    for (const auto& spec : commands()) {
        auto* sub = app.add_subcommand(spec.name, spec.help);
        subs[spec.name] = sub;
        for (const auto& param : spec.params) {
            std::string help = param.help + " [default " + param.fallback.dump() + "]";
            if (!param.choices.empty()) {
                help += " {";
                for (std::size_t k = 0; k < param.choices.size(); ++k) help += (k ? "," : "") + param.choices[k];
                help += "}";
            }
            sub->add_option("--" + param.name, raw[spec.name][param.name], help);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string name;
    std::map<std::string, std::string> flags;
    for (const auto& [n, sub] : subs)
        if (sub->parsed()) {
            name = n;
            for (const auto& param : command(n).params)
                if (sub->count("--" + param.name) > 0) flags[param.name] = raw[n][param.name];
        }

    RunConfig rc;
    try {
        const Json doc = config_path.empty() ? Json() : read_config_file(config_path);
        rc = resolve(name, doc, flags);
    } catch (const ConfigError& e) {
        std::cerr << "hopnet: config error at " << e.what() << '\n';
        return 2;
    }

    const std::string canonical = rc.document().dump();
    const std::string hash = git_blob_sha1(canonical);
    try {
        Artifacts artifacts;
        const Json summary = kRunners.at(rc.command)(rc.params, artifacts);
        const fs::path dir = run_directory(out_dir, hash);
        fs::create_directories(dir);
        Json manifest = rc.document();
        manifest["config_hash"] = hash;
        manifest["version"] = kVersion;
        manifest["created"] = utc_stamp("%Y-%m-%dT%H:%M:%SZ");
        manifest["outputs"] = artifacts.write(dir);
        std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
        if (!quiet) std::cout << summary.dump(2) << '\n';
        std::cerr << "hopnet: wrote " << dir.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "hopnet " << rc.command << ": " << error_kind(e) << ": " << e.what() << '\n';
        return 3;
    }
    return 0;
}
