#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "conj1d/identities.hpp"
#include "conj1d/linearize.hpp"
#include "conj1d/normal_forms.hpp"
#include "conj1d/orbits.hpp"
#include "conj1d/report_io.hpp"

using namespace conj1d;
using exact::BigRational;

namespace {

// exit codes: 0 success, 1 verification failure, 2 usage/input error
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case Errc::bad_input:
        case Errc::domain:
        case Errc::pole:
        case Errc::assumption:
        case Errc::nonhyperbolic:
        case Errc::not_an_orbit:
            return kExitUsage;
        default:
            return kExitVerifyFail;
    }
}

struct Output {
    std::string path; // empty = stdout
    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) fail(Errc::bad_input, "cannot open output file: " + path);
        out << text;
    }
};

Params parse_params(const std::vector<std::string>& kvs) {
    Params p;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) fail(Errc::bad_input, "expected key=value, got: " + kv);
        p[kv.substr(0, eq)] = BigRational::parse(kv.substr(eq + 1));
    }
    return p;
}

double parse_real(const std::string& s) { return BigRational::parse(s).to_double(); }

std::pair<double, double> parse_pair(const std::string& s, const char* what) {
    auto colon = s.find(':');
    if (colon == std::string::npos) fail(Errc::bad_input, std::string(what) + " expects lo:hi");
    return {parse_real(s.substr(0, colon)), parse_real(s.substr(colon + 1))};
}

// --map takes inline JSON or @file
Map1D load_map(const std::string& spec, const std::string& family,
               const std::vector<std::string>& params) {
    if (!spec.empty()) {
        if (!spec.empty() && spec[0] == '@') {
            std::ifstream in(spec.substr(1));
            if (!in) fail(Errc::bad_input, "cannot read map spec file: " + spec.substr(1));
            std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            return parse_map_spec(text);
        }
        return parse_map_spec(spec);
    }
    if (!family.empty()) return catalog_make(family, parse_params(params));
    fail(Errc::bad_input, "need --map or --family");
}

std::vector<std::vector<BigRational>> default_samples(const std::string& family) {
    std::vector<std::vector<BigRational>> out;
    if (family == "elliptic") {
        for (long long a : {-2, -1, 1, 2, 3})
            for (long long b : {-2, -1, 1, 2, 3}) out.push_back({BigRational(a), BigRational(b)});
    } else if (family == "katsura-fukuda") {
        out = {{BigRational(0)}, {BigRational(1, 4)}, {BigRational(1, 2)},
               {BigRational(3, 4)}, {BigRational(9, 10)}};
    }
    return out;
}

std::string orbits_csv(const std::vector<PeriodicOrbit>& orbits) {
    std::string out = "itinerary,period,points...,multiplier\n";
    for (const auto& o : orbits) {
        out += o.itinerary + "," + std::to_string(o.period);
        for (double x : o.points) out += "," + fmt(x);
        out += "," + fmt(o.multiplier) + "\n";
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"differentiable conjugacies for one-dimensional maps"};
    app.require_subcommand(1);

    std::string map_spec, family, out_path, format = "csv";
    std::vector<std::string> param_kvs;
    auto add_map_opts = [&](CLI::App* cmd, bool with_format = true) {
        cmd->add_option("--map", map_spec, "map spec JSON (inline or @file)");
        cmd->add_option("--family", family, "catalog family name");
        cmd->add_option("--param", param_kvs, "family parameter key=value (value may be p/q)");
        cmd->add_option("--output", out_path, "output path (default stdout)");
        if (with_format) cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* cat = app.add_subcommand("catalog", "list built-in families");
    cat->add_option("--output", out_path, "output path");

    int grid_n = 1024;
    std::string window;
    auto* fps_cmd = app.add_subcommand("fixed-points", "locate fixed points and multipliers");
    add_map_opts(fps_cmd);
    fps_cmd->add_option("--grid-n", grid_n, "search grid size");
    fps_cmd->add_option("--window", window, "search window lo:hi (default: map domain)");

    int p_max = 6;
    auto* orb_cmd = app.add_subcommand("orbits", "periodic orbits of a full-shift unimodal map");
    add_map_opts(orb_cmd);
    orb_cmd->add_option("--pmax", p_max, "maximum period");

    auto* law_cmd = app.add_subcommand("multiplier-law", "check |multiplier| = 2^p against the paired witness");
    add_map_opts(law_cmd);
    law_cmd->add_option("--pmax", p_max, "maximum period");

    std::vector<std::string> samples;
    auto* vid_cmd = app.add_subcommand("verify-identity", "exact functional-identity suite");
    vid_cmd->add_option("--family", family, "elliptic | chebyshev | katsura-fukuda | logistic")->required();
    vid_cmd->add_option("--sample", samples, "parameter sample (\"a,b\" or \"l\"); repeatable");
    vid_cmd->add_option("--param", param_kvs, "single sample as key=value pairs");
    vid_cmd->add_option("--output", out_path, "output path");

    std::string x0_str = "1/5";
    long long n_iter = 1000000, burn_in = 1000, seed = 0;
    int bins = 50;
    auto* den_cmd = app.add_subcommand("density", "empirical invariant density histogram");
    add_map_opts(den_cmd);
    den_cmd->add_option("--x0", x0_str, "orbit start (rational or decimal)");
    den_cmd->add_option("--n", n_iter, "post-burn-in samples");
    den_cmd->add_option("--bins", bins, "histogram bins");
    den_cmd->add_option("--burn-in", burn_in, "discarded leading iterates");
    den_cmd->add_option("--seed", seed, "seed for the tiny x0 perturbation");

    std::string mu_str = "1e-3", mu_param = "nu";
    auto add_fit_opts = [&](CLI::App* cmd) {
        cmd->add_option("--family", family, "catalog family")->required();
        cmd->add_option("--param", param_kvs, "fixed family parameters");
        cmd->add_option("--mu", mu_str, "bifurcation parameter value");
        cmd->add_option("--mu-param", mu_param, "name of the driven parameter (default nu)");
        cmd->add_option("--output", out_path, "output path");
        cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };
    auto* sn_cmd = app.add_subcommand("fit-sn", "extended saddle-node normal form fit");
    add_fit_opts(sn_cmd);
    auto* pf_cmd = app.add_subcommand("fit-pf", "extended pitchfork normal form fit");
    add_fit_opts(pf_cmd);
    auto* bc_cmd = app.add_subcommand("fit-bc", "border-collision (quadratic skew tent) fit");
    add_fit_opts(bc_cmd);

    std::string fit_kind, mu_list;
    auto* sweep_cmd = app.add_subcommand("sweep", "fit over a mu grid, one CSV row per mu");
    sweep_cmd->add_option("--fit", fit_kind, "sn | pf | bc")->required()->check(CLI::IsMember({"sn", "pf", "bc"}));
    sweep_cmd->add_option("--family", family, "catalog family")->required();
    sweep_cmd->add_option("--param", param_kvs, "fixed family parameters");
    sweep_cmd->add_option("--mu-list", mu_list, "comma-separated mu values")->required();
    sweep_cmd->add_option("--mu-param", mu_param, "name of the driven parameter");
    sweep_cmd->add_option("--output", out_path, "output path");

    std::string f_spec, g_spec, pair_str, marked_str, domain_str, basin_f_str, basin_g_str;
    std::vector<std::string> smooth_at;
    bool kink = false;
    double collar = -1;
    auto* conj_cmd = app.add_subcommand("conjugacy", "build a conjugacy table h with h(f(x)) = g(h(x))");
    conj_cmd->add_option("--f", f_spec, "map spec JSON for f (inline or @file)")->required();
    conj_cmd->add_option("--g", g_spec, "map spec JSON for g (inline or @file)")->required();
    conj_cmd->add_option("--pair", pair_str, "paired fixed points x:y")->required();
    conj_cmd->add_option("--marked", marked_str, "marked point pair x0:y0");
    conj_cmd->add_option("--grid-n", grid_n, "table grid size");
    conj_cmd->add_option("--domain", domain_str, "table domain lo:hi");
    conj_cmd->add_option("--basin-f", basin_f_str, "basin override for f, lo:hi");
    conj_cmd->add_option("--basin-g", basin_g_str, "basin override for g, lo:hi");
    conj_cmd->add_option("--collar", collar, "absolute boundary collar");
    conj_cmd->add_option("--smooth-at", smooth_at, "grid location for a smoothness report; repeatable");
    conj_cmd->add_flag("--kink", kink, "extend across the kink of piecewise maps");
    conj_cmd->add_option("--output", out_path, "output path");
    conj_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);
    Output out{out_path};

    try {
        if (cat->parsed()) {
            std::string text = "name,form,params,domain\n";
            for (const auto& fam : catalog_families()) {
                std::string ps;
                for (const auto& p : fam.params) ps += (ps.empty() ? "" : " ") + p;
                text += fam.name + ",\"" + fam.form + "\",\"" + ps + "\"," + fam.domain + "\n";
            }
            out.write(text);
            return 0;
        }

        if (fps_cmd->parsed()) {
            Map1D m = load_map(map_spec, family, param_kvs);
            Interval w = map_domain(m);
            if (!window.empty()) {
                auto [lo, hi] = parse_pair(window, "--window");
                w = Interval::closed(lo, hi);
            } else if (!w.bounded()) {
                w = Interval::closed(-10, 10);
            }
            auto fps = find_fixed_points(m, w, grid_n);
            if (format == "json") {
                nlohmann::ordered_json j;
                j["map"] = map_label(m);
                auto rows = nlohmann::ordered_json::array();
                for (const auto& fp : fps)
                    rows.push_back({{"x", fmt(fp.x_star)},
                                    {"multiplier", fmt(fp.multiplier)},
                                    {"stability", stability_name(fp.stability)}});
                j["fixed_points"] = rows;
                out.write(j.dump(2) + "\n");
            } else {
                out.write(fixed_points_csv(fps));
            }
            return 0;
        }

        if (orb_cmd->parsed()) {
            Map1D m = load_map(map_spec, family, param_kvs);
            auto* s = std::get_if<SmoothMap1D>(&m);
            if (!s) fail(Errc::bad_input, "orbit enumeration needs a smooth unimodal map");
            out.write(orbits_csv(find_periodic_orbits_unimodal(*s, p_max)));
            return 0;
        }

        if (law_cmd->parsed()) {
            if (family.empty()) fail(Errc::bad_input, "multiplier-law needs --family (the witness is paired by family)");
            Params params = parse_params(param_kvs);
            Map1D m = catalog_make(family, params);
            auto witness = paired_witness(family, params);
            if (!witness) fail(Errc::bad_input, "no paired witness known for family " + family);
            auto* s = std::get_if<SmoothMap1D>(&m);
            if (!s) fail(Errc::bad_input, "multiplier-law needs a smooth unimodal map");
            LawReport report = verify_multiplier_law(*s, *witness, p_max);
            out.write(law_csv(report));
            return report.pass ? 0 : kExitVerifyFail;
        }

        if (vid_cmd->parsed()) {
            std::vector<std::vector<BigRational>> sample_list;
            for (const auto& s : samples) {
                std::vector<BigRational> tuple;
                size_t pos = 0;
                while (pos != std::string::npos) {
                    size_t comma = s.find(',', pos);
                    tuple.push_back(BigRational::parse(
                        s.substr(pos, comma == std::string::npos ? comma : comma - pos)));
                    pos = comma == std::string::npos ? comma : comma + 1;
                }
                sample_list.push_back(std::move(tuple));
            }
            if (sample_list.empty() && !param_kvs.empty()) {
                Params p = parse_params(param_kvs);
                std::vector<BigRational> tuple;
                if (family == "elliptic") {
                    tuple = {p.count("a") ? p.at("a") : BigRational(1),
                             p.count("b") ? p.at("b") : BigRational(1)};
                } else if (family == "katsura-fukuda") {
                    tuple = {p.count("l") ? p.at("l") : BigRational(0)};
                }
                if (!tuple.empty()) sample_list.push_back(std::move(tuple));
            }
            if (sample_list.empty()) sample_list = default_samples(family);
            auto report = exact::verify_lemma_suite(family, sample_list);
            out.write(lemma_report_json(report));
            return report.all_pass() ? 0 : kExitVerifyFail;
        }

        if (den_cmd->parsed()) {
            Map1D m = load_map(map_spec, family, param_kvs);
            DensityHistogram h = empirical_density(m, parse_real(x0_str), n_iter, bins, burn_in, seed);
            if (format == "json") {
                nlohmann::ordered_json j;
                j["map"] = map_label(m);
                j["sample_count"] = h.sample_count;
                j["seed"] = h.seed;
                auto edges = nlohmann::ordered_json::array();
                for (double e : h.bin_edges) edges.push_back(fmt(e));
                auto masses = nlohmann::ordered_json::array();
                for (double v : h.masses) masses.push_back(fmt(v));
                j["bin_edges"] = edges;
                j["masses"] = masses;
                out.write(j.dump(2) + "\n");
            } else {
                out.write(density_csv(h));
            }
            return 0;
        }

        if (sn_cmd->parsed() || pf_cmd->parsed() || bc_cmd->parsed()) {
            MapFamily fam = family_in_mu(family, parse_params(param_kvs), mu_param);
            double mu = parse_real(mu_str);
            if (sn_cmd->parsed()) {
                SNFit fit = sn_fit(fam, mu);
                if (format == "json") {
                    nlohmann::ordered_json j{{"mu", fmt(fit.mu)},
                                             {"nu", fmt(fit.nu)},
                                             {"a", fmt(fit.a)},
                                             {"residual", fmt(fit.multiplier_residual)},
                                             {"flipped_x", fit.flipped_x},
                                             {"flipped_mu", fit.flipped_mu}};
                    out.write(j.dump(2) + "\n");
                } else {
                    out.write(sn_sweep_csv({fit}));
                }
            } else if (pf_cmd->parsed()) {
                PFFit fit = pf_fit(fam, mu);
                if (format == "json") {
                    nlohmann::ordered_json j{{"mu", fmt(fit.mu)},
                                             {"nu", fmt(fit.nu)},
                                             {"a", fmt(fit.a)},
                                             {"b", fmt(fit.b)},
                                             {"residual", fmt(fit.residual)}};
                    out.write(j.dump(2) + "\n");
                } else {
                    out.write(pf_sweep_csv({fit}));
                }
            } else {
                BCFit fit = bc_fit(fam, mu);
                if (format == "json") {
                    nlohmann::ordered_json j{{"mu", fmt(fit.mu)},
                                             {"sL", fmt(fit.s_L)},
                                             {"sR", fmt(fit.s_R)},
                                             {"t", fmt(fit.t)},
                                             {"residual_L", fmt(fit.residual_L)},
                                             {"residual_R", fmt(fit.residual_R)},
                                             {"residual_slope", fmt(fit.residual_slope)}};
                    out.write(j.dump(2) + "\n");
                } else {
                    out.write(bc_sweep_csv({fit}));
                }
            }
            return 0;
        }

        if (sweep_cmd->parsed()) {
            MapFamily fam = family_in_mu(family, parse_params(param_kvs), mu_param);
            std::vector<double> mus;
            size_t pos = 0;
            while (pos != std::string::npos) {
                size_t comma = mu_list.find(',', pos);
                mus.push_back(parse_real(
                    mu_list.substr(pos, comma == std::string::npos ? comma : comma - pos)));
                pos = comma == std::string::npos ? comma : comma + 1;
            }
            std::sort(mus.begin(), mus.end());
            // mu values where the assumptions fail are reported and skipped:
            // the emitted rows delimit the empirically valid parameter range
            int skipped = 0;
            auto note_skip = [&](double mu, const Error& e) {
                std::cerr << "note: mu=" << fmt(mu) << " skipped: " << e.what() << "\n";
                ++skipped;
            };
            if (fit_kind == "sn") {
                std::vector<SNFit> fits;
                for (double mu : mus) {
                    try {
                        fits.push_back(sn_fit(fam, mu));
                    } catch (const Error& e) {
                        note_skip(mu, e);
                    }
                }
                out.write(sn_sweep_csv(fits));
                if (fits.empty()) return kExitUsage;
            } else if (fit_kind == "pf") {
                std::vector<PFFit> fits;
                for (double mu : mus) {
                    try {
                        fits.push_back(pf_fit(fam, mu));
                    } catch (const Error& e) {
                        note_skip(mu, e);
                    }
                }
                out.write(pf_sweep_csv(fits));
                if (fits.empty()) return kExitUsage;
            } else {
                std::vector<BCFit> fits;
                for (double mu : mus) {
                    try {
                        fits.push_back(bc_fit(fam, mu));
                    } catch (const Error& e) {
                        note_skip(mu, e);
                    }
                }
                out.write(bc_sweep_csv(fits));
                if (fits.empty()) return kExitUsage;
            }
            return 0;
        }

        if (conj_cmd->parsed()) {
            Map1D f = load_map(f_spec, "", {});
            Map1D g = load_map(g_spec, "", {});
            auto [px, py] = parse_pair(pair_str, "--pair");
            Pairing pairing{px, py, std::nullopt};
            if (!marked_str.empty()) {
                auto [mx, my] = parse_pair(marked_str, "--marked");
                pairing.marked = std::make_pair(mx, my);
            }
            ConjugacyOptions opt;
            opt.grid_n = grid_n;
            opt.collar = collar;
            if (!domain_str.empty()) {
                auto [lo, hi] = parse_pair(domain_str, "--domain");
                opt.domain_f = Interval::closed(lo, hi);
            }
            if (!basin_f_str.empty()) {
                auto [lo, hi] = parse_pair(basin_f_str, "--basin-f");
                opt.basin_f = Interval::open(lo, hi);
            }
            if (!basin_g_str.empty()) {
                auto [lo, hi] = parse_pair(basin_g_str, "--basin-g");
                opt.basin_g = Interval::open(lo, hi);
            }
            ConjugacyTable table = build_conjugacy(f, g, pairing, opt);
            if (kink) {
                auto* fp = std::get_if<PiecewiseMap1D>(&f);
                auto* gp = std::get_if<PiecewiseMap1D>(&g);
                if (!fp || !gp) fail(Errc::bad_input, "--kink needs piecewise f and g");
                table = extend_across_kink(table, *fp, *gp);
            }
            std::vector<SmoothnessReport> reports;
            if (kink) reports.push_back(smoothness_report(table, f, g, 0.0));
            for (const auto& loc : smooth_at)
                reports.push_back(smoothness_report(table, f, g, parse_real(loc)));
            if (format == "json")
                out.write(table_json(table, reports));
            else
                out.write(table_csv(table));
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
