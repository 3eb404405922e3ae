// braidlab: counter-braid analysis toolkit
//
// Subcommands cover graph sampling, encoding, decoding, Monte Carlo SER
// experiments, single-system and coupled thresholds, EXIT-type curves, the
// residual-graph curve, the guess-based decoder's asymptotics, design rates,
// multilayer thresholds, and the compressed-sensing phase transition.
//
// Exit codes: 0 success, 1 usage error, 2 numerical/bracket error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "braidlab/codec.hpp"
#include "braidlab/csbridge.hpp"
#include "braidlab/de.hpp"
#include "braidlab/decode.hpp"
#include "braidlab/dist.hpp"
#include "braidlab/errors.hpp"
#include "braidlab/graph.hpp"
#include "braidlab/harness.hpp"
#include "braidlab/io.hpp"
#include "braidlab/layers.hpp"
#include "braidlab/maxwell.hpp"
#include "braidlab/scde.hpp"

namespace {

using braidlab::i64;

struct OutputSink {
    std::string path;    // empty = stdout
    std::string format;  // csv | json

    void write_rows(const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) const {
        std::ostringstream body;
        if (format == "json") {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& row : rows) {
                nlohmann::json obj;
                for (std::size_t i = 0; i < header.size() && i < row.size(); ++i) {
                    // numbers stay numbers when they parse as such
                    try {
                        std::size_t used = 0;
                        const double v = std::stod(row[i], &used);
                        if (used == row[i].size()) {
                            obj[header[i]] = v;
                            continue;
                        }
                    } catch (...) {
                    }
                    obj[header[i]] = row[i];
                }
                arr.push_back(obj);
            }
            body << arr.dump(2) << '\n';
        } else {
            for (std::size_t i = 0; i < header.size(); ++i)
                body << header[i] << (i + 1 < header.size() ? "," : "\n");
            for (const auto& row : rows) {
                for (std::size_t i = 0; i < row.size(); ++i)
                    body << row[i] << (i + 1 < row.size() ? "," : "\n");
            }
        }
        if (path.empty()) {
            std::cout << body.str();
        } else {
            std::ofstream out(path);
            if (!out) throw braidlab::param_error("cannot open " + path + " for writing");
            out << body.str();
        }
    }
};

std::string fmt(double v) { return braidlab::format_number(v); }

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs.push_back(lo + (hi - lo) * (n == 1 ? 0.0 : static_cast<double>(i) / (n - 1)));
    return xs;
}

std::vector<double> parse_grid_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

braidlab::FlowSizeDist dist_from_options(double alpha, const std::string& pmf_path) {
    if (!pmf_path.empty()) {
        std::ifstream in(pmf_path);
        if (!in) throw braidlab::param_error("cannot open " + pmf_path);
        nlohmann::json j = nlohmann::json::parse(in);
        std::map<i64, double> pmf;
        for (auto it = j.begin(); it != j.end(); ++it) pmf[std::stoll(it.key())] = it.value().get<double>();
        return braidlab::FlowSizeDist::explicit_pmf(pmf);
    }
    return braidlab::FlowSizeDist::power_law(alpha);
}

double resolve_gamma(int k, std::optional<double> gamma, std::optional<double> beta) {
    if (gamma && beta) throw braidlab::param_error("give either --gamma or --beta, not both");
    if (gamma) return *gamma;
    if (beta) return static_cast<double>(k) / *beta;
    throw braidlab::param_error("one of --gamma or --beta is required");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"braidlab: counter-braid encoders, decoders, and asymptotic analysis"};
    app.require_subcommand(1);

    OutputSink sink;
    app.add_option("--out", sink.path, "output file (default stdout)")->capture_default_str();
    sink.format = "csv";
    app.add_option("--format", sink.format, "output format")->check(CLI::IsMember({"csv", "json"}));

    int k = 3;
    std::optional<double> gamma_opt, beta_opt;
    double eps = 0.0, alpha = 1.5, tol = 1e-6, delta = 0.0;
    int N = 1, w = 1, grid_n = 256, lmax = 200, threads = braidlab::default_threads(), depth = 8, pos = 0;
    i64 m0 = 1000;
    int trials = 100;
    std::uint64_t seed = 1;
    std::string decoder = "bp", mode = "eps", pmf_path, graph_path, flows_path, counters_path, trace_path,
                config_path, layers_path, tau_list, dump_state, dt_path;
    bool modified = false, beta_units = false;

    auto add_common = [&](CLI::App* sub) {
        sub->fallthrough();  // --out/--format live on the parent
        sub->add_option("--k", k, "flow-node degree");
        sub->add_option("--gamma", gamma_opt, "average counter degree");
        sub->add_option("--beta", beta_opt, "counters per flow (k/gamma)");
        sub->add_option("--eps", eps, "channel value Pr(size > f_min)");
        sub->add_option("--alpha", alpha, "power-law exponent");
        sub->add_option("--N", N, "coupling chain length");
        sub->add_option("--w", w, "smoothing window");
        sub->add_option("--m0", m0, "number of flows");
        sub->add_option("--trials", trials, "Monte Carlo trials");
        sub->add_option("--seed", seed, "master seed");
        sub->add_option("--tol", tol, "tolerance");
        sub->add_option("--grid", grid_n, "grid size");
        sub->add_option("--threads", threads, "worker threads (0 = auto)");
        sub->add_option("--lmax", lmax, "iteration cap");
        sub->add_option("--decoder", decoder, "bp | peel | maxwell");
    };

    auto* gen = app.add_subcommand("gen-graph", "sample a graph and write it as JSON");
    add_common(gen);
    i64 m1 = 0;
    gen->add_option("--m1", m1, "number of counters (uncoupled)");

    auto* enc = app.add_subcommand("encode", "encode flow sizes into counters");
    add_common(enc);
    enc->add_option("--graph", graph_path, "graph JSON")->required();
    enc->add_option("--flows", flows_path, "flows CSV")->required();
    enc->add_option("--depth", depth, "counter depth in bits");
    enc->add_option("--trace", trace_path, "packet trace (one flow id per line) instead of --flows");

    auto* dec = app.add_subcommand("decode", "decode counters back to flow sizes");
    add_common(dec);
    dec->add_option("--graph", graph_path, "graph JSON")->required();
    dec->add_option("--counters", counters_path, "counters CSV")->required();
    i64 f_min = 2;
    dec->add_option("--fmin", f_min, "minimum flow size");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo SER experiment");
    add_common(sim);
    sim->add_option("--config", config_path, "config JSON (flags override)");
    std::string beta_grid_list;
    sim->add_option("--beta-grid", beta_grid_list, "comma-separated beta sweep");
    sim->add_option("--pmf", pmf_path, "explicit pmf JSON ({\"2\":0.6,...})");

    auto* thr = app.add_subcommand("threshold", "single-system BP threshold");
    add_common(thr);
    thr->add_option("--mode", mode, "eps | beta")->check(CLI::IsMember({"eps", "beta"}));

    auto* cthr = app.add_subcommand("cthreshold", "coupled BP threshold");
    add_common(cthr);
    cthr->add_option("--mode", mode, "eps | beta")->check(CLI::IsMember({"eps", "beta"}));
    cthr->add_flag("--modified", modified, "two-phase windowed recursion");
    cthr->add_option("--dump-state", dump_state, "write (position,x) fixed point at --eps to this file");

    auto* exit_cmd = app.add_subcommand("exit", "EBP EXIT curve");
    add_common(exit_cmd);

    auto* cexit = app.add_subcommand("cexit", "coupled EBP EXIT curve at one position");
    add_common(cexit);
    cexit->add_option("--pos", pos, "position (default mid-chain)");

    auto* area = app.add_subcommand("area", "area threshold");
    add_common(area);
    area->add_flag("--beta-units", beta_units, "report the beta where eps_bar equals --eps");

    auto* resid = app.add_subcommand("residual", "EBP curve of the peeling residual ensemble");
    add_common(resid);

    auto* maxde = app.add_subcommand("maxde", "guess-decoder density evolution state");
    add_common(maxde);
    maxde->add_option("--delta", delta, "guess fraction");

    auto* rate = app.add_subcommand("rate", "design rate of the coupled ensemble");
    add_common(rate);
    rate->add_option("--depth", depth, "counter depth in bits");

    auto* multi = app.add_subcommand("multilayer", "multilayer coupled threshold");
    add_common(multi);
    multi->add_option("--layers", layers_path, "JSON list of {k, gamma, d}")->required();
    multi->add_option("--pmf", pmf_path, "explicit pmf JSON");

    auto* csphase = app.add_subcommand("cs-phase", "undersampling/sparsity phase transition");
    add_common(csphase);
    csphase->add_option("--tau", tau_list, "comma-separated sparsity ratios");
    csphase->add_option("--dt", dt_path, "optional external phase-transition CSV (tau,beta)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // anything but help counts as a usage error
    }

    try {
        if (*gen) {
            braidlab::CbGraph g;
            if (N > 1 || w > 1) {
                braidlab::ScParams sc;
                sc.N = N;
                sc.w = w;
                if (m0 % N != 0) throw braidlab::param_error("--m0 must be divisible by --N");
                sc.kappa = m0 / N;
                g = braidlab::sample_coupled_graph(k, resolve_gamma(k, gamma_opt, beta_opt), sc, seed);
            } else {
                braidlab::EnsembleParams p;
                p.k = k;
                p.m0 = m0;
                if (m1 > 0)
                    p.m1 = m1;
                else
                    p.m1 = std::max<i64>(1, std::llround(m0 * k / resolve_gamma(k, gamma_opt, beta_opt)));
                g = braidlab::sample_graph(p, seed);
            }
            if (sink.path.empty()) throw braidlab::param_error("gen-graph requires --out");
            braidlab::save_graph(g, sink.path);
            std::cerr << "wrote graph m0=" << g.m0 << " m1=" << g.m1 << " seed=" << seed << "\n";
        } else if (*enc) {
            const auto g = braidlab::load_graph(graph_path);
            std::vector<i64> stored;
            if (!trace_path.empty()) {
                braidlab::LayerConfig cfg;
                cfg.m0 = g.m0;
                cfg.layers.push_back({g.k, g.m1, depth});
                stored = braidlab::ingest_trace(cfg, {g}, braidlab::load_trace(trace_path)).front();
            } else {
                const auto flows = braidlab::load_flows(flows_path);
                stored = braidlab::encode(g, flows, depth).modular;
            }
            if (sink.path.empty()) throw braidlab::param_error("encode requires --out");
            braidlab::save_counters(stored, sink.path);
        } else if (*dec) {
            const auto g = braidlab::load_graph(graph_path);
            const auto counters = braidlab::load_counters(counters_path);
            std::vector<i64> est;
            std::vector<std::uint8_t> conv;
            if (decoder == "bp") {
                auto r = braidlab::bp_decode(g, counters, f_min, lmax);
                est = std::move(r.estimates);
                conv = std::move(r.converged);
            } else if (decoder == "peel") {
                auto r = braidlab::peel_decode(g, counters, f_min);
                est = std::move(r.estimates);
                conv = std::move(r.peeled);
            } else if (decoder == "maxwell") {
                auto r = braidlab::maxwell_decode(g, counters, f_min, seed);
                est = std::move(r.estimates);
                conv.assign(est.size(), r.status == braidlab::MaxwellStatus::Unique ? 1 : 0);
                if (r.status != braidlab::MaxwellStatus::Unique)
                    for (i64 f = 0; f < g.m0; ++f)
                        conv[static_cast<std::size_t>(f)] =
                            r.labels[static_cast<std::size_t>(f)] == braidlab::FlowLabel::Known ? 1 : 0;
            } else {
                throw braidlab::param_error("unknown --decoder " + decoder);
            }
            if (sink.path.empty()) throw braidlab::param_error("decode requires --out");
            braidlab::save_estimates(est, conv, sink.path);
        } else if (*sim) {
            braidlab::SimConfig cfg;
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) throw braidlab::param_error("cannot open " + config_path);
                nlohmann::json j = nlohmann::json::parse(in);
                const std::string d = j.value("decoder", "bp");
                cfg.decoder = d == "peel"      ? braidlab::DecoderKind::Peel
                              : d == "maxwell" ? braidlab::DecoderKind::Maxwell
                                               : braidlab::DecoderKind::Bp;
                cfg.k = j.value("k", 3);
                if (j.contains("beta"))
                    cfg.beta = j["beta"].get<double>();
                else if (j.contains("gamma"))
                    cfg.beta = cfg.k / j["gamma"].get<double>();
                cfg.m0 = j.value("m0", i64{1000});
                if (j.contains("N")) cfg.N = j["N"].get<int>();
                if (j.contains("w")) cfg.w = j["w"].get<int>();
                if (j.contains("alpha")) cfg.dist = braidlab::FlowSizeDist::power_law(j["alpha"].get<double>());
                if (j.contains("pmf")) {
                    std::map<i64, double> pmf;
                    for (auto it = j["pmf"].begin(); it != j["pmf"].end(); ++it)
                        pmf[std::stoll(it.key())] = it.value().get<double>();
                    cfg.dist = braidlab::FlowSizeDist::explicit_pmf(pmf);
                }
                cfg.trials = j.value("trials", 100);
                cfg.l_max = j.value("lmax", 200);
                cfg.seed = j.value("seed", std::uint64_t{1});
            } else {
                cfg.decoder = decoder == "peel"      ? braidlab::DecoderKind::Peel
                              : decoder == "maxwell" ? braidlab::DecoderKind::Maxwell
                                                     : braidlab::DecoderKind::Bp;
                cfg.k = k;
                cfg.beta = beta_opt ? *beta_opt : (gamma_opt ? k / *gamma_opt : 0.5);
                cfg.m0 = m0;
                if (N > 1 || w > 1) {
                    cfg.N = N;
                    cfg.w = w;
                }
                cfg.dist = dist_from_options(alpha, pmf_path);
                cfg.trials = trials;
                cfg.l_max = lmax;
                cfg.seed = seed;
            }
            cfg.threads = threads;
            std::vector<double> bgrid;
            if (!beta_grid_list.empty()) bgrid = parse_grid_list(beta_grid_list);
            if (bgrid.empty()) bgrid = {cfg.beta};
            const auto rows = braidlab::ser_sweep(cfg, bgrid);
            std::vector<std::vector<std::string>> out;
            for (const auto& r : rows)
                out.push_back({fmt(r.beta), fmt(r.ser), fmt(r.ci_lo), fmt(r.ci_hi),
                               std::to_string(r.trials), std::to_string(cfg.seed)});
            sink.write_rows({"beta", "ser", "ci_lo", "ci_hi", "trials", "seed"}, out);
        } else if (*thr) {
            double value = 0.0;
            std::string detail;
            if (mode == "beta") {
                value = braidlab::beta_bp(k, eps, tol);
                detail = "bisection beta in [0.02,4], eps=" + fmt(eps);
            } else {
                value = braidlab::eps_bp(k, resolve_gamma(k, gamma_opt, beta_opt), tol);
                detail = "bisection eps in [0,4]";
            }
            if (value > 1.0) std::cerr << "warning: threshold exceeds 1 (valid recursion, unphysical eps)\n";
            sink.write_rows({"quantity", "value", "tol", "detail"},
                            {{mode == "beta" ? "beta_bp" : "eps_bp", fmt(value), fmt(tol), detail}});
        } else if (*cthr) {
            if (!dump_state.empty()) {
                braidlab::CoupledParams p{k, resolve_gamma(k, gamma_opt, beta_opt), eps, N, w};
                const auto fp = modified ? braidlab::modified_coupled_fixed_point(p)
                                         : braidlab::coupled_fixed_point(p);
                std::vector<std::vector<std::string>> rows;
                for (std::size_t i = 0; i < fp.x.size(); ++i)
                    rows.push_back({std::to_string(i + 1), fmt(fp.x[i])});
                OutputSink dump{dump_state, "csv"};
                dump.write_rows({"position", "x"}, rows);
            }
            double value = 0.0;
            std::string name, detail;
            if (mode == "beta") {
                value = modified ? braidlab::beta_bp_modified(k, eps, N, w, tol)
                                 : braidlab::beta_bp_coupled(k, eps, N, w, tol);
                name = modified ? "beta_bp_modified" : "beta_bp_coupled";
                detail = "design-rate units; raw=" +
                         fmt(modified ? braidlab::beta_bp_modified_raw(k, eps, N, w, tol)
                                      : braidlab::beta_bp_coupled_raw(k, eps, N, w, tol)) +
                         " eps=" + fmt(eps) + " N=" + std::to_string(N) + " w=" + std::to_string(w);
            } else {
                value = modified ? braidlab::eps_bp_modified(k, resolve_gamma(k, gamma_opt, beta_opt), N, w, tol)
                                 : braidlab::eps_bp_coupled(k, resolve_gamma(k, gamma_opt, beta_opt), N, w, tol);
                name = modified ? "eps_bp_modified" : "eps_bp_coupled";
                detail = "N=" + std::to_string(N) + " w=" + std::to_string(w);
            }
            if (value > 1.0 && mode == "eps")
                std::cerr << "warning: threshold exceeds 1 (valid recursion, unphysical eps)\n";
            sink.write_rows({"quantity", "value", "tol", "detail"}, {{name, fmt(value), fmt(tol), detail}});
        } else if (*exit_cmd) {
            const double gam = resolve_gamma(k, gamma_opt, beta_opt);
            const auto grid = linspace(1.0 / grid_n, 1.0, grid_n);
            const auto pts = braidlab::ebp_exit_curve(k, gam, grid);
            std::vector<std::vector<std::string>> rows;
            for (const auto& p : pts) rows.push_back({fmt(p.x), fmt(p.eps), fmt(p.h)});
            sink.write_rows({"x", "eps", "h"}, rows);
        } else if (*cexit) {
            const double gam = resolve_gamma(k, gamma_opt, beta_opt);
            const int M = N + w - 1;
            const int i = pos > 0 ? pos : M / 2;
            const auto grid = linspace(1.0 / grid_n, 1.0, grid_n);
            const auto samples = braidlab::coupled_ebp_curve(k, gam, N, w, i, grid);
            std::vector<std::vector<std::string>> rows;
            for (const auto& s : samples)
                rows.push_back({fmt(s.t), fmt(s.eps), fmt(s.h), s.converged ? "1" : "0"});
            sink.write_rows({"x", "eps", "h", "converged"}, rows);
        } else if (*area) {
            if (beta_units) {
                const double b = braidlab::area_threshold_beta(k, eps, tol);
                sink.write_rows({"quantity", "value", "tol", "detail"},
                                {{"area_threshold_beta", fmt(b), fmt(tol), "eps=" + fmt(eps)}});
            } else {
                const double gam = resolve_gamma(k, gamma_opt, beta_opt);
                const auto at = braidlab::area_threshold(k, gam);
                if (at.eps_bar > 1.0)
                    std::cerr << "warning: threshold exceeds 1 (valid recursion, unphysical eps)\n";
                sink.write_rows({"quantity", "value", "tol", "detail"},
                                {{"eps_bar", fmt(at.eps_bar), fmt(1e-6), "x_star=" + fmt(at.x_star)},
                                 {"potential_threshold", fmt(braidlab::potential_threshold(k, gam, tol)),
                                  fmt(tol), "sup over eps grid-refined U minimization"}});
            }
        } else if (*resid) {
            const double gam = resolve_gamma(k, gamma_opt, beta_opt);
            const auto grid = linspace(1.0 / grid_n, 1.0, grid_n);
            const auto rc = braidlab::residual_ebp_curve(k, gam, eps, grid);
            std::vector<std::vector<std::string>> rows;
            rows.push_back({"-", "area", fmt(rc.area), "x_fixed=" + fmt(rc.x_fixed)});
            for (const auto& p : rc.points) rows.push_back({fmt(p.x), fmt(p.eps), fmt(p.h), ""});
            sink.write_rows({"z", "eps", "h", "detail"}, rows);
        } else if (*maxde) {
            const double gam = resolve_gamma(k, gamma_opt, beta_opt);
            const auto st = braidlab::maxwell_de(k, gam, eps, delta, tol > 1e-13 ? 1e-13 : tol);
            const double bound = braidlab::maxwell_exit_lower_bound(k, gam, eps);
            sink.write_rows({"quantity", "value", "tol", "detail"},
                            {{"x0", fmt(st.x0), fmt(1e-13), "delta=" + fmt(delta)},
                             {"xstar", fmt(st.xstar), fmt(1e-13), ""},
                             {"xg", fmt(st.xg), fmt(1e-13), ""},
                             {"exit_lower_bound", fmt(bound), fmt(1e-4), "eps=" + fmt(eps)}});
        } else if (*rate) {
            const double gam = resolve_gamma(k, gamma_opt, beta_opt);
            sink.write_rows({"quantity", "value", "tol", "detail"},
                            {{"design_rate_bits_per_flow", fmt(braidlab::design_rate(k, gam, N, w, depth)),
                              "0", "N=" + std::to_string(N) + " w=" + std::to_string(w) +
                                       " d=" + std::to_string(depth)},
                             {"beta_c", fmt(braidlab::beta_c(k, gam, N, w)), "0", ""}});
        } else if (*multi) {
            std::ifstream in(layers_path);
            if (!in) throw braidlab::param_error("cannot open " + layers_path);
            nlohmann::json j = nlohmann::json::parse(in);
            std::vector<braidlab::LayerSpec> layers;
            for (const auto& item : j)
                layers.push_back({item.at("k").get<int>(), item.at("gamma").get<double>(),
                                  item.at("d").get<int>()});
            const auto dist = dist_from_options(alpha, pmf_path);
            const auto r = braidlab::multilayer_threshold(layers, N, w, dist, tol);
            nlohmann::json out;
            out["threshold"] = r.threshold;
            out["layer_thresholds"] = r.layer_thresholds;
            out["induced_eps"] = r.induced_eps;
            out["layer1_binding"] = r.layer1_binding;
            out["tol"] = tol;
            if (sink.path.empty()) {
                std::cout << out.dump(2) << '\n';
            } else {
                std::ofstream o(sink.path);
                o << out.dump(2) << '\n';
            }
        } else if (*csphase) {
            std::vector<double> taus =
                tau_list.empty() ? std::vector<double>{0.05, 0.1, 0.2, 0.3, 0.4} : parse_grid_list(tau_list);
            const auto pts = braidlab::phase_transition(k, N, w, taus, tol);
            // optional external comparison curve, linearly interpolated
            std::vector<std::pair<double, double>> dt;
            if (!dt_path.empty()) {
                std::ifstream in(dt_path);
                if (!in) throw braidlab::param_error("cannot open " + dt_path);
                std::string line;
                while (std::getline(in, line)) {
                    std::stringstream ss(line);
                    std::string a, b;
                    if (std::getline(ss, a, ',') && std::getline(ss, b)) {
                        try {
                            dt.emplace_back(std::stod(a), std::stod(b));
                        } catch (...) {
                        }
                    }
                }
            }
            auto dt_at = [&](double tau) -> std::string {
                if (dt.size() < 2) return "";
                for (std::size_t i = 0; i + 1 < dt.size(); ++i)
                    if (dt[i].first <= tau && tau <= dt[i + 1].first) {
                        const double t = (tau - dt[i].first) / (dt[i + 1].first - dt[i].first);
                        return fmt(dt[i].second + t * (dt[i + 1].second - dt[i].second));
                    }
                return "";
            };
            const bool with_dt = dt.size() >= 2;
            std::vector<std::string> header{"tau", "beta_th", "sparse_bound", "dense_bound"};
            if (with_dt) header.push_back("dt");
            header.push_back("tol");
            std::vector<std::vector<std::string>> rows;
            for (const auto& p : pts) {
                std::vector<std::string> row{fmt(p.tau), p.ok ? fmt(p.beta_th) : "nan",
                                             fmt(braidlab::sparse_bound(p.tau)),
                                             fmt(braidlab::dense_bound(p.tau))};
                if (with_dt) row.push_back(dt_at(p.tau));
                row.push_back(fmt(tol));
                rows.push_back(std::move(row));
            }
            sink.write_rows(header, rows);
        }
        return 0;
    } catch (const braidlab::param_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
