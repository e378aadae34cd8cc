#include "helixlab/builtin.hpp"
#include "helixlab/manifest.hpp"
#include "helixlab/scan.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace helixlab;

constexpr const char* kVersion = "1.0.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

MapSpec resolve_map(const std::string& name, const std::string& file,
                    const std::string& expr) {
    int given = (!name.empty()) + (!file.empty()) + (!expr.empty());
    if (given != 1) {
        throw UsageError("give exactly one of --map, --map-file, --expr");
    }
    if (!file.empty()) {
        std::string stem = file;
        if (auto p = stem.find_last_of('/'); p != std::string::npos) {
            stem = stem.substr(p + 1);
        }
        if (auto p = stem.find_last_of('.'); p != std::string::npos) {
            stem = stem.substr(0, p);
        }
        return parse_map(read_file(file), stem);
    }
    if (!expr.empty()) return parse_map(expr, "expr");
    return builtin_map(name);
}

Params parse_params(const std::vector<std::string>& kvs, int prec) {
    Params out;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw UsageError("--param expects name=value, got '" + kv + "'");
        }
        out.insert_or_assign(kv.substr(0, eq),
                             Real::parse(kv.substr(eq + 1), prec));
    }
    return out;
}

// "tail:K[,stride:S][,range:A-B]..."; empty string keeps the default policy.
WindowPolicy parse_window(const std::string& text) {
    WindowPolicy w;
    if (text.empty()) return w;
    w = WindowPolicy{0, 0, {}};
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto colon = part.find(':');
        if (colon == std::string::npos) {
            throw UsageError("bad --window element '" + part + "'");
        }
        std::string key = part.substr(0, colon), val = part.substr(colon + 1);
        if (key == "tail") {
            w.tail = std::stoull(val);
        } else if (key == "stride") {
            w.stride = std::stoull(val);
        } else if (key == "range") {
            auto dash = val.find('-');
            if (dash == std::string::npos) {
                throw UsageError("bad --window range '" + val + "'");
            }
            w.ranges.emplace_back(std::stoull(val.substr(0, dash)),
                                  std::stoull(val.substr(dash + 1)));
        } else {
            throw UsageError("bad --window key '" + key + "'");
        }
    }
    return w;
}

struct ManifestScope {
    RunManifest m;
    std::string prefix;

    ManifestScope(const std::string& cmd, const std::string& prefix)
        : prefix(prefix) {
        m.version = kVersion;
        m.command = cmd;
        m.started_at = iso8601_now();
    }
    void cfg(const std::string& k, const std::string& v) { m.config[k] = v; }
    void write_text(const std::string& suffix, const std::string& body) {
        std::string path = prefix + suffix;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + path);
        os << body;
        os.close();
        m.add_output(path);
    }
    void write_json(const nlohmann::json& j) { write_text(".json", j.dump(2) + "\n"); }
    void finish() {
        m.finished_at = iso8601_now();
        m.write(prefix + ".manifest.json");
    }
};

// shared flags

struct MapArgs {
    std::string map, map_file, expr;
    std::vector<std::string> params;
    void attach(CLI::App* app) {
        app->add_option("--map", map, "builtin map name (see --list-maps)");
        app->add_option("--map-file", map_file, "file with a map expression");
        app->add_option("--expr", expr, "inline map expression");
        app->add_option("--param", params, "map parameter, name=value (repeatable)");
    }
};

std::string traj_csv(const Trajectory& t) {
    std::ostringstream os;
    t.write_csv(os);
    return os.str();
}

int run(int argc, char** argv) {
    CLI::App app{"workbench for iterated unbounded maps and L-system-driven "
                 "function composition"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; flags override");
    app.set_version_flag("--version", kVersion);

    // ---- iterate
    auto* c_iter = app.add_subcommand("iterate", "iterate u(n+1) = f(u(n))");
    MapArgs it_map;
    it_map.attach(c_iter);
    std::string it_a, it_window, it_out = "iterate";
    std::uint64_t it_n = 1000;
    int it_digits = 40;
    c_iter->add_option("--a", it_a, "initial value u(1)")->required();
    c_iter->add_option("--n", it_n, "number of terms");
    c_iter->add_option("--digits", it_digits, "display precision D");
    c_iter->add_option("--window", it_window, "retention, e.g. tail:30 or tail:4096,stride:10000");
    c_iter->add_option("--out", it_out, "output file prefix");
    c_iter->callback([&] {
        MapSpec spec = resolve_map(it_map.map, it_map.map_file, it_map.expr);
        Params params = parse_params(it_map.params, it_digits + kGuardDigits);
        Trajectory t = iterate(spec, Real::parse(it_a, it_digits + kGuardDigits),
                               params, it_n, it_digits, parse_window(it_window));
        ManifestScope ms("iterate", it_out);
        ms.cfg("map", pretty_print(spec));
        for (const auto& [k, v] : params) ms.cfg("param." + k, v.str());
        ms.cfg("a", it_a);
        ms.cfg("n", std::to_string(it_n));
        ms.cfg("digits", std::to_string(it_digits));
        ms.cfg("window", it_window);
        if (t.failure) {
            ms.cfg("failure", "term " + std::to_string(t.failure->index) + ": " +
                                  t.failure->message);
        }
        ms.write_text(".csv", traj_csv(t));
        ms.finish();
        std::cout << "computed " << t.length << " terms; u(" << t.length
                  << ") = " << t.final_value.with_precision(it_digits).str()
                  << "\n";
        if (t.failure) {
            std::cout << "evaluation stopped at term " << t.failure->index << ": "
                      << t.failure->message << "\n";
        }
    });

    // ---- liter
    auto* c_lit = app.add_subcommand("liter", "L-system-driven iteration U(n) = f_L(n)(U(n-1))");
    std::string li_fam, li_a, li_window, li_out = "liter";
    std::uint64_t li_n = 1000;
    int li_digits = 40;
    c_lit->add_option("--lfam", li_fam, "builtin L-family name")->required();
    c_lit->add_option("--a", li_a, "initial value U(0)")->required();
    c_lit->add_option("--n", li_n, "last index N");
    c_lit->add_option("--digits", li_digits, "display precision D");
    c_lit->add_option("--window", li_window, "retention policy");
    c_lit->add_option("--out", li_out, "output file prefix");
    c_lit->callback([&] {
        BuiltinLFamily fam = builtin_lfamily(li_fam);
        Trajectory t = literate(fam.system, fam.bindings,
                                Real::parse(li_a, li_digits + kGuardDigits), li_n,
                                li_digits, parse_window(li_window));
        ManifestScope ms("liter", li_out);
        ms.cfg("lfam", li_fam);
        ms.cfg("a", li_a);
        ms.cfg("n", std::to_string(li_n));
        ms.cfg("digits", std::to_string(li_digits));
        ms.cfg("window", li_window);
        ms.write_text(".csv", traj_csv(t));
        ms.finish();
        std::cout << "computed U(0..)" << " through " << t.length
                  << "; final = " << t.final_value.with_precision(li_digits).str()
                  << "\n";
    });

    // ---- verify-helix
    auto* c_ver = app.add_subcommand("verify-helix", "check the helix property on a sequence");
    std::string vh_seq, vh_modulo = "0", vh_out = "verify-helix";
    std::uint64_t vh_period = 0;
    int vh_digits = 20;
    c_ver->add_option("--seq", vh_seq, "comma-separated terms")->required();
    c_ver->add_option("--period", vh_period, "period j")->required();
    c_ver->add_option("--modulo", vh_modulo, "modulo r (0 = exact periodicity)");
    c_ver->add_option("--digits", vh_digits, "working precision");
    c_ver->add_option("--out", vh_out, "output file prefix");
    c_ver->callback([&] {
        std::vector<Real> seq;
        std::stringstream ss(vh_seq);
        std::string item;
        while (std::getline(ss, item, ',')) seq.push_back(Real::parse(item, vh_digits));
        bool ok = verify_helix(seq, vh_period, Real::parse(vh_modulo, vh_digits));
        ManifestScope ms("verify-helix", vh_out);
        ms.cfg("seq", vh_seq);
        ms.cfg("period", std::to_string(vh_period));
        ms.cfg("modulo", vh_modulo);
        ms.cfg("digits", std::to_string(vh_digits));
        ms.write_json({{"holds", ok},
                       {"period", vh_period},
                       {"modulo", Real::parse(vh_modulo, vh_digits).str()}});
        ms.finish();
        std::cout << (ok ? "true" : "false") << "\n";
    });

    // ---- detect
    auto* c_det = app.add_subcommand("detect", "detect a stable helix in a trajectory tail");
    MapArgs de_map;
    de_map.attach(c_det);
    std::string de_a, de_tol = "1e-9", de_out = "detect";
    std::uint64_t de_n = 200000, de_jmax = 64, de_transient = 10000;
    int de_digits = 40;
    c_det->add_option("--a", de_a, "initial value")->required();
    c_det->add_option("--n", de_n, "number of terms");
    c_det->add_option("--digits", de_digits, "display precision D");
    c_det->add_option("--j-max", de_jmax, "largest period tried");
    c_det->add_option("--tol", de_tol, "increment tolerance");
    c_det->add_option("--transient", de_transient, "indices to skip");
    c_det->add_option("--out", de_out, "output file prefix");
    c_det->callback([&] {
        MapSpec spec = resolve_map(de_map.map, de_map.map_file, de_map.expr);
        Params params = parse_params(de_map.params, de_digits + kGuardDigits);
        Trajectory t = iterate(spec, Real::parse(de_a, de_digits + kGuardDigits),
                               params, de_n, de_digits,
                               WindowPolicy::tail_only(std::max<std::uint64_t>(
                                   4096, 2 * de_jmax + 2)));
        auto h = detect_stable_helix(t, de_jmax, Real::parse(de_tol, de_digits),
                                     de_transient);
        ManifestScope ms("detect", de_out);
        ms.cfg("map", pretty_print(spec));
        for (const auto& [k, v] : params) ms.cfg("param." + k, v.str());
        ms.cfg("a", de_a);
        ms.cfg("n", std::to_string(de_n));
        ms.cfg("digits", std::to_string(de_digits));
        ms.cfg("j_max", std::to_string(de_jmax));
        ms.cfg("tol", de_tol);
        ms.cfg("transient", std::to_string(de_transient));
        nlohmann::json j;
        if (h) {
            j = to_json(*h);
            j["detected"] = true;
        } else {
            j = {{"detected", false}};
        }
        ms.write_json(j);
        ms.finish();
        if (h) {
            std::cout << "helix: period " << h->period << ", increment "
                      << h->increment.str() << "\n";
        } else {
            std::cout << "no stable helix up to j_max=" << de_jmax << "\n";
        }
    });

    // ---- skids
    auto* c_skid = app.add_subcommand("skids", "skid episode statistics of a pseudo-helix");
    MapArgs sk_map;
    sk_map.attach(c_skid);
    std::string sk_a, sk_c = "2", sk_out = "skids";
    std::uint64_t sk_n = 100000, sk_j = 2;
    int sk_digits = 40, sk_h = 3;
    double sk_theta = 0.02;
    c_skid->add_option("--a", sk_a, "initial value")->required();
    c_skid->add_option("--n", sk_n, "number of terms");
    c_skid->add_option("--digits", sk_digits, "display precision D");
    c_skid->add_option("--period", sk_j, "reference period j");
    c_skid->add_option("--increment", sk_c, "reference increment c");
    c_skid->add_option("--theta", sk_theta, "skid threshold");
    c_skid->add_option("--hysteresis", sk_h, "consecutive-sample hysteresis");
    c_skid->add_option("--out", sk_out, "output file prefix");
    c_skid->callback([&] {
        MapSpec spec = resolve_map(sk_map.map, sk_map.map_file, sk_map.expr);
        Params params = parse_params(sk_map.params, sk_digits + kGuardDigits);
        SkidStats st = skid_scan(spec, Real::parse(sk_a, sk_digits + kGuardDigits),
                                 params, sk_n, sk_digits, sk_j,
                                 Real::parse(sk_c, sk_digits + kGuardDigits),
                                 sk_theta, sk_h);
        ManifestScope ms("skids", sk_out);
        ms.cfg("map", pretty_print(spec));
        for (const auto& [k, v] : params) ms.cfg("param." + k, v.str());
        ms.cfg("a", sk_a);
        ms.cfg("n", std::to_string(sk_n));
        ms.cfg("digits", std::to_string(sk_digits));
        ms.cfg("period", std::to_string(sk_j));
        ms.cfg("increment", sk_c);
        ms.cfg("theta", std::to_string(sk_theta));
        ms.cfg("hysteresis", std::to_string(sk_h));
        ms.write_json(to_json(st));
        std::ostringstream csv;
        episodes_csv(st, csv);
        ms.write_text(".episodes.csv", csv.str());
        ms.finish();
        std::cout << "episodes: " << st.episodes.size()
                  << ", mean_laminar: " << st.mean_laminar
                  << ", first_escape: " << st.first_escape << "\n";
    });

    // ---- orderpoint
    auto* c_op = app.add_subcommand("orderpoint", "fit the order point from laminar-length scaling");
    MapArgs op_map;
    op_map.attach(c_op);
    std::string op_a, op_bsamples, op_bparam = "b", op_c = "2", op_out = "orderpoint";
    std::uint64_t op_n = 100000, op_j = 2;
    int op_digits = 40, op_h = 3, op_minep = 10;
    double op_theta = 0.02;
    c_op->add_option("--a", op_a, "initial value")->required();
    c_op->add_option("--b-samples", op_bsamples, "comma-separated b values")->required();
    c_op->add_option("--b-param", op_bparam, "swept parameter name");
    c_op->add_option("--n", op_n, "terms per sample");
    c_op->add_option("--digits", op_digits, "display precision D");
    c_op->add_option("--period", op_j, "reference period j");
    c_op->add_option("--increment", op_c, "reference increment c");
    c_op->add_option("--theta", op_theta, "skid threshold");
    c_op->add_option("--hysteresis", op_h, "hysteresis");
    c_op->add_option("--min-episodes", op_minep, "episodes required per sample");
    c_op->add_option("--out", op_out, "output file prefix");
    c_op->callback([&] {
        MapSpec spec = resolve_map(op_map.map, op_map.map_file, op_map.expr);
        std::vector<Real> bs;
        std::stringstream ss(op_bsamples);
        std::string item;
        while (std::getline(ss, item, ',')) {
            bs.push_back(Real::parse(item, op_digits + kGuardDigits));
        }
        OrderPointFit fit = order_point_fit(
            spec, bs, op_bparam, Real::parse(op_a, op_digits + kGuardDigits), op_n,
            op_digits, op_j, Real::parse(op_c, op_digits + kGuardDigits), op_theta,
            op_h, op_minep);
        ManifestScope ms("orderpoint", op_out);
        ms.cfg("map", pretty_print(spec));
        ms.cfg("a", op_a);
        ms.cfg("b_samples", op_bsamples);
        ms.cfg("b_param", op_bparam);
        ms.cfg("n", std::to_string(op_n));
        ms.cfg("digits", std::to_string(op_digits));
        ms.cfg("period", std::to_string(op_j));
        ms.cfg("increment", op_c);
        ms.cfg("theta", std::to_string(op_theta));
        ms.cfg("hysteresis", std::to_string(op_h));
        ms.cfg("min_episodes", std::to_string(op_minep));
        ms.write_json(to_json(fit));
        ms.finish();
        std::cout.precision(10);
        std::cout << "b_star = " << fit.b_star << ", amplitude = " << fit.amplitude
                  << ", exponent = " << fit.exponent << "\n";
    });

    // ---- diverge
    auto* c_div = app.add_subcommand("diverge", "two-trajectory divergence probe");
    MapArgs dv_map;
    dv_map.attach(c_div);
    std::string dv_a, dv_eps, dv_out = "diverge";
    std::uint64_t dv_n = 100000, dv_stride = 10000;
    int dv_digits = 40;
    c_div->add_option("--a", dv_a, "initial value")->required();
    c_div->add_option("--epsilon", dv_eps, "perturbation")->required();
    c_div->add_option("--n", dv_n, "number of terms");
    c_div->add_option("--stride", dv_stride, "checkpoint stride");
    c_div->add_option("--digits", dv_digits, "display precision D");
    c_div->add_option("--out", dv_out, "output file prefix");
    c_div->callback([&] {
        MapSpec spec = resolve_map(dv_map.map, dv_map.map_file, dv_map.expr);
        Params params = parse_params(dv_map.params, dv_digits + kGuardDigits);
        DivergenceReport r = divergence_probe(
            spec, Real::parse(dv_a, dv_digits + kGuardDigits),
            Real::parse(dv_eps, dv_digits + kGuardDigits), params, dv_n, dv_stride,
            dv_digits);
        ManifestScope ms("diverge", dv_out);
        ms.cfg("map", pretty_print(spec));
        for (const auto& [k, v] : params) ms.cfg("param." + k, v.str());
        ms.cfg("a", dv_a);
        ms.cfg("epsilon", dv_eps);
        ms.cfg("n", std::to_string(dv_n));
        ms.cfg("stride", std::to_string(dv_stride));
        ms.cfg("digits", std::to_string(dv_digits));
        ms.write_json(to_json(r));
        std::ostringstream csv;
        divergence_csv(r, csv);
        ms.write_text(".checkpoints.csv", csv.str());
        ms.finish();
        std::cout << "max_D = " << r.max_D.str()
                  << ", sign_changes = " << r.sign_changes << "\n";
    });

    // ---- transitivity
    auto* c_tr = app.add_subcommand("transitivity", "bin coverage of frac(u/r)");
    MapArgs tr_map;
    tr_map.attach(c_tr);
    std::string tr_a, tr_r = "1", tr_out = "transitivity";
    std::uint64_t tr_n = 1000000, tr_k = 100;
    int tr_digits = 40;
    c_tr->add_option("--a", tr_a, "initial value")->required();
    c_tr->add_option("--n", tr_n, "number of terms");
    c_tr->add_option("--r", tr_r, "modulo r");
    c_tr->add_option("--bins", tr_k, "bin count K");
    c_tr->add_option("--digits", tr_digits, "display precision D");
    c_tr->add_option("--out", tr_out, "output file prefix");
    c_tr->callback([&] {
        MapSpec spec = resolve_map(tr_map.map, tr_map.map_file, tr_map.expr);
        Params params = parse_params(tr_map.params, tr_digits + kGuardDigits);
        CoverageReport r = transitivity_mod_r(
            spec, Real::parse(tr_a, tr_digits + kGuardDigits), params, tr_n,
            tr_digits, Real::parse(tr_r, tr_digits + kGuardDigits), tr_k);
        ManifestScope ms("transitivity", tr_out);
        ms.cfg("map", pretty_print(spec));
        for (const auto& [k, v] : params) ms.cfg("param." + k, v.str());
        ms.cfg("a", tr_a);
        ms.cfg("n", std::to_string(tr_n));
        ms.cfg("r", tr_r);
        ms.cfg("bins", std::to_string(tr_k));
        ms.cfg("digits", std::to_string(tr_digits));
        ms.write_json(to_json(r));
        ms.finish();
        std::cout << "coverage = " << r.coverage << " (" << r.visited << "/" << r.K
                  << " bins)\n";
    });

    // ---- lsys-transitivity
    auto* c_lt = app.add_subcommand("lsys-transitivity",
                                    "interval-to-interval reachability under L-iteration");
    std::string lt_fam, lt_ulo, lt_uhi, lt_vlo, lt_vhi, lt_out = "lsys-transitivity";
    std::uint64_t lt_kmax = 1000, lt_samples = 1000;
    int lt_digits = 30;
    c_lt->add_option("--lfam", lt_fam, "builtin L-family name")->required();
    c_lt->add_option("--u-lo", lt_ulo, "source interval lower end")->required();
    c_lt->add_option("--u-hi", lt_uhi, "source interval upper end")->required();
    c_lt->add_option("--v-lo", lt_vlo, "target interval lower end")->required();
    c_lt->add_option("--v-hi", lt_vhi, "target interval upper end")->required();
    c_lt->add_option("--k-max", lt_kmax, "largest k tried");
    c_lt->add_option("--samples", lt_samples, "grid samples over U");
    c_lt->add_option("--digits", lt_digits, "working precision");
    c_lt->add_option("--out", lt_out, "output file prefix");
    c_lt->callback([&] {
        BuiltinLFamily fam = builtin_lfamily(lt_fam);
        LsysTransitivityResult r = lsys_transitivity_probe(
            fam.system, fam.bindings, Real::parse(lt_ulo, lt_digits),
            Real::parse(lt_uhi, lt_digits), Real::parse(lt_vlo, lt_digits),
            Real::parse(lt_vhi, lt_digits), lt_kmax, lt_samples, lt_digits);
        ManifestScope ms("lsys-transitivity", lt_out);
        ms.cfg("lfam", lt_fam);
        ms.cfg("u", lt_ulo + ".." + lt_uhi);
        ms.cfg("v", lt_vlo + ".." + lt_vhi);
        ms.cfg("k_max", std::to_string(lt_kmax));
        ms.cfg("samples", std::to_string(lt_samples));
        ms.cfg("digits", std::to_string(lt_digits));
        ms.write_json(to_json(r));
        ms.finish();
        if (r.k) {
            std::cout << "hit at k = " << *r.k << " from lambda = "
                      << r.witness_lambda.str() << "\n";
        } else {
            std::cout << "no hit up to k_max = " << lt_kmax << "\n";
        }
    });

    // ---- attract
    auto* c_at = app.add_subcommand("attract", "pairwise mutual attraction of L-iterations");
    std::string at_fam, at_tol = "1e-9", at_out = "attract";
    std::vector<std::string> at_as;
    std::uint64_t at_n = 1000;
    int at_digits = 30;
    c_at->add_option("--lfam", at_fam, "builtin L-family name")->required();
    c_at->add_option("--a", at_as, "initial value (repeat 2+ times)")->required();
    c_at->add_option("--n", at_n, "last index N");
    c_at->add_option("--tol", at_tol, "convergence tolerance");
    c_at->add_option("--digits", at_digits, "working precision");
    c_at->add_option("--out", at_out, "output file prefix");
    c_at->callback([&] {
        BuiltinLFamily fam = builtin_lfamily(at_fam);
        std::vector<Real> as;
        for (const auto& s : at_as) as.push_back(Real::parse(s, at_digits));
        MutualAttractionReport r = mutual_attraction_check(
            fam.system, fam.bindings, as, at_n, Real::parse(at_tol, at_digits),
            at_digits);
        ManifestScope ms("attract", at_out);
        ms.cfg("lfam", at_fam);
        for (size_t i = 0; i < at_as.size(); ++i) {
            ms.cfg("a." + std::to_string(i), at_as[i]);
        }
        ms.cfg("n", std::to_string(at_n));
        ms.cfg("tol", at_tol);
        ms.cfg("digits", std::to_string(at_digits));
        ms.write_json(to_json(r));
        ms.finish();
        std::cout << (r.converged ? "converged" : "not converged") << "\n";
    });

    // ---- sweep
    auto* c_sw = app.add_subcommand("sweep", "classify the attractor across a b range");
    MapArgs sw_map;
    sw_map.attach(c_sw);
    std::string sw_from, sw_to, sw_step, sw_bparam = "b", sw_tol = "1e-9",
                sw_out = "sweep";
    std::vector<std::string> sw_as;
    std::uint64_t sw_n = 200000, sw_nesc = 1000000, sw_jmax = 64,
                  sw_transient = 10000, sw_bins = 100;
    unsigned sw_jobs = 0;
    int sw_digits = 40, sw_h = 3;
    double sw_theta = 0.02, sw_mincov = 0.9;
    c_sw->add_option("--from", sw_from, "first b")->required();
    c_sw->add_option("--to", sw_to, "end of range (exclusive)")->required();
    c_sw->add_option("--step", sw_step, "b increment")->required();
    c_sw->add_option("--b-param", sw_bparam, "swept parameter name");
    c_sw->add_option("--a", sw_as, "initial values for agreement (repeatable)");
    c_sw->add_option("--n", sw_n, "iteration budget per trajectory");
    c_sw->add_option("--n-escalated", sw_nesc, "escalated budget");
    c_sw->add_option("--digits", sw_digits, "display precision D");
    c_sw->add_option("--j-max", sw_jmax, "largest period tried");
    c_sw->add_option("--tol", sw_tol, "helix increment tolerance");
    c_sw->add_option("--transient", sw_transient, "indices to skip");
    c_sw->add_option("--theta", sw_theta, "skid threshold");
    c_sw->add_option("--hysteresis", sw_h, "skid hysteresis");
    c_sw->add_option("--bins", sw_bins, "coverage bins");
    c_sw->add_option("--min-coverage", sw_mincov, "chaotic coverage floor");
    c_sw->add_option("--jobs", sw_jobs, "parallel rows (0 = processors)");
    c_sw->add_option("--out", sw_out, "output file prefix");
    c_sw->callback([&] {
        MapSpec spec = resolve_map(sw_map.map, sw_map.map_file, sw_map.expr);
        ClassifyConfig cfg;
        cfg.N = sw_n;
        cfg.N_escalated = sw_nesc;
        cfg.digits = sw_digits;
        cfg.j_max = sw_jmax;
        cfg.tol = Real::parse(sw_tol, sw_digits);
        cfg.transient = sw_transient;
        cfg.theta = sw_theta;
        cfg.hysteresis = sw_h;
        cfg.coverage_bins = sw_bins;
        cfg.min_coverage = sw_mincov;
        cfg.b_param = sw_bparam;
        if (!sw_as.empty()) {
            cfg.a_set.clear();
            for (const auto& s : sw_as) {
                cfg.a_set.push_back(Real::parse(s, sw_digits));
            }
        }
        auto rows = sweep(spec, Real::parse(sw_from, sw_digits + kGuardDigits),
                          Real::parse(sw_to, sw_digits + kGuardDigits),
                          Real::parse(sw_step, sw_digits + kGuardDigits), cfg,
                          sw_jobs);
        ManifestScope ms("sweep", sw_out);
        ms.cfg("map", pretty_print(spec));
        ms.cfg("from", sw_from);
        ms.cfg("to", sw_to);
        ms.cfg("step", sw_step);
        ms.cfg("b_param", sw_bparam);
        ms.cfg("n", std::to_string(sw_n));
        ms.cfg("n_escalated", std::to_string(sw_nesc));
        ms.cfg("digits", std::to_string(sw_digits));
        ms.cfg("j_max", std::to_string(sw_jmax));
        ms.cfg("tol", sw_tol);
        ms.cfg("transient", std::to_string(sw_transient));
        ms.cfg("theta", std::to_string(sw_theta));
        ms.cfg("hysteresis", std::to_string(sw_h));
        ms.cfg("bins", std::to_string(sw_bins));
        ms.cfg("min_coverage", std::to_string(sw_mincov));
        std::ostringstream csv;
        sweep_csv(rows, csv);
        ms.write_text(".csv", csv.str());
        ms.write_json(to_json(rows));
        ms.finish();
        for (const auto& r : rows) {
            std::cout << r.b.str() << " -> " << to_string(r.cls.tag);
            if (r.cls.tag == AttractorClass::Tag::Helix ||
                r.cls.tag == AttractorClass::Tag::PseudoHelix) {
                std::cout << "(" << r.cls.period << ")";
            }
            std::cout << (r.boundary_candidate ? "  [boundary]" : "") << "\n";
        }
    });

    // ---- list helpers
    auto* c_list = app.add_subcommand("list", "list builtin maps and L-families");
    c_list->callback([&] {
        std::cout << "maps:";
        for (const auto& n : builtin_map_names()) std::cout << " " << n;
        std::cout << "\nL-families:";
        for (const auto& n : builtin_lfamily_names()) std::cout << " " << n;
        std::cout << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints help/error text
        return code == 0 ? 0 : 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const UnknownBuiltin& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const CLI::Error& e) {
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
