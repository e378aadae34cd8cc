#include "helixlab/manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <fstream>
#include <stdexcept>

namespace helixlab {

using nlohmann::json;

namespace {

json reals(const std::vector<Real>& v) {
    json a = json::array();
    for (const auto& r : v) a.push_back(r.str());
    return a;
}

}  // namespace

json to_json(const HelixDescriptor& h) {
    return json{{"period", h.period},
                {"increment", h.increment.str()},
                {"modulo", h.modulo.str()},
                {"multiplier", h.multiplier},
                {"residual", h.residual.str()},
                {"fractional_cycle", reals(h.fractional_cycle)}};
}

json to_json(const SkidStats& s) {
    json eps = json::array();
    for (const auto& e : s.episodes) eps.push_back({{"start", e.start}, {"end", e.end}});
    return json{{"status", s.status == SkidStats::Status::Ok ? "ok" : "no-episodes"},
                {"episodes", eps},
                {"laminar_lengths", s.laminar_lengths},
                {"mean_laminar", s.mean_laminar},
                {"first_escape", s.first_escape},
                {"theta", s.theta},
                {"hysteresis", s.hysteresis},
                {"residual_count", s.residual_count},
                {"max_residual", s.max_residual},
                {"laminar_fraction", s.laminar_fraction}};
}

json to_json(const OrderPointFit& f) {
    json samples = json::array();
    for (auto [b, t] : f.samples) samples.push_back({{"b", b}, {"mean_laminar", t}});
    return json{{"b_star", f.b_star},
                {"amplitude", f.amplitude},
                {"exponent", f.exponent},
                {"fit_residual", f.fit_residual},
                {"samples", samples}};
}

json to_json(const DivergenceReport& r) {
    json cps = json::array();
    for (const auto& c : r.checkpoints) {
        cps.push_back({{"n", c.n},
                       {"u_a", c.u_a.str()},
                       {"u_b", c.u_b.str()},
                       {"diff", c.diff.str()}});
    }
    return json{{"a", r.a.str()},
                {"epsilon", r.epsilon.str()},
                {"checkpoints", cps},
                {"max_D", r.max_D.str()},
                {"min_D_tail", r.min_D_tail.str()},
                {"sign_changes", r.sign_changes},
                {"lambda_threshold", r.lambda_threshold.str()},
                {"growth_slope", r.growth_slope},
                {"growth_slope_stderr", r.growth_slope_stderr},
                {"N", r.N}};
}

json to_json(const CoverageReport& r) {
    return json{{"r", r.r.str()},
                {"K", r.K},
                {"first_hit", r.first_hit},
                {"visited", r.visited},
                {"coverage", r.coverage},
                {"N", r.N}};
}

json to_json(const LsysTransitivityResult& r) {
    json j{{"samples_used", r.samples_used}, {"samples_failed", r.samples_failed}};
    if (r.k) {
        j["k"] = *r.k;
        j["witness_lambda"] = r.witness_lambda.str();
    } else {
        j["k"] = nullptr;
    }
    return j;
}

json to_json(const MutualAttractionReport& r) {
    json pairs = json::array();
    for (const auto& p : r.pairs) {
        pairs.push_back({{"i", p.i},
                         {"j", p.j},
                         {"converged", p.converged},
                         {"n_epsilon", p.n_epsilon}});
    }
    return json{{"converged", r.converged}, {"pairs", pairs}};
}

json to_json(const AttractorClass& c) {
    json j{{"class", to_string(c.tag)},
           {"evidence", c.evidence},
           {"budget", c.budget}};
    if (c.tag == AttractorClass::Tag::Helix ||
        c.tag == AttractorClass::Tag::PseudoHelix) {
        j["period"] = c.period;
        j["increment"] = c.increment.str();
    }
    if (c.tag == AttractorClass::Tag::PseudoHelix) j["mean_laminar"] = c.mean_laminar;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

json to_json(const std::vector<ScanRow>& rows) {
    json arr = json::array();
    for (const auto& row : rows) {
        json j = to_json(row.cls);
        j["b"] = row.b.str();
        j["boundary_candidate"] = row.boundary_candidate;
        arr.push_back(std::move(j));
    }
    return json{{"rows", arr}};
}

void episodes_csv(const SkidStats& s, std::ostream& os) {
    os << "start,end,laminar_gap\n";
    for (size_t i = 0; i < s.episodes.size(); ++i) {
        os << s.episodes[i].start << ',' << s.episodes[i].end << ',';
        if (i + 1 < s.episodes.size()) {
            os << (s.episodes[i + 1].start - s.episodes[i].start);
        }
        os << '\n';
    }
}

void divergence_csv(const DivergenceReport& r, std::ostream& os) {
    os << "n,u_a,u_b,diff\n";
    for (const auto& c : r.checkpoints) {
        os << c.n << ',' << c.u_a.str() << ',' << c.u_b.str() << ',' << c.diff.str()
           << '\n';
    }
}

void sweep_csv(const std::vector<ScanRow>& rows, std::ostream& os) {
    os << "b,class,period,increment,mean_laminar,evidence\n";
    for (const auto& row : rows) {
        const auto& c = row.cls;
        bool periodic = c.tag == AttractorClass::Tag::Helix ||
                        c.tag == AttractorClass::Tag::PseudoHelix;
        os << row.b.str() << ',' << to_string(c.tag) << ',';
        if (periodic) os << c.period;
        os << ',';
        if (periodic) os << c.increment.str();
        os << ',';
        if (c.tag == AttractorClass::Tag::PseudoHelix) os << c.mean_laminar;
        os << ',' << c.evidence << '\n';
    }
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for digest: " + path);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        EVP_DigestUpdate(ctx, buf, static_cast<size_t>(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

std::string iso8601_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void RunManifest::add_output(const std::string& path) {
    outputs.push_back({path, sha256_file(path)});
}

json RunManifest::to_json() const {
    json outs = json::array();
    for (const auto& o : outputs) outs.push_back({{"path", o.path}, {"sha256", o.sha256}});
    return json{{"version", version},
                {"command", command},
                {"config", config},
                {"started_at", started_at},
                {"finished_at", finished_at},
                {"outputs", outs}};
}

void RunManifest::write(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write manifest: " + path);
    os << to_json().dump(2) << '\n';
}

}  // namespace helixlab
