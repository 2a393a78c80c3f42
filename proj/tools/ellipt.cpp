// Command-line front end: decision verbs, completions, reductions and
// verification over a single JSON instance schema. Exit codes: 0 member or
// agree, 1 non-member or disagree, 2 ambiguous, 64 usage, 65 bad input.
#include "CLI11.hpp"

#include "ellipt/completion.hpp"
#include "ellipt/errors.hpp"
#include "ellipt/instance_io.hpp"
#include "ellipt/metric.hpp"
#include "ellipt/reductions.hpp"
#include "ellipt/rotation.hpp"
#include "ellipt/signing.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace ellipt;

struct Options {
    std::string file = "-";
    std::string kind;
    double tol = 1e-9;
    std::uint64_t max_branch = std::uint64_t(1) << 22;
    std::uint64_t budget = std::uint64_t(1) << 26;
    int jobs = 1;
    std::uint64_t seed = 1;
    bool timing = false;
    bool all_circuits = false;
    bool want_exact = false;
    bool want_float = false;
};

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("input", o.file, "instance JSON file, or '-' for standard input");
    cmd->add_option("--tol", o.tol, "numeric tolerance (default 1e-9)");
    auto* ex = cmd->add_flag("--exact", o.want_exact, "require exact input data");
    cmd->add_flag("--float", o.want_float, "coerce input data to float mode")->excludes(ex);
    cmd->add_option("--max-branch", o.max_branch, "sign-search node limit");
    cmd->add_option("--budget", o.budget, "coloring / oracle state limit");
    cmd->add_option("--jobs", o.jobs, "worker threads for sweep verification");
    cmd->add_option("--seed", o.seed, "seed for randomized corpora in verify");
    cmd->add_flag("--timing", o.timing, "include timing in the report");
    cmd->add_flag("--all-circuits", o.all_circuits,
                  "cross-check every simple circuit, not just a basis");
}

std::string read_input(const std::string& file) {
    if (file == "-")
        return std::string(std::istreambuf_iterator<char>(std::cin),
                           std::istreambuf_iterator<char>());
    std::ifstream in(file, std::ios::binary);
    if (!in) throw parse_error("cannot open '" + file + "'");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

json parse_doc(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw parse_error(std::string("bad JSON: ") + e.what());
    }
    if (!doc.is_object()) throw parse_error("instance must be a JSON object");
    if (doc.contains("schema") && doc["schema"] != "1")
        throw parse_error("unsupported schema version");
    return doc;
}

std::string edge_key(const Graph& g, int e) {
    const auto [u, v] = g.edge(e);
    return std::to_string(u) + "," + std::to_string(v);
}

const json& need_field(const json& doc, const char* field) {
    if (!doc.contains(field)) throw parse_error(std::string("missing field '") + field + "'");
    return doc.at(field);
}

struct Report {
    ojson j;
    std::chrono::steady_clock::time_point start;

    Report(const std::string& verb, const std::string& input_bytes, const std::string& mode)
        : start(std::chrono::steady_clock::now()) {
        j["schema"] = "1";
        j["verb"] = verb;
        j["digest"] = digest_hex(input_bytes);
        j["mode"] = mode;
    }

    int finish(const std::string& verdict, int code, const Options& o) {
        j["verdict"] = verdict;
        if (o.timing) {
            const auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();
            j["timing_ms"] = format_double(static_cast<double>(us) / 1000.0);
        }
        std::cout << j.dump(2) << "\n";
        return code;
    }
};

ojson violation_to_json(const Graph& g, const MetViolation& mv) {
    ojson v;
    v["violation"] = format_double(mv.violation);
    auto nodes = ojson::array();
    for (int u : mv.circuit.nodes) nodes.push_back(u);
    v["circuit"] = nodes;
    auto f = ojson::array();
    for (int e : mv.odd_set) f.push_back(edge_key(g, e));
    v["odd_set"] = f;
    return v;
}

int finish_met(Report& rep, const Graph& g, const MetReport& mr, const Options& o) {
    if (mr.worst) rep.j["binding"] = violation_to_json(g, *mr.worst);
    if (mr.ambiguous) return rep.finish("AMBIGUOUS", 2, o);
    if (mr.member) return rep.finish("MEMBER", 0, o);
    return rep.finish("NON_MEMBER", 1, o);
}

EdgeAngles coerce_angles(EdgeAngles d, const Options& o) {
    if (o.want_float) {
        std::vector<double> vals;
        switch (d.mode) {
            case EdgeAngles::Mode::ExactLength:
                for (const auto& l : d.lengths) vals.push_back(to_double(l));
                return EdgeAngles::from_floats(std::move(vals));
            case EdgeAngles::Mode::ExactRotation:
                for (const auto& r : d.rotations) vals.push_back(rotation_angle(r));
                return EdgeAngles::from_floats(std::move(vals));
            case EdgeAngles::Mode::Float: return d;
        }
    }
    if (o.want_exact && d.mode == EdgeAngles::Mode::Float)
        throw usage_error("--exact given but the input carries float data");
    return d;
}

SigningConfig signing_config(const Options& o) {
    SigningConfig cfg;
    cfg.tol = o.tol;
    cfg.max_branch = o.max_branch;
    cfg.check_all_circuits = o.all_circuits;
    return cfg;
}

ojson eps_to_json(const Graph& g, const SignVector& eps) {
    ojson m;
    for (int e = 0; e < g.edge_count(); ++e) m[edge_key(g, e)] = eps.sign[e];
    return m;
}

// --- verb handlers ---------------------------------------------------------

int run_check_met(const std::string& bytes, const Options& o) {
    const json doc = parse_doc(bytes);
    const Graph g = graph_from_json(doc);
    const PartialVector x = partial_from_doc(g, doc);
    if (x.mode != PartialVector::Mode::Cosine) throw parse_error("check-met wants cosine mode");
    MetConfig cfg;
    cfg.circuits = o.all_circuits ? CircuitMode::AllUpToLen : CircuitMode::ChordlessOnly;
    cfg.tol = o.tol;
    const MetReport mr = check_met(g, angles_from_cosines(g, x), cfg);
    Report rep("check-met", bytes, "FLOAT");
    return finish_met(rep, g, mr, o);
}

int run_check_elliptope(const std::string& bytes, const Options& o) {
    const json doc = parse_doc(bytes);
    const Graph g = graph_from_json(doc);
    const PartialVector x = partial_from_doc(g, doc);
    const MetReport mr = check_elliptope_k4free(g, x, o.tol);
    Report rep("check-elliptope", bytes, "FLOAT");
    return finish_met(rep, g, mr, o);
}

int run_check_circuit(const std::string& bytes, const Options& o) {
    const json doc = parse_doc(bytes);
    const int n = doc.contains("n") ? doc.at("n").get<int>()
                                    : static_cast<int>(doc.at("a").size());
    if (n < 3) throw parse_error("circuit needs n >= 3");
    const Graph g = cycle_graph(n);
    MetReport mr;
    if (doc.contains("a")) {
        AngleVector a;
        for (const json& s : doc.at("a")) {
            if (!s.is_string()) throw parse_error("'a' entries must be strings");
            a.a.push_back(to_double(rational_from_text(s.get<std::string>())));
        }
        mr = check_circuit_angles(n, a, o.tol);
    } else {
        mr = check_circuit_elliptope(n, partial_from_doc(g, doc), o.tol);
    }
    Report rep("check-circuit", bytes, "FLOAT");
    return finish_met(rep, g, mr, o);
}

int run_check_e1(const std::string& bytes, const Options& o) {
    const json doc = parse_doc(bytes);
    const Graph g = graph_from_json(doc);
    const E1Report er = check_e1(g, partial_from_doc(g, doc));
    Report rep("check-e1", bytes, "EXACT");
    if (!er.member) return rep.finish("NON_MEMBER", 1, o);
    auto u = ojson::array();
    for (int s : er.node_signs) u.push_back(s);
    rep.j["witness"] = ojson{{"u", u}};
    return rep.finish("MEMBER", 0, o);
}

int run_check_ed1(const std::string& bytes, const Options& o) {
    const json doc = parse_doc(bytes);
    const Graph g = graph_from_json(doc);
    const EdgeAngles d = coerce_angles(angles_from_json(g, need_field(doc, "d")), o);
    if (d.mode == EdgeAngles::Mode::ExactRotation)
        throw usage_error("check-ed1 wants lengths; pass --float to use rotation angles");
    const Ed1Result r = decide_ed1(g, d, signing_config(o));
    Report rep("check-ed1", bytes, d.mode == EdgeAngles::Mode::ExactLength ? "EXACT" : "FLOAT");
    rep.j["branches"] = std::to_string(r.branches);
    if (!r.accepted) return rep.finish("NON_MEMBER", 1, o);
    ojson w;
    w["eps"] = eps_to_json(g, r.eps);
    auto f = ojson::array();
    if (r.witness.exact)
        for (const auto& v : r.witness.exact_f) f.push_back(format_rational(v));
    else
        for (double v : r.witness.f) f.push_back(format_double(v));
    w["f"] = f;
    w["f_mode"] = r.witness.exact ? "exact" : "float";
    rep.j["witness"] = w;
    return rep.finish("MEMBER", 0, o);
}

int run_check_gd2(const std::string& bytes, const Options& o) {
    const json doc = parse_doc(bytes);
    const Graph g = graph_from_json(doc);
    const EdgeAngles d = coerce_angles(angles_from_json(g, need_field(doc, "d")), o);
    const Gd2Result r = decide_gd2(g, d, signing_config(o));
    Report rep("check-gd2", bytes, d.mode == EdgeAngles::Mode::ExactRotation ? "EXACT" : "FLOAT");
    rep.j["branches"] = std::to_string(r.branches);
    if (!r.accepted) {
        if (r.ambiguous) return rep.finish("AMBIGUOUS", 2, o);
        return rep.finish("NON_MEMBER", 1, o);
    }
    ojson w;
    w["eps"] = eps_to_json(g, r.eps);
    if (r.witness.exact) {
        auto arr = ojson::array();
        for (const auto& rot : r.witness.exact_g)
            arr.push_back({format_rational(rot.c), format_rational(rot.s)});
        w["g"] = arr;
    }
    auto th = ojson::array();
    for (double t : r.witness.theta) th.push_back(format_double(t));
    w["theta"] = th;
    rep.j["witness"] = w;
    return rep.finish("MEMBER", 0, o);
}

int run_complete_circuit(const std::string& bytes, const Options& o) {
    const json doc = parse_doc(bytes);
    Report rep("complete-circuit", bytes, "FLOAT");
    try {
        GramWitness w;
        WitnessCheck chk;
        if (doc.contains("a")) {
            AngleVector a;
            for (const json& s : doc.at("a")) {
                if (!s.is_string()) throw parse_error("'a' entries must be strings");
                a.a.push_back(to_double(rational_from_text(s.get<std::string>())));
            }
            const int n = doc.contains("n") ? doc.at("n").get<int>()
                                            : static_cast<int>(a.a.size());
            w = complete_circuit(n, a, o.tol);
            chk = verify_circuit_witness(n, a, w, std::max(o.tol, 1e-9));
        } else {
            const int n = doc.at("n").get<int>();
            const Graph g = cycle_graph(n);
            const PartialVector x = partial_from_doc(g, doc);
            w = complete_circuit(n, x, o.tol);
            chk = verify_witness(g, x, w, std::max(o.tol, 1e-9));
        }
        rep.j["witness"] = witness_to_json(w);
        rep.j["max_error"] = format_double(chk.max_error);
        if (!chk.ok) return rep.finish("NON_MEMBER", 1, o); // honest failure
        return rep.finish("MEMBER", 0, o);
    } catch (const not_in_elliptope& e) {
        rep.j["reason"] = e.what();
        return rep.finish("NON_MEMBER", 1, o);
    }
}

int run_complete_k4free(const std::string& bytes, const Options& o) {
    const json doc = parse_doc(bytes);
    const Graph g = graph_from_json(doc);
    const PartialVector x = partial_from_doc(g, doc);
    Report rep("complete-k4free", bytes, "FLOAT");
    try {
        const GramWitness w = complete_k4free(g, x, o.tol);
        const WitnessCheck chk = verify_witness(g, x, w, std::max(o.tol, 1e-9));
        rep.j["witness"] = witness_to_json(w);
        rep.j["max_error"] = format_double(chk.max_error);
        if (!chk.ok) return rep.finish("NON_MEMBER", 1, o);
        return rep.finish("MEMBER", 0, o);
    } catch (const not_in_elliptope& e) {
        rep.j["reason"] = e.what();
        return rep.finish("NON_MEMBER", 1, o);
    }
}

int run_witness_color(const std::string& bytes, const Options& o) {
    const json doc = parse_doc(bytes);
    const Graph g = graph_from_json(doc);
    const ColoringWitness cw = coloring_witness(g, o.budget);
    Report rep("witness-color", bytes, "EXACT");
    rep.j["chi"] = cw.coloring.chi;
    auto colors = ojson::array();
    for (int c : cw.coloring.color) colors.push_back(c);
    rep.j["colors"] = colors;
    rep.j["witness"] = witness_to_json(cw.witness);
    return rep.finish("MEMBER", 0, o);
}

int run_covariance(const std::string& bytes, const Options& o) {
    const json doc = parse_doc(bytes);
    const Graph g = graph_from_json(doc);
    const PartialVector x = partial_from_doc(g, doc);
    std::vector<Rational> diag;
    const std::vector<Rational>* diag_ptr = nullptr;
    if (doc.contains("diag")) {
        for (const json& s : doc.at("diag")) {
            if (!s.is_string()) throw parse_error("'diag' entries must be strings");
            diag.push_back(rational_from_text(s.get<std::string>()));
        }
        diag_ptr = &diag;
    }
    const CovarianceImage ci = covariance_map(g, x, diag_ptr);
    Report rep("covariance", bytes, "EXACT");
    ojson img = graph_to_json(ci.nabla);
    partial_to_doc(ci.nabla, ci.d, img);
    img["apex"] = ci.apex;
    rep.j["image"] = img;
    return rep.finish("MEMBER", 0, o);
}

int run_reduce(const std::string& bytes, const Options& o) {
    const json doc = parse_doc(bytes);
    ReductionInstance inst;
    if (o.kind == "partition-ed1" || o.kind == "partition-gd2") {
        std::vector<BigInt> a;
        for (const json& s : need_field(doc, "weights")) {
            if (!s.is_string()) throw parse_error("'weights' entries must be strings");
            a.push_back(parse_bigint(s.get<std::string>()));
        }
        inst = o.kind == "partition-ed1" ? reduce_partition_to_ed1(a)
                                         : reduce_partition_to_gd2(a);
    } else if (o.kind == "saxe-gd2") {
        const Graph g = graph_from_json(doc);
        const json& m = need_field(doc, "weights");
        if (!m.is_object()) throw parse_error("'weights' must be an object keyed by 'u,v'");
        std::vector<int> d(g.edge_count(), 0);
        for (const auto& [key, val] : m.items()) {
            const auto comma = key.find(',');
            if (comma == std::string::npos) throw parse_error("bad edge key '" + key + "'");
            const int e = g.edge_index(std::stoi(key.substr(0, comma)),
                                       std::stoi(key.substr(comma + 1)));
            if (e < 0) throw parse_error("'" + key + "' is not an edge");
            if (!val.is_string()) throw parse_error("weight for '" + key + "' must be a string");
            d[e] = std::stoi(val.get<std::string>());
        }
        inst = reduce_saxe_to_gd2(g, d);
    } else if (o.kind == "coloring-gd3") {
        const Graph g = graph_from_json(doc);
        const json& gj = need_field(doc, "gadget");
        Gadget gadget;
        gadget.graph = graph_from_json(gj);
        gadget.t1 = gj.value("t1", 0);
        gadget.t2 = gj.value("t2", 1);
        inst = build_coloring_instance(g, gadget, doc.value("k", 3));
    } else if (o.kind == "saxe-edk") {
        inst = build_saxe_edk_instance(graph_from_json(doc), doc.value("k", 3));
    } else if (o.kind == "hat-lift") {
        const Graph g = graph_from_json(doc);
        const PartialVector x = partial_from_doc(g, doc);
        if (doc.contains("d")) {
            const EdgeAngles rot = angles_from_json(g, doc.at("d"));
            inst = hat_lift(g, x, &rot);
        } else {
            inst = hat_lift(g, x);
        }
    } else {
        throw usage_error("unknown reduction kind '" + o.kind + "'");
    }
    ojson out;
    out["schema"] = "1";
    out["verb"] = "reduce";
    out["digest"] = digest_hex(bytes);
    const ojson body = reduction_to_json(inst);
    for (const auto& [key, val] : body.items())
        if (key != "schema") out[key] = val;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_verify(const std::string& bytes, const Options& o) {
    const json doc = parse_doc(bytes);
    Report rep("verify", bytes, "EXACT");
    if (doc.contains("sweep")) {
        const json& sw = doc.at("sweep");
        const std::string kind = sw.value("kind", "");
        SweepReport sr;
        if (kind == "partition-ed1" || kind == "partition-gd2") {
            const auto sets =
                enumerate_weight_multisets(sw.value("max_n", 10), sw.value("max_sum", 40));
            std::vector<ReductionInstance> batch;
            batch.reserve(sets.size());
            for (const auto& a : sets)
                batch.push_back(kind == "partition-ed1" ? reduce_partition_to_ed1(a)
                                                        : reduce_partition_to_gd2(a));
            sr = verify_many(batch, signing_config(o), o.budget, o.jobs);
        } else if (kind == "saxe-gd2") {
            const auto batch =
                random_saxe_corpus(sw.value("count", 1000), sw.value("max_n", 6), o.seed);
            sr = verify_many(batch, signing_config(o), o.budget, o.jobs);
        } else if (kind == "hat-lift") {
            const auto batch =
                random_hat_corpus(sw.value("count", 500), sw.value("max_n", 6), o.seed);
            sr = verify_many(batch, signing_config(o), o.budget, o.jobs);
        } else {
            throw parse_error("sweep kind must be partition-ed1, partition-gd2, saxe-gd2 or "
                              "hat-lift");
        }
        rep.j["instances"] = std::to_string(sr.instances);
        rep.j["disagreements"] = std::to_string(sr.disagreements);
        if (!sr.first_detail.empty()) rep.j["first"] = sr.first_detail;
        return rep.finish(sr.disagreements == 0 ? "AGREE" : "DISAGREE",
                          sr.disagreements == 0 ? 0 : 1, o);
    }
    const ReductionInstance inst = reduction_from_json(doc);
    const VerifyReport vr = verify_reduction(inst, signing_config(o), o.budget);
    rep.j["decider"] = vr.decider_accepts ? "accept" : "reject";
    rep.j["oracle"] = vr.oracle_accepts ? "accept" : "reject";
    rep.j["detail"] = vr.detail;
    return rep.finish(vr.agree ? "AGREE" : "DISAGREE", vr.agree ? 0 : 1, o);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact membership tests, low-rank completions and hardness-instance "
                 "generators for graph-partial correlation matrices"};
    app.require_subcommand(1);
    Options o;

    CLI::App* met = app.add_subcommand("check-met", "cycle-inequality membership");
    CLI::App* ell = app.add_subcommand("check-elliptope", "K4-minor-free elliptope membership");
    CLI::App* cir = app.add_subcommand("check-circuit", "circuit elliptope membership");
    CLI::App* e1 = app.add_subcommand("check-e1", "rank-1 (cut vector) membership");
    CLI::App* ed1 = app.add_subcommand("check-ed1", "line-embedding decision");
    CLI::App* gd2 = app.add_subcommand("check-gd2", "circle-embedding decision");
    CLI::App* cc = app.add_subcommand("complete-circuit", "rank-3 circuit completion");
    CLI::App* ck = app.add_subcommand("complete-k4free", "rank-3 K4-minor-free completion");
    CLI::App* wc = app.add_subcommand("witness-color", "coloring witness for x = 0");
    CLI::App* cov = app.add_subcommand("covariance", "squared-distance suspension image");
    CLI::App* red = app.add_subcommand("reduce", "generate a hardness instance");
    CLI::App* ver = app.add_subcommand("verify", "check a reduction against its oracle");

    red->add_option("kind", o.kind,
                    "partition-ed1|partition-gd2|saxe-gd2|coloring-gd3|saxe-edk|hat-lift")
        ->required();
    for (CLI::App* cmd : {met, ell, cir, e1, ed1, gd2, cc, ck, wc, cov, red, ver})
        add_common(cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 64; // help/version exit clean
    }

    try {
        const std::string bytes = read_input(o.file);
        if (met->parsed()) return run_check_met(bytes, o);
        if (ell->parsed()) return run_check_elliptope(bytes, o);
        if (cir->parsed()) return run_check_circuit(bytes, o);
        if (e1->parsed()) return run_check_e1(bytes, o);
        if (ed1->parsed()) return run_check_ed1(bytes, o);
        if (gd2->parsed()) return run_check_gd2(bytes, o);
        if (cc->parsed()) return run_complete_circuit(bytes, o);
        if (ck->parsed()) return run_complete_k4free(bytes, o);
        if (wc->parsed()) return run_witness_color(bytes, o);
        if (cov->parsed()) return run_covariance(bytes, o);
        if (red->parsed()) return run_reduce(bytes, o);
        if (ver->parsed()) return run_verify(bytes, o);
        std::cerr << "no verb\n";
        return 64;
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 65;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 65;
    }
}
