#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ellipt/errors.hpp"
#include "ellipt/instance_io.hpp"

#include "support.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace ellipt;
using namespace testsupport;

namespace {

// independent reference for the digest
std::uint64_t ref_fnv(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct CliResult {
    int exit_code;
    std::string out;
};

// Runs the driver named by ELLIPT_BIN; stderr is dropped on purpose (error
// messages are for humans, the tests pin exit codes and stdout JSON).
CliResult run_cli(const std::string& args) {
    const char* bin = std::getenv("ELLIPT_BIN");
    REQUIRE(bin != nullptr);
    const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string temp_file(const std::string& tag, const std::string& contents) {
    const std::string path =
        "/tmp/ellipt_io_" + std::to_string(getpid()) + "_" + tag + ".json";
    std::ofstream f(path);
    f << contents;
    return path;
}

} // namespace

TEST_CASE("rational text accepts fractions and decimals") {
    CHECK(rational_from_text("3/4") == Rational(3, 4));
    CHECK(rational_from_text("-2/8") == Rational(-1, 4));
    CHECK(rational_from_text("7") == Rational(7));
    CHECK(rational_from_text("0.25") == Rational(1, 4));
    CHECK(rational_from_text("-1e-3") == Rational(-1, 1000));
    CHECK(rational_from_text("2.5e2") == Rational(250));
    CHECK(rational_from_text("+0.5") == Rational(1, 2));
    CHECK(rational_from_text(".5") == Rational(1, 2));
    CHECK(rational_from_text("5.") == Rational(5));
    // leading zeros must never trigger the gmp octal convention
    CHECK(rational_from_text("0.025") == Rational(1, 40));
    CHECK(rational_from_text("010/07") == Rational(10, 7));
    CHECK(rational_from_text("10.250") == Rational(41, 4));

    CHECK_THROWS_AS(rational_from_text("abc"), parse_error);
    CHECK_THROWS_AS(rational_from_text(""), parse_error);
    CHECK_THROWS_AS(rational_from_text("1/0"), parse_error);
    CHECK_THROWS_AS(rational_from_text("1.2.3"), parse_error);
    CHECK_THROWS_AS(rational_from_text("1e"), parse_error);
    CHECK_THROWS_AS(rational_from_text("1e9999999"), parse_error);
}

TEST_CASE("doubles round-trip through their shortest form") {
    for (double v : {0.1, 1.0 / 3.0, 1e-9, -2.5, 0.0, 6.02e23, 1e308}) {
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK_THROWS_AS(parse_double("inf"), parse_error);
    CHECK_THROWS_AS(parse_double("0x10"), parse_error);
    CHECK_THROWS_AS(parse_double("1 "), parse_error);
}

TEST_CASE("digest matches the reference fold") {
    for (std::string s : {std::string(""), std::string("a"), std::string("hello world"),
                          std::string("{\"n\":3}")}) {
        CHECK(fnv1a(s) == ref_fnv(s));
        CHECK(digest_hex(s) == hex16(ref_fnv(s)));
    }
    CHECK(fnv1a("") == 14695981039346656037ULL);
}

TEST_CASE("graph json round trip and rejection") {
    auto rng = make_rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        const Graph g = random_connected_graph(rng, 3 + static_cast<int>(rng() % 5), 0.5);
        const Graph back = graph_from_json(graph_to_json(g));
        CHECK(back.node_count() == g.node_count());
        CHECK(back.edges() == g.edges());
    }
    CHECK_THROWS_AS(graph_from_json(json::parse(R"({"edges":[[0,1]]})")), parse_error);
    CHECK_THROWS_AS(graph_from_json(json::parse(R"({"n":3,"edges":[[0,1],[0,1]]})")),
                    parse_error);
    CHECK_THROWS_AS(graph_from_json(json::parse(R"({"n":3,"edges":[[1,1]]})")), parse_error);
    CHECK_THROWS_AS(graph_from_json(json::parse(R"({"n":3,"edges":[[0,5]]})")), parse_error);
    CHECK_THROWS_AS(graph_from_json(json::parse(R"({"n":3,"edges":[[0]]})")), parse_error);
}

TEST_CASE("edge data json round trips") {
    const Graph g = cycle_graph(4);

    SUBCASE("partial vectors in both modes") {
        for (auto mode : {PartialVector::Mode::Cosine, PartialVector::Mode::Distance}) {
            PartialVector x;
            x.mode = mode;
            auto rng = make_rng(72);
            for (int e = 0; e < 4; ++e) {
                Rational r = random_rational(rng, 5, 7);
                if (mode == PartialVector::Mode::Cosine && abs(r) > 1) r = 1 / r;
                if (mode == PartialVector::Mode::Distance) r = abs(r);
                x.values.push_back(r);
            }
            ojson doc;
            partial_to_doc(g, x, doc);
            const PartialVector back = partial_from_doc(g, doc);
            CHECK(back.mode == x.mode);
            CHECK(back.values == x.values);
        }
    }

    SUBCASE("missing and unknown edges are refused") {
        ojson doc;
        doc["mode"] = "cosine";
        doc["x"] = {{"0,1", "1/2"}};
        CHECK_THROWS_AS(partial_from_doc(g, doc), parse_error);
        doc["x"] = {{"0,1", "0"}, {"1,2", "0"}, {"2,3", "0"}, {"0,3", "0"}, {"0,2", "0"}};
        CHECK_THROWS_AS(partial_from_doc(g, doc), parse_error);
    }

    SUBCASE("angles in all three modes") {
        auto rng = make_rng(73);
        std::vector<RationalRotation> rot;
        std::vector<Rational> len;
        std::vector<double> fl;
        for (int e = 0; e < 4; ++e) {
            rot.push_back(random_rotation(rng));
            len.push_back(abs(random_rational(rng, 9, 4)));
            fl.push_back(0.25 * (e + 1));
        }
        for (const EdgeAngles& d : {EdgeAngles::from_rotations(rot),
                                    EdgeAngles::from_lengths(len),
                                    EdgeAngles::from_floats(fl)}) {
            const EdgeAngles back = angles_from_json(g, angles_to_json(g, d));
            CHECK(back.mode == d.mode);
            CHECK(back.rotations == d.rotations);
            CHECK(back.lengths == d.lengths);
            CHECK(back.values == d.values);
        }
    }
}

TEST_CASE("witness json keeps exactness") {
    GramWitness w = witness_from_exact(
        2, {{Rational(1), Rational(0)}, {Rational(3, 5), Rational(4, 5)}});
    GramWitness back = witness_from_json(witness_to_json(w));
    CHECK(back.k == 2);
    CHECK(back.exact);
    CHECK(back.exact_vectors == w.exact_vectors);
    CHECK(back.vectors == w.vectors);

    GramWitness f = witness_from_float(3, {{0.6, 0.8, 0.0}, {0.0, 0.0, 1.0}});
    GramWitness fback = witness_from_json(witness_to_json(f));
    CHECK(!fback.exact);
    CHECK(fback.vectors == f.vectors);
}

TEST_CASE("reduction kind names") {
    for (auto k : {ReductionKind::PartitionEd1, ReductionKind::PartitionGd2,
                   ReductionKind::SaxeGd2, ReductionKind::ColoringGd3, ReductionKind::SaxeEdk,
                   ReductionKind::HatLift})
        CHECK(kind_from_string(kind_to_string(k)) == k);
    CHECK_THROWS_AS(kind_from_string("partition"), parse_error);
}

TEST_CASE("reduction documents round trip and still verify") {
    std::vector<ReductionInstance> insts;
    insts.push_back(reduce_partition_to_ed1({BigInt(1), BigInt(2), BigInt(3)}));
    insts.push_back(reduce_partition_to_gd2({BigInt(2), BigInt(3), BigInt(7)}));
    insts.push_back(reduce_saxe_to_gd2(cycle_graph(3), {1, 2, 2}));
    Gadget none;
    none.graph = Graph(2, {});
    insts.push_back(build_coloring_instance(cycle_graph(4), none, 4));
    insts.push_back(build_saxe_edk_instance(path_graph(3), 4));
    PartialVector hx;
    hx.values = {Rational(3, 5)};
    std::vector<RationalRotation> hr{RationalRotation(Rational(3, 5), Rational(4, 5))};
    const EdgeAngles hrot = EdgeAngles::from_rotations(hr);
    insts.push_back(hat_lift(Graph(2, {{0, 1}}), hx, &hrot));

    for (const auto& inst : insts) {
        CAPTURE(kind_to_string(inst.kind));
        const ojson doc = reduction_to_json(inst);
        const ReductionInstance back = reduction_from_json(json::parse(doc.dump()));
        CHECK(back.kind == inst.kind);
        CHECK(back.graph.edges() == inst.graph.edges());
        CHECK(back.weights == inst.weights);
        CHECK(back.out_weights == inst.out_weights);
        CHECK(back.total == inst.total);
        CHECK(back.has_alpha == inst.has_alpha);
        if (inst.has_alpha) CHECK(back.alpha == inst.alpha);
        const auto rv = verify_reduction(back);
        CHECK(rv.agree == verify_reduction(inst).agree);
        CHECK(rv.agree);
    }
}

TEST_CASE("command-line driver end to end") {
    if (std::getenv("ELLIPT_BIN") == nullptr) {
        MESSAGE("ELLIPT_BIN not set; skipping driver checks");
        return;
    }

    SUBCASE("membership check") {
        const std::string path = temp_file(
            "met", R"({"n":3,"edges":[[0,1],[1,2],[0,2]],"mode":"cosine",)"
                   R"("x":{"0,1":"0","1,2":"0","0,2":"0"}})");
        const auto r = run_cli("check-met " + path);
        CHECK(r.exit_code == 0);
        const json rep = json::parse(r.out);
        CHECK(rep.at("verdict") == "MEMBER");
        CHECK(rep.at("schema") == "1");
        CHECK(rep.at("digest").get<std::string>().size() == 16);
        std::remove(path.c_str());
    }

    SUBCASE("reduce then verify") {
        const std::string path = temp_file("w", R"({"weights":["1","2","3"]})");
        const auto red = run_cli("reduce partition-gd2 " + path);
        REQUIRE(red.exit_code == 0);
        const std::string rpath = temp_file("red", red.out);
        const auto ver = run_cli("verify " + rpath);
        CHECK(ver.exit_code == 0);
        CHECK(json::parse(ver.out).at("verdict") == "AGREE");
        std::remove(path.c_str());
        std::remove(rpath.c_str());
    }

    SUBCASE("verify flags a tampered document") {
        ojson doc = reduction_to_json(build_saxe_edk_instance(cycle_graph(4), 4));
        doc["edge_weights"][0] = "7";
        const std::string path = temp_file("bad", doc.dump());
        const auto r = run_cli("verify " + path);
        CHECK(r.exit_code == 1);
        CHECK(json::parse(r.out).at("verdict") == "DISAGREE");
        std::remove(path.c_str());
    }

    SUBCASE("exit codes for bad input and bad usage") {
        const std::string path = temp_file("junk", "not json at all");
        CHECK(run_cli("check-met " + path).exit_code == 65);
        CHECK(run_cli("no-such-verb").exit_code == 64);
        CHECK(run_cli("check-met --no-such-flag " + path).exit_code == 64);
        std::remove(path.c_str());
    }
}
