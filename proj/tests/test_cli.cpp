#include "cli_fixture.hpp"
#include "doctest.h"
#include "regula/io.hpp"

using namespace regula;
using testing_support::Workspace;
using io::Json;

namespace {

const char* kTwoDiracs = R"({"alphabet":["a","b"],"convex":false,"measures":[[1,0],[0,1]]})";
const char* kTwoPoints = R"({"alphabet":["a","b"],"convex":false,"measures":[[0.7,0.3],[0.2,0.8]]})";

Json read_json(const Workspace& ws, const std::string& name) { return Json::parse(ws.read(name)); }

}  // namespace

TEST_CASE("generate: iid stream with a seed") {
    Workspace ws("gen_iid");
    ws.write("c.json", R"({"mode":"iid","measure":{"alphabet":["a","b"],"weights":[0.5,0.5]},"length":100,"seed":7})");
    const auto r = ws.run("generate", "c.json");
    REQUIRE(r.code == 0);
    const Json seq = read_json(ws, "sequence.json");
    CHECK(seq["symbols"].size() == 100);
    CHECK(seq["meta"]["seed"] == 7);
    const std::string first = ws.read("sequence.json");
    REQUIRE(ws.run("generate", "c.json").code == 0);
    CHECK(ws.read("sequence.json") == first);
    REQUIRE(ws.run("generate", "c.json", {"--seed", "8"}).code == 0);
    CHECK(ws.read("sequence.json") != first);
}

TEST_CASE("generate: net over two Diracs") {
    Workspace ws("gen_net");
    ws.write("reg.json", kTwoDiracs);
    ws.write("c.json", R"({"mode":"net","regularity":"reg.json","schedule":{"rounds":6}})");
    REQUIRE(ws.run("generate", "c.json").code == 0);
    const SamplingNet net = io::net_from_jsonl(ws.read("net.jsonl"));
    CHECK(net.size() == 12);
    REQUIRE(net.meta().schedule.has_value());
    CHECK(net.meta().schedule->rounds == 6);
}

TEST_CASE("generate: disconnected sequence target is a precondition failure") {
    Workspace ws("gen_seq");
    ws.write("c.json", std::string(R"({"mode":"sequence","regularity":)") + kTwoDiracs + R"(,"length":500,"epsilon":0.1})");
    const auto r = ws.run("generate", "c.json");
    CHECK(r.code == 4);
    CHECK(r.err.find("connected") != std::string::npos);
    CHECK_FALSE(ws.exists("sequence.json"));
}

TEST_CASE("config errors exit with 2") {
    Workspace ws("cfg");
    ws.write("unknown.json", R"({"mode":"iid","colour":"red"})");
    CHECK(ws.run("generate", "unknown.json").code == 2);
    ws.write("missing.json", R"({"mode":"net","regularity":"nowhere.json"})");
    CHECK(ws.run("generate", "missing.json").code == 2);
    ws.write("badmode.json", R"({"mode":"stream"})");
    CHECK(ws.run("generate", "badmode.json").code == 2);
    ws.write("notjson.json", "{");
    CHECK(ws.run("generate", "notjson.json").code == 2);
    CHECK(ws.run("generate", "absent.json").code == 2);
    ws.write("seed.json", R"({"mode":"iid","measure":{"alphabet":["a"],"weights":[1]},"length":3})");
    CHECK(ws.run("generate", "seed.json").code == 2);
    CHECK(ws.run("generate", "seed.json", {"--seed", "-1"}).code == 2);
    CHECK(ws.run("generate", "seed.json", {"--seed", "12"}).code == 0);
    std::ostringstream out, err;
    CHECK(cli::run({"launch"}, out, err) == 2);
    CHECK(cli::run({}, out, err) == 2);
}

TEST_CASE("estimate: iid stream gives one center near the measure") {
    Workspace ws("est_iid");
    ws.write("g.json", R"({"mode":"iid","measure":{"alphabet":["a","b","c"],"weights":[0.5,0.3,0.2]},"length":100000,"seed":42})");
    REQUIRE(ws.run("generate", "g.json").code == 0);
    ws.write("e.json", R"({"stream":"sequence.json","target":{"alphabet":["a","b","c"],"convex":false,"measures":[[0.5,0.3,0.2]]}})");
    const auto r = ws.run("estimate", "e.json");
    REQUIRE(r.code == 0);
    const Json est = read_json(ws, "estimate.json");
    CHECK(est["centers"].size() == 1);
    CHECK(est["hausdorff_to_target"].get<double>() <= 0.02);
    CHECK(ws.read("trajectory.csv").rfind("index,dim0,dim1,dim2\n", 0) == 0);
}

TEST_CASE("estimate: net over two Diracs gives two centers") {
    Workspace ws("est_net");
    ws.write("reg.json", kTwoDiracs);
    ws.write("g.json", R"({"mode":"net","regularity":"reg.json","schedule":{"rounds":8,"sweeps":8}})");
    REQUIRE(ws.run("generate", "g.json").code == 0);
    ws.write("e.json", R"({"stream":"net.jsonl","epsilon":0.02,"windows":5,"tail_fraction":0.5})");
    REQUIRE(ws.run("estimate", "e.json").code == 0);
    CHECK(read_json(ws, "estimate.json")["centers"].size() == 2);

    ws.write("gamma.json", R"({"stream":"net.jsonl","gamma":[[0,1]]})");
    REQUIRE(ws.run("estimate", "gamma.json").code == 0);
    CHECK(ws.read("trajectory.csv").rfind("index,dim0\n", 0) == 0);
}

TEST_CASE("estimate: data errors exit with 3") {
    Workspace ws("est_bad");
    ws.write("empty.jsonl", "");
    ws.write("e.json", R"({"stream":"empty.jsonl"})");
    CHECK(ws.run("estimate", "e.json").code == 3);
    ws.write("junk.jsonl", "not json at all\n");
    ws.write("j.json", R"({"stream":"junk.jsonl"})");
    CHECK(ws.run("estimate", "j.json").code == 3);
    ws.write("short.jsonl", "{\"tuple\":[\"a\"]}\n");
    ws.write("s.json", R"({"stream":"short.jsonl"})");
    CHECK(ws.run("estimate", "s.json").code == 4);
}

TEST_CASE("equiv mirrors the library verdicts") {
    Workspace ws("equiv");
    ws.write("p.json", kTwoPoints);
    ws.write("a.json", R"({"alphabet":["a","b"],"convex":false,"measures":[[1,0]]})");
    ws.write("b.json", R"({"alphabet":["a","b"],"convex":false,"measures":[[0,1]]})");
    ws.write("g1.json", R"({"mode":"net","regularity":"p.json","schedule":{"rounds":8,"sweeps":8},"seed":1,"output":"p1.jsonl"})");
    ws.write("g2.json", R"({"mode":"net","regularity":"p.json","schedule":{"rounds":9,"sweeps":6,"denominator0":24},"seed":2,"output":"p2.jsonl"})");
    ws.write("ga.json", R"({"mode":"net","regularity":"a.json","schedule":{"rounds":8,"sweeps":8},"output":"a.jsonl"})");
    ws.write("gb.json", R"({"mode":"net","regularity":"b.json","schedule":{"rounds":8,"sweeps":8},"output":"b.jsonl"})");
    for (const char* g : {"g1.json", "g2.json", "ga.json", "gb.json"}) REQUIRE(ws.run("generate", g).code == 0);

    ws.write("self.json", R"({"stream1":"p1.jsonl","stream2":"p1.jsonl"})");
    REQUIRE(ws.run("equiv", "self.json").code == 0);
    CHECK(read_json(ws, "verdict.json")["verdict"] == "equivalent");

    ws.write("seeds.json", R"({"stream1":"p1.jsonl","stream2":"p2.jsonl","epsilon":0.02})");
    REQUIRE(ws.run("equiv", "seeds.json").code == 0);
    CHECK(read_json(ws, "verdict.json")["verdict"] == "equivalent");

    ws.write("ab.json", R"({"stream1":"a.jsonl","stream2":"b.jsonl"})");
    REQUIRE(ws.run("equiv", "ab.json").code == 0);
    const Json v = read_json(ws, "verdict.json");
    CHECK(v["verdict"] == "distinct");
    CHECK(v["witness"]["best_separation"].get<double>() == doctest::Approx(1.0));
    CHECK(v["witness"]["gamma"].size() == 2);
    CHECK(v["image_first"].size() == 1);

    ws.write("c.jsonl", "{\"tuple\":[\"a\",\"c\"]}\n");
    ws.write("mismatch.json", R"({"stream1":"a.jsonl","stream2":"c.jsonl"})");
    CHECK(ws.run("equiv", "mismatch.json").code == 3);
}

TEST_CASE("decide dispatches on the inputs present") {
    Workspace ws("decide");
    ws.write("loss.csv", "theta,u1,u2\na,0,1\nb,1,0\n");
    ws.write("mm.json", R"({"loss":"loss.csv"})");
    auto r = ws.run("decide", "mm.json");
    REQUIRE(r.code == 0);
    CHECK(read_json(ws, "report.json")["kind"] == "minimax");
    CHECK(r.out.find("minimax") != std::string::npos);

    ws.write("b.json", R"({"loss":"loss.csv","measure":[0.7,0.3]})");
    REQUIRE(ws.run("decide", "b.json").code == 0);
    const Json b = read_json(ws, "report.json");
    CHECK(b["kind"] == "bayes");
    CHECK(b["argmin"] == Json::array({"u1"}));

    ws.write("p.json", kTwoPoints);
    ws.write("r.json", R"({"loss":"loss.csv","regularity":"p.json"})");
    r = ws.run("decide", "r.json");
    REQUIRE(r.code == 0);
    const Json rr = read_json(ws, "report.json");
    CHECK(rr["kind"] == "regularity");
    CHECK(rr["values"]["u1"].get<double>() == doctest::Approx(0.8));
    CHECK(rr["values"]["u2"].get<double>() == doctest::Approx(0.7));
    CHECK(rr["argmin"] == Json::array({"u2"}));
    CHECK(rr["worst_case"]["u1"] == Json::array({1}));
    CHECK(r.out.find("u2      0.7  *") != std::string::npos);

    ws.write("bad.json", R"({"loss":"loss.csv","measure":{"alphabet":["x","y"],"weights":[1,0]}})");
    CHECK(ws.run("decide", "bad.json").code == 3);
    ws.write("both.json", R"({"loss":"loss.csv","measure":[1,0],"regularity":"p.json"})");
    CHECK(ws.run("decide", "both.json").code == 2);
}

TEST_CASE("verify mirrors the harness") {
    Workspace ws("verify");
    ws.write("loss.csv", "theta,u1,u2\na,0,1\nb,1,0\n");
    ws.write("p.json", kTwoPoints);
    ws.write("g.json", R"({"mode":"net","regularity":"p.json","schedule":{"rounds":8,"sweeps":8}})");
    REQUIRE(ws.run("generate", "g.json").code == 0);

    ws.write("v.json", R"({"stream":"net.jsonl","loss":"loss.csv","decision":"u2","r1":0.6,"r2":0.8})");
    REQUIRE(ws.run("verify", "v.json").code == 0);
    const Json a = read_json(ws, "prop3.json");
    CHECK(a["r1_exceeded_cofinally"] == true);
    CHECK(a["r2_respected_eventually"] == true);
    CHECK(std::fabs(a["empirical_limsup"].get<double>() - 0.7) <= 0.02);
    CHECK(ws.read("running_average.csv").rfind("index,dim0\n", 0) == 0);

    ws.write("hi.json", R"({"stream":"net.jsonl","loss":"loss.csv","decision":"u2","r1":0.75,"r2":0.8})");
    REQUIRE(ws.run("verify", "hi.json").code == 0);
    CHECK(read_json(ws, "prop3.json")["r1_exceeded_cofinally"] == false);

    ws.write("unk.json", R"({"stream":"net.jsonl","loss":"loss.csv","decision":"u7","r1":0.6,"r2":0.8})");
    CHECK(ws.run("verify", "unk.json").code == 3);
}

TEST_CASE("out_dir and --out place outputs") {
    Workspace ws("outdir");
    ws.write("loss.csv", "theta,u1\na,1\n");
    ws.write("c.json", R"({"loss":"loss.csv","out_dir":"results"})");
    REQUIRE(ws.run("decide", "c.json").code == 0);
    CHECK(ws.exists("results/report.json"));
    REQUIRE(ws.run("decide", "c.json", {"--out", (ws.root() / "elsewhere").string()}).code == 0);
    CHECK(ws.exists("elsewhere/report.json"));
}
