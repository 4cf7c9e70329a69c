#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "unimap/bifurcation.hpp"
#include "unimap/conjugacy.hpp"
#include "unimap/dynamics.hpp"
#include "unimap/report.hpp"

using namespace unimap;

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(3.0) == "3");
    CHECK(format_number(-2.5e-20) == "-2.5e-20");
}

TEST_CASE("orbit csv") {
    OrbitTrace tr = iterate(make_map(0, 1, 0, 0, parse("t^2")), {0, 1}, 3);
    CHECK(orbit_csv(tr) == "0,0,1\n1,1,1\n2,2,1\n3,3,1\n");
    Json j = to_json(tr);
    CHECK(j["direction"] == "forward");
    CHECK(j["termination"] == "budget");
    CHECK(j["entries"].size() == 4);
}

TEST_CASE("map and normal form") {
    MapSpec m = make_map(3, 4, 0, 0, parse("sin(t)"));
    Json mj = map_json(m);
    CHECK(mj["a"] == 3.0);
    CHECK(mj["phi"].is_string());
    NormalForm nf = reduce(m);
    Json j = normal_form_json(nf, classify(nf));
    CHECK(j["classification"] == "NonlinearFixedOrigin");
    CHECK(j["trans"] == Json::array({0.0, 0.0}));
    CHECK(j["fixed_point_free"] == false);
}

TEST_CASE("fixed set and disk report") {
    NormalForm nf = reduce(make_map(0, 1, 0, 0, parse("t^2")));
    Json fs = to_json(fixed_set(nf, {-5, 5}));
    CHECK(fs["kind"] == "Lines");
    CHECK(fs["lines"].size() == 1);
    Json disk = to_json(disk_disjoint_iterates(nf, {{0, 3}, 0.5}, -5, 5));
    CHECK(disk["premise"] == "holds");
    CHECK(disk["pairs_checked"] == 55);
    CHECK(disk["p_range"] == Json::array({-5, 5}));
}

TEST_CASE("conjugacy json") {
    NormalForm nf = reduce(make_map(0, 1, 0, 1, parse("t^2")));
    ConjugacyMap h = build_conjugacy(nf, classify(nf));
    Json j = conjugacy_json(h);
    CHECK(j["branch"] == "D_nonzero");
    CHECK(j["parameters"]["base_interval"] == Json::array({0.0, 1.0}));
    Json r = to_json(verify_conjugacy(nf.map(), h, Rect::square(-1, 1), 3));
    CHECK(r["n"] == 3);
    CHECK(r.contains("conjugacy_sup"));
}

TEST_CASE("stability report") {
    StabilityConfig cfg;
    cfg.seeds = {{1, 1}};
    auto rows = stability_sweep(make_map(0, 1, 0, 0, parse("t^2")), {0.2, 2.0}, cfg);
    Json ok = to_json(rows[0]);
    CHECK(ok["verdict"] == "GlobalAttractor");
    CHECK(ok["seeds"].size() == 1);
    CHECK_FALSE(ok.contains("error"));
    Json bad = to_json(rows[1]);
    CHECK(bad.contains("error"));
    CHECK(bad["flagged"] == true);
}
