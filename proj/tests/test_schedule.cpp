#include <doctest.h>

#include <algorithm>

#include "tbcodes/code.hpp"
#include "tbcodes/error.hpp"
#include "tbcodes/schedule.hpp"
#include "test_util.hpp"

using namespace tb;

TEST_CASE("generated schedules pass validation") {
    for (const char* name : {"tb12", "tb24", "surface3", "surface5"}) {
        StabilizerCode code = build_named_code(name);
        Schedule schedule = make_schedule(code);
        INFO(name);
        CHECK(validate_schedule(code, schedule));
    }
}

TEST_CASE("each check touches exactly its support") {
    StabilizerCode code = build_named_code("tb12");
    Schedule schedule = make_schedule(code);
    REQUIRE(schedule.z_layers.size() == code.h_z.rows());
    REQUIRE(schedule.x_layers.size() == code.h_x.rows());
    for (size_t i = 0; i < schedule.z_layers.size(); ++i) {
        std::vector<size_t> touched;
        for (int q : schedule.z_layers[i]) {
            REQUIRE(q >= 0);
            touched.push_back(static_cast<size_t>(q));
        }
        std::sort(touched.begin(), touched.end());
        CHECK(touched == code.h_z.row_support(i));
    }
    for (size_t i = 0; i < schedule.x_layers.size(); ++i) {
        std::vector<size_t> touched;
        for (int q : schedule.x_layers[i]) {
            REQUIRE(q >= 0);
            touched.push_back(static_cast<size_t>(q));
        }
        std::sort(touched.begin(), touched.end());
        CHECK(touched == code.h_x.row_support(i));
    }
}

TEST_CASE("the unbracketed ordering fails validation") {
    for (const char* name : {"tb12", "tb24"}) {
        StabilizerCode code = build_named_code(name);
        Schedule bad = make_unbracketed_schedule(code);
        INFO(name);
        CHECK(!validate_schedule(code, bad));
    }
}

TEST_CASE("surface schedules come from the stored geometric orders") {
    StabilizerCode code = build_named_code("surface3");
    Schedule schedule = make_schedule(code);
    CHECK(schedule.x_layers == code.surface_x_order);
    CHECK(schedule.z_layers == code.surface_z_order);
}

TEST_CASE("codes outside the two-term family are rejected") {
    TBCodeSpec spec;
    spec.l = 2;
    spec.m = 3;
    spec.a_terms = {{Axis::x, 0}, {Axis::x, 1}, {Axis::y, 1}};
    spec.b_terms = {{Axis::x, 0}, {Axis::y, 1}};
    StabilizerCode code = build_code(spec);
    CHECK(tbtest::thrown_kind([&] { make_schedule(code); }) == ErrorKind::scheduling);
}

TEST_CASE("hand-built codes without layout data cannot be scheduled") {
    StabilizerCode code;
    code.name = "adhoc";
    code.n = 4;
    code.h_x = BitMatrix::from_string("1111");
    code.h_z = BitMatrix::from_string("1111");
    code.k = 2;
    CHECK_THROWS_AS(make_schedule(code), Error);
}
