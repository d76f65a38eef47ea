#include <doctest.h>

#include <spectree/cost_model.hpp>
#include <spectree/errors.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

using namespace spectree;

namespace {

CostParams reference_point() {
    CostParams p;
    p.records = 65536;
    p.processors = 64;
    p.group_lanes = 16;
    p.mean_depth = 8;
    p.t_eval = 1;
    p.t_link = 1;
    return p;
}

std::size_t count_lines(const std::string& text) {
    std::size_t lines = 0;
    for (char c : text) {
        if (c == '\n') ++lines;
    }
    return lines;
}

}  // namespace

TEST_CASE("closed forms at the reference point") {
    CostParams p = reference_point();
    CHECK(t_serial(p) == doctest::Approx(1048576.0));
    CHECK(t_data(p) == doctest::Approx(16384.0));
    CHECK(t_spec(p) == doctest::Approx(65536.0));
    CHECK(speedup_data(p) == doctest::Approx(64.0));
    CHECK(speedup_spec(p) == doctest::Approx(16.0));
    CHECK(efficiency_data(p) == doctest::Approx(1.0));
    CHECK(efficiency_spec(p) == doctest::Approx(0.25));
}

TEST_CASE("staging and invocation overheads enter the parallel forms only") {
    CostParams p = reference_point();
    p.t_invoke = 7.0;
    p.sigma = 0.25;
    p.gamma = 3.0;
    const double stage = 0.25 * 65536 + 3.0;
    CHECK(t_serial(p) == doctest::Approx(1048576.0));  // untouched
    CHECK(t_data(p) == doctest::Approx(16384.0 + 7.0 + stage));
    CHECK(t_spec(p) == doctest::Approx(65536.0 + 7.0 + stage));
}

TEST_CASE("asymptotic mode drops the constant overheads") {
    CostParams p = reference_point();
    p.t_invoke = 7.0;
    p.sigma = 0.25;
    p.gamma = 3.0;
    // gamma and t_invoke vanish; the sigma * M staging term scales with the
    // input and stays.
    CHECK(t_data(p, CostMode::exact) - t_data(p, CostMode::asymptotic) ==
          doctest::Approx(10.0));
    CHECK(t_spec(p, CostMode::exact) - t_spec(p, CostMode::asymptotic) ==
          doctest::Approx(10.0));
    CHECK(t_data(p, CostMode::asymptotic) ==
          doctest::Approx(16384.0 + 0.25 * 65536));
}

TEST_CASE("crossover lane budget") {
    CHECK(crossover_p_bound(1) == doctest::Approx(2.0));
    CHECK(crossover_p_bound(2) == doctest::Approx(2.0));
    CHECK(crossover_p_bound(8) == doctest::Approx(4.0));
    CHECK(crossover_p_bound(11) == doctest::Approx(4.93336413278666));
    CHECK(crossover_p_bound(64) == doctest::Approx(18.285714285714285));
    CHECK_THROWS_AS(crossover_p_bound(0.5), ArgumentError);
}

TEST_CASE("the bound separates winning and losing lane budgets") {
    // Boundary cases sit exactly on equality; off-boundary points agree with
    // a direct comparison of the closed forms at M = P = 1.
    for (double d : {2.0, 4.0, 8.0, 11.0, 32.0}) {
        const double bound = crossover_p_bound(d);
        for (double p_lanes = 1; p_lanes <= 64; ++p_lanes) {
            CostParams p;
            p.records = 1;
            p.processors = 1;
            p.group_lanes = p_lanes;
            p.mean_depth = d;
            const double spec = t_spec(p);
            const double serial = t_serial(p);
            if (p_lanes < bound - 1e-9) {
                CHECK(spec < serial);
            } else if (p_lanes > bound + 1e-9) {
                CHECK(spec > serial);
            } else {
                CHECK(spec == doctest::Approx(serial));
            }
        }
    }
}

TEST_CASE("degenerate parameters are rejected") {
    CostParams p = reference_point();
    SUBCASE("no processors") {
        p.processors = 0;
        CHECK_THROWS_AS(t_data(p), ArgumentError);
        CHECK_THROWS_AS(t_spec(p), ArgumentError);
        CHECK_THROWS_AS(efficiency_data(p), ArgumentError);
    }
    SUBCASE("speculative cost needs a positive depth") {
        p.mean_depth = 0;
        CHECK_THROWS_AS(t_spec(p), ArgumentError);
    }
    SUBCASE("zero denominators in speedups") {
        p.records = 0;
        p.t_invoke = 0;
        p.sigma = 0;
        p.gamma = 0;
        CHECK_THROWS_WITH_AS(speedup_data(p), doctest::Contains("zero denominator"),
                             ArgumentError);
    }
}

TEST_CASE("speedup grows with the processor count") {
    CostParams p = reference_point();
    p.t_invoke = 50;
    double previous = 0;
    for (double workers : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        p.processors = workers;
        const double s = speedup_data(p);
        CHECK(s > previous);
        previous = s;
    }
}

TEST_CASE("sweeps produce the full Cartesian grid") {
    CostParams base = reference_point();

    SUBCASE("no axes yields the base point") {
        std::string csv = sweep_csv(base, {});
        CHECK(count_lines(csv) == 2);  // header + one row
        CHECK(csv.rfind("records,processors,group_lanes,groups,mean_depth,", 0) == 0);
    }
    SUBCASE("two axes multiply") {
        std::vector<SweepAxis> axes{
            {CostParam::mean_depth, {2, 4, 8}},
            {CostParam::group_lanes, {1, 16}},
        };
        std::string csv = sweep_csv(base, axes);
        CHECK(count_lines(csv) == 1 + 3 * 2);

        // Last axis varies fastest: rows pair up per depth.
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);  // header
        std::getline(in, line);
        CHECK(line.rfind("65536,64,1,1,2,", 0) == 0);
        std::getline(in, line);
        CHECK(line.rfind("65536,64,16,1,2,", 0) == 0);
        std::getline(in, line);
        CHECK(line.rfind("65536,64,1,1,4,", 0) == 0);
    }
    SUBCASE("values survive a parse round trip") {
        std::vector<SweepAxis> axes{{CostParam::mean_depth, {11}}};
        std::string csv = sweep_csv(base, axes);
        // The crossover bound is the last column of the data row.
        const auto last_comma = csv.find_last_of(',');
        const double bound = std::stod(csv.substr(last_comma + 1));
        CHECK(bound == doctest::Approx(4.93336413278666).epsilon(1e-12));
    }
    SUBCASE("empty axis ranges are rejected") {
        std::vector<SweepAxis> axes{{CostParam::mean_depth, {}}};
        CHECK_THROWS_WITH_AS(sweep_csv(base, axes), doctest::Contains("mean_depth"),
                             ArgumentError);
    }
}

TEST_CASE("parameter names are stable") {
    CHECK(std::string(cost_param_name(CostParam::records)) == "records");
    CHECK(std::string(cost_param_name(CostParam::mean_depth)) == "mean_depth");
    CHECK(std::string(cost_param_name(CostParam::sigma)) == "sigma");
}
