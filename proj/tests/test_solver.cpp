#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arcs/solver.hpp"
#include "oracle.hpp"

using namespace arcs;

namespace {

SearchResult run(int n, SearchOptions opts = {}) { return solve(Modulus(n), opts); }

} // namespace

TEST_CASE("select_point marks collinear cells OUT") {
    SearchState st{Modulus(6)};
    CHECK(st.free_count() == 36);
    st.select_point(Point(0, 0, 6));
    CHECK(st.in_count() == 1);
    CHECK(st.free_count() == 35); // one point blocks nothing

    st.select_point(Point(1, 0, 6));
    CHECK(st.in_count() == 2);
    for (const Point& p : blocked_points(Point(0, 0, 6), Point(1, 0, 6)))
        CHECK(st.status(p) == CellStatus::out_cell);
    CHECK(st.free_count() == 36 - 2 - 4);

    CHECK_THROWS_AS(st.select_point(Point(3, 0, 6)), cell_not_free);
    CHECK_THROWS_AS(st.select_point(Point(0, 0, 6)), cell_not_free);
}

TEST_CASE("seeded mode excludes half-period translates") {
    SearchState st{Modulus(10), SearchMode::seeded_2p};
    st.select_point(Point(2, 3, 10));
    CHECK(st.status(Point(7, 3, 10)) == CellStatus::out_cell);
    CHECK(st.status(Point(2, 8, 10)) == CellStatus::out_cell);
    CHECK(st.status(Point(7, 8, 10)) == CellStatus::out_cell);
    CHECK(st.in_count() == 1);
    CHECK(st.free_count() == 100 - 1 - 3);

    CHECK_THROWS_AS(SearchState(Modulus(6), SearchMode::seeded_2p), invalid_mode);
    CHECK_THROWS_AS(SearchState(Modulus(12), SearchMode::seeded_2p), invalid_mode);
}

TEST_CASE("small optima match the published values") {
    const std::pair<int, int> expected[] = {
        {2, 4}, {3, 4}, {4, 6}, {5, 6}, {6, 8}, {7, 8}, {8, 8}, {9, 9},
    };
    for (auto [n, tau] : expected) {
        SearchResult r = run(n);
        CHECK(r.best.size() == tau);
        CHECK(r.proven_optimal);
        CHECK(is_arc(r.best));
    }
}

TEST_CASE("solver equals exhaustive enumeration up to n = 6") {
    for (int n = 2; n <= 6; ++n) {
        oracle::NaiveGrid grid(n);
        CHECK(run(n).best.size() == grid.max_arc().size);
    }
}

TEST_CASE("reductions do not change the optimum") {
    for (int n : {4, 5, 6}) {
        SearchOptions plain;
        plain.disable_reductions = true;
        CHECK(run(n, plain).best.size() == run(n).best.size());
    }
}

TEST_CASE("the free-count bound never changes the optimum") {
    for (int n : {4, 6, 8, 9}) {
        SearchOptions unbounded;
        unbounded.disable_free_bound = true;
        SearchResult loose = run(n, unbounded);
        SearchResult tight = run(n);
        CHECK(loose.best.size() == tight.best.size());
        CHECK(loose.best == tight.best);
        CHECK(loose.nodes >= tight.nodes);
    }
}

TEST_CASE("seeded and generic searches agree on 2p moduli") {
    for (int n : {10, 14}) {
        SearchOptions seeded;
        seeded.mode = SearchMode::seeded_2p;
        SearchResult s = run(n, seeded);
        SearchResult g = run(n);
        CHECK(s.best.size() == g.best.size());
        CHECK(s.proven_optimal);
        CHECK_FALSE(s.fell_back_to_generic); // both optima exceed p+3
    }
    SearchOptions bad;
    bad.mode = SearchMode::seeded_2p;
    CHECK_THROWS_AS(run(9, bad), invalid_mode);
}

TEST_CASE("every IN set stays an arc") {
    for (int n : {4, 6, 8}) {
        SearchOptions opts;
        opts.debug_check_arcs = true;
        CHECK_NOTHROW(run(n, opts));
    }
}

TEST_CASE("parallel runs reproduce the serial result") {
    for (int n : {6, 9, 10}) {
        SearchResult serial = run(n);
        for (int depth : {1, 2}) {
            SearchOptions par;
            par.threads = 4;
            par.split_depth = depth;
            SearchResult parallel = run(n, par);
            CHECK(parallel.best == serial.best);
            CHECK(parallel.proven_optimal == serial.proven_optimal);
        }
    }
}

TEST_CASE("serial reruns are bit-for-bit repeatable") {
    SearchResult a = run(8);
    SearchResult b = run(8);
    CHECK(a.best == b.best);
    CHECK(a.nodes == b.nodes);
}

TEST_CASE("work splitting") {
    SearchOptions seeded;
    seeded.mode = SearchMode::seeded_2p;
    // depth 0: the whole seeded search is one job
    CHECK(split_work(Modulus(10), seeded, 0).size() == 1);

    // depth 1: one job per surviving fourth point, each trailing the seed
    auto jobs = split_work(Modulus(10), seeded, 1);
    CHECK(jobs.size() > 1);
    for (const auto& [points, scan_from] : jobs) {
        REQUIRE(points.size() == 4);
        CHECK(points[0] == Point(0, 0, 10));
        CHECK(points[1] == Point(1, 0, 10));
        CHECK(points[2] == Point(0, 1, 10));
        CHECK(scan_from == points[3].cell() + 1);
    }
}

TEST_CASE("node budgets cut the search without lying about it") {
    SearchOptions opts;
    opts.node_budget = 50;
    SearchResult r = run(9, opts);
    CHECK(r.budget_exhausted);
    CHECK_FALSE(r.proven_optimal);
    CHECK(is_arc(r.best));
}

TEST_CASE("forced half-period pairs cap the result at p+3") {
    SearchOptions opts;
    opts.forced = {Point(2, 3, 10), Point(7, 3, 10)};
    SearchResult r = run(10, opts);
    CHECK(r.proven_optimal);
    CHECK(r.best.size() <= 8); // p + 3 for p = 5
    CHECK(r.best.size() >= 4);
    CHECK(r.best.contains(Point(2, 3, 10)));
    CHECK(r.best.contains(Point(7, 3, 10)));

    SearchOptions clash;
    clash.forced = {Point(0, 0, 6), Point(1, 0, 6), Point(3, 0, 6)};
    CHECK_THROWS_AS(run(6, clash), cell_not_free);
}

TEST_CASE("initial lower bounds only prune, never invent") {
    SearchOptions opts;
    opts.initial_best = 8; // tau(6) = 8: nothing strictly better exists
    SearchResult r = run(6, opts);
    CHECK(r.proven_optimal);
    CHECK(r.best.size() <= 8);
}

TEST_CASE("a seeded result at or below p+3 falls back to a generic run") {
    // prune everything below 13 points: the seeded search comes back empty,
    // which is not conclusive for tau, so a generic rerun must follow
    SearchOptions opts;
    opts.mode = SearchMode::seeded_2p;
    opts.initial_best = 13; // above tau(10) = 12
    SearchResult r = run(10, opts);
    CHECK(r.fell_back_to_generic);
    CHECK(r.mode_used == SearchMode::generic);
    CHECK(r.proven_optimal);
    CHECK(r.best.size() == 0); // nothing beats the injected bound
}
