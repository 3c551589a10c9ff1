#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "arcs/geometry.hpp"
#include "oracle.hpp"

using namespace arcs;

namespace {

// brute-force count of maximal cyclic subgroups: dedupe multiples sets
int direction_count_oracle(int n) {
    std::set<std::set<int>> subgroups;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (!is_primitive(u, v, n)) continue;
            std::set<int> cells;
            for (int k = 0; k < n; ++k) cells.insert((k * v % n) * n + k * u % n);
            subgroups.insert(std::move(cells));
        }
    return static_cast<int>(subgroups.size());
}

} // namespace

TEST_CASE("primitive direction counts") {
    std::vector<Direction> d2 = primitive_directions(Modulus(2));
    REQUIRE(d2.size() == 3);
    CHECK(d2[0] == Direction{0, 1, 2});
    CHECK(d2[1] == Direction{1, 0, 2});
    CHECK(d2[2] == Direction{1, 1, 2});

    CHECK(primitive_directions(Modulus(3)).size() == 4);
    CHECK(direction_count_oracle(3) == 4);

    CHECK(primitive_directions(Modulus(6)).size() == 12);
    CHECK(direction_count_oracle(6) == 12);
    // multiplicative across the coprime split 6 = 2 * 3
    CHECK(direction_count_oracle(6) == direction_count_oracle(2) * direction_count_oracle(3));

    for (int p : {5, 7, 11, 13})
        CHECK(primitive_directions(Modulus(p)).size() == static_cast<size_t>(p + 1));

    for (int n : {4, 8, 9, 12})
        CHECK(primitive_directions(Modulus(n)).size() ==
              static_cast<size_t>(direction_count_oracle(n)));
}

TEST_CASE("canonical direction is the lex-least unit multiple") {
    std::mt19937 rng(7);
    for (int n : {6, 9, 12, 15, 24}) {
        Modulus m(n);
        std::uniform_int_distribution<int> dist(0, n - 1);
        for (int trial = 0; trial < 200; ++trial) {
            int u = dist(rng), v = dist(rng);
            if (!is_primitive(u, v, n)) continue;
            Direction d = canonical_direction(u, v, m);
            bool found_self = false;
            for (int w : units(n)) {
                int cu = u * w % n, cv = v * w % n;
                CHECK_FALSE(std::pair(cu, cv) < std::pair(d.u, d.v));
                if (cu == d.u && cv == d.v) found_self = true;
                // same subgroup, same canonical form
                CHECK(canonical_direction(cu, cv, m) == d);
            }
            CHECK(found_self);
        }
    }
    CHECK_THROWS_AS(canonical_direction(2, 4, Modulus(6)), not_primitive);
}

TEST_CASE("line_from examples") {
    Line horiz = line_from(Point(0, 0, 6), Direction{1, 0, 6});
    REQUIRE(horiz.points.size() == 6);
    for (int x = 0; x < 6; ++x) CHECK(horiz.points[x] == Point(x, 0, 6));

    Line skew = line_from(Point(0, 0, 6), Direction{2, 1, 6});
    std::vector<Point> expected = {Point(0, 0, 6), Point(2, 1, 6), Point(4, 2, 6),
                                   Point(0, 3, 6), Point(2, 4, 6), Point(4, 5, 6)};
    std::sort(expected.begin(), expected.end());
    CHECK(skew.points == expected);

    // translation equivariance
    Line shifted = line_from(Point(1, 1, 6), Direction{2, 1, 6});
    std::vector<Point> translated;
    for (const Point& p : skew.points) translated.push_back(p + Point(1, 1, 6));
    std::sort(translated.begin(), translated.end());
    CHECK(shifted.points == translated);

    CHECK_THROWS_AS(line_from(Point(0, 0, 6), Direction{2, 4, 6}), not_primitive);
}

TEST_CASE("line tables match the integer-line oracle") {
    const int expected_counts[][2] = {{2, 6}, {3, 12}, {6, 72}};
    for (auto [n, count] : expected_counts) CHECK(LineTable(Modulus(n)).line_count() == count);

    for (int n : {2, 3, 4, 6, 9}) {
        LineTable table{Modulus(n)};
        std::set<std::vector<int>> got;
        for (const Line& l : table.lines()) {
            CHECK(static_cast<int>(l.cells.size()) == n);
            got.insert(l.cells);
        }
        CHECK(got.size() == static_cast<size_t>(table.line_count())); // no duplicates
        CHECK(got == oracle::oracle_lines(n));
    }
}

TEST_CASE("line table incidence invariants") {
    for (int n : {4, 6, 9, 10}) {
        LineTable table{Modulus(n)};
        size_t dirs = primitive_directions(Modulus(n)).size();
        // every point lies on one line per direction
        for (int c = 0; c < n * n; ++c) CHECK(table.lines_through(c).size() == dirs);
        // every pair of distinct points shares a line
        for (int a = 0; a < n * n; ++a)
            for (int b = a + 1; b < n * n; ++b)
                CHECK_FALSE(table.common_lines(a, b).empty());
    }
}

TEST_CASE("determinant collinearity on squarefree moduli") {
    CHECK(collinear_det(Point(0, 0, 6), Point(2, 1, 6), Point(4, 2, 6)));
    CHECK_FALSE(collinear_det(Point(0, 0, 10), Point(1, 0, 10), Point(0, 1, 10)));
    CHECK_THROWS_AS(collinear_det(Point(0, 0, 9), Point(3, 0, 9), Point(0, 3, 9)),
                    not_squarefree);
}

TEST_CASE("general collinearity handles square factors") {
    // determinant vanishes, but no line contains the triple
    CHECK_FALSE(collinear(Point(0, 0, 9), Point(3, 0, 9), Point(0, 3, 9)));
    CHECK(collinear(Point(0, 0, 9), Point(3, 0, 9), Point(6, 0, 9)));
    CHECK_FALSE(collinear(Point(0, 0, 4), Point(2, 0, 4), Point(0, 2, 4)));
    // repeated points are collinear by convention
    Point a(1, 2, 9), c(5, 7, 9);
    CHECK(collinear(a, a, c));
}

TEST_CASE("soundness gap witnesses for n = 4 and 9") {
    for (int n : {4, 9}) {
        int p = (n == 4) ? 2 : 3;
        Point a(0, 0, n), b(p, 0, n), c(0, p, n);
        CHECK(det3(a, b, c).value() == 0);
        CHECK_FALSE(collinear(a, b, c));
    }
}

TEST_CASE("determinant test agrees with the line oracle on squarefree moduli") {
    for (int n : {6, 10, 15}) {
        LineTable table{Modulus(n)};
        int cells = n * n;
        for (int i = 0; i < cells; ++i)
            for (int j = i + 1; j < cells; ++j)
                for (int k = j + 1; k < cells; ++k) {
                    Point a = Point::from_cell(i, n), b = Point::from_cell(j, n),
                          c = Point::from_cell(k, n);
                    REQUIRE(collinear_det(a, b, c) == collinear(a, b, c, table));
                }
    }
}

TEST_CASE("general collinearity agrees with the line table on square moduli") {
    for (int n : {4, 8, 9, 12}) {
        LineTable table{Modulus(n)};
        int cells = n * n;
        for (int i = 0; i < cells; ++i)
            for (int j = i + 1; j < cells; ++j)
                for (int k = j + 1; k < cells; ++k) {
                    Point a = Point::from_cell(i, n), b = Point::from_cell(j, n),
                          c = Point::from_cell(k, n);
                    REQUIRE(collinear(a, b, c) == collinear(a, b, c, table));
                }
    }
}

TEST_CASE("equal cross-determinants force collinearity in Z_2p") {
    // for a with a_y a unit, equal values of a_y*b_x - a_x*b_y pin b to a line
    std::mt19937 rng(99);
    for (int p : {3, 5, 7}) {
        int n = 2 * p;
        std::uniform_int_distribution<int> dist(0, n - 1);
        int done = 0;
        while (done < 1000) {
            int ax = dist(rng), ay = dist(rng);
            if (std::gcd(ay, n) != 1) continue;
            int A = dist(rng);
            std::vector<Point> bs;
            for (int bx = 0; bx < n && bs.size() < 3; ++bx)
                for (int by = 0; by < n && bs.size() < 3; ++by)
                    if (mod_norm(static_cast<long long>(ay) * bx -
                                     static_cast<long long>(ax) * by - A, n) == 0)
                        bs.emplace_back(bx, by, n);
            REQUIRE(bs.size() == 3);
            CHECK(collinear(bs[0], bs[1], bs[2]));
            ++done;
        }
    }
}

TEST_CASE("blocked point sets") {
    // four remaining points of the horizontal line
    std::vector<Point> b1 = blocked_points(Point(0, 0, 6), Point(1, 0, 6));
    std::vector<Point> expect1 = {Point(2, 0, 6), Point(3, 0, 6), Point(4, 0, 6),
                                  Point(5, 0, 6)};
    CHECK(b1 == expect1);

    // non-primitive difference blocks two full rows
    std::vector<Point> b2 = blocked_points(Point(0, 0, 6), Point(2, 0, 6));
    CHECK(b2.size() == 10);
    for (const Point& p : b2) CHECK((p.y.value() == 0 || p.y.value() == 3));

    // two-point lines block nothing
    CHECK(blocked_points(Point(0, 0, 2), Point(1, 1, 2)).empty());

    // determinant mode and line-table mode agree, and match brute force
    for (int n : {6, 9}) {
        LineTable table{Modulus(n)};
        oracle::NaiveGrid grid(n);
        std::mt19937 rng(3);
        std::uniform_int_distribution<int> dist(0, n * n - 1);
        for (int trial = 0; trial < 50; ++trial) {
            int a = dist(rng), b = dist(rng);
            if (a == b) continue;
            Point pa = Point::from_cell(a, n), pb = Point::from_cell(b, n);
            std::vector<Point> got = blocked_points(pa, pb);
            CHECK(got == blocked_points(pa, pb, table));
            std::vector<Point> brute;
            for (int c = 0; c < n * n; ++c)
                if (c != a && c != b && grid.is_collinear(a, b, c))
                    brute.push_back(Point::from_cell(c, n));
            std::sort(brute.begin(), brute.end());
            CHECK(got == brute);
        }
    }
}
