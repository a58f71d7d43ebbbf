#include "doctest.h"

#include <set>

#include "colposet/khovanov.hpp"
#include "khovanov_oracle.hpp"

using namespace colposet;

namespace {

const char* trefoil = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]";
const char* figure_eight = "PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]";
// the trefoil with a positive kink on arc 6
const char* kinked_trefoil = "PD[X[1,4,2,5],X[3,8,4,1],X[5,2,6,3],X[6,8,7,7]]";

std::map<std::pair<int, int>, std::size_t> ranks(const BigradedHomology& h)
{
    std::map<std::pair<int, int>, std::size_t> out;
    for (const auto& [cell, dh] : h.cells)
        if (dh.free_rank)
            out[cell] = dh.free_rank;
    return out;
}

} // namespace

TEST_CASE("PD parsing")
{
    auto d = parse_pd(" PD[ X[1,4,2,5], X[3,6,4,1],\n X[5,2,6,3] ] ");
    CHECK(d.size() == 3);
    CHECK(d.signs == std::vector<int>{-1, -1, -1});
    CHECK(to_pd(d) == trefoil);
    CHECK(parse_pd("PD[X[1,1,2,2]]").signs == std::vector<int>{1});
    CHECK(parse_pd("PD[X[1,2,2,1]]").signs == std::vector<int>{-1});
    CHECK(parse_pd(figure_eight).positive() == 2);
    CHECK(parse_pd(kinked_trefoil).signs == std::vector<int>{-1, -1, -1, 1});
    CHECK(parse_pd("PD[X[1,1,2,2]] orient[-]").signs == std::vector<int>{-1});
    auto u = parse_pd("PD[] circles=2");
    CHECK(u.extra_circles == 2);
    CHECK(resolve(u, 0).count() == 2);

    CHECK_THROWS_AS(parse_pd("PD[]"), InputError);
    CHECK_THROWS_AS(parse_pd("PD[X[1,1,2,3]]"), InputError);
    CHECK_THROWS_AS(parse_pd("PD[X[1,1,2,2]] orient[+,+]"), InputError);
    CHECK_THROWS_AS(parse_pd("X[1,1,2,2]"), InputError);
    CHECK_THROWS_AS(parse_pd("PD[X[1,1,2]]"), InputError);
}

TEST_CASE("resolutions")
{
    auto d = parse_pd(trefoil);
    // all-zero smoothing of this left-handed trefoil: 3 circles; all-one: 2
    CHECK(resolve(d, 0).count() == 3);
    CHECK(resolve(d, 7).count() == 2);
    auto r = resolve(d, 0);
    for (std::size_t i = 1; i < r.count(); ++i)
        CHECK(r.circles[i - 1].front() < r.circles[i].front());
    // merge then split around a kink
    auto k = parse_pd("PD[X[1,1,2,2]]");
    auto q = CoeffRing::rationals();
    auto m = saddle_map(k, q, resolve(k, 0), resolve(k, 1), 0);
    CHECK(m == ExactMatrix::from_dense(q, {{Scalar(1), Scalar(0), Scalar(0), Scalar(0)},
                                           {Scalar(0), Scalar(1), Scalar(1), Scalar(0)}}));
    auto s = saddle_map(parse_pd("PD[X[1,2,2,1]]"), q, resolve(parse_pd("PD[X[1,2,2,1]]"), 0),
                        resolve(parse_pd("PD[X[1,2,2,1]]"), 1), 0);
    CHECK(s == ExactMatrix::from_dense(q, {{Scalar(0), Scalar(0)}, {Scalar(1), Scalar(0)},
                                           {Scalar(1), Scalar(0)}, {Scalar(0), Scalar(1)}}));
}

TEST_CASE("kinks normalise to the unknot")
{
    for (auto r : {CoeffRing::rationals(), CoeffRing::prime_field(2), CoeffRing::integers()}) {
        auto unknot = ranks(normalised_homology(parse_pd("PD[] circles=1"), r));
        std::map<std::pair<int, int>, std::size_t> expect{{{0, 1}, 1}, {{0, -1}, 1}};
        CHECK(unknot == expect);
        auto pos = parse_pd("PD[X[1,1,2,2]]");
        std::map<std::pair<int, int>, std::size_t> raw{{{1, 0}, 1}, {{1, -2}, 1}};
        CHECK(ranks(unnormalised_homology(pos, r)) == raw);
        CHECK(ranks(normalised_homology(pos, r)) == expect);
        CHECK(ranks(normalised_homology(parse_pd("PD[X[1,2,2,1]]"), r)) == expect);
    }
}

TEST_CASE("brute-force oracle agrees on the trefoil and the figure-eight")
{
    auto q = CoeffRing::rationals();
    for (const char* pd : {trefoil, figure_eight, kinked_trefoil, "PD[X[1,1,2,2]]"}) {
        auto d = parse_pd(pd);
        Oracle o{d.crossings};
        auto want = o.homology();
        CHECK(ranks(unnormalised_homology(d, q)) == want);
    }
    CHECK(unnormalised_homology(parse_pd(trefoil), q).total_rank() == 4);
    CHECK(unnormalised_homology(parse_pd(figure_eight), q).total_rank() == 6);

    // left-handed trefoil
    std::map<std::pair<int, int>, std::size_t> t{{{0, -1}, 1}, {{0, -3}, 1}, {{2, -5}, 1}, {{3, -9}, 1}};
    CHECK(ranks(normalised_homology(parse_pd(trefoil), q)) == t);
    CHECK(ranks(normalised_homology(parse_pd(kinked_trefoil), q)) == t);
    // the figure-eight is amphichiral
    auto f = ranks(normalised_homology(parse_pd(figure_eight), q));
    for (const auto& [cell, dim] : f)
        CHECK(f.count({-cell.first, -cell.second}));
    // integral torsion in the trefoil, seen as extra classes over F2
    auto z = normalised_homology(parse_pd(trefoil), CoeffRing::integers());
    CHECK(z.cells.at({2, -7}).torsion == std::vector<mpz_class>{2});
    CHECK(normalised_homology(parse_pd(trefoil), CoeffRing::prime_field(2)).total_rank() == 6);
}

TEST_CASE("Khovanov colouring and the degree bridge")
{
    auto q = CoeffRing::rationals();
    for (const char* pd : {"PD[] circles=1", "PD[X[1,1,2,2]]", trefoil, figure_eight}) {
        auto d = parse_pd(pd);
        auto cp = khovanov_colouring(d, q);
        CHECK(cp.graded());
        CHECK(cp.size() == (std::size_t(1) << d.size()));
        CHECK(degree_bridge(d, q) == 0);
        CHECK(degree_bridge(d, CoeffRing::prime_field(2)) == 0);
    }
    CHECK_THROWS_AS(degree_bridge(parse_pd(trefoil), CoeffRing::integers()), InputError);
}

TEST_CASE("fixed-crossing complex at the extremes")
{
    auto q = CoeffRing::rationals();
    auto d = parse_pd(figure_eight);
    auto kh = ranks(unnormalised_homology(d, q));
    // nothing fixed: the cube itself in row 0
    std::map<TriCell, std::size_t> none, all;
    for (const auto& [cell, dim] : kh) {
        none[{cell.first, 0, cell.second}] = dim;
        all[{0, cell.first, cell.second}] = dim;
    }
    CHECK(fixed_crossing_homology(d, {}, q) == none);
    CHECK(fixed_crossing_homology(d, {0, 1, 2, 3}, q) == all);
    CHECK_THROWS_AS(fixed_crossing_homology(d, {4}, q), InputError);
    CHECK_THROWS_AS(fixed_crossing_homology(d, {1, 1}, q), InputError);
}

TEST_CASE("fixed-crossing homology ignores the order of the free crossings")
{
    for (auto r : {CoeffRing::rationals(), CoeffRing::prime_field(2)}) {
        auto d = parse_pd(figure_eight);
        auto plain = fixed_crossing_homology(fixed_crossing_complex(d, {1}, r));
        CHECK(fixed_crossing_homology(fixed_crossing_complex(d, {1}, r, {3, 0, 2})) == plain);
        CHECK(fixed_crossing_homology(fixed_crossing_complex(d, {1}, r, {2, 3, 0})) == plain);
        CHECK_THROWS_AS(fixed_crossing_complex(d, {1}, r, {0, 2}), InputError);
    }
}

TEST_CASE("spectral sequence of fixed crossings")
{
    for (auto r : {CoeffRing::rationals(), CoeffRing::prime_field(2)}) {
        auto d = parse_pd(trefoil);
        auto kh = unnormalised_homology(d, r);
        std::set<int> js;
        for (const auto& [cell, h] : kh.cells)
            js.insert(cell.second);
        for (std::vector<std::size_t> fixed : {std::vector<std::size_t>{0}, {2}, {0, 1}, {1, 2}})
            for (int j : js) {
                auto run = fixed_crossing_spectral_sequence(d, fixed, j, r);
                CHECK(run.e2_matches);
                CHECK(run.converges);
            }
    }
}

TEST_CASE("a kink as the fixed crossing: one row, collapse")
{
    auto q = CoeffRing::rationals();
    auto d = parse_pd(kinked_trefoil);
    auto kh = unnormalised_homology(d, q);
    for (const auto& [cell, dim] : fixed_crossing_homology(d, {3}, q))
        CHECK(std::get<1>(cell) == 1);
    std::set<int> js;
    for (const auto& [cell, h] : kh.cells)
        js.insert(cell.second);
    for (int j : js) {
        auto run = fixed_crossing_spectral_sequence(d, {3}, j, q);
        CHECK(run.e2_matches);
        CHECK(run.converges);
        for (const auto& [cell, dim] : run.pages.page(2).dims) {
            if (cell.second != 1)
                CHECK(dim == 0);
            CHECK(run.pages.infinity.at(cell) == dim);
        }
    }
}
