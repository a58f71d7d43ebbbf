#include "doctest.h"

#include "colposet/linalg.hpp"

using namespace colposet;

namespace {

ExactMatrix dense(CoeffRing r, std::vector<std::vector<int>> rows, std::size_t cols_if_empty = 0)
{
    std::vector<std::vector<Scalar>> q;
    for (auto& row : rows) {
        q.emplace_back();
        for (int v : row)
            q.back().push_back(Scalar(v));
    }
    return ExactMatrix::from_dense(r, q, cols_if_empty);
}

} // namespace

TEST_CASE("ring parsing and canonical forms")
{
    CHECK(CoeffRing::parse("q") == CoeffRing::rationals());
    CHECK(CoeffRing::parse("f2").characteristic() == 2);
    CHECK(CoeffRing::parse("fp:7").characteristic() == 7);
    CHECK_THROWS_AS(CoeffRing::parse("fp:8"), InputError);
    CHECK_THROWS_AS(CoeffRing::parse("r"), InputError);
    auto f7 = CoeffRing::prime_field(7);
    CHECK(f7.canonical(Scalar(-1)) == 6);
    CHECK(f7.canonical(Scalar(1, 2)) == 4);
    CHECK_THROWS_AS(f7.canonical(Scalar(1, 7)), InputError);
    CHECK_THROWS_AS(CoeffRing::integers().canonical(Scalar(1, 2)), InputError);
    CHECK(parse_scalar("6/4") == Scalar(3, 2));
}

TEST_CASE("rank examples")
{
    CHECK(rank(ExactMatrix::identity(CoeffRing::prime_field(2), 3)) == 3);
    CHECK(rank(ExactMatrix(CoeffRing::rationals(), 2, 5)) == 0);
    // [[2,4],[1,2]]: second row is half the first
    CHECK(rank(dense(CoeffRing::rationals(), {{2, 4}, {1, 2}})) == 1);
    // over F2 the matrix [[1,1],[1,1]] and [[2,0],[0,1]] both have rank 1
    CHECK(rank(dense(CoeffRing::prime_field(2), {{1, 1}, {1, 1}})) == 1);
    CHECK(rank(dense(CoeffRing::prime_field(2), {{2, 0}, {0, 1}})) == 1);
    CHECK(rank(dense(CoeffRing::integers(), {{2, 0}, {0, 3}})) == 2);
}

TEST_CASE("kernel basis")
{
    auto q = CoeffRing::rationals();
    CHECK(kernel_basis(ExactMatrix::identity(q, 3)).cols() == 0);
    auto k = kernel_basis(ExactMatrix(q, 1, 2));
    CHECK(k.cols() == 2);
    CHECK(rank(k) == 2);

    // multiplication V (x) V -> V on the basis 11, 1x, x1, xx
    auto m = dense(q, {{1, 0, 0, 0}, {0, 1, 1, 0}});
    auto km = kernel_basis(m);
    CHECK(km.cols() == 2);
    CHECK((m * km).is_zero());
    CHECK(rank(km) == 2);

    CHECK_THROWS_AS(kernel_basis(ExactMatrix(CoeffRing::integers(), 1, 2)), InputError);

    auto f3 = CoeffRing::prime_field(3);
    auto a = dense(f3, {{1, 2, 0, 1}, {2, 1, 0, 2}, {0, 0, 1, 1}});
    auto ka = kernel_basis(a);
    CHECK(ka.cols() == 4 - rank(a));
    CHECK((a * ka).is_zero());
}

TEST_CASE("smith normal form")
{
    auto z = CoeffRing::integers();
    auto m = dense(z, {{2, 0}, {0, 3}});
    auto s = smith_normal_form(m);
    CHECK(s.d == dense(z, {{1, 0}, {0, 6}}));
    CHECK(s.u * m * s.v == s.d);
    CHECK(abs(determinant(s.u)) == 1);
    CHECK(abs(determinant(s.v)) == 1);
    CHECK(s.invariant_factors == std::vector<mpz_class>{1, 6});

    auto id = ExactMatrix::identity(z, 3);
    CHECK(smith_normal_form(id).d == id);
    auto zero = ExactMatrix(z, 2, 3);
    CHECK(smith_normal_form(zero).d == zero);

    auto g = dense(z, {{4, 6, 2}, {2, 8, 10}, {6, 14, 13}});
    auto sg = smith_normal_form(g);
    CHECK(sg.u * g * sg.v == sg.d);
    for (std::size_t k = 1; k < sg.invariant_factors.size(); ++k)
        CHECK(sg.invariant_factors[k] % sg.invariant_factors[k - 1] == 0);
    // product of invariant factors up to sign is |det| when nonsingular
    mpz_class prod = 1;
    for (auto& f : sg.invariant_factors)
        prod *= f;
    CHECK(Scalar(prod) == abs(determinant(g)));
}

TEST_CASE("homology of small complexes")
{
    auto z = CoeffRing::integers();
    // 0 -> Z --x2--> Z -> 0
    FreeChainComplex c(z, {1, 1}, {{1, dense(z, {{2}})}});
    auto h = complex_homology(c);
    CHECK(h.degrees[0].free_rank == 0);
    CHECK(h.degrees[0].torsion == std::vector<mpz_class>{2});
    CHECK(h.degrees[1].free_rank == 0);
    CHECK(h.degrees[1].torsion.empty());

    auto q = CoeffRing::rationals();
    FreeChainComplex flat(q, {2, 3, 1}, {});
    auto hf = complex_homology(flat);
    CHECK(hf.rank(0) == 2);
    CHECK(hf.rank(1) == 3);
    CHECK(hf.rank(2) == 1);

    CHECK_THROWS_AS(FreeChainComplex(q, {1, 1, 1}, {{1, dense(q, {{1}})}, {2, dense(q, {{1}})}}),
                    VerificationError);
    CHECK_THROWS_AS(FreeChainComplex(q, {1, 2}, {{1, dense(q, {{1}})}}), InputError);
}

TEST_CASE("rational ranks agree with the free part of the integral computation")
{
    auto z = CoeffRing::integers();
    auto q = CoeffRing::rationals();
    auto d1 = dense(z, {{1, -1, 0}, {0, 2, -2}});
    auto d2 = dense(z, {{2}, {2}, {2}});
    FreeChainComplex cz(z, {2, 3, 1}, {{1, d1}, {2, d2}});
    FreeChainComplex cq(q, {2, 3, 1}, {{1, dense(q, {{1, -1, 0}, {0, 2, -2}})}, {2, dense(q, {{2}, {2}, {2}})}});
    auto hz = complex_homology(cz);
    auto hq = complex_homology(cq);
    for (int n = 0; n <= 2; ++n)
        CHECK(hz.rank(n) == hq.rank(n));
    CHECK(hz.degrees[1].torsion == std::vector<mpz_class>{2});
    CHECK(hz.degrees[0].torsion == std::vector<mpz_class>{2});
}

TEST_CASE("induced maps on homology")
{
    auto q = CoeffRing::rationals();
    FreeChainComplex c(q, {2, 1}, {{1, dense(q, {{1}, {1}})}});
    std::map<int, ExactMatrix> id{{0, ExactMatrix::identity(q, 2)}, {1, ExactMatrix::identity(q, 1)}};
    auto h0 = induced_homology_map(id, c, c, 0);
    CHECK(h0 == ExactMatrix::identity(q, 1));
    std::map<int, ExactMatrix> zero{{0, ExactMatrix(q, 2, 2)}, {1, ExactMatrix(q, 1, 1)}};
    CHECK(induced_homology_map(zero, c, c, 0).is_zero());

    // merge of two circles: V(x)V -> V, single-degree complexes
    FreeChainComplex two(q, {4}, {});
    FreeChainComplex one(q, {2}, {});
    auto m = dense(q, {{1, 0, 0, 0}, {0, 1, 1, 0}});
    auto hm = induced_homology_map({{0, m}}, two, one, 0);
    CHECK(hm == m);

    // not a chain map
    std::map<int, ExactMatrix> bad{{0, dense(q, {{1, 0}, {0, 0}})}, {1, ExactMatrix::identity(q, 1)}};
    CHECK_THROWS_AS(induced_homology_map(bad, c, c, 0), VerificationError);
}

TEST_CASE("subquotient coordinates")
{
    auto f2 = CoeffRing::prime_field(2);
    // numerator: everything in F2^3, denominator: span(1,1,0)
    std::vector<SparseVector> num{{{0, 1}}, {{1, 1}}, {{2, 1}}};
    std::vector<SparseVector> den{{{0, 1}, {1, 1}}};
    Subquotient s(f2, 3, num, den);
    CHECK(s.dim() == 2);
    auto a = s.coordinates({{0, 1}});
    auto b = s.coordinates({{1, 1}});
    CHECK(a == b);
    CHECK(s.coordinates({{0, 1}, {1, 1}}) == std::vector<Scalar>{0, 0});
    Subquotient t(f2, 3, {{{0, 1}}}, {});
    CHECK_FALSE(t.contains({{1, 1}}));
    CHECK_THROWS_AS(t.coordinates({{1, 1}}), VerificationError);
}
