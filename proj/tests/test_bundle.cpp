#include "doctest.h"

#include "colposet/testkit.hpp"

using namespace colposet;

namespace {

ExactMatrix mat(CoeffRing r, std::vector<std::vector<int>> rows, std::size_t cols_if_empty = 0)
{
    std::vector<std::vector<Scalar>> q;
    for (auto& row : rows) {
        q.emplace_back();
        for (int v : row)
            q.back().push_back(Scalar(v));
    }
    return ExactMatrix::from_dense(r, q, cols_if_empty);
}

// Same order and same maps on every comparable pair, element by element.
void check_same_colouring(const ColouredPoset& a, const ColouredPoset& b, const std::vector<std::size_t>& iso)
{
    REQUIRE(a.size() == b.size());
    for (std::size_t u = 0; u < a.size(); ++u) {
        CHECK(a.dim(u) == b.dim(iso[u]));
        for (std::size_t v = 0; v < a.size(); ++v) {
            CHECK(a.poset().leq(u, v) == b.poset().leq(iso[u], iso[v]));
            if (a.poset().leq(u, v))
                CHECK(a.map(u, v) == b.map(iso[u], iso[v]));
        }
    }
}

// Two-element fibre 0 < 1 coloured Q^2 -> Q.
ColouredPoset small_fibre(CoeffRing q)
{
    return ColouredPoset::build(Poset::build({"a", "1"}, {{0, 1}}), q, {2, 1}, {{CoverKey{0, 1}, mat(q, {{1, 1}})}});
}

} // namespace

TEST_CASE("product bundle total is the product poset")
{
    auto q = CoeffRing::rationals();
    auto fib = small_fibre(q);
    auto base = chain(2);
    auto t = total(product_bundle(base, fib));
    CHECK(t.total.size() == 4);
    auto prod = product(base, fib.poset());
    // (x, y) has index offset[x] + y in both layouts
    for (std::size_t u = 0; u < 4; ++u)
        for (std::size_t v = 0; v < 4; ++v)
            CHECK(t.total.poset().leq(u, v) == prod.leq(u, v));
    // colouring constant along the base
    CHECK(t.total.map(t.element(0, 0), t.element(1, 0)) == ExactMatrix::identity(q, 2));
    CHECK(t.total.map(t.element(0, 0), t.element(1, 1)) == mat(q, {{1, 1}}));
    CHECK(t.total.poset().top() == t.element(1, 1));
}

TEST_CASE("bundle over boolean(1) glues two fibres")
{
    auto q = CoeffRing::rationals();
    auto f0 = small_fibre(q);
    auto f1 = ColouredPoset::build(Poset::build({"b", "c", "1"}, {{0, 2}, {1, 2}}), q, {1, 1, 1},
                                   {{CoverKey{0, 2}, mat(q, {{1}})}, {CoverKey{1, 2}, mat(q, {{2}})}});
    ColouredPosetMorphism m{{1, 2}, {mat(q, {{3, 3}}), mat(q, {{6}})}};
    auto b = Bundle::build(boolean_lattice(1), {f0, f1}, {{CoverKey{0, 1}, m}});
    auto t = total(b);
    CHECK(t.total.size() == 5);
    // a -> c in the other fibre, then c -> 1
    auto a = t.element(0, 0), c = t.element(1, 1), top = t.element(1, 2);
    CHECK(t.total.poset().leq(a, c));
    CHECK_FALSE(t.total.poset().leq(a, t.element(1, 0)));
    CHECK(t.total.map(a, c) == mat(q, {{3, 3}}));
    CHECK(t.total.map(a, top) == mat(q, {{6, 6}}));
    CHECK(t.total.map(t.element(0, 1), top) == mat(q, {{6}}));
    CHECK(t.total.poset().top() == top);

    // a morphism with a bad shape is rejected
    ColouredPosetMorphism bad{{1, 2}, {mat(q, {{3}}), mat(q, {{6}})}};
    CHECK_THROWS_AS(Bundle::build(boolean_lattice(1), {f0, f1}, {{CoverKey{0, 1}, bad}}), InputError);
}

TEST_CASE("non-functorial square is rejected")
{
    auto q = CoeffRing::rationals();
    auto pt = ColouredPoset::constant(Poset::build({"1"}, {}), q, 1);
    auto square = boolean_lattice(2);
    std::map<CoverKey, ColouredPosetMorphism> m;
    for (auto c : square.covers())
        m.emplace(c, identity_morphism(pt));
    CHECK_NOTHROW(Bundle::build(boolean_lattice(2), std::vector<ColouredPoset>(4, pt), m));
    m[CoverKey{2, 3}].tau[0] = mat(q, {{-1}});
    CHECK_THROWS_AS(Bundle::build(boolean_lattice(2), std::vector<ColouredPoset>(4, pt), m), InputError);
}

TEST_CASE("boolean decomposition reassembles the lattice")
{
    auto f2 = CoeffRing::prime_field(2);
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        GenParams gp;
        gp.seed = seed;
        gp.ring = seed % 2 ? CoeffRing::rationals() : f2;
        Rng rng(seed, "decompose");
        const std::size_t n = 3;
        auto cp = random_colouring(rng, boolean_lattice(n), gp.ring, 3);
        for (std::size_t a = 0; a < 8; ++a) {
            auto b = boolean_decompose(cp, n, a);
            CHECK(b.base().size() == (std::size_t(1) << (n - std::size_t(__builtin_popcountll(a)))));
            auto t = total(b);
            std::vector<std::size_t> iso(t.total.size());
            for (std::size_t e = 0; e < iso.size(); ++e)
                iso[e] = boolean_decompose_original(n, a, t.projection[e], t.fibre_index(e));
            check_same_colouring(t.total, cp, iso);
        }
    }
    auto cp = ColouredPoset::constant(boolean_lattice(2), f2, 1);
    CHECK_THROWS_AS(boolean_decompose(cp, 2, 4), InputError);
    // A empty: one-element fibres; A everything: one fibre
    CHECK(boolean_decompose(cp, 2, 0).fibre(0).size() == 1);
    CHECK(boolean_decompose(cp, 2, 3).base().size() == 1);
}

TEST_CASE("restrictions to an interval and its complement partition the total")
{
    auto base = boolean_lattice(2);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        GenParams gp;
        gp.seed = seed;
        auto b = random_bundle(gp, base);
        auto t = total(b);
        for (auto x : base.lower_covers(base.top())) {
            auto lo = interval_elements(base, x);
            auto hi = complement_elements(base, x);
            auto tl = total(restrict(b, lo));
            auto th = total(restrict(b, hi));
            CHECK(tl.total.size() + th.total.size() == t.total.size());
            // the complement keeps the top of the base
            CHECK(restrict(b, hi).base().label(restrict(b, hi).base().top()) == base.label(base.top()));
            // E(x) is the down-set of the fibre's 1 over x inside E
            auto sub = [&](const TotalColouredPoset& part, const std::vector<std::size_t>& elems) {
                std::vector<std::size_t> iso(part.total.size());
                for (std::size_t e = 0; e < iso.size(); ++e)
                    iso[e] = t.element(elems[part.projection[e]], part.fibre_index(e));
                for (std::size_t u = 0; u < iso.size(); ++u)
                    for (std::size_t v = 0; v < iso.size(); ++v) {
                        CHECK(part.total.poset().leq(u, v) == t.total.poset().leq(iso[u], iso[v]));
                        if (part.total.poset().leq(u, v))
                            CHECK(part.total.map(u, v) == t.total.map(iso[u], iso[v]));
                    }
            };
            sub(tl, lo);
            sub(th, hi);
        }
    }
    CHECK_THROWS_AS(restrict(random_bundle(GenParams{}, base), {0, 1, 2}), InputError);
    CHECK(restrict(random_bundle(GenParams{}, base), {3}).base().size() == 1);
}

TEST_CASE("q-chain and fibre homology colourings")
{
    auto q = CoeffRing::rationals();
    GenParams gp;
    gp.seed = 11;
    auto base = boolean_lattice(2);
    auto b = random_bundle(gp, base);
    auto s0 = q_chain_colouring(b, 0);
    for (std::size_t x = 0; x < base.size(); ++x) {
        const auto& fx = b.fibre(x);
        CHECK(s0.dim(x) == fx.dim(fx.poset().top()));
    }
    for (auto [x, z] : base.covers()) {
        const auto& fx = b.fibre(x);
        CHECK(s0.cover_map(x, z) == b.morphism(x, z).tau[fx.poset().top()]);
    }
    auto s2 = q_chain_colouring(b, 2);
    for (std::size_t x = 0; x < base.size(); ++x)
        CHECK(s2.dim(x) == multi_sequence_bases(b.fibre(x), 2)[2].dim);

    auto fib = small_fibre(q);
    auto prod = product_bundle(base, fib);
    auto h = coloured_homology(fib);
    for (std::size_t k = 0; k < 3; ++k) {
        auto hk = fibre_homology_colouring(prod, k);
        for (std::size_t x = 0; x < base.size(); ++x)
            CHECK(hk.dim(x) == h.rank(static_cast<int>(k)));
        for (auto [x, z] : base.covers())
            CHECK(hk.cover_map(x, z) == ExactMatrix::identity(q, hk.dim(x)));
    }
    CHECK(fibre_homology_colouring(prod, 7).dim(0) == 0);
    auto pz = product_bundle(base, ColouredPoset::constant(fib.poset(), CoeffRing::integers(), 1));
    CHECK_THROWS_AS(fibre_homology_colouring(pz, 0), InputError);
}

TEST_CASE("the total functor on bundle morphisms")
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        GenParams gp;
        gp.seed = seed;
        gp.ring = seed % 2 ? CoeffRing::rationals() : CoeffRing::prime_field(3);
        auto base = seed % 3 ? boolean_lattice(2) : bruhat_dihedral(3);
        auto b = random_bundle(gp, base);
        auto t = total(b);

        auto id = apply_bundle_morphism(identity_bundle_morphism(b), b, b, t, t);
        auto expect = identity_morphism(t.total);
        CHECK(id.f == expect.f);
        for (std::size_t e = 0; e < t.total.size(); ++e)
            CHECK(id.tau[e] == expect.tau[e]);

        auto [triv, collapse] = collapse_to_trivial(b);
        auto tt = total(triv);
        CHECK_NOTHROW(apply_bundle_morphism(collapse, b, triv, t, tt));

        auto scale = scalar_bundle_morphism(b, Scalar(2));
        auto both = compose_bundle_morphisms(scale, collapse);
        auto lhs = apply_bundle_morphism(both, b, triv, t, tt);
        auto rhs = compose_morphisms(apply_bundle_morphism(scale, b, b, t, t), apply_bundle_morphism(collapse, b, triv, t, tt));
        CHECK(lhs.f == rhs.f);
        for (std::size_t e = 0; e < t.total.size(); ++e)
            CHECK(lhs.tau[e] == rhs.tau[e]);
    }
}

TEST_CASE("a broken naturality square is located")
{
    auto q = CoeffRing::rationals();
    auto b = product_bundle(chain(2), small_fibre(q));
    auto m = identity_bundle_morphism(b);
    CHECK_NOTHROW(validate_bundle_morphism(b, b, m));
    m.eta[0].tau[0] = m.eta[0].tau[0].scaled(Scalar(2));
    m.eta[0].tau[1] = m.eta[0].tau[1].scaled(Scalar(2));
    CHECK_THROWS_AS(validate_bundle_morphism(b, b, m), InputError);
}
