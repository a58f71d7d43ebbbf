#include "doctest.h"

#include "colposet/testkit.hpp"

using namespace colposet;

TEST_CASE("generators are deterministic")
{
    GenParams gp;
    gp.seed = 42;
    auto a = random_coloured_poset(gp);
    auto b = random_coloured_poset(gp);
    CHECK(a.poset() == b.poset());
    CHECK(a.dims() == b.dims());
    CHECK(a.cover_maps() == b.cover_maps());

    auto base = boolean_lattice(2);
    auto t1 = total(random_bundle(gp, base));
    auto t2 = total(random_bundle(gp, base));
    CHECK(t1.total.poset() == t2.total.poset());
    CHECK(t1.total.cover_maps() == t2.total.cover_maps());

    Rng r1(7, "x"), r2(7, "y");
    CHECK(r1.next() != r2.next());
}

TEST_CASE("1000 random coloured posets are valid with d^2 = 0")
{
    std::size_t nonzero = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        GenParams gp;
        gp.seed = seed;
        gp.ring = seed % 2 ? CoeffRing::rationals() : CoeffRing::prime_field(2);
        auto cp = random_coloured_poset(gp);
        // rebuilding re-runs the path independence check
        CHECK_NOTHROW(ColouredPoset::build(cp.poset(), cp.ring(), cp.dims(), cp.cover_maps()));
        for (auto d : cp.dims())
            CHECK(d <= gp.max_dim);
        if (seed % 10 == 0) {
            auto c = s_complex(cp, 4);
            for (int k = 1; k + 1 <= 4; ++k)
                CHECK((c.complex.differential(k) * c.complex.differential(k + 1)).is_zero());
        }
        for (auto d : cp.dims())
            nonzero += d != 0;
    }
    CHECK(nonzero > 0);
}

TEST_CASE("200 random bundles over boolean(2) are functorial")
{
    auto base = boolean_lattice(2);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        GenParams gp;
        gp.seed = seed;
        gp.ring = seed % 2 ? CoeffRing::rationals() : CoeffRing::prime_field(2);
        auto b = random_bundle(gp, base);
        CHECK_NOTHROW(Bundle::build(b.base(), b.fibres(), b.cover_morphisms()));
        for (const auto& f : b.fibres())
            CHECK(f.size() <= gp.max_fibre_size);
    }
    GenParams zp;
    zp.ring = CoeffRing::integers();
    CHECK_THROWS_AS(random_bundle(zp, base), InputError);
}
