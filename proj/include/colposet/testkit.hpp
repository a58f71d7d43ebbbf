#pragma once
// Deterministic random coloured posets and bundles for property runs.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "colposet/bundle.hpp"

namespace colposet {

struct GenParams {
    std::uint64_t seed = 1;
    std::size_t max_fibre_size = 4; // elements per fibre, including its top
    std::size_t max_dim = 3;        // bound on every module dimension
    CoeffRing ring = CoeffRing::rationals();
};

/// A generator keyed by (seed, path): the same pair always yields the same stream.
class Rng {
public:
    Rng(std::uint64_t seed, std::string_view path);

    std::uint64_t next() { return engine_(); }
    /// Uniform in [lo, hi].
    std::size_t uniform(std::size_t lo, std::size_t hi);
    bool coin(double p);
    /// Random element of the ring (small values over Q).
    Scalar scalar(const CoeffRing& ring);

private:
    std::mt19937_64 engine_;
};

/// n elements; a random order on the first n-1 with the last element on top of all.
Poset random_poset_with_top(Rng& rng, std::size_t n);

/// Random colouring of p by subquotients of a fixed ambient space of dimension
/// ambient_dim: F(e) = U_e / K_e with U_e and K_e growing along the order. Fields only.
ColouredPoset random_colouring(Rng& rng, const Poset& p, const CoeffRing& ring, std::size_t ambient_dim);

ColouredPoset random_coloured_poset(const GenParams& params, std::string_view path = "coloured");
Bundle random_bundle(const GenParams& params, const Poset& base, std::string_view path = "bundle");

/// Bundle morphism onto the product bundle with fibre 0 < 1 coloured by zero modules:
/// every fibre collapses onto its 0.
std::pair<Bundle, BundleMorphism> collapse_to_trivial(const Bundle& b);
/// Identity on the base, fibrewise multiplication by c on every module.
BundleMorphism scalar_bundle_morphism(const Bundle& b, const Scalar& c);

} // namespace colposet
