#pragma once
// Bundles of coloured posets over a base poset and their total coloured posets.

#include <cstddef>
#include <map>
#include <vector>

#include "colposet/coloured.hpp"

namespace colposet {

class Bundle {
public:
    Bundle() = default;

    /// One fibre per base element and one morphism per base cover. Throws InputError
    /// when a morphism is invalid or two cover paths compose differently.
    static Bundle build(Poset base, std::vector<ColouredPoset> fibres,
                        std::map<CoverKey, ColouredPosetMorphism> cover_morphisms);

    const Poset& base() const { return base_; }
    const CoeffRing& ring() const { return fibres_.front().ring(); }
    const ColouredPoset& fibre(std::size_t x) const { return fibres_.at(x); }
    const std::vector<ColouredPoset>& fibres() const { return fibres_; }
    const std::map<CoverKey, ColouredPosetMorphism>& cover_morphisms() const { return cover_; }
    /// The morphism E_x -> E_z for x <= z (identity when equal).
    const ColouredPosetMorphism& morphism(std::size_t x, std::size_t z) const;

private:
    Poset base_;
    std::vector<ColouredPoset> fibres_;
    std::map<CoverKey, ColouredPosetMorphism> cover_;
    std::vector<std::optional<ColouredPosetMorphism>> composite_;
};

/// Every fibre equal to cp, every morphism the identity.
Bundle product_bundle(const Poset& base, const ColouredPoset& cp);

struct TotalColouredPoset {
    ColouredPoset total;
    std::vector<std::size_t> projection; // total element -> base element
    std::vector<std::size_t> offset;     // base element -> index of its first fibre element

    std::size_t element(std::size_t x, std::size_t y) const { return offset.at(x) + y; }
    std::size_t fibre_index(std::size_t e) const { return e - offset.at(projection.at(e)); }
};

/// Element (x, y) has index offset[x] + y and label "(x,y)".
TotalColouredPoset total(const Bundle& b);

/// Bundle over the subposet of the base on the given elements (which must have a top).
Bundle restrict(const Bundle& b, const std::vector<std::size_t>& elements);

/// Splits a colouring of the Boolean lattice on {1..n} (indexed by bitmask as in
/// boolean_lattice) along the ground subset a_mask: base = subsets of the complement,
/// fibre over Y = {Y u Z : Z subset of a_mask}.
Bundle boolean_decompose(const ColouredPoset& cp, std::size_t n, std::size_t a_mask);
/// The bitmask in the original lattice of total element (base_index, fibre_index).
std::size_t boolean_decompose_original(std::size_t n, std::size_t a_mask, std::size_t base_index,
                                       std::size_t fibre_index);

/// x -> S_q(E_x, F_x).
ColouredPoset q_chain_colouring(const Bundle& b, std::size_t q);
/// x -> H_q(E_x, F_x) with the induced maps. Fields only.
ColouredPoset fibre_homology_colouring(const Bundle& b, std::size_t q);

struct BundleMorphism {
    std::vector<std::size_t> g;              // base map
    std::vector<ColouredPosetMorphism> eta;  // eta[x] : fibre x -> target fibre g(x)
};

/// Throws InputError when g or some eta_x is invalid or a naturality square fails.
void validate_bundle_morphism(const Bundle& src, const Bundle& dst, const BundleMorphism& m);
BundleMorphism identity_bundle_morphism(const Bundle& b);
BundleMorphism compose_bundle_morphisms(const BundleMorphism& first, const BundleMorphism& second);
/// The induced fibre-preserving morphism between total coloured posets.
ColouredPosetMorphism apply_bundle_morphism(const BundleMorphism& m, const Bundle& src, const Bundle& dst,
                                            const TotalColouredPoset& src_total,
                                            const TotalColouredPoset& dst_total);

} // namespace colposet
