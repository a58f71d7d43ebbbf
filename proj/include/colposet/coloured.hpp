#pragma once
// Coloured posets: a poset with 1 together with a functor to free modules.

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "colposet/linalg.hpp"
#include "colposet/poset.hpp"

namespace colposet {

using CoverKey = std::pair<std::size_t, std::size_t>;

class ColouredPoset {
public:
    ColouredPoset() = default;

    /// cover_maps[(x, y)] for every cover x < y, of shape dims[y] x dims[x].
    /// Throws InputError on shape problems or when two cover paths disagree.
    static ColouredPoset build(Poset poset, CoeffRing ring, std::vector<std::size_t> dims,
                               std::map<CoverKey, ExactMatrix> cover_maps);
    /// Every element coloured by R^d, every map the identity.
    static ColouredPoset constant(Poset poset, CoeffRing ring, std::size_t d);

    const Poset& poset() const { return poset_; }
    const CoeffRing& ring() const { return ring_; }
    std::size_t size() const { return poset_.size(); }
    std::size_t dim(std::size_t x) const { return dims_.at(x); }
    const std::vector<std::size_t>& dims() const { return dims_; }
    const ExactMatrix& cover_map(std::size_t x, std::size_t y) const;
    const std::map<CoverKey, ExactMatrix>& cover_maps() const { return cover_maps_; }
    /// F(x <= y); identity when x == y. Throws InputError unless x <= y.
    const ExactMatrix& map(std::size_t x, std::size_t y) const;

    /// Optional grading: an integer degree per basis vector of every F(x). Every cover
    /// map must preserve it.
    ColouredPoset with_grading(std::vector<std::vector<int>> degrees) const;
    bool graded() const { return !degrees_.empty(); }
    const std::vector<int>& degrees(std::size_t x) const { return degrees_.at(x); }
    /// Degrees occurring anywhere, ascending.
    std::vector<int> occurring_degrees() const;
    /// The summand of a graded colouring spanned by basis vectors of degree j.
    ColouredPoset restrict_degree(int j) const;

private:
    Poset poset_;
    CoeffRing ring_ = CoeffRing::rationals();
    std::vector<std::size_t> dims_;
    std::map<CoverKey, ExactMatrix> cover_maps_;
    std::vector<std::optional<ExactMatrix>> composite_; // n*n table
    std::vector<std::vector<int>> degrees_;
};

/// The colouring restricted to the induced subposet on the listed elements (which must
/// have a top). Gradings are carried along.
ColouredPoset induced_colouring(const ColouredPoset& cp, const std::vector<std::size_t>& elements);

/// (f, tau): f an element map, tau[x] : F1(x) -> F2(f(x)).
struct ColouredPosetMorphism {
    std::vector<std::size_t> f;
    std::vector<ExactMatrix> tau;
};

/// Throws InputError naming the first failing condition.
void validate_morphism(const ColouredPoset& src, const ColouredPoset& dst, const ColouredPosetMorphism& m);
ColouredPosetMorphism identity_morphism(const ColouredPoset& cp);
/// second after first.
ColouredPosetMorphism compose_morphisms(const ColouredPosetMorphism& first, const ColouredPosetMorphism& second);

// ---------------------------------------------------------------------------
// The complexes S_* and C_*.

using Sequence = std::vector<std::size_t>;

/// Basis of one chain module: each sequence contributes dim F(x_1) coordinates
/// (dim F(1) for the empty sequence in degree 0).
struct SequenceBasis {
    std::vector<Sequence> sequences;
    std::vector<std::size_t> offset;
    std::map<Sequence, std::size_t> lookup;
    std::size_t dim = 0;

    std::optional<std::size_t> find(const Sequence& s) const;
    void add(Sequence s, std::size_t block);
};

struct SequenceComplex {
    FreeChainComplex complex;
    std::vector<SequenceBasis> bases;
    bool strict = false;
};

/// Sparse chain: sequence -> vector in F(x_1) (F(1) for the empty sequence).
using SeqChain = std::map<Sequence, SparseVector>;

void chain_add(const CoeffRing& ring, SeqChain& acc, const Sequence& s, const Scalar& c, const SparseVector& v);
/// d of the S_* complex applied to a sparse chain.
SeqChain s_differential(const ColouredPoset& cp, const SeqChain& c);
/// Drops sequences with repeats (the projection S_* -> C_*).
SeqChain drop_degenerate(const SeqChain& c);
SparseVector chain_coordinates(const SequenceBasis& basis, const SeqChain& c);
SeqChain chain_from_coordinates(const SequenceBasis& basis, const SparseVector& v);

/// Multi-sequences below 1 of length 0..k_max, lexicographic by index.
std::vector<SequenceBasis> multi_sequence_bases(const ColouredPoset& cp, std::size_t k_max);
/// Strict sequences below 1, all lengths.
std::vector<SequenceBasis> strict_sequence_bases(const ColouredPoset& cp);

SequenceComplex s_complex(const ColouredPoset& cp, std::size_t k_max = 6);
SequenceComplex c_complex(const ColouredPoset& cp);
/// Strict sequences of length at most k_max; truncated when longer ones exist.
SequenceComplex c_complex(const ColouredPoset& cp, std::size_t k_max);

HomologySummary coloured_homology(const ColouredPoset& cp);

/// One degree of the chain map induced by a morphism between the given bases. With
/// strict set, images with repeated entries are dropped.
ExactMatrix sequence_map_degree(const ColouredPoset& src, const ColouredPosetMorphism& m,
                                const SequenceBasis& from, const SequenceBasis& to, bool strict);

/// The chain map induced by a morphism, as matrices between the given complexes
/// (both multi-sequence or both strict; on strict complexes degenerate images vanish).
std::map<int, ExactMatrix> sequence_chain_map(const ColouredPoset& src, const ColouredPoset& dst,
                                              const ColouredPosetMorphism& m, const SequenceComplex& from,
                                              const SequenceComplex& to);

} // namespace colposet
