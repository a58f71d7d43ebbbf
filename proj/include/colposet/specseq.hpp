#pragma once
// The bicomplex of a bundle, its total complex, the comparison map into the sequence
// complex of the total coloured poset, and the spectral sequence of the column filtration.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "colposet/bundle.hpp"

namespace colposet {

/// Generator label x_1..x_p y_1..y_q: a strict sequence in the base below 1 and a
/// multi-sequence in the fibre over x_1 (over 1 when p = 0) below its 1.
struct BiIndex {
    Sequence base;
    Sequence fibre;
    bool operator<(const BiIndex& o) const {
        return base != o.base ? base < o.base : fibre < o.fibre;
    }
    bool operator==(const BiIndex& o) const { return base == o.base && fibre == o.fibre; }
};

using BiChain = std::map<BiIndex, SparseVector>;

struct BicomplexBlock {
    std::vector<BiIndex> gens;
    std::vector<std::size_t> offset;
    std::map<BiIndex, std::size_t> lookup;
    std::size_t dim = 0;
};

using Cell = std::pair<int, int>; // (p, q)

struct Bicomplex {
    Bundle bundle;
    int max_total = 0;                           // blocks exist for p + q <= max_total
    int max_p = 0;                               // longest strict chain in the base below 1
    std::map<Cell, BicomplexBlock> blocks;
    std::map<Cell, ExactMatrix> horizontal;      // keyed by source cell, to (p-1, q)
    std::map<Cell, ExactMatrix> vertical;        // keyed by source cell, to (p, q-1)

    const BicomplexBlock& block(int p, int q) const { return blocks.at({p, q}); }
};

/// The fibre index and the colour dimension of a generator.
std::size_t generator_fibre(const Bundle& b, const BiIndex& g);
std::size_t generator_dim(const Bundle& b, const BiIndex& g);

BiChain horizontal_differential(const Bundle& b, const BiChain& c);
BiChain vertical_differential(const Bundle& b, const BiChain& c);

/// Builds every block with p + q <= max_total and verifies the three identities
/// d^h d^h = d^v d^v = d^h d^v + d^v d^h = 0. Throws VerificationError on failure.
Bicomplex bicomplex(const Bundle& b, int max_total);
/// Re-runs the identity checks.
void check_bicomplex(const Bicomplex& k);

struct TotalComplex {
    FreeChainComplex complex;
    // degree n -> starting coordinate of each block (p, n - p) inside T_n, p ascending
    std::vector<std::map<int, std::size_t>> block_offset;
    /// Coordinates of F_p T_n (blocks with p' <= p), a prefix of T_n.
    std::size_t filtration_size(int n, int p) const;
};

/// T_n = sum of K_{p,n-p} for n <= max_total; homology is valid up to max_total - 1.
TotalComplex total_complex(const Bicomplex& k);

/// Coordinates of a bicomplex chain of total degree n inside T_n.
SparseVector total_coordinates(const Bicomplex& k, const TotalComplex& t, int n, const BiChain& c);
BiChain total_chain(const Bicomplex& k, const TotalComplex& t, int n, const SparseVector& v);

// ---------------------------------------------------------------------------
// The map phi : T -> S(E, F)

/// 1 when q is 1 or 2 mod 4.
int alpha_sign_exponent(int q);

/// One monotone path through the p x q grid, as the visited (column, row) pairs.
struct GridPath {
    std::vector<std::pair<int, int>> cells; // 1-based, ends at (p+1, q) or (p, q+1)
    int lower_right = 0;                    // squares in the lower-right half
};
/// All C(p+q, p) paths, in lexicographic order of their step words.
std::vector<GridPath> grid_paths(int p, int q);

/// phi of a bicomplex chain, as a chain of multi-sequences in the total poset.
SeqChain phi_apply(const Bundle& b, const TotalColouredPoset& e, const BiChain& c);

/// phi_n as matrices into a sequence complex of the total poset (strict: projected
/// to sequences without repeats). Degrees 0..max_total; zero beyond the target's top.
std::map<int, ExactMatrix> phi_matrices(const Bicomplex& k, const TotalComplex& t, const TotalColouredPoset& e,
                                        const SequenceComplex& target);

/// Checks phi d_T = d_S phi on every generator of T_n, n <= max_degree, chain by chain.
/// Throws VerificationError naming the first failing generator. Returns the number of
/// generator-vectors checked.
std::size_t check_phi_chain_map(const Bicomplex& k, const TotalColouredPoset& e, int max_degree);

struct QuasiIsoDegree {
    int n = 0;
    std::size_t total_rank = 0;  // dim H_n(T)
    std::size_t poset_rank = 0;  // dim H_n(E, F)
    std::size_t map_rank = 0;    // rank of the induced map
    bool iso = false;
};

struct QuasiIsoReport {
    bool specially_admissible = false;
    std::vector<QuasiIsoDegree> degrees;
    bool all_iso() const;
};

/// The induced map H_n(T) -> H_n(E, F) for n <= max_degree, through the strict complex
/// (sequences with repeats span an acyclic subcomplex). Fields only. Refuses bases that
/// are not specially admissible unless force is set.
QuasiIsoReport quasi_iso_check(const Bundle& b, int max_degree, bool force = false);

// ---------------------------------------------------------------------------
// Spectral sequence

struct Page {
    int r = 0;
    std::map<Cell, std::size_t> dims;
    std::map<Cell, ExactMatrix> differential; // keyed by source cell, to (p - r, q + r - 1)
};

struct PageSet {
    std::vector<Page> pages;              // r = 0 .. r_max
    std::map<Cell, std::size_t> infinity; // stable page
    int max_degree = 0;                   // cells with p + q <= max_degree are valid
    std::map<int, std::size_t> total_homology; // dim H_n(T) over the window

    const Page& page(int r) const { return pages.at(static_cast<std::size_t>(r)); }
};

/// Pages of the column filtration of T from the subquotients
/// E^r_p = A^r_p / (A^{r-1}_{p-1} + d A^{r-1}_{p+r-1}), A^r_p = {x in F_p : dx in F_{p-r}}.
/// Each page is checked against the homology of the previous one. Fields only.
PageSet spectral_sequence(const Bicomplex& k, int r_max);

/// E^2_{p,q} = H_p(B, H_q of the fibres) for p + q <= max_degree.
std::map<Cell, std::size_t> e2_direct(const Bundle& b, int max_degree);

// ---------------------------------------------------------------------------
// Long exact sequences for a witness x < 1

enum class LesComplex { total, sequence };

struct LesPosition {
    int n = 0;
    std::string at; // "sub", "whole" or "quotient"
    std::size_t kernel = 0;
    std::size_t image = 0;
    bool exact() const { return kernel == image; }
};

struct LesReport {
    std::vector<LesPosition> positions;
    std::map<int, std::size_t> quotient_rank;   // dim H_n(Q)
    std::map<int, std::size_t> interval_rank;   // dim H_{n-1} of the part over B(x)
    bool exact = true;
    bool quotient_matches = true;
    bool specially_admissible = false;
};

/// Splits along the sub-complex of chains starting over the complement of B(x) and checks
/// exactness of the long sequence in degrees <= max_degree, and H_n(Q) = H_{n-1}(E(x) side).
/// x must be a lower cover of 1 witnessing admissibility unless force is set.
LesReport les_check(const Bundle& b, std::size_t x, int max_degree, LesComplex which, bool force = false);

/// Exactness of the long sequence of 0 -> A -> X -> X/A -> 0, A spanned by the listed
/// coordinates, in degrees lo..hi. Fields only.
std::vector<LesPosition> les_exactness(const FreeChainComplex& x, const std::vector<std::vector<std::size_t>>& sub,
                                       int lo, int hi);

} // namespace colposet
