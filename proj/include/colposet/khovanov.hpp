#pragma once
// Link diagrams in PD form, the Khovanov cube and colouring, and homology with respect
// to a set of fixed crossings.

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "colposet/specseq.hpp"

namespace colposet {

struct LinkDiagram {
    // slots listed counterclockwise from the incoming under-strand
    std::vector<std::array<int, 4>> crossings;
    std::size_t extra_circles = 0;  // split unknotted components without crossings
    std::vector<int> signs;         // +1 / -1 per crossing

    std::size_t size() const { return crossings.size(); }
    std::size_t positive() const;
    std::size_t negative() const;
};

/// Text like "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]", optionally followed by
/// "circles=k" (extra split unknots; required for PD[]) and "orient[+,-,...]"
/// (crossing signs, overriding the ones read off the strand directions).
LinkDiagram parse_pd(std::string_view text);
std::string to_pd(const LinkDiagram& d);

struct Resolution {
    std::size_t alpha = 0;                // bit c set: crossing c is 1-smoothed
    std::vector<std::vector<int>> circles; // arc labels, sorted by least label; extra circles are empty
    std::map<int, std::size_t> circle_of_arc;

    std::size_t count() const { return circles.size(); }
    std::size_t rank() const;
};

/// 0-smoothing joins slots (1,2) and (3,4); 1-smoothing joins (1,4) and (2,3).
Resolution resolve(const LinkDiagram& d, std::size_t alpha);

/// Merge or split along crossing c (not in the source resolution), on tensor bases
/// indexed by bitmasks over circles (bit set: the generator of degree -1). No sign.
ExactMatrix saddle_map(const LinkDiagram& d, const CoeffRing& ring, const Resolution& from, const Resolution& to,
                       std::size_t c);

/// q-degree of a tensor basis vector: +1 / -1 per factor, plus the rank shift.
int tensor_degree(std::size_t mask, std::size_t factors, std::size_t shift);

struct GradedComplex {
    FreeChainComplex complex{CoeffRing::rationals(), {0}, {}};
    std::vector<std::vector<int>> qdeg; // per homological degree, per coordinate
    /// The summand of q-degree j.
    FreeChainComplex strand(int j) const;
    std::vector<int> occurring() const;
};

/// Homological degree i = N - rk(alpha); edge alpha -> alpha + c carries the sign
/// (-1)^{#{c' in alpha : c' < c}}.
GradedComplex cube_complex(const LinkDiagram& d, const CoeffRing& ring);

struct BigradedHomology {
    std::map<std::pair<int, int>, DegreeHomology> cells; // (i, j), nonzero only
    std::size_t rank(int i, int j) const;
    std::size_t total_rank() const;
};

BigradedHomology unnormalised_homology(const LinkDiagram& d, const CoeffRing& ring);
/// KH_{i,j} = unnormalised_{i + N+, j - N+ + 2 N-}.
BigradedHomology normalised_homology(const LinkDiagram& d, const CoeffRing& ring);

/// Boolean lattice on the crossings (bitmask indices), F(alpha) = V^{k_alpha} graded by
/// q-degree, cover maps the unsigned merges and splits.
ColouredPoset khovanov_colouring(const LinkDiagram& d, const CoeffRing& ring);

/// The shift s with H_n(B_N, F_D) in q-degree j equal to the unnormalised group (n - s, j).
/// Throws VerificationError when no uniform shift matches. Fields only.
int degree_bridge(const LinkDiagram& d, const CoeffRing& ring);

using TriCell = std::tuple<int, int, int>; // (p, q, j)

struct TriGradedComplex {
    CoeffRing ring = CoeffRing::rationals();
    std::vector<std::size_t> fixed, free;   // crossing indices, in the given order
    /// vertex x (bitmask over free crossings) -> dim V_{q,j}(x)
    std::vector<std::map<std::pair<int, int>, std::size_t>> vertex_dims;
    /// For each (q, j): the complex over p = l - rk(x) with differential of degree -1.
    std::map<std::pair<int, int>, FreeChainComplex> strands;
};

/// Free crossings are the rest, in index order. Fields only.
TriGradedComplex fixed_crossing_complex(const LinkDiagram& d, const std::vector<std::size_t>& fixed,
                                        const CoeffRing& ring, const std::vector<std::size_t>& free_order = {});
std::map<TriCell, std::size_t> fixed_crossing_homology(const TriGradedComplex& k);
std::map<TriCell, std::size_t> fixed_crossing_homology(const LinkDiagram& d, const std::vector<std::size_t>& fixed,
                                                       const CoeffRing& ring);

struct FixedCrossingRun {
    int j = 0;
    int shift = 0;
    PageSet pages;
    std::map<Cell, std::size_t> e2_expected; // from fixed_crossing_homology
    std::map<int, std::size_t> unnormalised; // dim of the unnormalised group (n, j)
    bool e2_matches = true;
    bool converges = true;
};

/// The spectral sequence of the bundle obtained by splitting the q-degree j part of the
/// Khovanov colouring along the fixed crossings, compared with fixed_crossing_homology on
/// page 2 and with the unnormalised homology at infinity.
FixedCrossingRun fixed_crossing_spectral_sequence(const LinkDiagram& d, const std::vector<std::size_t>& fixed, int j,
                                                  const CoeffRing& ring, int r_max = 3);

} // namespace colposet
