#pragma once
// Finite posets with a unique maximal element.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "colposet/error.hpp"

namespace colposet {

class Poset {
public:
    Poset() = default;

    /// relations are pairs (a, b) meaning a < b; the order is their transitive closure.
    /// Throws InputError on an empty element set, a cycle, duplicate labels or several
    /// maximal elements.
    static Poset build(std::vector<std::string> labels,
                       const std::vector<std::pair<std::size_t, std::size_t>>& relations);
    static Poset build_labelled(std::vector<std::string> labels,
                                const std::vector<std::pair<std::string, std::string>>& relations);

    std::size_t size() const { return labels_.size(); }
    const std::string& label(std::size_t x) const { return labels_.at(x); }
    const std::vector<std::string>& labels() const { return labels_; }
    std::optional<std::size_t> find(const std::string& label) const;
    std::size_t index_of(const std::string& label) const; // throws InputError

    std::size_t top() const { return top_; }
    std::optional<std::size_t> bottom() const { return bottom_; }

    bool leq(std::size_t a, std::size_t b) const { return leq_[a * size() + b] != 0; }
    bool less(std::size_t a, std::size_t b) const { return a != b && leq(a, b); }

    /// Cover pairs (a, b) with a covered by b, sorted.
    const std::vector<std::pair<std::size_t, std::size_t>>& covers() const { return covers_; }
    bool is_cover(std::size_t a, std::size_t b) const;
    const std::vector<std::size_t>& upper_covers(std::size_t x) const { return up_.at(x); }
    const std::vector<std::size_t>& lower_covers(std::size_t x) const { return down_.at(x); }

    /// A linear extension: Kahn's algorithm taking the smallest index first.
    const std::vector<std::size_t>& topological_order() const { return topo_; }

    /// Number of covers in a longest chain from a minimal element up to x.
    std::size_t depth(std::size_t x) const { return depth_.at(x); }
    /// Number of elements in a longest strict chain of P minus its top.
    std::size_t longest_chain_below_top() const;

    /// Subposet on the listed elements (kept in the given order, labels preserved).
    Poset induced(const std::vector<std::size_t>& subset) const;

    bool operator==(const Poset& o) const { return labels_ == o.labels_ && leq_ == o.leq_; }

private:
    std::vector<std::string> labels_;
    std::vector<char> leq_;
    std::vector<std::pair<std::size_t, std::size_t>> covers_;
    std::vector<std::vector<std::size_t>> up_, down_;
    std::vector<std::size_t> topo_;
    std::vector<std::size_t> depth_;
    std::size_t top_ = 0;
    std::optional<std::size_t> bottom_;
};

/// Subsets of {1..n}; element i is the subset with bitmask i. Labels like "{1,3}".
Poset boolean_lattice(std::size_t n);
/// 1 < 2 < ... < n.
Poset chain(std::size_t n);
/// Bruhat order of the dihedral group of order 2m; labels are reduced words in s, t.
Poset bruhat_dihedral(std::size_t m);
/// Bruhat order of the symmetric group S_n (n <= 5); labels are one-line notation.
Poset bruhat_symmetric(std::size_t n);
/// Componentwise order; element (i, j) has index i * |Q| + j.
Poset product(const Poset& p, const Poset& q);

/// Elements y <= x, in index order.
std::vector<std::size_t> interval_elements(const Poset& p, std::size_t x);
/// Elements not below x, in index order.
std::vector<std::size_t> complement_elements(const Poset& p, std::size_t x);
/// {z in the complement of P(x) : y <= z}.
std::vector<std::size_t> upper_set_off_interval_elements(const Poset& p, std::size_t x, std::size_t y);

Poset interval(const Poset& p, std::size_t x);
Poset complement(const Poset& p, std::size_t x);          // throws InputError if empty
Poset upper_set_off_interval(const Poset& p, std::size_t x, std::size_t y);

/// Element indices refer to the poset the certificate was computed for.
struct AdmissibilityCertificate {
    std::size_t witness = 0;
    std::map<std::size_t, std::size_t> minima; // y in P(x) minus x -> least element of L(y)
    bool boolean_leaf = false;                  // rank-1 Boolean piece, nothing else filled in
    std::shared_ptr<const AdmissibilityCertificate> interval_part, complement_part;
};

/// Tries x covered by the top in index order; first success wins.
std::optional<AdmissibilityCertificate> is_admissible(const Poset& p);
/// Certificate for a specific witness, if it works.
std::optional<AdmissibilityCertificate> admissible_via(const Poset& p, std::size_t x);
/// Recursive search with backtracking over witnesses at every level.
std::optional<AdmissibilityCertificate> is_specially_admissible(const Poset& p);

} // namespace colposet
