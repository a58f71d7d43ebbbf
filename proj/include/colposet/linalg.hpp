#pragma once
// Exact linear algebra over F_p, Q and Z, and homology of bounded free chain complexes.
//
// Matrices are stored as sparse rows of GMP rationals kept in the canonical form of
// their ring (residues in [0,p) over F_p, integers over Z, lowest terms over Q).
// Elimination over fields runs in a native field engine; the integer path goes
// through a dense Smith normal form.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "colposet/error.hpp"

namespace colposet {

using Scalar = mpq_class;

class CoeffRing {
public:
    enum class Kind { prime_field, rationals, integers };

    static CoeffRing rationals() { return CoeffRing(Kind::rationals, 0); }
    static CoeffRing integers() { return CoeffRing(Kind::integers, 0); }
    static CoeffRing prime_field(std::uint64_t p);

    /// Accepts "q", "z", "f2" and "fp:<p>".
    static CoeffRing parse(std::string_view text);

    Kind kind() const { return kind_; }
    std::uint64_t characteristic() const { return p_; }
    bool is_field() const { return kind_ != Kind::integers; }
    std::string name() const;

    /// Canonical representative of x in this ring. Throws InputError if x has no image
    /// (a non-integer over Z, or a denominator divisible by p).
    Scalar canonical(const Scalar& x) const;

    bool operator==(const CoeffRing& o) const { return kind_ == o.kind_ && p_ == o.p_; }
    bool operator!=(const CoeffRing& o) const { return !(*this == o); }

private:
    CoeffRing(Kind k, std::uint64_t p) : kind_(k), p_(p) {}
    Kind kind_;
    std::uint64_t p_;
};

struct Entry {
    std::size_t index;
    Scalar value;
    bool operator==(const Entry& o) const { return index == o.index && value == o.value; }
};

/// Sorted by index, no explicit zeros.
using SparseVector = std::vector<Entry>;

class ExactMatrix {
public:
    ExactMatrix() : ring_(CoeffRing::rationals()) {}
    ExactMatrix(CoeffRing ring, std::size_t rows, std::size_t cols);

    static ExactMatrix identity(CoeffRing ring, std::size_t n);
    static ExactMatrix from_dense(CoeffRing ring, const std::vector<std::vector<Scalar>>& rows,
                                  std::size_t cols_if_empty = 0);
    static ExactMatrix from_columns(CoeffRing ring, std::size_t rows,
                                    const std::vector<SparseVector>& columns);

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    const CoeffRing& ring() const { return ring_; }

    Scalar at(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, const Scalar& v);
    void add(std::size_t i, std::size_t j, const Scalar& v);

    const SparseVector& row(std::size_t i) const { return rows_[i]; }
    std::vector<SparseVector> columns() const;

    ExactMatrix operator*(const ExactMatrix& rhs) const;
    ExactMatrix operator+(const ExactMatrix& rhs) const;
    ExactMatrix operator-(const ExactMatrix& rhs) const;
    ExactMatrix scaled(const Scalar& c) const;
    ExactMatrix transpose() const;
    ExactMatrix submatrix(const std::vector<std::size_t>& row_idx,
                          const std::vector<std::size_t>& col_idx) const;
    /// Matrix-vector product in the ring.
    SparseVector apply(const SparseVector& v) const;

    bool is_zero() const;
    std::size_t nonzeros() const;
    bool operator==(const ExactMatrix& o) const;
    bool operator!=(const ExactMatrix& o) const { return !(*this == o); }

    std::vector<std::vector<Scalar>> to_dense() const;
    std::string to_string() const;

private:
    friend class MatrixBuilder;
    CoeffRing ring_;
    std::size_t cols_ = 0;
    std::vector<SparseVector> rows_;
};

/// Collects entries (duplicates are summed) and produces a canonical matrix.
class MatrixBuilder {
public:
    MatrixBuilder(CoeffRing ring, std::size_t rows, std::size_t cols);
    void add(std::size_t i, std::size_t j, const Scalar& v);
    /// Adds v as column j, scaled by c.
    void add_column(std::size_t j, const SparseVector& v, const Scalar& c = 1);
    ExactMatrix build();

private:
    CoeffRing ring_;
    std::size_t cols_;
    std::vector<std::vector<Entry>> rows_;
};

// Sparse vector helpers, all ring-canonical.
SparseVector sparse_axpy(const CoeffRing& ring, const SparseVector& y, const Scalar& a,
                         const SparseVector& x); // y + a*x
SparseVector sparse_from_map(const CoeffRing& ring, const std::map<std::size_t, Scalar>& m);

std::size_t rank(const ExactMatrix& m);

/// Columns form a basis of ker m. Fields only.
ExactMatrix kernel_basis(const ExactMatrix& m);

struct SmithForm {
    ExactMatrix d, u, v; // u * m * v == d
    std::vector<mpz_class> invariant_factors; // nonzero diagonal entries, successive divisibility
};

/// Integer entries only.
SmithForm smith_normal_form(const ExactMatrix& m);

/// Exact determinant (Bareiss); square matrices over Z or Q.
Scalar determinant(const ExactMatrix& m);

/// A subquotient N / D of the ambient free module, D contained in N.
/// The representatives are a basis of a complement of D in N; coordinates() expresses
/// any vector of N modulo D in that basis. Fields only.
class Subquotient {
public:
    Subquotient(CoeffRing ring, std::size_t ambient, const std::vector<SparseVector>& numerator,
                const std::vector<SparseVector>& denominator);

    std::size_t dim() const;
    std::size_t ambient() const { return ambient_; }
    const std::vector<SparseVector>& representatives() const { return reps_; }
    /// Throws VerificationError when v is not in N + D.
    std::vector<Scalar> coordinates(const SparseVector& v) const;
    bool contains(const SparseVector& v) const;

    struct Impl;

private:
    CoeffRing ring_;
    std::size_t ambient_;
    std::vector<SparseVector> reps_;
    std::shared_ptr<const Impl> impl_;
};

/// Nonnegatively graded free complex C_0 ... C_top with d_n : C_n -> C_{n-1}.
/// A truncated complex (for instance S_* cut at k_max) only has valid homology below
/// its top degree.
class FreeChainComplex {
public:
    FreeChainComplex(CoeffRing ring, std::vector<std::size_t> dims,
                     std::map<int, ExactMatrix> differentials, bool truncated = false);

    const CoeffRing& ring() const { return ring_; }
    int top_degree() const { return static_cast<int>(dims_.size()) - 1; }
    /// Highest degree whose homology is determined by the stored data.
    int valid_top() const { return truncated_ ? top_degree() - 1 : top_degree(); }
    bool truncated() const { return truncated_; }
    std::size_t dim(int n) const;
    /// d_n as a dim(n-1) x dim(n) matrix (zero matrix outside the stored range).
    ExactMatrix differential(int n) const;

    /// Keep only the listed coordinates in each degree. If they span a subcomplex this is
    /// that subcomplex; if the complement spans one, this is the quotient by it. Either
    /// way the differential is the corresponding block of d.
    FreeChainComplex restricted(const std::vector<std::vector<std::size_t>>& keep) const;

private:
    CoeffRing ring_;
    std::vector<std::size_t> dims_;
    std::map<int, ExactMatrix> d_;
    bool truncated_;
};

struct DegreeHomology {
    std::size_t free_rank = 0;
    std::vector<mpz_class> torsion; // invariant factors > 1 (integers only)
    bool operator==(const DegreeHomology& o) const {
        return free_rank == o.free_rank && torsion == o.torsion;
    }
};

struct HomologySummary {
    std::map<int, DegreeHomology> degrees;
    std::size_t rank(int n) const;
    std::size_t total_rank() const;
};

HomologySummary complex_homology(const FreeChainComplex& c, int lo, int hi);
HomologySummary complex_homology(const FreeChainComplex& c);

/// Chosen homology basis of C in degree n (field coefficients).
Subquotient homology_model(const FreeChainComplex& c, int n);

/// Throws VerificationError unless f commutes with the differentials wherever both
/// sides are defined.
void check_chain_map(const std::map<int, ExactMatrix>& f, const FreeChainComplex& src,
                     const FreeChainComplex& dst);

/// Matrix of H_n(f) : H_n(src) -> H_n(dst) in the bases of homology_model.
ExactMatrix induced_homology_map(const std::map<int, ExactMatrix>& f, const FreeChainComplex& src,
                                 const FreeChainComplex& dst, int n);
ExactMatrix induced_homology_map(const ExactMatrix& f_n, const Subquotient& src_model,
                                 const Subquotient& dst_model);

std::string scalar_to_string(const Scalar& s);
Scalar parse_scalar(std::string_view text);

} // namespace colposet
