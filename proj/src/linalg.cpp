#include "colposet/linalg.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace colposet {

namespace {

bool is_prime(std::uint64_t p)
{
    if (p < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

mpz_class mod_floor(const mpz_class& a, std::uint64_t p)
{
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), p);
    return r;
}

// ---------------------------------------------------------------------------
// Field engines used for elimination. Vectors are sorted (index, value) lists.

struct PrimeField {
    using T = std::uint64_t;
    std::uint64_t p;

    T from(const Scalar& s) const { return s.get_num().get_ui(); }
    Scalar to(T v) const { return Scalar(mpz_class(static_cast<unsigned long>(v))); }
    bool is_zero(T v) const { return v == 0; }
    T add(T a, T b) const
    {
        T s = a + b;
        return s >= p ? s - p : s;
    }
    T sub(T a, T b) const { return a >= b ? a - b : a + (p - b); }
    T mul(T a, T b) const
    {
        return static_cast<T>((static_cast<unsigned __int128>(a) * b) % p);
    }
    T neg(T a) const { return a == 0 ? 0 : p - a; }
    T inv(T a) const
    {
        // a^(p-2) mod p
        T result = 1, base = a, e = p - 2;
        while (e) {
            if (e & 1)
                result = mul(result, base);
            base = mul(base, base);
            e >>= 1;
        }
        return result;
    }
};

struct RationalField {
    using T = mpq_class;

    const T& from(const Scalar& s) const { return s; }
    const Scalar& to(const T& v) const { return v; }
    bool is_zero(const T& v) const { return sgn(v) == 0; }
    T add(const T& a, const T& b) const { return a + b; }
    T sub(const T& a, const T& b) const { return a - b; }
    T mul(const T& a, const T& b) const { return a * b; }
    T neg(const T& a) const { return -a; }
    T inv(const T& a) const { return 1 / a; }
};

template <class F>
using FVec = std::vector<std::pair<std::size_t, typename F::T>>;

template <class F>
FVec<F> to_field(const F& f, const SparseVector& v)
{
    FVec<F> out;
    out.reserve(v.size());
    for (const auto& e : v)
        out.emplace_back(e.index, f.from(e.value));
    return out;
}

template <class F>
SparseVector from_field(const F& f, const FVec<F>& v)
{
    SparseVector out;
    out.reserve(v.size());
    for (const auto& [i, x] : v)
        out.push_back(Entry{i, f.to(x)});
    return out;
}

// y - c*x
template <class F>
FVec<F> sub_scaled(const F& f, const FVec<F>& y, const typename F::T& c, const FVec<F>& x)
{
    FVec<F> out;
    out.reserve(y.size() + x.size());
    std::size_t i = 0, j = 0;
    while (i < y.size() || j < x.size()) {
        if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
            out.push_back(y[i++]);
        } else if (i == y.size() || x[j].first < y[i].first) {
            out.emplace_back(x[j].first, f.neg(f.mul(c, x[j].second)));
            ++j;
        } else {
            auto v = f.sub(y[i].second, f.mul(c, x[j].second));
            if (!f.is_zero(v))
                out.emplace_back(y[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

template <class F>
void scale_in_place(const F& f, FVec<F>& v, const typename F::T& c)
{
    for (auto& e : v)
        e.second = f.mul(e.second, c);
}

// Row echelon structure keyed by leading index. Rows are normalised to lead 1.
template <class F>
class Echelon {
public:
    Echelon(F f, std::size_t ambient) : f_(std::move(f)), pivot_(ambient, -1) {}

    template <class OnUse>
    void reduce(FVec<F>& v, OnUse&& on_use) const
    {
        while (!v.empty()) {
            long r = pivot_[v.front().first];
            if (r < 0)
                return;
            typename F::T c = v.front().second;
            v = sub_scaled(f_, v, c, rows_[r]);
            on_use(static_cast<std::size_t>(r), c);
        }
    }

    void reduce(FVec<F>& v) const
    {
        reduce(v, [](std::size_t, const typename F::T&) {});
    }

    /// v must already be reduced and nonzero. Returns the normalisation factor applied.
    typename F::T insert_reduced(FVec<F> v)
    {
        auto c = f_.inv(v.front().second);
        scale_in_place(f_, v, c);
        pivot_[v.front().first] = static_cast<long>(rows_.size());
        rows_.push_back(std::move(v));
        return c;
    }

    bool insert(FVec<F> v)
    {
        reduce(v);
        if (v.empty())
            return false;
        insert_reduced(std::move(v));
        return true;
    }

    std::size_t size() const { return rows_.size(); }
    const FVec<F>& row(std::size_t r) const { return rows_[r]; }
    const F& field() const { return f_; }

private:
    F f_;
    std::vector<FVec<F>> rows_;
    std::vector<long> pivot_;
};

template <class Fn>
auto with_field(const CoeffRing& ring, Fn&& fn)
{
    if (ring.kind() == CoeffRing::Kind::prime_field)
        return fn(PrimeField{ring.characteristic()});
    return fn(RationalField{});
}

template <class F>
std::size_t rank_impl(const F& f, const ExactMatrix& m)
{
    Echelon<F> ech(f, m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        ech.insert(to_field(f, m.row(i)));
    return ech.size();
}

template <class F>
std::vector<SparseVector> kernel_impl(const F& f, const ExactMatrix& m)
{
    auto cols = m.columns();
    Echelon<F> ech(f, m.rows());
    std::vector<FVec<F>> tags;
    std::vector<SparseVector> kernel;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        FVec<F> v = to_field(f, cols[j]);
        FVec<F> tag;
        tag.emplace_back(j, f.from(Scalar(1)));
        ech.reduce(v, [&](std::size_t r, const typename F::T& c) { tag = sub_scaled(f, tag, c, tags[r]); });
        if (v.empty()) {
            kernel.push_back(from_field(f, tag));
        } else {
            auto c = ech.insert_reduced(std::move(v));
            scale_in_place(f, tag, c);
            tags.push_back(std::move(tag));
        }
    }
    return kernel;
}

} // namespace

// ---------------------------------------------------------------------------
// CoeffRing

CoeffRing CoeffRing::prime_field(std::uint64_t p)
{
    if (!is_prime(p) || p >= (std::uint64_t(1) << 62))
        throw InputError("characteristic " + std::to_string(p) + " is not a supported prime");
    return CoeffRing(Kind::prime_field, p);
}

CoeffRing CoeffRing::parse(std::string_view text)
{
    if (text == "q")
        return rationals();
    if (text == "z")
        return integers();
    if (text == "f2")
        return prime_field(2);
    if (text.substr(0, 3) == "fp:") {
        std::string digits(text.substr(3));
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw InputError("bad ring selector '" + std::string(text) + "'");
        return prime_field(std::stoull(digits));
    }
    throw InputError("bad ring selector '" + std::string(text) + "' (expected q, z, f2 or fp:<p>)");
}

std::string CoeffRing::name() const
{
    switch (kind_) {
    case Kind::rationals:
        return "q";
    case Kind::integers:
        return "z";
    case Kind::prime_field:
        return p_ == 2 ? "f2" : "fp:" + std::to_string(p_);
    }
    return "?";
}

Scalar CoeffRing::canonical(const Scalar& x) const
{
    switch (kind_) {
    case Kind::rationals:
        return x;
    case Kind::integers:
        if (x.get_den() != 1)
            throw InputError("non-integer value " + scalar_to_string(x) + " over Z");
        return x;
    case Kind::prime_field: {
        mpz_class num = mod_floor(x.get_num(), p_);
        mpz_class den = mod_floor(x.get_den(), p_);
        if (den == 0)
            throw InputError("denominator of " + scalar_to_string(x) + " vanishes mod " + std::to_string(p_));
        if (den != 1) {
            PrimeField f{p_};
            num = mpz_class(static_cast<unsigned long>(
                f.mul(num.get_ui(), f.inv(den.get_ui()))));
        }
        return Scalar(num);
    }
    }
    return x;
}

// ---------------------------------------------------------------------------
// Sparse vectors

SparseVector sparse_axpy(const CoeffRing& ring, const SparseVector& y, const Scalar& a,
                         const SparseVector& x)
{
    SparseVector out;
    out.reserve(y.size() + x.size());
    std::size_t i = 0, j = 0;
    while (i < y.size() || j < x.size()) {
        if (j == x.size() || (i < y.size() && y[i].index < x[j].index)) {
            out.push_back(y[i++]);
        } else if (i == y.size() || x[j].index < y[i].index) {
            Scalar v = ring.canonical(a * x[j].value);
            if (sgn(v) != 0)
                out.push_back(Entry{x[j].index, std::move(v)});
            ++j;
        } else {
            Scalar v = ring.canonical(y[i].value + a * x[j].value);
            if (sgn(v) != 0)
                out.push_back(Entry{y[i].index, std::move(v)});
            ++i;
            ++j;
        }
    }
    return out;
}

SparseVector sparse_from_map(const CoeffRing& ring, const std::map<std::size_t, Scalar>& m)
{
    SparseVector out;
    for (const auto& [i, v] : m) {
        Scalar c = ring.canonical(v);
        if (sgn(c) != 0)
            out.push_back(Entry{i, std::move(c)});
    }
    return out;
}

namespace {

// Combine unsorted (index, value) pairs into a canonical sparse vector.
SparseVector combine(const CoeffRing& ring, std::vector<Entry>& terms)
{
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Entry& a, const Entry& b) { return a.index < b.index; });
    SparseVector out;
    std::size_t i = 0;
    while (i < terms.size()) {
        std::size_t j = i;
        Scalar acc = 0;
        while (j < terms.size() && terms[j].index == terms[i].index)
            acc += terms[j++].value;
        acc = ring.canonical(acc);
        if (sgn(acc) != 0)
            out.push_back(Entry{terms[i].index, std::move(acc)});
        i = j;
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// ExactMatrix

ExactMatrix::ExactMatrix(CoeffRing ring, std::size_t rows, std::size_t cols)
    : ring_(ring), cols_(cols), rows_(rows)
{
}

ExactMatrix ExactMatrix::identity(CoeffRing ring, std::size_t n)
{
    ExactMatrix m(ring, n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.rows_[i].push_back(Entry{i, Scalar(1)});
    return m;
}

ExactMatrix ExactMatrix::from_dense(CoeffRing ring, const std::vector<std::vector<Scalar>>& rows,
                                    std::size_t cols_if_empty)
{
    std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
    ExactMatrix m(ring, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw InputError("ragged matrix rows");
        for (std::size_t j = 0; j < cols; ++j) {
            Scalar v = ring.canonical(rows[i][j]);
            if (sgn(v) != 0)
                m.rows_[i].push_back(Entry{j, std::move(v)});
        }
    }
    return m;
}

ExactMatrix ExactMatrix::from_columns(CoeffRing ring, std::size_t rows,
                                      const std::vector<SparseVector>& columns)
{
    ExactMatrix m(ring, rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (const auto& e : columns[j]) {
            if (e.index >= rows)
                throw InputError("column entry out of range");
            Scalar v = ring.canonical(e.value);
            if (sgn(v) != 0)
                m.rows_[e.index].push_back(Entry{j, std::move(v)});
        }
    return m;
}

Scalar ExactMatrix::at(std::size_t i, std::size_t j) const
{
    const auto& r = rows_.at(i);
    auto it = std::lower_bound(r.begin(), r.end(), j,
                               [](const Entry& e, std::size_t k) { return e.index < k; });
    if (it != r.end() && it->index == j)
        return it->value;
    return 0;
}

void ExactMatrix::set(std::size_t i, std::size_t j, const Scalar& v)
{
    if (j >= cols_)
        throw InputError("matrix column out of range");
    auto& r = rows_.at(i);
    Scalar c = ring_.canonical(v);
    auto it = std::lower_bound(r.begin(), r.end(), j,
                               [](const Entry& e, std::size_t k) { return e.index < k; });
    if (it != r.end() && it->index == j) {
        if (sgn(c) == 0)
            r.erase(it);
        else
            it->value = std::move(c);
    } else if (sgn(c) != 0) {
        r.insert(it, Entry{j, std::move(c)});
    }
}

void ExactMatrix::add(std::size_t i, std::size_t j, const Scalar& v)
{
    set(i, j, at(i, j) + v);
}

std::vector<SparseVector> ExactMatrix::columns() const
{
    std::vector<SparseVector> cols(cols_);
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (const auto& e : rows_[i])
            cols[e.index].push_back(Entry{i, e.value});
    return cols;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& rhs) const
{
    if (cols_ != rhs.rows())
        throw InputError("matrix product shape mismatch: " + std::to_string(rows()) + "x" +
                         std::to_string(cols_) + " times " + std::to_string(rhs.rows()) + "x" +
                         std::to_string(rhs.cols()));
    ExactMatrix out(ring_, rows(), rhs.cols());
    std::vector<Entry> terms;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        terms.clear();
        for (const auto& a : rows_[i])
            for (const auto& b : rhs.rows_[a.index])
                terms.push_back(Entry{b.index, a.value * b.value});
        out.rows_[i] = combine(ring_, terms);
    }
    return out;
}

ExactMatrix ExactMatrix::operator+(const ExactMatrix& rhs) const
{
    if (rows() != rhs.rows() || cols_ != rhs.cols())
        throw InputError("matrix sum shape mismatch");
    ExactMatrix out(ring_, rows(), cols_);
    for (std::size_t i = 0; i < rows_.size(); ++i)
        out.rows_[i] = sparse_axpy(ring_, rows_[i], Scalar(1), rhs.rows_[i]);
    return out;
}

ExactMatrix ExactMatrix::operator-(const ExactMatrix& rhs) const
{
    if (rows() != rhs.rows() || cols_ != rhs.cols())
        throw InputError("matrix difference shape mismatch");
    ExactMatrix out(ring_, rows(), cols_);
    for (std::size_t i = 0; i < rows_.size(); ++i)
        out.rows_[i] = sparse_axpy(ring_, rows_[i], Scalar(-1), rhs.rows_[i]);
    return out;
}

ExactMatrix ExactMatrix::scaled(const Scalar& c) const
{
    ExactMatrix out(ring_, rows(), cols_);
    for (std::size_t i = 0; i < rows_.size(); ++i)
        out.rows_[i] = sparse_axpy(ring_, {}, c, rows_[i]);
    return out;
}

ExactMatrix ExactMatrix::transpose() const
{
    ExactMatrix out(ring_, cols_, rows());
    out.rows_ = columns();
    return out;
}

ExactMatrix ExactMatrix::submatrix(const std::vector<std::size_t>& row_idx,
                                   const std::vector<std::size_t>& col_idx) const
{
    std::vector<long> col_map(cols_, -1);
    for (std::size_t k = 0; k < col_idx.size(); ++k)
        col_map.at(col_idx[k]) = static_cast<long>(k);
    ExactMatrix out(ring_, row_idx.size(), col_idx.size());
    for (std::size_t k = 0; k < row_idx.size(); ++k) {
        std::vector<Entry> terms;
        for (const auto& e : rows_.at(row_idx[k]))
            if (col_map[e.index] >= 0)
                terms.push_back(Entry{static_cast<std::size_t>(col_map[e.index]), e.value});
        out.rows_[k] = combine(ring_, terms);
    }
    return out;
}

SparseVector ExactMatrix::apply(const SparseVector& v) const
{
    SparseVector out;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const auto& r = rows_[i];
        Scalar acc = 0;
        std::size_t a = 0, b = 0;
        while (a < r.size() && b < v.size()) {
            if (r[a].index < v[b].index)
                ++a;
            else if (v[b].index < r[a].index)
                ++b;
            else
                acc += r[a++].value * v[b++].value;
        }
        acc = ring_.canonical(acc);
        if (sgn(acc) != 0)
            out.push_back(Entry{i, std::move(acc)});
    }
    return out;
}

bool ExactMatrix::is_zero() const
{
    return std::all_of(rows_.begin(), rows_.end(), [](const SparseVector& r) { return r.empty(); });
}

std::size_t ExactMatrix::nonzeros() const
{
    std::size_t n = 0;
    for (const auto& r : rows_)
        n += r.size();
    return n;
}

bool ExactMatrix::operator==(const ExactMatrix& o) const
{
    if (rows() != o.rows() || cols_ != o.cols_ || ring_ != o.ring_)
        return false;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i].size() != o.rows_[i].size())
            return false;
        for (std::size_t k = 0; k < rows_[i].size(); ++k)
            if (rows_[i][k].index != o.rows_[i][k].index || rows_[i][k].value != o.rows_[i][k].value)
                return false;
    }
    return true;
}

std::vector<std::vector<Scalar>> ExactMatrix::to_dense() const
{
    std::vector<std::vector<Scalar>> out(rows(), std::vector<Scalar>(cols_, Scalar(0)));
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (const auto& e : rows_[i])
            out[i][e.index] = e.value;
    return out;
}

std::string ExactMatrix::to_string() const
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows(); ++i) {
        os << (i ? "," : "") << "[";
        for (std::size_t j = 0; j < cols_; ++j)
            os << (j ? "," : "") << scalar_to_string(at(i, j));
        os << "]";
    }
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------------------
// MatrixBuilder

MatrixBuilder::MatrixBuilder(CoeffRing ring, std::size_t rows, std::size_t cols)
    : ring_(ring), cols_(cols), rows_(rows)
{
}

void MatrixBuilder::add(std::size_t i, std::size_t j, const Scalar& v)
{
    if (i >= rows_.size() || j >= cols_)
        throw InputError("matrix builder index out of range");
    if (sgn(v) != 0)
        rows_[i].push_back(Entry{j, v});
}

void MatrixBuilder::add_column(std::size_t j, const SparseVector& v, const Scalar& c)
{
    for (const auto& e : v)
        add(e.index, j, c * e.value);
}

ExactMatrix MatrixBuilder::build()
{
    ExactMatrix m(ring_, rows_.size(), cols_);
    for (std::size_t i = 0; i < rows_.size(); ++i)
        m.rows_[i] = combine(ring_, rows_[i]);
    rows_.assign(rows_.size(), {});
    return m;
}

// ---------------------------------------------------------------------------
// Rank, kernel, Smith form

std::size_t rank(const ExactMatrix& m)
{
    return with_field(m.ring(), [&](const auto& f) { return rank_impl(f, m); });
}

ExactMatrix kernel_basis(const ExactMatrix& m)
{
    if (!m.ring().is_field())
        throw InputError("kernel_basis needs a field; use smith_normal_form over Z");
    auto cols = with_field(m.ring(), [&](const auto& f) { return kernel_impl(f, m); });
    return ExactMatrix::from_columns(m.ring(), m.cols(), cols);
}

SmithForm smith_normal_form(const ExactMatrix& m)
{
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols, 0));
    for (std::size_t i = 0; i < rows; ++i)
        for (const auto& e : m.row(i)) {
            if (e.value.get_den() != 1)
                throw InputError("smith_normal_form needs integer entries");
            a[i][e.index] = e.value.get_num();
        }
    std::vector<std::vector<mpz_class>> u(rows, std::vector<mpz_class>(rows, 0));
    std::vector<std::vector<mpz_class>> v(cols, std::vector<mpz_class>(cols, 0));
    for (std::size_t i = 0; i < rows; ++i)
        u[i][i] = 1;
    for (std::size_t j = 0; j < cols; ++j)
        v[j][j] = 1;

    auto swap_rows = [&](std::size_t i, std::size_t k) {
        std::swap(a[i], a[k]);
        std::swap(u[i], u[k]);
    };
    auto swap_cols = [&](std::size_t j, std::size_t k) {
        for (auto& r : a)
            std::swap(r[j], r[k]);
        for (auto& r : v)
            std::swap(r[j], r[k]);
    };
    // row_i += q * row_k (on a and u)
    auto add_row = [&](std::size_t i, std::size_t k, const mpz_class& q) {
        for (std::size_t j = 0; j < cols; ++j)
            a[i][j] += q * a[k][j];
        for (std::size_t j = 0; j < rows; ++j)
            u[i][j] += q * u[k][j];
    };
    // col_j += q * col_k (on a and v)
    auto add_col = [&](std::size_t j, std::size_t k, const mpz_class& q) {
        for (std::size_t i = 0; i < rows; ++i)
            a[i][j] += q * a[i][k];
        for (std::size_t i = 0; i < cols; ++i)
            v[i][j] += q * v[i][k];
    };

    const std::size_t n = std::min(rows, cols);
    std::size_t t = 0;
    for (; t < n; ++t) {
        // Pivot: smallest nonzero absolute value, first in row-major order.
        bool found = false;
        std::size_t pi = 0, pj = 0;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a[i][j] != 0 && (!found || abs(a[i][j]) < abs(a[pi][pj]))) {
                    found = true;
                    pi = i;
                    pj = j;
                }
        if (!found)
            break;
        if (pi != t)
            swap_rows(t, pi);
        if (pj != t)
            swap_cols(t, pj);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (a[i][t] == 0)
                    continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                add_row(i, t, -q);
                if (a[i][t] != 0) {
                    swap_rows(t, i);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (a[t][j] == 0)
                    continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                add_col(j, t, -q);
                if (a[t][j] != 0) {
                    swap_cols(t, j);
                    clean = false;
                }
            }
            if (!clean)
                continue;
            // Divisibility of the remaining block.
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        add_row(t, i, 1);
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        if (a[t][t] < 0) {
            for (std::size_t j = 0; j < cols; ++j)
                a[t][j] = -a[t][j];
            for (std::size_t j = 0; j < rows; ++j)
                u[t][j] = -u[t][j];
        }
    }

    SmithForm out;
    auto to_matrix = [&](const std::vector<std::vector<mpz_class>>& x, std::size_t c) {
        std::vector<std::vector<Scalar>> q(x.size(), std::vector<Scalar>(c));
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < c; ++j)
                q[i][j] = Scalar(x[i][j]);
        return ExactMatrix::from_dense(CoeffRing::integers(), q, c);
    };
    out.d = to_matrix(a, cols);
    out.u = to_matrix(u, rows);
    out.v = to_matrix(v, cols);
    for (std::size_t k = 0; k < t; ++k)
        out.invariant_factors.push_back(a[k][k]);
    return out;
}

Scalar determinant(const ExactMatrix& m)
{
    if (m.rows() != m.cols())
        throw InputError("determinant of a non-square matrix");
    auto a = m.to_dense();
    const std::size_t n = a.size();
    Scalar det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && sgn(a[p][c]) == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (sgn(a[i][c]) == 0)
                continue;
            Scalar f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j)
                a[i][j] -= f * a[c][j];
        }
    }
    return m.ring().canonical(det);
}

// ---------------------------------------------------------------------------
// Subquotient

struct Subquotient::Impl {
    virtual ~Impl() = default;
    virtual std::optional<std::vector<Scalar>> coordinates(const SparseVector& v) const = 0;
};

namespace {

template <class F>
struct SubquotientImpl final : Subquotient::Impl {
    SubquotientImpl(F f, std::size_t ambient) : ech(std::move(f), ambient) {}

    Echelon<F> ech;
    std::vector<long> rep_of_row;
    std::size_t reps = 0;

    std::optional<std::vector<Scalar>> coordinates(const SparseVector& v) const override
    {
        const F& f = ech.field();
        std::vector<typename F::T> acc(reps, f.from(Scalar(0)));
        FVec<F> w = to_field(f, v);
        ech.reduce(w, [&](std::size_t r, const typename F::T& c) {
            if (rep_of_row[r] >= 0)
                acc[rep_of_row[r]] = f.add(acc[rep_of_row[r]], c);
        });
        if (!w.empty())
            return std::nullopt;
        std::vector<Scalar> out;
        out.reserve(reps);
        for (const auto& x : acc)
            out.push_back(f.to(x));
        return out;
    }
};

} // namespace

Subquotient::Subquotient(CoeffRing ring, std::size_t ambient, const std::vector<SparseVector>& numerator,
                         const std::vector<SparseVector>& denominator)
    : ring_(ring), ambient_(ambient)
{
    if (!ring.is_field())
        throw InputError("subquotients need field coefficients");
    impl_ = with_field(ring, [&](const auto& f) -> std::shared_ptr<const Impl> {
        using F = std::decay_t<decltype(f)>;
        auto impl = std::make_shared<SubquotientImpl<F>>(f, ambient);
        for (const auto& d : denominator) {
            FVec<F> w = to_field(f, d);
            impl->ech.reduce(w);
            if (!w.empty()) {
                impl->ech.insert_reduced(std::move(w));
                impl->rep_of_row.push_back(-1);
            }
        }
        for (const auto& n : numerator) {
            FVec<F> w = to_field(f, n);
            impl->ech.reduce(w);
            if (!w.empty()) {
                impl->ech.insert_reduced(std::move(w));
                impl->rep_of_row.push_back(static_cast<long>(impl->reps++));
                reps_.push_back(from_field(f, impl->ech.row(impl->ech.size() - 1)));
            }
        }
        return impl;
    });
}

std::size_t Subquotient::dim() const { return reps_.size(); }

std::vector<Scalar> Subquotient::coordinates(const SparseVector& v) const
{
    auto c = impl_->coordinates(v);
    if (!c)
        throw VerificationError("vector does not lie in the numerator of the subquotient");
    return *c;
}

bool Subquotient::contains(const SparseVector& v) const { return impl_->coordinates(v).has_value(); }

// ---------------------------------------------------------------------------
// Chain complexes

FreeChainComplex::FreeChainComplex(CoeffRing ring, std::vector<std::size_t> dims,
                                   std::map<int, ExactMatrix> differentials, bool truncated)
    : ring_(ring), dims_(std::move(dims)), d_(std::move(differentials)), truncated_(truncated)
{
    for (const auto& [n, m] : d_) {
        if (n < 1 || n > top_degree())
            throw InputError("differential d_" + std::to_string(n) + " outside the complex");
        if (m.ring() != ring_)
            throw InputError("differential d_" + std::to_string(n) + " over the wrong ring");
        if (m.rows() != dim(n - 1) || m.cols() != dim(n))
            throw InputError("differential d_" + std::to_string(n) + " has shape " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                             std::to_string(dim(n - 1)) + "x" + std::to_string(dim(n)));
    }
    for (const auto& [n, m] : d_) {
        auto below = d_.find(n - 1);
        if (below != d_.end() && !(below->second * m).is_zero())
            throw VerificationError("composite d_" + std::to_string(n - 1) + " d_" + std::to_string(n) +
                                    " is nonzero");
    }
}

std::size_t FreeChainComplex::dim(int n) const
{
    if (n < 0 || n > top_degree())
        return 0;
    return dims_[static_cast<std::size_t>(n)];
}

ExactMatrix FreeChainComplex::differential(int n) const
{
    auto it = d_.find(n);
    if (it != d_.end())
        return it->second;
    return ExactMatrix(ring_, dim(n - 1), dim(n));
}

FreeChainComplex FreeChainComplex::restricted(const std::vector<std::vector<std::size_t>>& keep) const
{
    std::vector<std::size_t> dims(keep.size());
    for (std::size_t n = 0; n < keep.size(); ++n)
        dims[n] = keep[n].size();
    std::map<int, ExactMatrix> d;
    for (int n = 1; n < static_cast<int>(keep.size()); ++n)
        if (d_.count(n))
            d.emplace(n, d_.at(n).submatrix(keep[n - 1], keep[n]));
    return FreeChainComplex(ring_, dims, std::move(d), truncated_);
}

std::size_t HomologySummary::rank(int n) const
{
    auto it = degrees.find(n);
    return it == degrees.end() ? 0 : it->second.free_rank;
}

std::size_t HomologySummary::total_rank() const
{
    std::size_t t = 0;
    for (const auto& [n, h] : degrees)
        t += h.free_rank;
    return t;
}

HomologySummary complex_homology(const FreeChainComplex& c, int lo, int hi)
{
    if (c.truncated() && hi > c.valid_top())
        throw InputError("homology requested in degree " + std::to_string(hi) +
                         " beyond the valid range of the complex (" + std::to_string(c.valid_top()) + ")");
    HomologySummary out;
    std::map<int, std::size_t> ranks;
    auto rank_of = [&](int n) {
        auto it = ranks.find(n);
        if (it != ranks.end())
            return it->second;
        std::size_t r = (n < 1 || n > c.top_degree()) ? 0 : rank(c.differential(n));
        ranks[n] = r;
        return r;
    };
    for (int n = std::max(lo, 0); n <= hi; ++n) {
        DegreeHomology h;
        h.free_rank = c.dim(n) - rank_of(n) - rank_of(n + 1);
        if (!c.ring().is_field() && n + 1 <= c.top_degree()) {
            for (const auto& f : smith_normal_form(c.differential(n + 1)).invariant_factors)
                if (f > 1)
                    h.torsion.push_back(f);
        }
        out.degrees[n] = std::move(h);
    }
    return out;
}

HomologySummary complex_homology(const FreeChainComplex& c)
{
    return complex_homology(c, 0, c.valid_top());
}

Subquotient homology_model(const FreeChainComplex& c, int n)
{
    if (c.truncated() && n > c.valid_top())
        throw InputError("homology model requested beyond the valid range of the complex");
    auto kernel = kernel_basis(c.differential(n)).columns();
    auto image = c.differential(n + 1).columns();
    return Subquotient(c.ring(), c.dim(n), kernel, image);
}

void check_chain_map(const std::map<int, ExactMatrix>& f, const FreeChainComplex& src,
                     const FreeChainComplex& dst)
{
    for (const auto& [n, m] : f) {
        if (m.rows() != dst.dim(n) || m.cols() != src.dim(n))
            throw InputError("chain map component f_" + std::to_string(n) + " has the wrong shape");
    }
    for (const auto& [n, m] : f) {
        auto below = f.find(n - 1);
        if (below == f.end() || n > std::min(src.top_degree(), dst.top_degree()))
            continue;
        if (dst.differential(n) * m != below->second * src.differential(n))
            throw VerificationError("not a chain map: square at degree " + std::to_string(n) +
                                    " does not commute");
    }
}

ExactMatrix induced_homology_map(const ExactMatrix& f_n, const Subquotient& src_model,
                                 const Subquotient& dst_model)
{
    ExactMatrix out(f_n.ring(), dst_model.dim(), src_model.dim());
    for (std::size_t k = 0; k < src_model.dim(); ++k) {
        auto image = f_n.apply(src_model.representatives()[k]);
        auto coords = dst_model.coordinates(image);
        for (std::size_t i = 0; i < coords.size(); ++i)
            if (sgn(coords[i]) != 0)
                out.set(i, k, coords[i]);
    }
    return out;
}

ExactMatrix induced_homology_map(const std::map<int, ExactMatrix>& f, const FreeChainComplex& src,
                                 const FreeChainComplex& dst, int n)
{
    if (!src.ring().is_field())
        throw InputError("induced homology maps need field coefficients");
    check_chain_map(f, src, dst);
    auto it = f.find(n);
    if (it == f.end())
        throw InputError("chain map has no component in degree " + std::to_string(n));
    return induced_homology_map(it->second, homology_model(src, n), homology_model(dst, n));
}

std::string scalar_to_string(const Scalar& s)
{
    return s.get_str();
}

Scalar parse_scalar(std::string_view text)
{
    Scalar q;
    if (q.set_str(std::string(text), 10) != 0)
        throw InputError("bad scalar '" + std::string(text) + "'");
    q.canonicalize();
    return q;
}

} // namespace colposet
