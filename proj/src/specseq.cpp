#include "colposet/specseq.hpp"

#include <algorithm>
#include <functional>

#include "colposet/error.hpp"

namespace colposet {

namespace {

void bichain_add(const CoeffRing& ring, BiChain& acc, const BiIndex& g, const Scalar& c, const SparseVector& v)
{
    if (v.empty() || sgn(c) == 0)
        return;
    auto it = acc.find(g);
    if (it == acc.end()) {
        auto w = sparse_axpy(ring, {}, c, v);
        if (!w.empty())
            acc.emplace(g, std::move(w));
        return;
    }
    it->second = sparse_axpy(ring, it->second, c, v);
    if (it->second.empty())
        acc.erase(it);
}

SparseVector unit(std::size_t i)
{
    return SparseVector{Entry{i, Scalar(1)}};
}

std::string seq_text(const Sequence& s)
{
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i)
        out += (i ? "," : "") + std::to_string(s[i]);
    return out + "]";
}

// Strict chains in the base below 1, grouped by length.
std::vector<std::vector<Sequence>> base_chains(const Poset& base, std::size_t max_len)
{
    std::vector<std::vector<Sequence>> out(1, std::vector<Sequence>{{}});
    for (std::size_t k = 1; k <= max_len; ++k) {
        std::vector<Sequence> cur;
        for (const auto& s : out[k - 1])
            for (std::size_t z = 0; z < base.size(); ++z) {
                if (z == base.top() || (!s.empty() && !base.less(s.back(), z)))
                    continue;
                Sequence t = s;
                t.push_back(z);
                cur.push_back(std::move(t));
            }
        if (cur.empty())
            break;
        out.push_back(std::move(cur));
    }
    return out;
}

void require_field(const CoeffRing& ring, const char* what)
{
    if (!ring.is_field())
        throw InputError(std::string(what) + " needs field coefficients");
}

} // namespace

std::size_t generator_fibre(const Bundle& b, const BiIndex& g)
{
    return g.base.empty() ? b.base().top() : g.base[0];
}

std::size_t generator_dim(const Bundle& b, const BiIndex& g)
{
    const auto& f = b.fibre(generator_fibre(b, g));
    return f.dim(g.fibre.empty() ? f.poset().top() : g.fibre[0]);
}

BiChain horizontal_differential(const Bundle& b, const BiChain& c)
{
    const auto& ring = b.ring();
    BiChain out;
    for (const auto& [g, lambda] : c) {
        const std::size_t p = g.base.size();
        if (p == 0)
            continue;
        const std::size_t x1 = g.base[0];
        const std::size_t x2 = p >= 2 ? g.base[1] : b.base().top();
        const auto& m = b.morphism(x1, x2);
        const auto& f1 = b.fibre(x1);
        const std::size_t y1 = g.fibre.empty() ? f1.poset().top() : g.fibre[0];
        BiIndex h{Sequence(g.base.begin() + 1, g.base.end()), {}};
        for (auto y : g.fibre)
            h.fibre.push_back(m.f[y]);
        bichain_add(ring, out, h, 1, m.tau[y1].apply(lambda));
        for (std::size_t i = 2; i <= p; ++i) {
            BiIndex t = g;
            t.base.erase(t.base.begin() + static_cast<long>(i - 1));
            bichain_add(ring, out, t, (i % 2 == 0) ? -1 : 1, lambda);
        }
    }
    return out;
}

BiChain vertical_differential(const Bundle& b, const BiChain& c)
{
    const auto& ring = b.ring();
    BiChain out;
    for (const auto& [g, lambda] : c) {
        if (g.fibre.empty())
            continue;
        const auto& f = b.fibre(generator_fibre(b, g));
        const int sign = (g.base.size() + g.fibre.size()) % 2 == 0 ? 1 : -1;
        SeqChain one{{g.fibre, lambda}};
        for (const auto& [s, v] : s_differential(f, one))
            bichain_add(ring, out, BiIndex{g.base, s}, sign, v);
    }
    return out;
}

namespace {

ExactMatrix block_matrix(const Bundle& b, const BicomplexBlock& src, const BicomplexBlock& dst,
                         const std::function<BiChain(const BiChain&)>& apply)
{
    MatrixBuilder mb(b.ring(), dst.dim, src.dim);
    for (std::size_t gi = 0; gi < src.gens.size(); ++gi) {
        const auto& g = src.gens[gi];
        const std::size_t d = generator_dim(b, g);
        for (std::size_t k = 0; k < d; ++k) {
            BiChain image = apply(BiChain{{g, unit(k)}});
            for (const auto& [h, v] : image) {
                auto it = dst.lookup.find(h);
                if (it == dst.lookup.end())
                    throw VerificationError("differential leaves the bicomplex at base " + seq_text(h.base) +
                                            " fibre " + seq_text(h.fibre));
                for (const auto& e : v)
                    mb.add(dst.offset[it->second] + e.index, src.offset[gi] + k, e.value);
            }
        }
    }
    return mb.build();
}

} // namespace

Bicomplex bicomplex(const Bundle& b, int max_total)
{
    if (max_total < 1)
        throw InputError("bicomplex needs a total degree bound of at least 1");
    Bicomplex k;
    k.bundle = b;
    k.max_total = max_total;
    const auto& base = b.base();
    auto chains = base_chains(base, static_cast<std::size_t>(max_total));
    k.max_p = static_cast<int>(chains.size()) - 1;

    std::vector<std::vector<SequenceBasis>> fibre_seqs(base.size());
    for (std::size_t x = 0; x < base.size(); ++x)
        fibre_seqs[x] = multi_sequence_bases(b.fibre(x), static_cast<std::size_t>(max_total));

    for (int p = 0; p <= k.max_p; ++p)
        for (int q = 0; p + q <= max_total; ++q) {
            BicomplexBlock blk;
            for (const auto& xs : chains[static_cast<std::size_t>(p)]) {
                std::size_t x1 = xs.empty() ? base.top() : xs[0];
                for (const auto& ys : fibre_seqs[x1][static_cast<std::size_t>(q)].sequences) {
                    BiIndex g{xs, ys};
                    blk.lookup.emplace(g, blk.gens.size());
                    blk.offset.push_back(blk.dim);
                    blk.dim += generator_dim(b, g);
                    blk.gens.push_back(std::move(g));
                }
            }
            k.blocks.emplace(Cell{p, q}, std::move(blk));
        }

    auto dh = [&](const BiChain& c) { return horizontal_differential(b, c); };
    auto dv = [&](const BiChain& c) { return vertical_differential(b, c); };
    for (const auto& [cell, blk] : k.blocks) {
        auto [p, q] = cell;
        if (p > 0)
            k.horizontal.emplace(cell, block_matrix(b, blk, k.block(p - 1, q), dh));
        if (q > 0)
            k.vertical.emplace(cell, block_matrix(b, blk, k.block(p, q - 1), dv));
    }
    check_bicomplex(k);
    return k;
}

void check_bicomplex(const Bicomplex& k)
{
    auto where = [](const Cell& c) {
        return "(" + std::to_string(c.first) + "," + std::to_string(c.second) + ")";
    };
    for (const auto& [cell, blk] : k.blocks) {
        auto [p, q] = cell;
        if (p >= 2 && !(k.horizontal.at({p - 1, q}) * k.horizontal.at(cell)).is_zero())
            throw VerificationError("d^h d^h != 0 at " + where(cell));
        if (q >= 2 && !(k.vertical.at({p, q - 1}) * k.vertical.at(cell)).is_zero())
            throw VerificationError("d^v d^v != 0 at " + where(cell));
        if (p >= 1 && q >= 1) {
            auto s = k.horizontal.at({p, q - 1}) * k.vertical.at(cell) +
                     k.vertical.at({p - 1, q}) * k.horizontal.at(cell);
            if (!s.is_zero())
                throw VerificationError("d^h d^v + d^v d^h != 0 at " + where(cell));
        }
    }
}

std::size_t TotalComplex::filtration_size(int n, int p) const
{
    const auto& offs = block_offset.at(static_cast<std::size_t>(n));
    if (p < 0)
        return 0;
    auto it = offs.upper_bound(p);
    if (it == offs.end())
        return complex.dim(n);
    return it->second;
}

TotalComplex total_complex(const Bicomplex& k)
{
    const auto& ring = k.bundle.ring();
    std::vector<std::size_t> dims;
    std::vector<std::map<int, std::size_t>> offs;
    for (int n = 0; n <= k.max_total; ++n) {
        std::map<int, std::size_t> o;
        std::size_t d = 0;
        for (int p = 0; p <= std::min(n, k.max_p); ++p) {
            o[p] = d;
            d += k.block(p, n - p).dim;
        }
        offs.push_back(std::move(o));
        dims.push_back(d);
    }
    std::map<int, ExactMatrix> diff;
    for (int n = 1; n <= k.max_total; ++n) {
        MatrixBuilder mb(ring, dims[static_cast<std::size_t>(n - 1)], dims[static_cast<std::size_t>(n)]);
        for (auto [p, col0] : offs[static_cast<std::size_t>(n)]) {
            const int q = n - p;
            auto put = [&](const ExactMatrix& m, int tp) {
                std::size_t row0 = offs[static_cast<std::size_t>(n - 1)].at(tp);
                for (std::size_t r = 0; r < m.rows(); ++r)
                    for (const auto& e : m.row(r))
                        mb.add(row0 + r, col0 + e.index, e.value);
            };
            if (p > 0)
                put(k.horizontal.at({p, q}), p - 1);
            if (q > 0)
                put(k.vertical.at({p, q}), p);
        }
        diff.emplace(n, mb.build());
    }
    return TotalComplex{FreeChainComplex(ring, dims, std::move(diff), true), std::move(offs)};
}

SparseVector total_coordinates(const Bicomplex& k, const TotalComplex& t, int n, const BiChain& c)
{
    std::map<std::size_t, Scalar> acc;
    for (const auto& [g, v] : c) {
        const int p = static_cast<int>(g.base.size());
        if (p + static_cast<int>(g.fibre.size()) != n)
            throw InputError("chain of the wrong total degree");
        const auto& blk = k.block(p, n - p);
        std::size_t off = t.block_offset.at(static_cast<std::size_t>(n)).at(p) + blk.offset[blk.lookup.at(g)];
        for (const auto& e : v)
            acc[off + e.index] += e.value;
    }
    return sparse_from_map(k.bundle.ring(), acc);
}

BiChain total_chain(const Bicomplex& k, const TotalComplex& t, int n, const SparseVector& v)
{
    BiChain out;
    const auto& offs = t.block_offset.at(static_cast<std::size_t>(n));
    for (const auto& e : v) {
        // last block starting at or before the coordinate (empty blocks share offsets)
        int p = 0;
        for (auto [bp, o] : offs)
            if (o <= e.index)
                p = bp;
        const auto& blk = k.block(p, n - p);
        std::size_t local = e.index - offs.at(p);
        auto gi = static_cast<std::size_t>(std::upper_bound(blk.offset.begin(), blk.offset.end(), local) -
                                           blk.offset.begin()) - 1;
        bichain_add(k.bundle.ring(), out, blk.gens[gi], 1, SparseVector{Entry{local - blk.offset[gi], e.value}});
    }
    return out;
}

// ---------------------------------------------------------------------------

int alpha_sign_exponent(int q)
{
    int r = ((q % 4) + 4) % 4;
    return (r == 1 || r == 2) ? 1 : 0;
}

std::vector<GridPath> grid_paths(int p, int q)
{
    // monotone paths from (1,1) to (p+1,q+1); the final vertex is dropped
    std::vector<GridPath> out;
    std::vector<std::pair<int, int>> cells;
    std::function<void(int, int, int)> walk = [&](int i, int j, int lr) {
        if (i == p + 1 && j == q + 1) {
            out.push_back(GridPath{cells, lr});
            return;
        }
        cells.emplace_back(i, j);
        if (i <= p)
            walk(i + 1, j, lr + (j - 1)); // right step from column i at row j
        if (j <= q)
            walk(i, j + 1, lr);
        cells.pop_back();
    };
    walk(1, 1, 0);
    return out;
}

SeqChain phi_apply(const Bundle& b, const TotalColouredPoset& e, const BiChain& c)
{
    const auto& ring = b.ring();
    const auto& base = b.base();
    std::map<Cell, std::vector<GridPath>> path_cache;
    SeqChain out;
    for (const auto& [g, lambda] : c) {
        const int p = static_cast<int>(g.base.size());
        const int q = static_cast<int>(g.fibre.size());
        const std::size_t x1 = generator_fibre(b, g);
        Sequence xs = g.base;
        xs.push_back(base.top());
        Sequence ys = g.fibre;
        ys.push_back(b.fibre(x1).poset().top());
        // grid element y_ij = f_{x1}^{x_i}(y_j) in the fibre over x_i
        std::vector<std::vector<std::size_t>> grid(xs.size(), std::vector<std::size_t>(ys.size()));
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const auto& m = b.morphism(x1, xs[i]);
            for (std::size_t j = 0; j < ys.size(); ++j)
                grid[i][j] = e.element(xs[i], m.f[ys[j]]);
        }
        auto it = path_cache.find({p, q});
        if (it == path_cache.end())
            it = path_cache.emplace(Cell{p, q}, grid_paths(p, q)).first;
        const int alpha = alpha_sign_exponent(q);
        for (const auto& path : it->second) {
            Sequence s;
            for (auto [i, j] : path.cells)
                s.push_back(grid[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]);
            chain_add(ring, out, s, (alpha + path.lower_right) % 2 == 0 ? 1 : -1, lambda);
        }
    }
    return out;
}

std::map<int, ExactMatrix> phi_matrices(const Bicomplex& k, const TotalComplex& t, const TotalColouredPoset& e,
                                        const SequenceComplex& target)
{
    std::map<int, ExactMatrix> out;
    for (int n = 0; n <= k.max_total; ++n) {
        if (n > target.complex.top_degree()) {
            // no sequences that long in the target
            out.emplace(n, ExactMatrix(k.bundle.ring(), 0, t.complex.dim(n)));
            continue;
        }
        const auto& tb = target.bases[static_cast<std::size_t>(n)];
        MatrixBuilder mb(k.bundle.ring(), tb.dim, t.complex.dim(n));
        for (auto [p, off] : t.block_offset[static_cast<std::size_t>(n)]) {
            const auto& blk = k.block(p, n - p);
            for (std::size_t gi = 0; gi < blk.gens.size(); ++gi)
                for (std::size_t b = 0; b < generator_dim(k.bundle, blk.gens[gi]); ++b) {
                    SeqChain img = phi_apply(k.bundle, e, BiChain{{blk.gens[gi], unit(b)}});
                    if (target.strict)
                        img = drop_degenerate(img);
                    mb.add_column(off + blk.offset[gi] + b, chain_coordinates(tb, img));
                }
        }
        out.emplace(n, mb.build());
    }
    return out;
}

std::size_t check_phi_chain_map(const Bicomplex& k, const TotalColouredPoset& e, int max_degree)
{
    const auto& b = k.bundle;
    std::size_t checked = 0;
    for (int n = 1; n <= std::min(max_degree, k.max_total); ++n)
        for (int p = 0; p <= std::min(n, k.max_p); ++p) {
            const auto& blk = k.block(p, n - p);
            for (const auto& g : blk.gens)
                for (std::size_t i = 0; i < generator_dim(b, g); ++i) {
                    BiChain c{{g, unit(i)}};
                    BiChain dc = horizontal_differential(b, c);
                    for (const auto& [h, v] : vertical_differential(b, c))
                        bichain_add(b.ring(), dc, h, 1, v);
                    SeqChain lhs = phi_apply(b, e, dc);
                    SeqChain rhs = s_differential(e.total, phi_apply(b, e, c));
                    if (lhs != rhs)
                        throw VerificationError("phi is not a chain map at base " + seq_text(g.base) + " fibre " +
                                                seq_text(g.fibre) + " coordinate " + std::to_string(i));
                    ++checked;
                }
        }
    return checked;
}

bool QuasiIsoReport::all_iso() const
{
    return std::all_of(degrees.begin(), degrees.end(), [](const QuasiIsoDegree& d) { return d.iso; });
}

QuasiIsoReport quasi_iso_check(const Bundle& b, int max_degree, bool force)
{
    require_field(b.ring(), "quasi-isomorphism check");
    QuasiIsoReport rep;
    rep.specially_admissible = is_specially_admissible(b.base()).has_value();
    if (!rep.specially_admissible && !force)
        throw InputError("base is not specially admissible; the comparison is outside the theorem");
    auto k = bicomplex(b, max_degree + 1);
    auto t = total_complex(k);
    auto e = total(b);
    auto c = c_complex(e.total, static_cast<std::size_t>(max_degree + 1));
    auto f = phi_matrices(k, t, e, c);
    check_chain_map(f, t.complex, c.complex);
    auto ht = complex_homology(t.complex, 0, max_degree);
    auto hc = complex_homology(c.complex, 0, max_degree);
    for (int n = 0; n <= max_degree; ++n) {
        QuasiIsoDegree d;
        d.n = n;
        d.total_rank = ht.rank(n);
        d.poset_rank = hc.rank(n);
        d.map_rank = rank(induced_homology_map(f, t.complex, c.complex, n));
        d.iso = d.total_rank == d.poset_rank && d.map_rank == d.total_rank;
        rep.degrees.push_back(d);
    }
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

struct FilteredComplex {
    const TotalComplex& t;
    int max_p;
    int top; // highest stored degree
    std::map<std::tuple<int, int, int>, std::vector<SparseVector>> a_cache;

    std::size_t fsize(int n, int p) const { return t.filtration_size(n, std::min(p, max_p)); }

    // A^r_p in degree n: x in F_p T_n with dx in F_{p-r} T_{n-1}
    const std::vector<SparseVector>& a(int n, int p, int r)
    {
        if (r < 0)
            r = 0;
        auto key = std::make_tuple(n, std::min(p, max_p + r), r);
        auto it = a_cache.find(key);
        if (it != a_cache.end())
            return it->second;
        std::vector<SparseVector> out;
        const std::size_t cols = p < 0 ? 0 : fsize(n, p);
        std::size_t row_lo = (n == 0) ? 0 : (p - r < 0 ? 0 : fsize(n - 1, p - r));
        if (cols > 0) {
            if (r == 0 || n == 0 || row_lo >= t.complex.dim(n - 1)) {
                for (std::size_t i = 0; i < cols; ++i)
                    out.push_back(unit(i));
            } else {
                std::vector<std::size_t> rows, colidx;
                for (std::size_t i = row_lo; i < t.complex.dim(n - 1); ++i)
                    rows.push_back(i);
                for (std::size_t j = 0; j < cols; ++j)
                    colidx.push_back(j);
                auto ker = kernel_basis(t.complex.differential(n).submatrix(rows, colidx));
                out = ker.columns();
            }
        }
        return a_cache.emplace(key, std::move(out)).first->second;
    }

    Subquotient page(int n, int p, int r)
    {
        std::vector<SparseVector> num = a(n, p, r);
        std::vector<SparseVector> den = a(n, p - 1, r - 1);
        if (n + 1 <= top) {
            const auto d = t.complex.differential(n + 1);
            for (const auto& v : a(n + 1, p + r - 1, r - 1)) {
                auto w = d.apply(v);
                if (!w.empty())
                    den.push_back(std::move(w));
            }
        }
        return Subquotient(t.complex.ring(), t.complex.dim(n), num, den);
    }
};

} // namespace

PageSet spectral_sequence(const Bicomplex& k, int r_max)
{
    const auto& ring = k.bundle.ring();
    require_field(ring, "spectral sequence");
    auto t = total_complex(k);
    FilteredComplex fc{t, k.max_p, k.max_total, {}};
    PageSet ps;
    ps.max_degree = k.max_total - 1;
    const int r_stable = k.max_p + 1;
    const int r_last = std::max(r_max, r_stable);

    std::map<Cell, ExactMatrix> prev_diff;
    std::map<Cell, std::size_t> prev_dims;
    for (int r = 0; r <= r_last; ++r) {
        Page pg;
        pg.r = r;
        std::map<Cell, Subquotient> models;
        for (int n = 0; n <= ps.max_degree; ++n)
            for (int p = 0; p <= std::min(n, k.max_p); ++p) {
                auto sq = fc.page(n, p, r);
                pg.dims[{p, n - p}] = sq.dim();
                models.emplace(Cell{p, n - p}, std::move(sq));
            }
        for (const auto& [cell, src] : models) {
            auto [p, q] = cell;
            Cell tgt{p - r, q + r - 1};
            auto ti = models.find(tgt);
            if (ti == models.end() || src.dim() == 0 || ti->second.dim() == 0)
                continue;
            const int n = p + q;
            const auto d = t.complex.differential(n);
            MatrixBuilder mb(ring, ti->second.dim(), src.dim());
            for (std::size_t j = 0; j < src.dim(); ++j) {
                auto w = d.apply(src.representatives()[j]);
                auto c = ti->second.coordinates(w);
                for (std::size_t i = 0; i < c.size(); ++i)
                    if (sgn(c[i]) != 0)
                        mb.add(i, j, c[i]);
            }
            pg.differential.emplace(cell, mb.build());
        }
        // d^r d^r = 0, and this page is the homology of the previous one
        for (const auto& [cell, m] : pg.differential) {
            Cell tgt{cell.first - r, cell.second + r - 1};
            auto it = pg.differential.find(tgt);
            if (it != pg.differential.end() && !(it->second * m).is_zero())
                throw VerificationError("d^r d^r != 0 on page " + std::to_string(r));
        }
        if (r > 0) {
            const int s = r - 1;
            for (const auto& [cell, dim] : pg.dims) {
                auto [p, q] = cell;
                if (p + q + 1 > ps.max_degree)
                    continue; // incoming differential lies outside the window
                std::size_t out_rank = 0, in_rank = 0;
                if (auto it = prev_diff.find(cell); it != prev_diff.end())
                    out_rank = rank(it->second);
                if (auto it = prev_diff.find({p + s, q - s + 1}); it != prev_diff.end())
                    in_rank = rank(it->second);
                if (prev_dims.at(cell) - out_rank - in_rank != dim)
                    throw VerificationError("page " + std::to_string(r) + " is not the homology of page " +
                                            std::to_string(s) + " at (" + std::to_string(p) + "," +
                                            std::to_string(q) + ")");
            }
        }
        prev_diff = pg.differential;
        prev_dims = pg.dims;
        if (r == r_stable)
            ps.infinity = pg.dims;
        if (r <= r_max)
            ps.pages.push_back(std::move(pg));
    }
    auto h = complex_homology(t.complex, 0, ps.max_degree);
    for (int n = 0; n <= ps.max_degree; ++n) {
        ps.total_homology[n] = h.rank(n);
        std::size_t sum = 0;
        for (const auto& [cell, dim] : ps.infinity)
            if (cell.first + cell.second == n)
                sum += dim;
        if (sum != h.rank(n))
            throw VerificationError("stable page does not add up to the homology of T in degree " +
                                    std::to_string(n));
    }
    return ps;
}

std::map<Cell, std::size_t> e2_direct(const Bundle& b, int max_degree)
{
    require_field(b.ring(), "E2 page");
    std::map<Cell, std::size_t> out;
    for (int q = 0; q <= max_degree; ++q) {
        auto h = coloured_homology(fibre_homology_colouring(b, static_cast<std::size_t>(q)));
        for (int p = 0; p + q <= max_degree; ++p)
            out[{p, q}] = h.rank(p);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<LesPosition> les_exactness(const FreeChainComplex& x, const std::vector<std::vector<std::size_t>>& sub,
                                       int lo, int hi)
{
    const auto& ring = x.ring();
    require_field(ring, "long exact sequence check");
    if (hi > x.valid_top())
        throw InputError("long exact sequence requested beyond the valid range");
    std::vector<std::vector<std::size_t>> rest;
    std::vector<std::vector<long>> pos_sub, pos_rest; // coordinate -> position in A or Q
    for (int n = 0; n <= x.top_degree(); ++n) {
        std::vector<bool> in(x.dim(n), false);
        for (auto i : sub.at(static_cast<std::size_t>(n)))
            in[i] = true;
        std::vector<std::size_t> r;
        std::vector<long> ps(x.dim(n), -1), pr(x.dim(n), -1);
        std::size_t a = 0;
        for (auto i : sub[static_cast<std::size_t>(n)])
            ps[i] = static_cast<long>(a++);
        for (std::size_t i = 0; i < x.dim(n); ++i)
            if (!in[i]) {
                pr[i] = static_cast<long>(r.size());
                r.push_back(i);
            }
        rest.push_back(std::move(r));
        pos_sub.push_back(std::move(ps));
        pos_rest.push_back(std::move(pr));
    }
    auto a_cx = x.restricted(sub);
    auto q_cx = x.restricted(rest);
    // the sub-coordinates must span a subcomplex
    for (int n = 1; n <= x.top_degree(); ++n) {
        auto d = x.differential(n);
        for (auto j : sub[static_cast<std::size_t>(n)])
            for (std::size_t i = 0; i < d.rows(); ++i)
                if (pos_rest[static_cast<std::size_t>(n - 1)][i] >= 0 && sgn(d.at(i, j)) != 0)
                    throw VerificationError("listed coordinates do not span a subcomplex");
    }

    std::map<int, Subquotient> ha, hx, hq;
    for (int n = std::max(lo - 1, 0); n <= hi; ++n) {
        ha.emplace(n, homology_model(a_cx, n));
        hx.emplace(n, homology_model(x, n));
        hq.emplace(n, homology_model(q_cx, n));
    }
    auto inclusion = [&](int n) {
        MatrixBuilder mb(ring, x.dim(n), a_cx.dim(n));
        const auto& s = sub[static_cast<std::size_t>(n)];
        for (std::size_t j = 0; j < s.size(); ++j)
            mb.add(s[j], j, 1);
        return mb.build();
    };
    auto projection = [&](int n) {
        MatrixBuilder mb(ring, q_cx.dim(n), x.dim(n));
        const auto& r = rest[static_cast<std::size_t>(n)];
        for (std::size_t j = 0; j < r.size(); ++j)
            mb.add(j, r[j], 1);
        return mb.build();
    };
    auto i_rank = [&](int n) { return rank(induced_homology_map(inclusion(n), ha.at(n), hx.at(n))); };
    auto j_rank = [&](int n) { return rank(induced_homology_map(projection(n), hx.at(n), hq.at(n))); };
    auto delta_rank = [&](int n) -> std::size_t {
        if (n == 0)
            return 0;
        const auto& model = hq.at(n);
        const auto d = x.differential(n);
        const auto& r = rest[static_cast<std::size_t>(n)];
        MatrixBuilder mb(ring, ha.at(n - 1).dim(), model.dim());
        for (std::size_t j = 0; j < model.dim(); ++j) {
            SparseVector lift;
            for (const auto& e : model.representatives()[j])
                lift.push_back(Entry{r[e.index], e.value});
            std::map<std::size_t, Scalar> in_a;
            for (const auto& e : d.apply(lift)) {
                long pa = pos_sub[static_cast<std::size_t>(n - 1)][e.index];
                if (pa < 0)
                    throw VerificationError("boundary of a lifted quotient cycle leaves the subcomplex");
                in_a[static_cast<std::size_t>(pa)] = e.value;
            }
            auto c = ha.at(n - 1).coordinates(sparse_from_map(ring, in_a));
            for (std::size_t i = 0; i < c.size(); ++i)
                if (sgn(c[i]) != 0)
                    mb.add(i, j, c[i]);
        }
        return rank(mb.build());
    };

    std::vector<LesPosition> out;
    for (int n = lo; n <= hi; ++n) {
        std::size_t in = i_rank(n), jn = j_rank(n), dn = delta_rank(n);
        out.push_back(LesPosition{n, "whole", hx.at(n).dim() - jn, in});
        out.push_back(LesPosition{n, "quotient", hq.at(n).dim() - dn, jn});
        if (n >= 1)
            out.push_back(LesPosition{n - 1, "sub", ha.at(n - 1).dim() - i_rank(n - 1), dn});
    }
    return out;
}

LesReport les_check(const Bundle& b, std::size_t x, int max_degree, LesComplex which, bool force)
{
    require_field(b.ring(), "long exact sequence check");
    const auto& base = b.base();
    if (x >= base.size() || !base.is_cover(x, base.top()))
        throw InputError("witness must be covered by the top of the base");
    LesReport rep;
    rep.specially_admissible = is_specially_admissible(base).has_value();
    if (!admissible_via(base, x) && !force)
        throw InputError("element " + base.label(x) + " does not witness admissibility of the base");

    auto below = interval_elements(base, x);
    auto part = restrict(b, below);
    std::map<int, std::size_t> interval;
    FreeChainComplex whole(b.ring(), {0}, {});
    std::vector<std::vector<std::size_t>> sub;

    if (which == LesComplex::total) {
        auto k = bicomplex(b, max_degree + 1);
        auto t = total_complex(k);
        for (int n = 0; n <= k.max_total; ++n) {
            std::vector<std::size_t> s;
            for (auto [p, off] : t.block_offset[static_cast<std::size_t>(n)]) {
                const auto& blk = k.block(p, n - p);
                for (std::size_t gi = 0; gi < blk.gens.size(); ++gi)
                    if (!base.leq(generator_fibre(b, blk.gens[gi]), x))
                        for (std::size_t i = 0; i < generator_dim(b, blk.gens[gi]); ++i)
                            s.push_back(off + blk.offset[gi] + i);
            }
            sub.push_back(std::move(s));
        }
        whole = t.complex;
        if (max_degree >= 1) {
            auto kp = bicomplex(part, max_degree);
            auto h = complex_homology(total_complex(kp).complex, 0, max_degree - 1);
            for (int n = 0; n < max_degree; ++n)
                interval[n] = h.rank(n);
        }
    } else {
        auto e = total(b);
        auto s = s_complex(e.total, static_cast<std::size_t>(max_degree + 1));
        for (const auto& basis : s.bases) {
            std::vector<std::size_t> keep;
            for (std::size_t si = 0; si < basis.sequences.size(); ++si) {
                const auto& seq = basis.sequences[si];
                std::size_t first = seq.empty() ? e.total.poset().top() : seq[0];
                if (base.leq(e.projection[first], x))
                    continue;
                std::size_t blockdim = e.total.dim(first);
                for (std::size_t i = 0; i < blockdim; ++i)
                    keep.push_back(basis.offset[si] + i);
            }
            sub.push_back(std::move(keep));
        }
        whole = s.complex;
        auto h = coloured_homology(total(part).total);
        for (int n = 0; n < max_degree; ++n)
            interval[n] = h.rank(n);
    }

    rep.positions = les_exactness(whole, sub, 0, max_degree);
    for (const auto& pos : rep.positions)
        rep.exact = rep.exact && pos.exact();

    std::vector<std::vector<std::size_t>> rest;
    for (int n = 0; n <= whole.top_degree(); ++n) {
        std::vector<bool> in(whole.dim(n), false);
        for (auto i : sub[static_cast<std::size_t>(n)])
            in[i] = true;
        std::vector<std::size_t> r;
        for (std::size_t i = 0; i < whole.dim(n); ++i)
            if (!in[i])
                r.push_back(i);
        rest.push_back(std::move(r));
    }
    auto hq = complex_homology(whole.restricted(rest), 0, max_degree);
    for (int n = 0; n <= max_degree; ++n) {
        rep.quotient_rank[n] = hq.rank(n);
        rep.interval_rank[n] = n == 0 ? 0 : interval.at(n - 1);
        rep.quotient_matches = rep.quotient_matches && rep.quotient_rank[n] == rep.interval_rank[n];
    }
    return rep;
}

} // namespace colposet
