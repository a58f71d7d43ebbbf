#include "colposet/coloured.hpp"

#include <algorithm>
#include <set>

namespace colposet {

namespace {

std::string pair_name(const Poset& p, std::size_t x, std::size_t y)
{
    return p.label(x) + " <= " + p.label(y);
}

} // namespace

ColouredPoset ColouredPoset::build(Poset poset, CoeffRing ring, std::vector<std::size_t> dims,
                                   std::map<CoverKey, ExactMatrix> cover_maps)
{
    const std::size_t n = poset.size();
    if (dims.size() != n)
        throw InputError("colouring needs one dimension per element");
    for (const auto& [key, m] : cover_maps) {
        if (key.first >= n || key.second >= n || !poset.is_cover(key.first, key.second))
            throw InputError("colouring map given on a pair that is not a cover");
        if (m.rows() != dims[key.second] || m.cols() != dims[key.first])
            throw InputError("colouring map " + pair_name(poset, key.first, key.second) + " has shape " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                             std::to_string(dims[key.second]) + "x" + std::to_string(dims[key.first]));
        if (m.ring() != ring)
            throw InputError("colouring map " + pair_name(poset, key.first, key.second) + " over the wrong ring");
    }
    for (auto [a, b] : poset.covers())
        if (!cover_maps.count({a, b}))
            throw InputError("colouring map missing for cover " + pair_name(poset, a, b));

    ColouredPoset cp;
    cp.ring_ = ring;
    cp.dims_ = std::move(dims);
    cp.cover_maps_ = std::move(cover_maps);
    cp.composite_.assign(n * n, std::nullopt);
    const auto& topo = poset.topological_order();
    for (std::size_t x = 0; x < n; ++x) {
        cp.composite_[x * n + x] = ExactMatrix::identity(ring, cp.dims_[x]);
        for (auto y : topo) {
            if (!poset.less(x, y))
                continue;
            auto& slot = cp.composite_[x * n + y];
            for (auto z : poset.lower_covers(y)) {
                if (!poset.leq(x, z))
                    continue;
                ExactMatrix cand = cp.cover_maps_.at({z, y}) * *cp.composite_[x * n + z];
                if (!slot)
                    slot = std::move(cand);
                else if (*slot != cand)
                    throw InputError("colouring is not path independent: two paths for " +
                                     pair_name(poset, x, y) + " give different maps");
            }
        }
    }
    cp.poset_ = std::move(poset);
    return cp;
}

ColouredPoset ColouredPoset::constant(Poset poset, CoeffRing ring, std::size_t d)
{
    std::map<CoverKey, ExactMatrix> maps;
    for (auto c : poset.covers())
        maps.emplace(c, ExactMatrix::identity(ring, d));
    std::vector<std::size_t> dims(poset.size(), d);
    return build(std::move(poset), ring, std::move(dims), std::move(maps));
}

const ExactMatrix& ColouredPoset::cover_map(std::size_t x, std::size_t y) const
{
    auto it = cover_maps_.find({x, y});
    if (it == cover_maps_.end())
        throw InputError("no cover " + pair_name(poset_, x, y));
    return it->second;
}

const ExactMatrix& ColouredPoset::map(std::size_t x, std::size_t y) const
{
    const auto& slot = composite_.at(x * size() + y);
    if (!slot)
        throw InputError("elements are not comparable: " + pair_name(poset_, x, y));
    return *slot;
}

ColouredPoset ColouredPoset::with_grading(std::vector<std::vector<int>> degrees) const
{
    if (degrees.size() != size())
        throw InputError("grading needs one degree list per element");
    for (std::size_t x = 0; x < size(); ++x)
        if (degrees[x].size() != dims_[x])
            throw InputError("grading of " + poset_.label(x) + " has the wrong length");
    for (const auto& [key, m] : cover_maps_)
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (const auto& e : m.row(i))
                if (degrees[key.second][i] != degrees[key.first][e.index])
                    throw InputError("map " + pair_name(poset_, key.first, key.second) +
                                     " does not preserve the grading");
    ColouredPoset out = *this;
    out.degrees_ = std::move(degrees);
    return out;
}

std::vector<int> ColouredPoset::occurring_degrees() const
{
    std::set<int> s;
    for (const auto& d : degrees_)
        s.insert(d.begin(), d.end());
    return {s.begin(), s.end()};
}

ColouredPoset ColouredPoset::restrict_degree(int j) const
{
    if (!graded())
        throw InputError("colouring carries no grading");
    std::vector<std::vector<std::size_t>> keep(size());
    std::vector<std::size_t> dims(size());
    std::vector<std::vector<int>> degs(size());
    for (std::size_t x = 0; x < size(); ++x) {
        for (std::size_t b = 0; b < dims_[x]; ++b)
            if (degrees_[x][b] == j)
                keep[x].push_back(b);
        dims[x] = keep[x].size();
        degs[x].assign(dims[x], j);
    }
    std::map<CoverKey, ExactMatrix> maps;
    for (const auto& [key, m] : cover_maps_)
        maps.emplace(key, m.submatrix(keep[key.second], keep[key.first]));
    return build(poset_, ring_, std::move(dims), std::move(maps)).with_grading(std::move(degs));
}

ColouredPoset induced_colouring(const ColouredPoset& cp, const std::vector<std::size_t>& elements)
{
    Poset sub = cp.poset().induced(elements);
    std::vector<std::size_t> dims;
    for (auto x : elements)
        dims.push_back(cp.dim(x));
    std::map<CoverKey, ExactMatrix> maps;
    for (auto [i, j] : sub.covers())
        maps.emplace(CoverKey{i, j}, cp.map(elements[i], elements[j]));
    auto out = ColouredPoset::build(std::move(sub), cp.ring(), std::move(dims), std::move(maps));
    if (cp.graded()) {
        std::vector<std::vector<int>> deg;
        for (auto x : elements)
            deg.push_back(cp.degrees(x));
        out = out.with_grading(std::move(deg));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Morphisms

void validate_morphism(const ColouredPoset& src, const ColouredPoset& dst, const ColouredPosetMorphism& m)
{
    const auto& p1 = src.poset();
    const auto& p2 = dst.poset();
    if (m.f.size() != p1.size() || m.tau.size() != p1.size())
        throw InputError("morphism must give an image and a matrix for every element");
    for (std::size_t x = 0; x < p1.size(); ++x) {
        if (m.f[x] >= p2.size())
            throw InputError("morphism sends " + p1.label(x) + " outside the target");
        if ((m.f[x] == p2.top()) != (x == p1.top()))
            throw InputError("morphism must send exactly the top element to the top (fails at " +
                             p1.label(x) + ")");
        const auto& t = m.tau[x];
        if (t.rows() != dst.dim(m.f[x]) || t.cols() != src.dim(x))
            throw InputError("morphism matrix at " + p1.label(x) + " has the wrong shape");
        if (t.ring() != src.ring() || src.ring() != dst.ring())
            throw InputError("morphism over mismatched rings");
    }
    for (auto [a, b] : p1.covers()) {
        if (!p2.leq(m.f[a], m.f[b]))
            throw InputError("morphism is not order preserving on " + p1.label(a) + " < " + p1.label(b));
        if (m.tau[b] * src.cover_map(a, b) != dst.map(m.f[a], m.f[b]) * m.tau[a])
            throw InputError("naturality square fails on " + p1.label(a) + " < " + p1.label(b));
    }
}

ColouredPosetMorphism identity_morphism(const ColouredPoset& cp)
{
    ColouredPosetMorphism m;
    for (std::size_t x = 0; x < cp.size(); ++x) {
        m.f.push_back(x);
        m.tau.push_back(ExactMatrix::identity(cp.ring(), cp.dim(x)));
    }
    return m;
}

ColouredPosetMorphism compose_morphisms(const ColouredPosetMorphism& first, const ColouredPosetMorphism& second)
{
    ColouredPosetMorphism out;
    for (std::size_t x = 0; x < first.f.size(); ++x) {
        std::size_t y = first.f[x];
        out.f.push_back(second.f.at(y));
        out.tau.push_back(second.tau.at(y) * first.tau[x]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sequence complexes

std::optional<std::size_t> SequenceBasis::find(const Sequence& s) const
{
    auto it = lookup.find(s);
    if (it == lookup.end())
        return std::nullopt;
    return it->second;
}

void SequenceBasis::add(Sequence s, std::size_t block)
{
    lookup.emplace(s, sequences.size());
    sequences.push_back(std::move(s));
    offset.push_back(dim);
    dim += block;
}

void chain_add(const CoeffRing& ring, SeqChain& acc, const Sequence& s, const Scalar& c, const SparseVector& v)
{
    if (v.empty() || sgn(c) == 0)
        return;
    auto it = acc.find(s);
    if (it == acc.end()) {
        auto w = sparse_axpy(ring, {}, c, v);
        if (!w.empty())
            acc.emplace(s, std::move(w));
        return;
    }
    it->second = sparse_axpy(ring, it->second, c, v);
    if (it->second.empty())
        acc.erase(it);
}

SeqChain s_differential(const ColouredPoset& cp, const SeqChain& c)
{
    const auto& ring = cp.ring();
    const std::size_t top = cp.poset().top();
    SeqChain out;
    for (const auto& [s, lambda] : c) {
        const std::size_t k = s.size();
        if (k == 0)
            continue;
        if (k == 1) {
            chain_add(ring, out, {}, 1, cp.map(s[0], top).apply(lambda));
            continue;
        }
        Sequence tail(s.begin() + 1, s.end());
        chain_add(ring, out, tail, 1, cp.map(s[0], s[1]).apply(lambda));
        for (std::size_t i = 2; i <= k; ++i) {
            Sequence t = s;
            t.erase(t.begin() + static_cast<long>(i - 1));
            chain_add(ring, out, t, (i % 2 == 0) ? -1 : 1, lambda);
        }
    }
    return out;
}

SeqChain drop_degenerate(const SeqChain& c)
{
    SeqChain out;
    for (const auto& [s, v] : c) {
        bool repeat = false;
        for (std::size_t i = 1; i < s.size() && !repeat; ++i)
            repeat = s[i] == s[i - 1];
        if (!repeat)
            out.emplace(s, v);
    }
    return out;
}

SparseVector chain_coordinates(const SequenceBasis& basis, const SeqChain& c)
{
    SparseVector out;
    // map order of sequences is lexicographic, which is also the basis order
    for (const auto& [s, v] : c) {
        auto k = basis.find(s);
        if (!k)
            throw InputError("chain has a sequence outside the basis");
        for (const auto& e : v)
            out.push_back(Entry{basis.offset[*k] + e.index, e.value});
    }
    std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
    return out;
}

SeqChain chain_from_coordinates(const SequenceBasis& basis, const SparseVector& v)
{
    SeqChain out;
    for (const auto& e : v) {
        auto it = std::upper_bound(basis.offset.begin(), basis.offset.end(), e.index);
        // last block starting at or before the index; empty blocks share offsets
        std::size_t k = static_cast<std::size_t>(it - basis.offset.begin()) - 1;
        out[basis.sequences[k]].push_back(Entry{e.index - basis.offset[k], e.value});
    }
    return out;
}

namespace {

std::vector<SequenceBasis> sequence_bases(const ColouredPoset& cp, std::size_t k_max, bool strict)
{
    const auto& p = cp.poset();
    const std::size_t top = p.top();
    std::vector<SequenceBasis> bases(1);
    bases[0].add({}, cp.dim(top));
    std::vector<Sequence> prev{{}};
    for (std::size_t k = 1; k <= k_max; ++k) {
        SequenceBasis b;
        std::vector<Sequence> cur;
        for (const auto& s : prev)
            for (std::size_t z = 0; z < p.size(); ++z) {
                if (z == top)
                    continue;
                if (!s.empty() && !(strict ? p.less(s.back(), z) : p.leq(s.back(), z)))
                    continue;
                Sequence t = s;
                t.push_back(z);
                b.add(t, cp.dim(t.front()));
                cur.push_back(std::move(t));
            }
        if (cur.empty() && strict)
            break;
        bases.push_back(std::move(b));
        prev = std::move(cur);
    }
    return bases;
}

FreeChainComplex build_sequence_complex(const ColouredPoset& cp, const std::vector<SequenceBasis>& bases,
                                        bool truncated)
{
    const auto& ring = cp.ring();
    const std::size_t top = cp.poset().top();
    std::vector<std::size_t> dims;
    for (const auto& b : bases)
        dims.push_back(b.dim);
    std::map<int, ExactMatrix> d;
    for (std::size_t k = 1; k < bases.size(); ++k) {
        const auto& src = bases[k];
        const auto& dst = bases[k - 1];
        MatrixBuilder mb(ring, dst.dim, src.dim);
        for (std::size_t si = 0; si < src.sequences.size(); ++si) {
            const auto& s = src.sequences[si];
            const std::size_t block = cp.dim(s[0]);
            if (block == 0)
                continue;
            // first term: F(x1 <= x2), or F(x1 <= 1) in degree one
            Sequence tail(s.begin() + 1, s.end());
            std::size_t target = tail.empty() ? top : tail[0];
            std::size_t toff = dst.offset[*dst.find(tail)];
            const ExactMatrix& f = cp.map(s[0], target);
            for (std::size_t r = 0; r < f.rows(); ++r)
                for (const auto& e : f.row(r))
                    mb.add(toff + r, src.offset[si] + e.index, e.value);
            for (std::size_t i = 2; i <= s.size(); ++i) {
                Sequence t = s;
                t.erase(t.begin() + static_cast<long>(i - 1));
                std::size_t off = dst.offset[*dst.find(t)];
                Scalar c = (i % 2 == 0) ? -1 : 1;
                for (std::size_t b = 0; b < block; ++b)
                    mb.add(off + b, src.offset[si] + b, c);
            }
        }
        d.emplace(static_cast<int>(k), mb.build());
    }
    return FreeChainComplex(ring, dims, std::move(d), truncated);
}

} // namespace

std::vector<SequenceBasis> multi_sequence_bases(const ColouredPoset& cp, std::size_t k_max)
{
    return sequence_bases(cp, k_max, false);
}

std::vector<SequenceBasis> strict_sequence_bases(const ColouredPoset& cp)
{
    return sequence_bases(cp, cp.size(), true);
}

SequenceComplex s_complex(const ColouredPoset& cp, std::size_t k_max)
{
    if (k_max < 1)
        throw InputError("S complex needs k_max >= 1");
    auto bases = multi_sequence_bases(cp, k_max);
    auto c = build_sequence_complex(cp, bases, true);
    return SequenceComplex{std::move(c), std::move(bases), false};
}

SequenceComplex c_complex(const ColouredPoset& cp)
{
    auto bases = strict_sequence_bases(cp);
    auto c = build_sequence_complex(cp, bases, false);
    return SequenceComplex{std::move(c), std::move(bases), true};
}

SequenceComplex c_complex(const ColouredPoset& cp, std::size_t k_max)
{
    if (k_max < 1)
        throw InputError("C complex needs k_max >= 1");
    auto bases = sequence_bases(cp, k_max + 1, true);
    bool cut = bases.size() == k_max + 2;
    if (cut)
        bases.pop_back();
    auto c = build_sequence_complex(cp, bases, cut);
    return SequenceComplex{std::move(c), std::move(bases), true};
}

HomologySummary coloured_homology(const ColouredPoset& cp)
{
    return complex_homology(c_complex(cp).complex);
}

ExactMatrix sequence_map_degree(const ColouredPoset& src, const ColouredPosetMorphism& m,
                                const SequenceBasis& from, const SequenceBasis& to, bool strict)
{
    MatrixBuilder mb(src.ring(), to.dim, from.dim);
    for (std::size_t si = 0; si < from.sequences.size(); ++si) {
        const auto& s = from.sequences[si];
        Sequence img;
        for (auto x : s)
            img.push_back(m.f[x]);
        bool repeat = false;
        for (std::size_t i = 1; i < img.size() && !repeat; ++i)
            repeat = img[i] == img[i - 1];
        if (repeat && strict)
            continue;
        auto ti = to.find(img);
        if (!ti)
            throw InputError("image sequence missing from the target complex");
        std::size_t x1 = s.empty() ? src.poset().top() : s[0];
        const ExactMatrix& t = m.tau[x1];
        for (std::size_t r = 0; r < t.rows(); ++r)
            for (const auto& e : t.row(r))
                mb.add(to.offset[*ti] + r, from.offset[si] + e.index, e.value);
    }
    return mb.build();
}

std::map<int, ExactMatrix> sequence_chain_map(const ColouredPoset& src, const ColouredPoset& /*dst*/,
                                              const ColouredPosetMorphism& m, const SequenceComplex& from,
                                              const SequenceComplex& to)
{
    if (from.strict != to.strict)
        throw InputError("chain map between different kinds of sequence complex");
    std::map<int, ExactMatrix> out;
    const std::size_t top_deg = std::min(from.bases.size(), to.bases.size());
    for (std::size_t k = 0; k < top_deg; ++k)
        out.emplace(static_cast<int>(k), sequence_map_degree(src, m, from.bases[k], to.bases[k], to.strict));
    // the target may stop earlier than the source; the remaining components map to zero
    for (std::size_t k = top_deg; k < from.bases.size(); ++k)
        out.emplace(static_cast<int>(k), ExactMatrix(src.ring(), 0, from.bases[k].dim));
    return out;
}

} // namespace colposet
