#include "colposet/khovanov.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>
#include <set>

namespace colposet {

namespace {

std::size_t popcount(std::size_t x) { return static_cast<std::size_t>(std::popcount(x)); }

std::size_t spread_bits(std::size_t mask, const std::vector<std::size_t>& positions)
{
    std::size_t out = 0;
    for (std::size_t k = 0; k < positions.size(); ++k)
        if (mask >> k & 1)
            out |= std::size_t(1) << positions[k];
    return out;
}

void require_field(const CoeffRing& ring, const char* what)
{
    if (!ring.is_field())
        throw InputError(std::string(what) + " needs field coefficients");
}

// ---------------------------------------------------------------------------
// PD text

struct Cursor {
    std::string_view s;
    std::size_t i = 0;

    void skip()
    {
        while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ';'))
            ++i;
    }
    bool eat(char c)
    {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(char c)
    {
        if (!eat(c))
            throw InputError(std::string("PD: expected '") + c + "' at offset " + std::to_string(i));
    }
    bool word(std::string_view w)
    {
        skip();
        if (s.substr(i, w.size()) == w) {
            i += w.size();
            return true;
        }
        return false;
    }
    long integer()
    {
        skip();
        std::size_t start = i;
        if (i < s.size() && (s[i] == '-' || s[i] == '+'))
            ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            ++i;
        if (start == i || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
            throw InputError("PD: expected an integer at offset " + std::to_string(start));
        return std::stol(std::string(s.substr(start, i - start)));
    }
    bool done()
    {
        skip();
        return i >= s.size();
    }
};

using Slot = std::pair<std::size_t, int>; // (crossing, position)

std::map<int, std::vector<Slot>> occurrences(const LinkDiagram& d)
{
    std::map<int, std::vector<Slot>> occ;
    for (std::size_t c = 0; c < d.size(); ++c)
        for (int k = 0; k < 4; ++k)
            occ[d.crossings[c][static_cast<std::size_t>(k)]].push_back({c, k});
    for (const auto& [label, v] : occ)
        if (v.size() != 2)
            throw InputError("PD: arc " + std::to_string(label) + " appears " + std::to_string(v.size()) +
                             " times, expected 2");
    return occ;
}

// Signs from strand directions: under-strands run from slot 1 to slot 3; an over-strand
// entering through slot 4 and leaving through slot 2 is a positive crossing.
std::vector<int> crossing_signs(const LinkDiagram& d)
{
    auto occ = occurrences(d);
    const std::size_t n = d.size();
    std::vector<int> sign(n, 0);
    std::vector<char> seen(2 * n, 0); // (crossing, strand) with strand 0 under, 1 over

    auto walk = [&](std::size_t c, int enter) {
        while (true) {
            const std::size_t strand = static_cast<std::size_t>(enter % 2);
            if (seen[2 * c + strand])
                return;
            seen[2 * c + strand] = 1;
            if (strand == 0 && enter != 0)
                throw InputError("PD: strand directions are inconsistent at crossing " + std::to_string(c + 1));
            if (strand == 1)
                sign[c] = enter == 3 ? 1 : -1;
            const int leave = (enter + 2) % 4;
            const auto& two = occ.at(d.crossings[c][static_cast<std::size_t>(leave)]);
            const Slot next = two[0] == Slot{c, leave} ? two[1] : two[0];
            c = next.first;
            enter = next.second;
        }
    };
    for (std::size_t c = 0; c < n; ++c)
        if (!seen[2 * c])
            walk(c, 0);
    // components that only pass over: orient along increasing labels
    for (std::size_t c = 0; c < n; ++c)
        if (!seen[2 * c + 1]) {
            const int j = d.crossings[c][1], l = d.crossings[c][3];
            walk(c, (j == l + 1 || l > j + 1) ? 3 : 1);
        }
    return sign;
}

} // namespace

std::size_t LinkDiagram::positive() const
{
    return static_cast<std::size_t>(std::count(signs.begin(), signs.end(), 1));
}

std::size_t LinkDiagram::negative() const
{
    return static_cast<std::size_t>(std::count(signs.begin(), signs.end(), -1));
}

LinkDiagram parse_pd(std::string_view text)
{
    Cursor cur{text};
    LinkDiagram d;
    if (!cur.word("PD"))
        throw InputError("PD: text must start with PD[");
    cur.expect('[');
    if (!cur.eat(']')) {
        do {
            if (!cur.eat('X'))
                throw InputError("PD: expected X[...] at offset " + std::to_string(cur.i));
            cur.expect('[');
            std::array<int, 4> x{};
            for (int k = 0; k < 4; ++k) {
                if (k)
                    cur.expect(',');
                x[static_cast<std::size_t>(k)] = static_cast<int>(cur.integer());
            }
            cur.expect(']');
            d.crossings.push_back(x);
        } while (cur.eat(','));
        cur.expect(']');
    }
    if (d.size() > 16)
        throw InputError("PD: at most 16 crossings are supported");

    bool have_circles = false;
    std::vector<int> orient;
    bool have_orient = false;
    while (!cur.done()) {
        cur.eat(',');
        if (cur.word("circles")) {
            cur.expect('=');
            long k = cur.integer();
            if (k < 0)
                throw InputError("PD: circles must be nonnegative");
            d.extra_circles = static_cast<std::size_t>(k);
            have_circles = true;
        } else if (cur.word("orient")) {
            cur.expect('[');
            have_orient = true;
            if (!cur.eat(']')) {
                do {
                    if (cur.eat('+'))
                        orient.push_back(1);
                    else if (cur.eat('-'))
                        orient.push_back(-1);
                    else
                        throw InputError("PD: orient entries are + or -");
                } while (cur.eat(','));
                cur.expect(']');
            }
        } else {
            throw InputError("PD: unexpected text at offset " + std::to_string(cur.i));
        }
    }
    if (d.crossings.empty() && !have_circles)
        throw InputError("PD[] needs an explicit circles=k annotation");

    occurrences(d);
    if (have_orient) {
        if (orient.size() != d.size())
            throw InputError("PD: orient lists " + std::to_string(orient.size()) + " signs for " +
                             std::to_string(d.size()) + " crossings");
        d.signs = orient;
    } else {
        d.signs = crossing_signs(d);
    }
    return d;
}

std::string to_pd(const LinkDiagram& d)
{
    std::string s = "PD[";
    for (std::size_t c = 0; c < d.size(); ++c) {
        const auto& x = d.crossings[c];
        s += (c ? ",X[" : "X[") + std::to_string(x[0]) + "," + std::to_string(x[1]) + "," + std::to_string(x[2]) +
             "," + std::to_string(x[3]) + "]";
    }
    s += "]";
    if (d.extra_circles)
        s += " circles=" + std::to_string(d.extra_circles);
    return s;
}

// ---------------------------------------------------------------------------
// Resolutions and the Frobenius algebra

std::size_t Resolution::rank() const { return popcount(alpha); }

Resolution resolve(const LinkDiagram& d, std::size_t alpha)
{
    std::map<int, std::size_t> id;
    std::vector<int> labels;
    for (const auto& x : d.crossings)
        for (int a : x)
            if (id.emplace(a, labels.size()).second)
                labels.push_back(a);
    std::vector<std::size_t> parent(labels.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t a) {
        while (parent[a] != a)
            a = parent[a] = parent[parent[a]];
        return a;
    };
    auto join = [&](int a, int b) { parent[find(id.at(a))] = find(id.at(b)); };
    for (std::size_t c = 0; c < d.size(); ++c) {
        const auto& x = d.crossings[c];
        if (alpha >> c & 1) {
            join(x[0], x[3]);
            join(x[1], x[2]);
        } else {
            join(x[0], x[1]);
            join(x[2], x[3]);
        }
    }
    std::map<std::size_t, std::vector<int>> groups;
    for (std::size_t a = 0; a < labels.size(); ++a)
        groups[find(a)].push_back(labels[a]);
    Resolution r;
    r.alpha = alpha;
    for (auto& [root, g] : groups) {
        std::sort(g.begin(), g.end());
        r.circles.push_back(g);
    }
    std::sort(r.circles.begin(), r.circles.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) { return a.front() < b.front(); });
    for (std::size_t i = 0; i < d.extra_circles; ++i)
        r.circles.emplace_back();
    for (std::size_t i = 0; i < r.circles.size(); ++i)
        for (int a : r.circles[i])
            r.circle_of_arc[a] = i;
    return r;
}

ExactMatrix saddle_map(const LinkDiagram& d, const CoeffRing& ring, const Resolution& from, const Resolution& to,
                       std::size_t c)
{
    if ((from.alpha >> c & 1) || to.alpha != (from.alpha | std::size_t(1) << c))
        throw InputError("saddle_map: resolutions do not differ exactly at crossing " + std::to_string(c + 1));
    const auto& x = d.crossings[c];
    const std::size_t kf = from.count(), kt = to.count();
    const std::size_t extra = d.extra_circles;

    // where the untouched circles go
    auto target_of = [&](std::size_t o) {
        if (o >= kf - extra)
            return kt - extra + (o - (kf - extra));
        return to.circle_of_arc.at(from.circles[o].front());
    };

    const std::size_t a = from.circle_of_arc.at(x[0]);
    const std::size_t b = from.circle_of_arc.at(x[2]);
    MatrixBuilder mb(ring, std::size_t(1) << kt, std::size_t(1) << kf);
    const bool merge = a != b;
    std::vector<std::size_t> others;
    for (std::size_t o = 0; o < kf; ++o)
        if (o != a && o != b)
            others.push_back(o);
    std::vector<std::size_t> others_target;
    for (auto o : others)
        others_target.push_back(target_of(o));

    for (std::size_t mask = 0; mask < (std::size_t(1) << kf); ++mask) {
        std::size_t rest = 0;
        for (std::size_t k = 0; k < others.size(); ++k)
            if (mask >> others[k] & 1)
                rest |= std::size_t(1) << others_target[k];
        if (merge) {
            // m(1 v) = v, m(x x) = 0
            const bool va = mask >> a & 1, vb = mask >> b & 1;
            if (va && vb)
                continue;
            const std::size_t m = to.circle_of_arc.at(x[0]);
            mb.add((va || vb) ? (rest | std::size_t(1) << m) : rest, mask, Scalar(1));
        } else {
            // delta(1) = 1 x + x 1, delta(x) = x x
            const std::size_t s1 = to.circle_of_arc.at(x[0]), s2 = to.circle_of_arc.at(x[1]);
            const std::size_t b1 = std::size_t(1) << s1, b2 = std::size_t(1) << s2;
            if (mask >> a & 1) {
                mb.add(rest | b1 | b2, mask, Scalar(1));
            } else {
                mb.add(rest | b2, mask, Scalar(1));
                mb.add(rest | b1, mask, Scalar(1));
            }
        }
    }
    return mb.build();
}

int tensor_degree(std::size_t mask, std::size_t factors, std::size_t shift)
{
    return static_cast<int>(factors) - 2 * static_cast<int>(popcount(mask)) + static_cast<int>(shift);
}

FreeChainComplex GradedComplex::strand(int j) const
{
    std::vector<std::vector<std::size_t>> keep(qdeg.size());
    for (std::size_t i = 0; i < qdeg.size(); ++i)
        for (std::size_t k = 0; k < qdeg[i].size(); ++k)
            if (qdeg[i][k] == j)
                keep[i].push_back(k);
    return complex.restricted(keep);
}

std::vector<int> GradedComplex::occurring() const
{
    std::set<int> s;
    for (const auto& v : qdeg)
        s.insert(v.begin(), v.end());
    return {s.begin(), s.end()};
}

namespace {

// The cube over the crossings listed in `active` (in that order), with every other crossing
// resolved as in base_alpha. Homological degree |active| - |beta|; q-degree counts the full
// rank of base_alpha + beta.
struct PartialCube {
    GradedComplex graded;
    std::vector<std::size_t> alphas;               // beta mask -> full resolution
    std::vector<std::vector<std::size_t>> members; // degree -> beta masks, ascending
    std::vector<std::size_t> block_offset;         // beta mask -> offset inside its degree
};

PartialCube partial_cube(const LinkDiagram& d, const CoeffRing& ring, const std::vector<std::size_t>& active,
                         std::size_t base_alpha, std::map<std::size_t, Resolution>& cache)
{
    auto res = [&](std::size_t alpha) -> const Resolution& {
        auto it = cache.find(alpha);
        if (it == cache.end())
            it = cache.emplace(alpha, resolve(d, alpha)).first;
        return it->second;
    };
    const std::size_t k = active.size();
    const std::size_t count = std::size_t(1) << k;
    PartialCube pc;
    pc.alphas.resize(count);
    pc.block_offset.resize(count);
    pc.members.assign(k + 1, {});
    pc.graded.qdeg.assign(k + 1, {});
    std::vector<std::size_t> dims(k + 1, 0);
    for (std::size_t beta = 0; beta < count; ++beta) {
        const std::size_t alpha = base_alpha | spread_bits(beta, active);
        pc.alphas[beta] = alpha;
        const std::size_t i = k - popcount(beta);
        pc.members[i].push_back(beta);
        pc.block_offset[beta] = dims[i];
        const auto& r = res(alpha);
        const std::size_t size = std::size_t(1) << r.count();
        for (std::size_t m = 0; m < size; ++m)
            pc.graded.qdeg[i].push_back(tensor_degree(m, r.count(), popcount(alpha)));
        dims[i] += size;
    }
    std::map<int, ExactMatrix> diffs;
    for (std::size_t i = 1; i <= k; ++i) {
        MatrixBuilder mb(ring, dims[i - 1], dims[i]);
        for (auto beta : pc.members[i])
            for (std::size_t t = 0; t < k; ++t) {
                if (beta >> t & 1)
                    continue;
                const std::size_t to = beta | std::size_t(1) << t;
                const Scalar sign = popcount(beta & ((std::size_t(1) << t) - 1)) % 2 ? -1 : 1;
                auto m = saddle_map(d, ring, res(pc.alphas[beta]), res(pc.alphas[to]), active[t]);
                for (std::size_t row = 0; row < m.rows(); ++row)
                    for (const auto& e : m.row(row))
                        mb.add(pc.block_offset[to] + row, pc.block_offset[beta] + e.index, sign * e.value);
            }
        diffs.emplace(static_cast<int>(i), mb.build());
    }
    pc.graded.complex = FreeChainComplex(ring, dims, std::move(diffs));
    return pc;
}

std::vector<std::size_t> all_crossings(const LinkDiagram& d)
{
    std::vector<std::size_t> v(d.size());
    std::iota(v.begin(), v.end(), 0);
    return v;
}

} // namespace

GradedComplex cube_complex(const LinkDiagram& d, const CoeffRing& ring)
{
    std::map<std::size_t, Resolution> cache;
    auto pc = partial_cube(d, ring, all_crossings(d), 0, cache);
    for (int i = 2; i <= pc.graded.complex.top_degree(); ++i) {
        auto dd = pc.graded.complex.differential(i - 1) * pc.graded.complex.differential(i);
        if (!dd.is_zero())
            throw VerificationError("cube complex: d^2 != 0 in degree " + std::to_string(i));
    }
    return std::move(pc.graded);
}

std::size_t BigradedHomology::rank(int i, int j) const
{
    auto it = cells.find({i, j});
    return it == cells.end() ? 0 : it->second.free_rank;
}

std::size_t BigradedHomology::total_rank() const
{
    std::size_t s = 0;
    for (const auto& [cell, h] : cells)
        s += h.free_rank;
    return s;
}

BigradedHomology unnormalised_homology(const LinkDiagram& d, const CoeffRing& ring)
{
    auto g = cube_complex(d, ring);
    BigradedHomology out;
    for (int j : g.occurring()) {
        auto h = complex_homology(g.strand(j));
        for (const auto& [i, dh] : h.degrees)
            if (dh.free_rank || !dh.torsion.empty())
                out.cells[{i, j}] = dh;
    }
    return out;
}

BigradedHomology normalised_homology(const LinkDiagram& d, const CoeffRing& ring)
{
    auto u = unnormalised_homology(d, ring);
    const int np = static_cast<int>(d.positive()), nn = static_cast<int>(d.negative());
    BigradedHomology out;
    for (const auto& [cell, h] : u.cells)
        out.cells[{cell.first - np, cell.second + np - 2 * nn}] = h;
    return out;
}

ColouredPoset khovanov_colouring(const LinkDiagram& d, const CoeffRing& ring)
{
    const std::size_t n = d.size();
    const std::size_t count = std::size_t(1) << n;
    std::vector<Resolution> res;
    for (std::size_t a = 0; a < count; ++a)
        res.push_back(resolve(d, a));
    std::vector<std::size_t> dims;
    std::vector<std::vector<int>> deg;
    for (const auto& r : res) {
        dims.push_back(std::size_t(1) << r.count());
        deg.emplace_back();
        for (std::size_t m = 0; m < dims.back(); ++m)
            deg.back().push_back(tensor_degree(m, r.count(), r.rank()));
    }
    std::map<CoverKey, ExactMatrix> maps;
    for (std::size_t a = 0; a < count; ++a)
        for (std::size_t c = 0; c < n; ++c)
            if (!(a >> c & 1)) {
                const std::size_t b = a | std::size_t(1) << c;
                maps.emplace(CoverKey{a, b}, saddle_map(d, ring, res[a], res[b], c));
            }
    return ColouredPoset::build(boolean_lattice(n), ring, std::move(dims), std::move(maps)).with_grading(std::move(deg));
}

int degree_bridge(const LinkDiagram& d, const CoeffRing& ring)
{
    require_field(ring, "degree_bridge");
    auto kh = unnormalised_homology(d, ring);
    auto cp = khovanov_colouring(d, ring);
    std::map<std::pair<int, int>, std::size_t> poset_side;
    for (int j : cp.occurring_degrees()) {
        auto h = coloured_homology(cp.restrict_degree(j));
        for (const auto& [n, dh] : h.degrees)
            if (dh.free_rank)
                poset_side[{n, j}] = dh.free_rank;
    }
    if (poset_side.empty() && kh.cells.empty())
        return 0;
    const int span = static_cast<int>(d.size()) + 2;
    for (int s = -span; s <= span; ++s) {
        bool ok = true;
        for (const auto& [cell, r] : poset_side)
            ok = ok && kh.rank(cell.first - s, cell.second) == r;
        for (const auto& [cell, h] : kh.cells) {
            auto it = poset_side.find({cell.first + s, cell.second});
            ok = ok && (it == poset_side.end() ? 0 : it->second) == h.free_rank;
        }
        if (ok)
            return s;
    }
    throw VerificationError("degree_bridge: coloured poset homology of the Khovanov colouring is not a shift of "
                            "the unnormalised homology for " + to_pd(d));
}

// ---------------------------------------------------------------------------
// Fixed crossings

TriGradedComplex fixed_crossing_complex(const LinkDiagram& d, const std::vector<std::size_t>& fixed,
                                        const CoeffRing& ring, const std::vector<std::size_t>& free_order)
{
    require_field(ring, "fixed_crossing_complex");
    const std::size_t n = d.size();
    std::vector<char> is_fixed(n, 0);
    for (auto c : fixed) {
        if (c >= n)
            throw InputError("fixed crossing " + std::to_string(c + 1) + " out of range");
        if (is_fixed[c])
            throw InputError("fixed crossing " + std::to_string(c + 1) + " listed twice");
        is_fixed[c] = 1;
    }
    TriGradedComplex out;
    out.ring = ring;
    out.fixed = fixed;
    if (free_order.empty()) {
        for (std::size_t c = 0; c < n; ++c)
            if (!is_fixed[c])
                out.free.push_back(c);
    } else {
        auto sorted = free_order;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::size_t> expect;
        for (std::size_t c = 0; c < n; ++c)
            if (!is_fixed[c])
                expect.push_back(c);
        if (sorted != expect)
            throw InputError("free crossing order is not a permutation of the free crossings");
        out.free = free_order;
    }
    const std::size_t ell = out.free.size();
    const std::size_t count = std::size_t(1) << ell;

    std::map<std::size_t, Resolution> cache;
    std::vector<PartialCube> cubes;
    for (std::size_t x = 0; x < count; ++x)
        cubes.push_back(partial_cube(d, ring, fixed, spread_bits(x, out.free), cache));

    // per vertex: strand complexes and homology models, keyed by (i, j)
    using Key = std::pair<int, int>;
    struct StrandData {
        std::vector<std::vector<std::size_t>> keep; // coordinates of q-degree j, per degree
        FreeChainComplex complex;
    };
    std::vector<std::map<int, StrandData>> strands(count);
    std::vector<std::map<Key, Subquotient>> models(count);
    out.vertex_dims.assign(count, {});
    for (std::size_t x = 0; x < count; ++x) {
        const auto& g = cubes[x].graded;
        for (int j : g.occurring()) {
            StrandData sd{std::vector<std::vector<std::size_t>>(g.qdeg.size()), g.complex};
            for (std::size_t i = 0; i < g.qdeg.size(); ++i)
                for (std::size_t k = 0; k < g.qdeg[i].size(); ++k)
                    if (g.qdeg[i][k] == j)
                        sd.keep[i].push_back(k);
            sd.complex = g.complex.restricted(sd.keep);
            for (int i = 0; i <= sd.complex.top_degree(); ++i) {
                auto m = homology_model(sd.complex, i);
                if (m.dim()) {
                    out.vertex_dims[x][{i, j}] = m.dim();
                    models[x].emplace(Key{i, j}, std::move(m));
                }
            }
            strands[x].emplace(j, std::move(sd));
        }
    }

    // the saddle chain maps along free crossings, on homology
    std::map<std::pair<std::size_t, std::size_t>, std::map<Key, ExactMatrix>> delta;
    for (std::size_t x = 0; x < count; ++x)
        for (std::size_t t = 0; t < ell; ++t) {
            if (x >> t & 1)
                continue;
            const std::size_t y = x | std::size_t(1) << t;
            const auto& cx = cubes[x];
            const auto& cy = cubes[y];
            const std::size_t k = fixed.size();
            std::map<int, ExactMatrix> chain;
            for (std::size_t i = 0; i <= k; ++i) {
                MatrixBuilder mb(ring, cy.graded.complex.dim(static_cast<int>(i)), cx.graded.complex.dim(static_cast<int>(i)));
                for (auto beta : cx.members[i]) {
                    auto m = saddle_map(d, ring, cache.at(cx.alphas[beta]), cache.at(cy.alphas[beta]), out.free[t]);
                    for (std::size_t row = 0; row < m.rows(); ++row)
                        for (const auto& e : m.row(row))
                            mb.add(cy.block_offset[beta] + row, cx.block_offset[beta] + e.index, e.value);
                }
                chain.emplace(static_cast<int>(i), mb.build());
            }
            for (const auto& [j, sx] : strands[x]) {
                auto sy = strands[y].find(j);
                std::map<int, ExactMatrix> f;
                for (std::size_t i = 0; i <= k; ++i) {
                    const auto& rows = sy == strands[y].end() ? std::vector<std::size_t>{} : sy->second.keep[i];
                    f.emplace(static_cast<int>(i), chain.at(static_cast<int>(i)).submatrix(rows, sx.keep[i]));
                }
                if (sy != strands[y].end())
                    check_chain_map(f, sx.complex, sy->second.complex);
                for (std::size_t i = 0; i <= k; ++i) {
                    Key key{static_cast<int>(i), j};
                    auto mx = models[x].find(key);
                    auto my = models[y].find(key);
                    if (mx == models[x].end() || my == models[y].end())
                        continue;
                    delta[{x, y}].emplace(key, induced_homology_map(f.at(static_cast<int>(i)), mx->second, my->second));
                }
            }
        }

    // assemble K over p = ell - rk(x), one complex per (q, j)
    std::set<Key> keys;
    for (const auto& vd : out.vertex_dims)
        for (const auto& [key, dim] : vd)
            keys.insert(key);
    for (const auto& key : keys) {
        std::vector<std::size_t> dims(ell + 1, 0);
        std::vector<std::size_t> offset(count, 0);
        for (std::size_t p = 0; p <= ell; ++p)
            for (std::size_t x = 0; x < count; ++x)
                if (ell - popcount(x) == p) {
                    offset[x] = dims[p];
                    auto it = out.vertex_dims[x].find(key);
                    dims[p] += it == out.vertex_dims[x].end() ? 0 : it->second;
                }
        std::map<int, ExactMatrix> diffs;
        for (std::size_t p = 1; p <= ell; ++p) {
            MatrixBuilder mb(ring, dims[p - 1], dims[p]);
            for (std::size_t x = 0; x < count; ++x) {
                if (ell - popcount(x) != p)
                    continue;
                for (std::size_t t = 0; t < ell; ++t) {
                    if (x >> t & 1)
                        continue;
                    const std::size_t y = x | std::size_t(1) << t;
                    auto di = delta.find({x, y});
                    if (di == delta.end())
                        continue;
                    auto mi = di->second.find(key);
                    if (mi == di->second.end())
                        continue;
                    const Scalar sign = popcount(x & ((std::size_t(1) << t) - 1)) % 2 ? -1 : 1;
                    for (std::size_t row = 0; row < mi->second.rows(); ++row)
                        for (const auto& e : mi->second.row(row))
                            mb.add(offset[y] + row, offset[x] + e.index, sign * e.value);
                }
            }
            diffs.emplace(static_cast<int>(p), mb.build());
        }
        for (std::size_t p = 2; p <= ell; ++p)
            if (!(diffs.at(static_cast<int>(p) - 1) * diffs.at(static_cast<int>(p))).is_zero())
                throw VerificationError("fixed-crossing complex: d^2 != 0");
        out.strands.emplace(key, FreeChainComplex(ring, dims, std::move(diffs)));
    }
    return out;
}

std::map<TriCell, std::size_t> fixed_crossing_homology(const TriGradedComplex& k)
{
    std::map<TriCell, std::size_t> out;
    for (const auto& [key, c] : k.strands) {
        auto h = complex_homology(c);
        for (const auto& [p, dh] : h.degrees)
            if (dh.free_rank)
                out[{p, key.first, key.second}] = dh.free_rank;
    }
    return out;
}

std::map<TriCell, std::size_t> fixed_crossing_homology(const LinkDiagram& d, const std::vector<std::size_t>& fixed,
                                                       const CoeffRing& ring)
{
    return fixed_crossing_homology(fixed_crossing_complex(d, fixed, ring));
}

FixedCrossingRun fixed_crossing_spectral_sequence(const LinkDiagram& d, const std::vector<std::size_t>& fixed, int j,
                                                  const CoeffRing& ring, int r_max)
{
    require_field(ring, "fixed_crossing_spectral_sequence");
    const std::size_t n = d.size();
    std::size_t mask = 0;
    for (auto c : fixed) {
        if (c >= n)
            throw InputError("fixed crossing " + std::to_string(c + 1) + " out of range");
        mask |= std::size_t(1) << c;
    }
    FixedCrossingRun run;
    run.j = j;
    run.shift = degree_bridge(d, ring);

    auto cp = khovanov_colouring(d, ring).restrict_degree(j);
    auto bundle = boolean_decompose(cp, n, mask);
    auto k = bicomplex(bundle, static_cast<int>(n) + 1);
    run.pages = spectral_sequence(k, r_max);

    for (const auto& [cell, dim] : fixed_crossing_homology(d, fixed, ring)) {
        auto [p, q, jj] = cell;
        if (jj == j)
            run.e2_expected[{p + run.shift, q + run.shift}] = dim;
    }
    auto kh = unnormalised_homology(d, ring);
    const int top = run.pages.max_degree;
    for (int m = 0; m <= top; ++m)
        run.unnormalised[m] = kh.rank(m - run.shift, j);

    const auto& e2 = run.pages.page(2).dims;
    for (const auto& [cell, dim] : e2) {
        auto it = run.e2_expected.find(cell);
        run.e2_matches = run.e2_matches && (it == run.e2_expected.end() ? 0 : it->second) == dim;
    }
    for (const auto& [cell, dim] : run.e2_expected)
        if (cell.first + cell.second <= top)
            run.e2_matches = run.e2_matches && e2.count(cell) && e2.at(cell) == dim;
    for (int m = 0; m <= top; ++m) {
        std::size_t sum = 0;
        for (const auto& [cell, dim] : run.pages.infinity)
            if (cell.first + cell.second == m)
                sum += dim;
        run.converges = run.converges && sum == run.unnormalised[m];
    }
    return run;
}

} // namespace colposet
