#include "colposet/testkit.hpp"

#include <algorithm>

namespace colposet {

namespace {

std::uint64_t mix(std::uint64_t z)
{
    // splitmix64 finaliser
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t key(std::uint64_t seed, std::string_view path)
{
    std::uint64_t h = mix(seed);
    for (unsigned char c : path)
        h = mix(h ^ c);
    return h;
}

} // namespace

Rng::Rng(std::uint64_t seed, std::string_view path) : engine_(key(seed, path)) {}

std::size_t Rng::uniform(std::size_t lo, std::size_t hi)
{
    // modulo reduction keeps the stream identical across standard libraries
    return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
}

bool Rng::coin(double p)
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p;
}

Scalar Rng::scalar(const CoeffRing& ring)
{
    if (ring.kind() == CoeffRing::Kind::prime_field) {
        std::uint64_t p = ring.characteristic();
        return Scalar(mpz_class(static_cast<unsigned long>(engine_() % p)));
    }
    return Scalar(static_cast<long>(uniform(0, 4)) - 2);
}

Poset random_poset_with_top(Rng& rng, std::size_t n)
{
    if (n == 0)
        throw InputError("random poset needs at least one element");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i)
        labels.push_back(i + 1 == n ? "1" : "a" + std::to_string(i));
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j + 1 < n; ++j)
            if (rng.coin(0.4))
                rel.emplace_back(i, j);
        rel.emplace_back(i, n - 1);
    }
    return Poset::build(std::move(labels), rel);
}

ColouredPoset random_colouring(Rng& rng, const Poset& p, const CoeffRing& ring, std::size_t ambient_dim)
{
    if (!ring.is_field())
        throw InputError("random colourings are generated over fields only");
    const std::size_t n = p.size();
    auto random_vector = [&]() {
        SparseVector v;
        for (std::size_t i = 0; i < ambient_dim; ++i) {
            Scalar c = ring.canonical(rng.scalar(ring));
            if (sgn(c) != 0)
                v.push_back(Entry{i, c});
        }
        return v;
    };
    std::vector<SparseVector> gen(n), kill(n);
    for (auto e : p.topological_order()) {
        if (rng.coin(0.8))
            gen[e] = random_vector();
    }
    for (auto e : p.topological_order()) {
        if (!rng.coin(0.35))
            continue;
        SparseVector k;
        for (std::size_t d = 0; d < n; ++d)
            if (p.leq(d, e) && !gen[d].empty())
                k = sparse_axpy(ring, k, rng.scalar(ring), gen[d]);
        kill[e] = k;
    }
    std::vector<Subquotient> models;
    std::vector<std::size_t> dims;
    for (std::size_t e = 0; e < n; ++e) {
        std::vector<SparseVector> u, k;
        for (std::size_t d = 0; d < n; ++d)
            if (p.leq(d, e)) {
                if (!gen[d].empty())
                    u.push_back(gen[d]);
                if (!kill[d].empty())
                    k.push_back(kill[d]);
            }
        models.emplace_back(ring, ambient_dim, u, k);
        dims.push_back(models.back().dim());
    }
    std::map<CoverKey, ExactMatrix> maps;
    for (auto [a, b] : p.covers()) {
        ExactMatrix m(ring, dims[b], dims[a]);
        for (std::size_t j = 0; j < dims[a]; ++j) {
            auto c = models[b].coordinates(models[a].representatives()[j]);
            for (std::size_t i = 0; i < c.size(); ++i)
                if (sgn(c[i]) != 0)
                    m.set(i, j, c[i]);
        }
        maps.emplace(CoverKey{a, b}, std::move(m));
    }
    return ColouredPoset::build(p, ring, std::move(dims), std::move(maps));
}

ColouredPoset random_coloured_poset(const GenParams& params, std::string_view path)
{
    Rng rng(params.seed, path);
    std::size_t n = rng.uniform(1, std::max<std::size_t>(params.max_fibre_size, 1) + 2);
    Poset p = random_poset_with_top(rng, n);
    return random_colouring(rng, p, params.ring, params.max_dim);
}

namespace {

// Order preserving map P -> Q sending exactly the top to the top.
std::vector<std::size_t> random_fibre_map(Rng& rng, const Poset& p, const Poset& q)
{
    for (int attempt = 0; attempt < 20; ++attempt) {
        std::vector<long> img(p.size(), -1);
        bool ok = true;
        for (auto y : p.topological_order()) {
            if (y == p.top()) {
                img[y] = static_cast<long>(q.top());
                continue;
            }
            std::vector<std::size_t> cand;
            for (std::size_t z = 0; z < q.size(); ++z) {
                if (z == q.top())
                    continue;
                bool above = true;
                for (std::size_t w = 0; w < p.size() && above; ++w)
                    if (img[w] >= 0 && p.less(w, y) && !q.leq(static_cast<std::size_t>(img[w]), z))
                        above = false;
                if (above)
                    cand.push_back(z);
            }
            if (cand.empty()) {
                ok = false;
                break;
            }
            img[y] = static_cast<long>(cand[rng.uniform(0, cand.size() - 1)]);
        }
        if (ok)
            return {img.begin(), img.end()};
    }
    // constant map onto one non-top element
    std::size_t c = q.top() == 0 ? 1 : 0;
    std::vector<std::size_t> out(p.size(), c);
    out[p.top()] = q.top();
    return out;
}

} // namespace

Bundle random_bundle(const GenParams& params, const Poset& base, std::string_view path)
{
    Rng rng(params.seed, path);
    const std::size_t levels = base.depth(base.top()) + 1;
    std::vector<Poset> fibre_posets;
    for (std::size_t k = 0; k < levels; ++k)
        fibre_posets.push_back(random_poset_with_top(rng, rng.uniform(2, std::max<std::size_t>(params.max_fibre_size, 2))));
    std::vector<std::vector<std::size_t>> step; // step[k] : level k -> level k+1
    for (std::size_t k = 0; k + 1 < levels; ++k)
        step.push_back(random_fibre_map(rng, fibre_posets[k], fibre_posets[k + 1]));
    auto push = [&](std::size_t y, std::size_t from, std::size_t to) {
        for (std::size_t k = from; k < to; ++k)
            y = step[k][y];
        return y;
    };

    // Total poset first, then one colouring of it; fibres and twisting maps are read off.
    std::vector<std::size_t> offset;
    std::vector<std::string> labels;
    for (std::size_t x = 0; x < base.size(); ++x) {
        offset.push_back(labels.size());
        const auto& fp = fibre_posets[base.depth(x)];
        for (std::size_t y = 0; y < fp.size(); ++y)
            labels.push_back("(" + base.label(x) + "," + fp.label(y) + ")");
    }
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t x = 0; x < base.size(); ++x)
        for (std::size_t x2 = 0; x2 < base.size(); ++x2) {
            if (!base.leq(x, x2))
                continue;
            const auto& p1 = fibre_posets[base.depth(x)];
            const auto& p2 = fibre_posets[base.depth(x2)];
            for (std::size_t y = 0; y < p1.size(); ++y)
                for (std::size_t y2 = 0; y2 < p2.size(); ++y2)
                    if (p2.leq(push(y, base.depth(x), base.depth(x2)), y2) && !(x == x2 && y == y2))
                        rel.emplace_back(offset[x] + y, offset[x2] + y2);
        }
    Poset e = Poset::build(labels, rel);
    ColouredPoset big = random_colouring(rng, e, params.ring, params.max_dim);

    std::vector<ColouredPoset> fibres;
    for (std::size_t x = 0; x < base.size(); ++x) {
        std::vector<std::size_t> elems;
        for (std::size_t y = 0; y < fibre_posets[base.depth(x)].size(); ++y)
            elems.push_back(offset[x] + y);
        fibres.push_back(induced_colouring(big, elems));
    }
    std::map<CoverKey, ColouredPosetMorphism> morphisms;
    for (auto [x, z] : base.covers()) {
        ColouredPosetMorphism m;
        for (std::size_t y = 0; y < fibre_posets[base.depth(x)].size(); ++y) {
            std::size_t fy = push(y, base.depth(x), base.depth(z));
            m.f.push_back(fy);
            m.tau.push_back(big.map(offset[x] + y, offset[z] + fy));
        }
        morphisms.emplace(CoverKey{x, z}, std::move(m));
    }
    return Bundle::build(base, std::move(fibres), std::move(morphisms));
}

std::pair<Bundle, BundleMorphism> collapse_to_trivial(const Bundle& b)
{
    const auto& ring = b.ring();
    auto two = ColouredPoset::build(Poset::build({"0", "1"}, {{0, 1}}), ring, {0, 0},
                                    {{CoverKey{0, 1}, ExactMatrix(ring, 0, 0)}});
    Bundle target = product_bundle(b.base(), two);
    BundleMorphism m;
    for (std::size_t x = 0; x < b.base().size(); ++x) {
        m.g.push_back(x);
        ColouredPosetMorphism eta;
        const auto& fx = b.fibre(x);
        for (std::size_t y = 0; y < fx.size(); ++y) {
            eta.f.push_back(y == fx.poset().top() ? 1 : 0);
            eta.tau.push_back(ExactMatrix(ring, 0, fx.dim(y)));
        }
        m.eta.push_back(std::move(eta));
    }
    return {std::move(target), std::move(m)};
}

BundleMorphism scalar_bundle_morphism(const Bundle& b, const Scalar& c)
{
    BundleMorphism m;
    for (std::size_t x = 0; x < b.base().size(); ++x) {
        m.g.push_back(x);
        ColouredPosetMorphism eta = identity_morphism(b.fibre(x));
        for (auto& t : eta.tau)
            t = t.scaled(c);
        m.eta.push_back(std::move(eta));
    }
    return m;
}

} // namespace colposet
