#include "colposet/bundle.hpp"

namespace colposet {

namespace {

bool same_morphism(const ColouredPosetMorphism& a, const ColouredPosetMorphism& b)
{
    if (a.f != b.f || a.tau.size() != b.tau.size())
        return false;
    for (std::size_t i = 0; i < a.tau.size(); ++i)
        if (a.tau[i] != b.tau[i])
            return false;
    return true;
}

std::size_t spread(std::size_t idx, const std::vector<std::size_t>& bits)
{
    std::size_t mask = 0;
    for (std::size_t k = 0; k < bits.size(); ++k)
        if (idx >> k & 1)
            mask |= std::size_t(1) << bits[k];
    return mask;
}

} // namespace

Bundle Bundle::build(Poset base, std::vector<ColouredPoset> fibres,
                     std::map<CoverKey, ColouredPosetMorphism> cover_morphisms)
{
    const std::size_t n = base.size();
    if (fibres.size() != n)
        throw InputError("bundle needs one fibre per base element");
    for (const auto& f : fibres)
        if (f.ring() != fibres.front().ring())
            throw InputError("bundle fibres over different rings");
    for (const auto& [key, m] : cover_morphisms)
        if (key.first >= n || key.second >= n || !base.is_cover(key.first, key.second))
            throw InputError("bundle morphism given on a pair that is not a base cover");
    for (auto [a, b] : base.covers()) {
        auto it = cover_morphisms.find({a, b});
        if (it == cover_morphisms.end())
            throw InputError("bundle morphism missing for base cover " + base.label(a) + " < " + base.label(b));
        try {
            validate_morphism(fibres[a], fibres[b], it->second);
        } catch (const InputError& e) {
            throw InputError("bundle morphism over " + base.label(a) + " < " + base.label(b) + ": " + e.what());
        }
    }

    Bundle bd;
    bd.fibres_ = std::move(fibres);
    bd.cover_ = std::move(cover_morphisms);
    bd.composite_.assign(n * n, std::nullopt);
    const auto& topo = base.topological_order();
    for (std::size_t x = 0; x < n; ++x) {
        bd.composite_[x * n + x] = identity_morphism(bd.fibres_[x]);
        for (auto y : topo) {
            if (!base.less(x, y))
                continue;
            auto& slot = bd.composite_[x * n + y];
            for (auto z : base.lower_covers(y)) {
                if (!base.leq(x, z))
                    continue;
                auto cand = compose_morphisms(*bd.composite_[x * n + z], bd.cover_.at({z, y}));
                if (!slot)
                    slot = std::move(cand);
                else if (!same_morphism(*slot, cand))
                    throw InputError("bundle is not functorial: two paths from " + base.label(x) + " to " +
                                     base.label(y) + " give different morphisms");
            }
        }
    }
    bd.base_ = std::move(base);
    return bd;
}

const ColouredPosetMorphism& Bundle::morphism(std::size_t x, std::size_t z) const
{
    const auto& slot = composite_.at(x * base_.size() + z);
    if (!slot)
        throw InputError("base elements are not comparable: " + base_.label(x) + ", " + base_.label(z));
    return *slot;
}

Bundle product_bundle(const Poset& base, const ColouredPoset& cp)
{
    std::vector<ColouredPoset> fibres(base.size(), cp);
    std::map<CoverKey, ColouredPosetMorphism> m;
    for (auto c : base.covers())
        m.emplace(c, identity_morphism(cp));
    return Bundle::build(base, std::move(fibres), std::move(m));
}

TotalColouredPoset total(const Bundle& b)
{
    const auto& base = b.base();
    TotalColouredPoset t;
    std::vector<std::string> labels;
    std::vector<std::size_t> dims;
    for (std::size_t x = 0; x < base.size(); ++x) {
        t.offset.push_back(labels.size());
        const auto& fx = b.fibre(x);
        for (std::size_t y = 0; y < fx.size(); ++y) {
            labels.push_back("(" + base.label(x) + "," + fx.poset().label(y) + ")");
            t.projection.push_back(x);
            dims.push_back(fx.dim(y));
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t x = 0; x < base.size(); ++x)
        for (std::size_t x2 = 0; x2 < base.size(); ++x2) {
            if (!base.leq(x, x2))
                continue;
            const auto& m = b.morphism(x, x2);
            const auto& target = b.fibre(x2).poset();
            for (std::size_t y = 0; y < b.fibre(x).size(); ++y)
                for (std::size_t y2 = 0; y2 < target.size(); ++y2)
                    if (target.leq(m.f[y], y2) && !(x == x2 && y == y2))
                        rel.emplace_back(t.offset[x] + y, t.offset[x2] + y2);
        }
    Poset e = Poset::build(std::move(labels), rel);

    std::map<CoverKey, ExactMatrix> maps;
    for (auto [u, v] : e.covers()) {
        std::size_t x = t.projection[u], x2 = t.projection[v];
        std::size_t y = u - t.offset[x], y2 = v - t.offset[x2];
        const auto& m = b.morphism(x, x2);
        maps.emplace(CoverKey{u, v}, b.fibre(x2).map(m.f[y], y2) * m.tau[y]);
    }
    t.total = ColouredPoset::build(std::move(e), b.ring(), dims, std::move(maps));

    bool graded = true;
    for (const auto& f : b.fibres())
        graded = graded && f.graded();
    if (graded) {
        std::vector<std::vector<int>> deg;
        for (std::size_t x = 0; x < base.size(); ++x)
            for (std::size_t y = 0; y < b.fibre(x).size(); ++y)
                deg.push_back(b.fibre(x).degrees(y));
        t.total = t.total.with_grading(std::move(deg));
    }
    return t;
}

Bundle restrict(const Bundle& b, const std::vector<std::size_t>& elements)
{
    Poset sub = b.base().induced(elements);
    std::vector<ColouredPoset> fibres;
    for (auto x : elements)
        fibres.push_back(b.fibre(x));
    std::map<CoverKey, ColouredPosetMorphism> m;
    for (auto [i, j] : sub.covers())
        m.emplace(CoverKey{i, j}, b.morphism(elements[i], elements[j]));
    return Bundle::build(std::move(sub), std::move(fibres), std::move(m));
}

std::size_t boolean_decompose_original(std::size_t n, std::size_t a_mask, std::size_t base_index,
                                       std::size_t fibre_index)
{
    std::vector<std::size_t> a_bits, c_bits;
    for (std::size_t i = 0; i < n; ++i)
        (a_mask >> i & 1 ? a_bits : c_bits).push_back(i);
    return spread(base_index, c_bits) | spread(fibre_index, a_bits);
}

Bundle boolean_decompose(const ColouredPoset& cp, std::size_t n, std::size_t a_mask)
{
    const auto& p = cp.poset();
    const std::size_t full = std::size_t(1) << n;
    if (a_mask >= full)
        throw InputError("decomposition subset is not contained in the ground set");
    if (p.size() != full)
        throw InputError("colouring is not on a Boolean lattice of rank " + std::to_string(n));
    for (std::size_t a = 0; a < full; ++a)
        for (std::size_t c = 0; c < full; ++c)
            if (p.leq(a, c) != ((a & c) == a))
                throw InputError("colouring is not on a Boolean lattice indexed by subsets");

    std::vector<std::size_t> a_bits, c_bits;
    for (std::size_t i = 0; i < n; ++i)
        (a_mask >> i & 1 ? a_bits : c_bits).push_back(i);
    const std::size_t nb = std::size_t(1) << c_bits.size();
    const std::size_t nf = std::size_t(1) << a_bits.size();

    auto lattice = [&](const std::vector<std::size_t>& bits, std::size_t count) {
        std::vector<std::string> labels;
        std::vector<std::pair<std::size_t, std::size_t>> rel;
        for (std::size_t i = 0; i < count; ++i) {
            labels.push_back(p.label(spread(i, bits)));
            for (std::size_t k = 0; k < bits.size(); ++k)
                if (!(i >> k & 1))
                    rel.emplace_back(i, i | (std::size_t(1) << k));
        }
        return Poset::build(std::move(labels), rel);
    };
    Poset base = lattice(c_bits, nb);
    Poset fibre_poset = lattice(a_bits, nf);

    std::vector<ColouredPoset> fibres;
    for (std::size_t yb = 0; yb < nb; ++yb) {
        std::size_t y = spread(yb, c_bits);
        std::vector<std::size_t> dims;
        std::vector<std::vector<int>> deg;
        for (std::size_t z = 0; z < nf; ++z) {
            dims.push_back(cp.dim(y | spread(z, a_bits)));
            if (cp.graded())
                deg.push_back(cp.degrees(y | spread(z, a_bits)));
        }
        std::map<CoverKey, ExactMatrix> maps;
        for (auto [u, v] : fibre_poset.covers())
            maps.emplace(CoverKey{u, v}, cp.map(y | spread(u, a_bits), y | spread(v, a_bits)));
        auto f = ColouredPoset::build(fibre_poset, cp.ring(), std::move(dims), std::move(maps));
        if (cp.graded())
            f = f.with_grading(std::move(deg));
        fibres.push_back(std::move(f));
    }
    std::map<CoverKey, ColouredPosetMorphism> morphisms;
    for (auto [u, v] : base.covers()) {
        ColouredPosetMorphism m;
        for (std::size_t z = 0; z < nf; ++z) {
            m.f.push_back(z);
            m.tau.push_back(cp.map(spread(u, c_bits) | spread(z, a_bits), spread(v, c_bits) | spread(z, a_bits)));
        }
        morphisms.emplace(CoverKey{u, v}, std::move(m));
    }
    return Bundle::build(std::move(base), std::move(fibres), std::move(morphisms));
}

ColouredPoset q_chain_colouring(const Bundle& b, std::size_t q)
{
    const auto& base = b.base();
    std::vector<std::vector<SequenceBasis>> bases;
    std::vector<std::size_t> dims;
    for (std::size_t x = 0; x < base.size(); ++x) {
        bases.push_back(multi_sequence_bases(b.fibre(x), q));
        dims.push_back(bases.back()[q].dim);
    }
    std::map<CoverKey, ExactMatrix> maps;
    for (auto [x, z] : base.covers())
        maps.emplace(CoverKey{x, z},
                     sequence_map_degree(b.fibre(x), b.morphism(x, z), bases[x][q], bases[z][q], false));
    return ColouredPoset::build(base, b.ring(), std::move(dims), std::move(maps));
}

ColouredPoset fibre_homology_colouring(const Bundle& b, std::size_t q)
{
    if (!b.ring().is_field())
        throw InputError("fibre homology colouring needs field coefficients");
    const auto& base = b.base();
    std::vector<SequenceComplex> cx;
    std::vector<Subquotient> models;
    std::vector<std::size_t> dims;
    for (std::size_t x = 0; x < base.size(); ++x) {
        cx.push_back(c_complex(b.fibre(x)));
        models.push_back(homology_model(cx.back().complex, static_cast<int>(q)));
        dims.push_back(models.back().dim());
    }
    std::map<CoverKey, ExactMatrix> maps;
    for (auto [x, z] : base.covers()) {
        ExactMatrix fq(b.ring(), cx[z].complex.dim(static_cast<int>(q)), cx[x].complex.dim(static_cast<int>(q)));
        if (q < cx[x].bases.size() && q < cx[z].bases.size())
            fq = sequence_map_degree(b.fibre(x), b.morphism(x, z), cx[x].bases[q], cx[z].bases[q], true);
        maps.emplace(CoverKey{x, z}, induced_homology_map(fq, models[x], models[z]));
    }
    return ColouredPoset::build(base, b.ring(), std::move(dims), std::move(maps));
}

void validate_bundle_morphism(const Bundle& src, const Bundle& dst, const BundleMorphism& m)
{
    const auto& b1 = src.base();
    const auto& b2 = dst.base();
    if (m.g.size() != b1.size() || m.eta.size() != b1.size())
        throw InputError("bundle morphism needs an image and a fibre morphism for every base element");
    for (std::size_t x = 0; x < b1.size(); ++x) {
        if (m.g[x] >= b2.size())
            throw InputError("bundle morphism sends " + b1.label(x) + " outside the target base");
        if ((m.g[x] == b2.top()) != (x == b1.top()))
            throw InputError("bundle morphism must send exactly the top to the top (fails at " + b1.label(x) + ")");
        try {
            validate_morphism(src.fibre(x), dst.fibre(m.g[x]), m.eta[x]);
        } catch (const InputError& e) {
            throw InputError("fibre morphism at " + b1.label(x) + ": " + e.what());
        }
    }
    for (auto [x, z] : b1.covers()) {
        if (!b2.leq(m.g[x], m.g[z]))
            throw InputError("bundle morphism base map is not order preserving on " + b1.label(x) + " < " +
                             b1.label(z));
        auto lhs = compose_morphisms(src.morphism(x, z), m.eta[z]);
        auto rhs = compose_morphisms(m.eta[x], dst.morphism(m.g[x], m.g[z]));
        if (!same_morphism(lhs, rhs))
            throw InputError("bundle morphism is not natural on " + b1.label(x) + " < " + b1.label(z));
    }
}

BundleMorphism identity_bundle_morphism(const Bundle& b)
{
    BundleMorphism m;
    for (std::size_t x = 0; x < b.base().size(); ++x) {
        m.g.push_back(x);
        m.eta.push_back(identity_morphism(b.fibre(x)));
    }
    return m;
}

BundleMorphism compose_bundle_morphisms(const BundleMorphism& first, const BundleMorphism& second)
{
    BundleMorphism out;
    for (std::size_t x = 0; x < first.g.size(); ++x) {
        out.g.push_back(second.g.at(first.g[x]));
        out.eta.push_back(compose_morphisms(first.eta[x], second.eta.at(first.g[x])));
    }
    return out;
}

ColouredPosetMorphism apply_bundle_morphism(const BundleMorphism& m, const Bundle& src, const Bundle& dst,
                                            const TotalColouredPoset& src_total,
                                            const TotalColouredPoset& dst_total)
{
    validate_bundle_morphism(src, dst, m);
    ColouredPosetMorphism out;
    for (std::size_t e = 0; e < src_total.total.size(); ++e) {
        std::size_t x = src_total.projection[e];
        std::size_t y = src_total.fibre_index(e);
        out.f.push_back(dst_total.element(m.g[x], m.eta[x].f[y]));
        out.tau.push_back(m.eta[x].tau[y]);
    }
    validate_morphism(src_total.total, dst_total.total, out);
    return out;
}

} // namespace colposet
