#include "colposet/poset.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <queue>
#include <set>

namespace colposet {

Poset Poset::build(std::vector<std::string> labels,
                   const std::vector<std::pair<std::size_t, std::size_t>>& relations)
{
    const std::size_t n = labels.size();
    if (n == 0)
        throw InputError("poset has no elements");
    {
        std::set<std::string> seen;
        for (const auto& l : labels)
            if (!seen.insert(l).second)
                throw InputError("duplicate element label '" + l + "'");
    }
    std::vector<std::vector<std::size_t>> succ(n);
    std::vector<std::size_t> indeg(n, 0);
    for (auto [a, b] : relations) {
        if (a >= n || b >= n)
            throw InputError("relation refers to an unknown element");
        if (a == b)
            throw InputError("relation " + labels[a] + " < " + labels[a] + " is a cycle");
        succ[a].push_back(b);
    }
    for (auto& s : succ) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        for (auto b : s)
            ++indeg[b];
    }

    // Kahn, smallest index first.
    std::vector<std::size_t> topo;
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indeg[i] == 0)
            ready.push(i);
    while (!ready.empty()) {
        auto a = ready.top();
        ready.pop();
        topo.push_back(a);
        for (auto b : succ[a])
            if (--indeg[b] == 0)
                ready.push(b);
    }
    if (topo.size() != n)
        throw InputError("relations contain a cycle");

    Poset p;
    p.labels_ = std::move(labels);
    p.leq_.assign(n * n, 0);
    // Closure in reverse topological order: up(a) = {a} + union of up(b).
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        std::size_t a = *it;
        p.leq_[a * n + a] = 1;
        for (auto b : succ[a])
            for (std::size_t c = 0; c < n; ++c)
                if (p.leq_[b * n + c])
                    p.leq_[a * n + c] = 1;
    }

    std::vector<std::size_t> maximal;
    for (std::size_t a = 0; a < n; ++a) {
        bool is_max = true;
        for (std::size_t b = 0; b < n && is_max; ++b)
            if (p.less(a, b))
                is_max = false;
        if (is_max)
            maximal.push_back(a);
    }
    if (maximal.size() != 1) {
        std::string names;
        for (auto m : maximal)
            names += (names.empty() ? "" : ", ") + p.labels_[m];
        throw InputError("poset must have exactly one maximal element, found: " + names);
    }
    p.top_ = maximal.front();

    std::vector<std::size_t> minimal;
    for (std::size_t a = 0; a < n; ++a) {
        bool is_min = true;
        for (std::size_t b = 0; b < n && is_min; ++b)
            if (p.less(b, a))
                is_min = false;
        if (is_min)
            minimal.push_back(a);
    }
    // A one-element poset has a 1 but no 0.
    if (minimal.size() == 1 && n >= 2)
        p.bottom_ = minimal.front();

    p.up_.assign(n, {});
    p.down_.assign(n, {});
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (!p.less(a, b))
                continue;
            bool cover = true;
            for (std::size_t c = 0; c < n && cover; ++c)
                if (p.less(a, c) && p.less(c, b))
                    cover = false;
            if (cover) {
                p.covers_.emplace_back(a, b);
                p.up_[a].push_back(b);
                p.down_[b].push_back(a);
            }
        }

    // Linear extension from the cover relation, smallest index first.
    std::vector<std::size_t> deg(n, 0);
    for (auto [a, b] : p.covers_)
        ++deg[b];
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> q2;
    for (std::size_t i = 0; i < n; ++i)
        if (deg[i] == 0)
            q2.push(i);
    while (!q2.empty()) {
        auto a = q2.top();
        q2.pop();
        p.topo_.push_back(a);
        for (auto b : p.up_[a])
            if (--deg[b] == 0)
                q2.push(b);
    }

    p.depth_.assign(n, 0);
    for (auto a : p.topo_)
        for (auto b : p.up_[a])
            p.depth_[b] = std::max(p.depth_[b], p.depth_[a] + 1);
    return p;
}

Poset Poset::build_labelled(std::vector<std::string> labels,
                            const std::vector<std::pair<std::string, std::string>>& relations)
{
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
        idx.emplace(labels[i], i);
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (const auto& [a, b] : relations) {
        auto ia = idx.find(a), ib = idx.find(b);
        if (ia == idx.end() || ib == idx.end())
            throw InputError("relation " + a + " < " + b + " uses an unknown element");
        rel.emplace_back(ia->second, ib->second);
    }
    return build(std::move(labels), rel);
}

std::optional<std::size_t> Poset::find(const std::string& label) const
{
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label)
            return i;
    return std::nullopt;
}

std::size_t Poset::index_of(const std::string& label) const
{
    auto i = find(label);
    if (!i)
        throw InputError("unknown element '" + label + "'");
    return *i;
}

bool Poset::is_cover(std::size_t a, std::size_t b) const
{
    const auto& u = up_.at(a);
    return std::find(u.begin(), u.end(), b) != u.end();
}

std::size_t Poset::longest_chain_below_top() const
{
    // Elements in the longest chain ending at a non-top element.
    std::size_t best = 0;
    for (std::size_t x = 0; x < size(); ++x)
        if (x != top_)
            best = std::max(best, depth_[x] + 1);
    return best;
}

Poset Poset::induced(const std::vector<std::size_t>& subset) const
{
    std::vector<std::string> labels;
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (auto x : subset)
        labels.push_back(label(x));
    for (std::size_t i = 0; i < subset.size(); ++i)
        for (std::size_t j = 0; j < subset.size(); ++j)
            if (less(subset[i], subset[j]))
                rel.emplace_back(i, j);
    return build(std::move(labels), rel);
}

// ---------------------------------------------------------------------------
// Constructors

Poset boolean_lattice(std::size_t n)
{
    if (n > 16)
        throw InputError("Boolean lattice rank too large");
    const std::size_t size = std::size_t(1) << n;
    std::vector<std::string> labels;
    for (std::size_t mask = 0; mask < size; ++mask) {
        std::string l = "{";
        bool first = true;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) {
                l += (first ? "" : ",") + std::to_string(i + 1);
                first = false;
            }
        labels.push_back(l + "}");
    }
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t mask = 0; mask < size; ++mask)
        for (std::size_t i = 0; i < n; ++i)
            if (!(mask >> i & 1))
                rel.emplace_back(mask, mask | (std::size_t(1) << i));
    return Poset::build(std::move(labels), rel);
}

Poset chain(std::size_t n)
{
    if (n == 0)
        throw InputError("chain needs at least one element");
    std::vector<std::string> labels;
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(std::to_string(i + 1));
        if (i > 0)
            rel.emplace_back(i - 1, i);
    }
    return Poset::build(std::move(labels), rel);
}

namespace {

using Perm = std::vector<int>;

Perm compose(const Perm& a, const Perm& b) // (a*b)(i) = a(b(i))
{
    Perm c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[i] = a[b[i]];
    return c;
}

Perm inverse(const Perm& a)
{
    Perm c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[a[i]] = static_cast<int>(i);
    return c;
}

// Bruhat order of the group generated by the given involutions, built from the
// arrow relation w -> wt (t a reflection, length going up) and closed transitively.
Poset bruhat_from_generators(const std::vector<Perm>& gens, const std::vector<std::string>& gen_names,
                             bool word_labels)
{
    const std::size_t deg = gens.front().size();
    Perm id(deg);
    std::iota(id.begin(), id.end(), 0);

    std::vector<Perm> elems{id};
    std::vector<std::size_t> length{0};
    std::vector<std::string> words{""};
    std::map<Perm, std::size_t> index{{id, 0}};
    for (std::size_t head = 0; head < elems.size(); ++head) {
        for (std::size_t g = 0; g < gens.size(); ++g) {
            Perm w = compose(elems[head], gens[g]);
            if (index.count(w))
                continue;
            index.emplace(w, elems.size());
            length.push_back(length[head] + 1);
            words.push_back(words[head] + gen_names[g]);
            elems.push_back(std::move(w));
        }
    }

    std::set<Perm> reflections;
    for (const auto& w : elems)
        for (const auto& s : gens)
            reflections.insert(compose(compose(w, s), inverse(w)));

    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (const auto& t : reflections) {
            std::size_t j = index.at(compose(elems[i], t));
            if (length[j] > length[i])
                rel.emplace_back(i, j);
        }

    std::vector<std::string> labels;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        if (word_labels) {
            labels.push_back(words[i].empty() ? "e" : words[i]);
        } else {
            std::string l;
            for (int v : elems[i])
                l += std::to_string(v + 1);
            labels.push_back(l);
        }
    }
    return Poset::build(std::move(labels), rel);
}

} // namespace

Poset bruhat_dihedral(std::size_t m)
{
    if (m < 2)
        throw InputError("dihedral Bruhat poset needs m >= 2");
    // s: i -> -i and t: i -> 2 - i on Z/2m; st is rotation by -2, of order m.
    const int n = static_cast<int>(2 * m);
    Perm s(n), t(n);
    for (int i = 0; i < n; ++i) {
        s[i] = ((-i) % n + n) % n;
        t[i] = ((2 - i) % n + n) % n;
    }
    return bruhat_from_generators({s, t}, {"s", "t"}, true);
}

Poset bruhat_symmetric(std::size_t n)
{
    if (n < 1 || n > 5)
        throw InputError("symmetric Bruhat poset supported for 1 <= n <= 5");
    if (n == 1)
        return Poset::build({"1"}, {});
    std::vector<Perm> gens;
    std::vector<std::string> names;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Perm s(n);
        std::iota(s.begin(), s.end(), 0);
        std::swap(s[i], s[i + 1]);
        gens.push_back(s);
        names.push_back("s" + std::to_string(i + 1));
    }
    return bruhat_from_generators(gens, names, false);
}

Poset product(const Poset& p, const Poset& q)
{
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j)
            labels.push_back("(" + p.label(i) + "," + q.label(j) + ")");
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (auto [a, b] : p.covers())
        for (std::size_t j = 0; j < q.size(); ++j)
            rel.emplace_back(a * q.size() + j, b * q.size() + j);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (auto [a, b] : q.covers())
            rel.emplace_back(i * q.size() + a, i * q.size() + b);
    return Poset::build(std::move(labels), rel);
}

std::vector<std::size_t> interval_elements(const Poset& p, std::size_t x)
{
    std::vector<std::size_t> out;
    for (std::size_t y = 0; y < p.size(); ++y)
        if (p.leq(y, x))
            out.push_back(y);
    return out;
}

std::vector<std::size_t> complement_elements(const Poset& p, std::size_t x)
{
    std::vector<std::size_t> out;
    for (std::size_t y = 0; y < p.size(); ++y)
        if (!p.leq(y, x))
            out.push_back(y);
    return out;
}

std::vector<std::size_t> upper_set_off_interval_elements(const Poset& p, std::size_t x, std::size_t y)
{
    std::vector<std::size_t> out;
    for (std::size_t z = 0; z < p.size(); ++z)
        if (!p.leq(z, x) && p.leq(y, z))
            out.push_back(z);
    return out;
}

Poset interval(const Poset& p, std::size_t x) { return p.induced(interval_elements(p, x)); }

Poset complement(const Poset& p, std::size_t x)
{
    auto c = complement_elements(p, x);
    if (c.empty())
        throw InputError("complement of the interval below " + p.label(x) + " is empty");
    return p.induced(c);
}

Poset upper_set_off_interval(const Poset& p, std::size_t x, std::size_t y)
{
    auto c = upper_set_off_interval_elements(p, x, y);
    if (c.empty())
        throw InputError("upper set is empty");
    return p.induced(c);
}

// ---------------------------------------------------------------------------
// Admissibility. Work on a subset S of one ambient poset so that certificates
// stay in the ambient numbering.

namespace {

using Subset = std::vector<char>; // membership flags

std::size_t subset_top(const Poset& p, const Subset& s)
{
    for (std::size_t t = 0; t < p.size(); ++t) {
        if (!s[t])
            continue;
        bool top = true;
        for (std::size_t y = 0; y < p.size() && top; ++y)
            if (s[y] && !p.leq(y, t))
                top = false;
        if (top)
            return t;
    }
    throw VerificationError("subposet without a top element in admissibility search");
}

std::vector<std::size_t> subset_coatoms(const Poset& p, const Subset& s, std::size_t top)
{
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < p.size(); ++x) {
        if (!s[x] || !p.less(x, top))
            continue;
        bool cover = true;
        for (std::size_t z = 0; z < p.size() && cover; ++z)
            if (s[z] && p.less(x, z) && p.less(z, top))
                cover = false;
        if (cover)
            out.push_back(x);
    }
    return out;
}

std::optional<AdmissibilityCertificate> admissible_in(const Poset& p, const Subset& s, std::size_t x)
{
    AdmissibilityCertificate cert;
    cert.witness = x;
    for (std::size_t y = 0; y < p.size(); ++y) {
        if (!s[y] || y == x || !p.leq(y, x))
            continue;
        std::vector<std::size_t> l;
        for (std::size_t z = 0; z < p.size(); ++z)
            if (s[z] && !p.leq(z, x) && p.leq(y, z))
                l.push_back(z);
        // L(y) needs a unique minimal element, and that 0 must differ from its 1.
        if (l.size() < 2)
            return std::nullopt;
        std::optional<std::size_t> least;
        for (auto z : l) {
            bool is_least = true;
            for (auto w : l)
                if (!p.leq(z, w)) {
                    is_least = false;
                    break;
                }
            if (is_least)
                least = z;
        }
        // In a finite poset a unique minimal element is the least element.
        if (!least)
            return std::nullopt;
        cert.minima[y] = *least;
    }
    return cert;
}

struct SpecialSearch {
    const Poset& p;
    std::map<Subset, std::optional<std::shared_ptr<const AdmissibilityCertificate>>> memo;

    std::optional<std::shared_ptr<const AdmissibilityCertificate>> run(const Subset& s)
    {
        auto it = memo.find(s);
        if (it != memo.end())
            return it->second;
        std::optional<std::shared_ptr<const AdmissibilityCertificate>> result;
        std::size_t count = std::count(s.begin(), s.end(), 1);
        if (count == 2) {
            // Two elements with a top form the chain 0 < 1.
            auto leaf = std::make_shared<AdmissibilityCertificate>();
            leaf->boolean_leaf = true;
            std::size_t top = subset_top(p, s);
            for (std::size_t y = 0; y < p.size(); ++y)
                if (s[y] && y != top)
                    leaf->witness = y;
            result = leaf;
        } else if (count > 2) {
            std::size_t top = subset_top(p, s);
            for (auto x : subset_coatoms(p, s, top)) {
                auto cert = admissible_in(p, s, x);
                if (!cert)
                    continue;
                Subset below(p.size(), 0), rest(p.size(), 0);
                for (std::size_t y = 0; y < p.size(); ++y)
                    if (s[y])
                        (p.leq(y, x) ? below : rest)[y] = 1;
                auto a = run(below);
                if (!a)
                    continue;
                auto b = run(rest);
                if (!b)
                    continue;
                cert->interval_part = *a;
                cert->complement_part = *b;
                result = std::make_shared<const AdmissibilityCertificate>(std::move(*cert));
                break;
            }
        }
        memo.emplace(s, result);
        return result;
    }
};

} // namespace

std::optional<AdmissibilityCertificate> admissible_via(const Poset& p, std::size_t x)
{
    if (!p.is_cover(x, p.top()))
        return std::nullopt;
    return admissible_in(p, Subset(p.size(), 1), x);
}

std::optional<AdmissibilityCertificate> is_admissible(const Poset& p)
{
    for (auto x : p.lower_covers(p.top()))
        if (auto c = admissible_via(p, x))
            return c;
    return std::nullopt;
}

std::optional<AdmissibilityCertificate> is_specially_admissible(const Poset& p)
{
    SpecialSearch search{p, {}};
    auto r = search.run(Subset(p.size(), 1));
    if (!r)
        return std::nullopt;
    return **r;
}

} // namespace colposet
