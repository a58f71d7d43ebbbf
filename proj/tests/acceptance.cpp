// One line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "colposet/cli.hpp"
#include "colposet/testkit.hpp"
#include "khovanov_oracle.hpp"

using namespace colposet;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Corpus {
    std::vector<std::string> base_names;
    std::vector<Bundle> bundles;
};

const std::vector<std::pair<std::string, Poset>>& corpus_bases()
{
    static const std::vector<std::pair<std::string, Poset>> bases = {
        {"boolean(1)", boolean_lattice(1)},         {"boolean(2)", boolean_lattice(2)},
        {"boolean(3)", boolean_lattice(3)},         {"bruhat_dihedral(2)", bruhat_dihedral(2)},
        {"bruhat_dihedral(3)", bruhat_dihedral(3)}, {"bruhat_dihedral(4)", bruhat_dihedral(4)}};
    return bases;
}

Corpus make_corpus(std::size_t count, std::uint64_t seed0, std::size_t max_fibre)
{
    Corpus c;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& [name, base] = corpus_bases()[i % corpus_bases().size()];
        GenParams gp;
        gp.seed = seed0 + i;
        gp.max_fibre_size = max_fibre;
        gp.max_dim = 3;
        gp.ring = (i / corpus_bases().size()) % 2 ? CoeffRing::prime_field(2) : CoeffRing::rationals();
        c.base_names.push_back(name);
        c.bundles.push_back(random_bundle(gp, base, "acceptance"));
    }
    return c;
}

std::size_t degree_sum(const std::map<Cell, std::size_t>& cells, int n)
{
    std::size_t s = 0;
    for (const auto& [cell, dim] : cells)
        if (cell.first + cell.second == n)
            s += dim;
    return s;
}

void fail(Outcome& o, const std::string& why)
{
    if (o.pass)
        o.detail = why;
    o.pass = false;
}

// 1 and 2 share a corpus
Corpus& corpus12()
{
    static Corpus c = make_corpus(102, 1000, 6);
    return c;
}

Outcome criterion1()
{
    Outcome o;
    std::size_t rings[2] = {0, 0};
    for (std::size_t i = 0; i < corpus12().bundles.size(); ++i) {
        const auto& b = corpus12().bundles[i];
        try {
            auto k = bicomplex(b, 5); // verifies the three identities
            check_bicomplex(k);
        } catch (const VerificationError& e) {
            fail(o, "bundle " + std::to_string(i) + ": " + e.what());
        }
        ++rings[b.ring().kind() == CoeffRing::Kind::prime_field];
    }
    o.detail = o.pass ? std::to_string(corpus12().bundles.size()) + " bundles (" + std::to_string(rings[0]) + " over Q, " +
                            std::to_string(rings[1]) + " over F2)"
                      : o.detail;
    return o;
}

Outcome criterion2()
{
    Outcome o;
    std::size_t checked = 0;
    for (std::size_t i = 0; i < corpus12().bundles.size(); ++i) {
        const auto& b = corpus12().bundles[i];
        try {
            auto k = bicomplex(b, 5);
            auto e = total(b);
            checked += check_phi_chain_map(k, e, 5);
        } catch (const VerificationError& e) {
            fail(o, "bundle " + std::to_string(i) + ": " + e.what());
        }
    }
    if (o.pass)
        o.detail = std::to_string(checked) + " generator vectors in degrees <= 5";
    return o;
}

Corpus& corpus34()
{
    static Corpus c = make_corpus(54, 5000, 6);
    return c;
}

Outcome criterion3()
{
    Outcome o;
    std::size_t rings[2] = {0, 0};
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < corpus34().bundles.size(); ++i) {
        const auto& b = corpus34().bundles[i];
        if (!is_specially_admissible(b.base())) {
            fail(o, "base " + corpus34().base_names[i] + " is not specially admissible");
            continue;
        }
        auto rep = quasi_iso_check(b, 4);
        for (const auto& d : rep.degrees) {
            if (d.total_rank != d.poset_rank || !d.iso)
                fail(o, "bundle " + std::to_string(i) + " degree " + std::to_string(d.n) + ": H(T) " +
                            std::to_string(d.total_rank) + " vs H(E) " + std::to_string(d.poset_rank));
            nonzero += d.poset_rank > 0;
        }
        ++rings[b.ring().kind() == CoeffRing::Kind::prime_field];
    }
    if (o.pass)
        o.detail = std::to_string(corpus34().bundles.size()) + " bundles (" + std::to_string(rings[0]) + " Q, " +
                   std::to_string(rings[1]) + " F2), " + std::to_string(nonzero) + " nonzero degrees";
    return o;
}

Outcome criterion4()
{
    Outcome o;
    std::size_t cells = 0;
    for (std::size_t i = 0; i < corpus34().bundles.size(); ++i) {
        const auto& b = corpus34().bundles[i];
        auto k = bicomplex(b, 5);
        auto ps = spectral_sequence(k, 3);
        auto e2 = e2_direct(b, ps.max_degree);
        for (const auto& [cell, dim] : ps.page(2).dims) {
            ++cells;
            if (e2.at(cell) != dim)
                fail(o, "bundle " + std::to_string(i) + ": page 2 differs from e2_direct");
        }
        auto c = c_complex(total(b).total, 5);
        auto h = complex_homology(c.complex, 0, ps.max_degree);
        for (int n = 0; n <= ps.max_degree; ++n)
            if (degree_sum(ps.infinity, n) != h.rank(n))
                fail(o, "bundle " + std::to_string(i) + ": infinity page misses H_" + std::to_string(n) + "(E)");
    }
    if (o.pass)
        o.detail = std::to_string(cells) + " page-2 cells, total degrees <= 4";
    return o;
}

Outcome criterion5()
{
    Outcome o;
    std::size_t runs = 0;
    std::vector<std::pair<std::string, Poset>> bases = {{"chain(2)", chain(2)}};
    for (const auto& nb : corpus_bases())
        bases.push_back(nb);
    for (std::size_t i = 0; i < bases.size(); ++i)
        for (auto ring : {CoeffRing::rationals(), CoeffRing::prime_field(2)})
            for (std::uint64_t s = 1; s <= 2; ++s) {
                const auto& [name, base] = bases[i];
                if (!base.bottom() || base.size() < 2) {
                    fail(o, name + " has no 0 < 1");
                    continue;
                }
                GenParams gp;
                gp.seed = 70000 + 10 * i + s;
                gp.ring = ring;
                auto fib = random_coloured_poset(gp, "acyclic fibre");
                auto b = product_bundle(base, fib);
                auto k = bicomplex(b, 5);
                auto h = complex_homology(total_complex(k).complex, 0, 4);
                for (int n = 1; n <= 4; ++n)
                    if (h.rank(n))
                        fail(o, name + ": H_" + std::to_string(n) + "(T) != 0");
                auto ps = spectral_sequence(k, 2);
                for (const auto& [cell, dim] : ps.page(2).dims)
                    if (dim)
                        fail(o, name + ": E^2 nonzero");
                ++runs;
            }
    if (o.pass)
        o.detail = std::to_string(runs) + " product bundles";
    return o;
}

Outcome criterion6()
{
    Outcome o;
    for (std::size_t n = 1; n <= 5; ++n)
        if (!is_specially_admissible(boolean_lattice(n)))
            fail(o, "boolean(" + std::to_string(n) + ") not specially admissible");
    for (std::size_t n = 3; n <= 7; ++n)
        if (is_admissible(chain(n)))
            fail(o, "chain(" + std::to_string(n) + ") admissible");
    for (std::size_t m = 2; m <= 6; ++m)
        if (!is_specially_admissible(bruhat_dihedral(m)))
            fail(o, "bruhat_dihedral(" + std::to_string(m) + ") not specially admissible");
    auto s4 = bruhat_symmetric(4);
    for (auto x : s4.lower_covers(s4.top()))
        if (!admissible_via(s4, x))
            fail(o, "bruhat_symmetric(4) not admissible via " + s4.label(x));
    if (!is_specially_admissible(s4))
        fail(o, "bruhat_symmetric(4) not specially admissible");
    if (o.pass)
        o.detail = "boolean(1..5), chain(3..7), bruhat_dihedral(2..6), bruhat_symmetric(4) with " +
                   std::to_string(s4.lower_covers(s4.top()).size()) + " coatoms";
    return o;
}

Outcome criterion7()
{
    Outcome o;
    std::size_t positions = 0, bundles = 0;
    const std::vector<std::pair<std::string, Poset>> bases = {
        {"boolean(2)", boolean_lattice(2)}, {"boolean(3)", boolean_lattice(3)}, {"bruhat_dihedral(3)", bruhat_dihedral(3)}};
    for (std::size_t i = 0; i < 30; ++i) {
        const auto& [name, base] = bases[i % bases.size()];
        GenParams gp;
        gp.seed = 9000 + i;
        gp.max_fibre_size = 5;
        gp.ring = i % 2 ? CoeffRing::prime_field(2) : CoeffRing::rationals();
        auto b = random_bundle(gp, base, "les");
        for (auto x : base.lower_covers(base.top())) {
            if (!admissible_via(base, x))
                continue;
            for (auto which : {LesComplex::total, LesComplex::sequence}) {
                auto rep = les_check(b, x, 4, which);
                positions += rep.positions.size();
                if (!rep.exact)
                    fail(o, name + " bundle " + std::to_string(i) + ": sequence not exact");
                if (!rep.quotient_matches)
                    fail(o, name + " bundle " + std::to_string(i) + ": H(Q) differs from the interval side");
            }
        }
        ++bundles;
    }
    if (o.pass)
        o.detail = std::to_string(bundles) + " bundles, " + std::to_string(positions) + " positions";
    return o;
}

std::map<std::pair<int, int>, std::size_t> rank_table(const BigradedHomology& h)
{
    std::map<std::pair<int, int>, std::size_t> out;
    for (const auto& [cell, dh] : h.cells)
        if (dh.free_rank)
            out[cell] = dh.free_rank;
    return out;
}

Outcome criterion8()
{
    Outcome o;
    auto q = CoeffRing::rationals();
    auto unknot = rank_table(normalised_homology(parse_pd("PD[] circles=1"), q));
    const std::map<std::pair<int, int>, std::size_t> expect{{{0, -1}, 1}, {{0, 1}, 1}};
    if (unknot != expect)
        fail(o, "unknot homology is not (0,1),(0,-1)");
    auto kink = parse_pd("PD[X[1,1,2,2]]");
    if (kink.positive() != 1)
        fail(o, "kink not read as positive");
    if (rank_table(normalised_homology(kink, q)) != expect)
        fail(o, "positive kink differs from the unknot");

    // the kink as the fixed crossing, alone and on a trefoil: one row, collapse
    for (const char* pd : {"PD[X[1,1,2,2]]", "PD[X[1,4,2,5],X[3,8,4,1],X[5,2,6,3],X[6,8,7,7]]"}) {
        auto d = parse_pd(pd);
        const std::size_t kc = d.size() - 1;
        std::set<int> rows;
        for (int j : cube_complex(d, q).occurring()) {
            auto run = fixed_crossing_spectral_sequence(d, {kc}, j, q);
            if (!run.e2_matches || !run.converges)
                fail(o, std::string(pd) + " j=" + std::to_string(j) + ": spectral sequence disagrees");
            for (const auto& [cell, dim] : run.pages.page(2).dims) {
                if (dim)
                    rows.insert(cell.second);
                if (run.pages.infinity.at(cell) != dim)
                    fail(o, std::string(pd) + ": no collapse at page 2");
            }
        }
        if (rows != std::set<int>{1})
            fail(o, std::string(pd) + ": E^2 not concentrated in fibre row 1");
    }
    auto kinked = parse_pd("PD[X[1,4,2,5],X[3,8,4,1],X[5,2,6,3],X[6,8,7,7]]");
    auto trefoil = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]");
    if (rank_table(normalised_homology(kinked, q)) != rank_table(normalised_homology(trefoil, q)))
        fail(o, "kinked trefoil differs from the trefoil");

    Oracle oracle{trefoil.crossings};
    auto brute = oracle.homology();
    std::size_t brute_total = 0;
    for (const auto& [cell, dim] : brute)
        brute_total += dim;
    auto computed = unnormalised_homology(trefoil, q);
    if (brute_total != 4 || computed.total_rank() != 4 || rank_table(computed) != brute)
        fail(o, "trefoil total " + std::to_string(computed.total_rank()) + ", oracle " + std::to_string(brute_total));
    if (o.pass)
        o.detail = "kink = unknot, E^2 in row 1 and collapsing, trefoil total 4 (oracle 4)";
    return o;
}

Outcome criterion9()
{
    Outcome o;
    std::size_t runs = 0;
    for (const char* pd : {"PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]", "PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]"}) {
        auto d = parse_pd(pd);
        const std::size_t n = d.size();
        std::vector<std::vector<std::size_t>> subsets;
        for (std::size_t a = 0; a < n; ++a) {
            subsets.push_back({a});
            for (std::size_t b = a + 1; b < n; ++b)
                subsets.push_back({a, b});
        }
        for (auto ring : {CoeffRing::rationals(), CoeffRing::prime_field(2)}) {
            auto occupied = cube_complex(d, ring).occurring();
            for (const auto& fixed : subsets)
                for (int j : occupied) {
                    auto run = fixed_crossing_spectral_sequence(d, fixed, j, ring);
                    ++runs;
                    if (!run.e2_matches)
                        fail(o, std::string(pd) + " j=" + std::to_string(j) + ": E^2 differs from fixed_crossing_homology");
                    if (!run.converges)
                        fail(o, std::string(pd) + " j=" + std::to_string(j) + ": infinity page misses the homology");
                }
        }
    }
    if (o.pass)
        o.detail = std::to_string(runs) + " runs (diagram x ring x subset x q-degree)";
    return o;
}

Outcome criterion10()
{
    Outcome o;
    std::vector<std::string> reports;
    for (std::uint64_t seed : {11u, 11u, 29u, 29u}) {
        std::ostringstream out, err;
        int code = run_cli({"selftest", "--seed", std::to_string(seed), "--count", "6"}, out, err);
        if (code != 0)
            fail(o, "selftest --seed " + std::to_string(seed) + " exited with " + std::to_string(code));
        reports.push_back(out.str());
    }
    if (reports[0] != reports[1] || reports[2] != reports[3])
        fail(o, "repeated selftest reports differ");
    if (reports[0] == reports[2])
        fail(o, "different seeds gave the same report");
    if (o.pass)
        o.detail = "seeds 11 and 29, " + std::to_string(reports[0].size()) + " and " + std::to_string(reports[2].size()) +
                   " bytes, identical on repeat";
    return o;
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        double limit_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all = {
        {1, "bicomplex identities", 60, criterion1},
        {2, "phi is a chain map", 0, criterion2},
        {3, "quasi-isomorphism", 300, criterion3},
        {4, "page 2 and convergence", 0, criterion4},
        {5, "product bundles are acyclic", 0, criterion5},
        {6, "admissibility suite", 30, criterion6},
        {7, "long exact sequences", 0, criterion7},
        {8, "Khovanov baseline", 30, criterion8},
        {9, "fixed-crossing spectral sequence", 600, criterion9},
        {10, "selftest determinism", 0, criterion10},
    };
    bool ok = true;
    for (const auto& c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_seconds > 0 && secs > c.limit_seconds) {
            o.pass = false;
            o.detail += " (over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s budget)";
        }
        std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << ": " << c.name << " - " << o.detail
                  << " [" << std::fixed;
        std::cout.precision(2);
        std::cout << secs << " s]" << std::endl;
        ok = ok && o.pass;
    }
    return ok ? 0 : 1;
}
