#include "colposet/cli.hpp"

#include <functional>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "colposet/testkit.hpp"

namespace colposet {

namespace {

struct Options {
    std::string file;
    std::string ring;
    int max_degree = 4;
    int max_page = 3;
    std::string fixed;
    std::string output = "json";
    bool force = false;
    std::string witness;
    std::uint64_t seed = 1;
    std::size_t count = 8;
};

using Rows = std::vector<std::vector<std::string>>;

struct Report {
    Json json;
    Rows csv; // first row is the header
    int code = 0;
};

std::string torsion_text(const std::vector<mpz_class>& t)
{
    std::string s;
    for (const auto& v : t)
        s += (s.empty() ? "" : ";") + v.get_str();
    return s;
}

std::vector<std::size_t> parse_fixed(const std::string& text, std::size_t crossings)
{
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        std::size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(item, &pos);
        } catch (const std::exception&) {
            throw InputError("--fixed: not a crossing number: " + item);
        }
        if (pos != item.size() || v < 1 || static_cast<std::size_t>(v) > crossings)
            throw InputError("--fixed: crossing numbers run from 1 to " + std::to_string(crossings) + ", got " + item);
        out.push_back(static_cast<std::size_t>(v - 1));
    }
    return out;
}

Json read_json_file(const std::string& path) { return parse_json_text(read_text_file(path)); }

void check_degrees(const Options& o)
{
    if (o.max_degree < 1)
        throw InputError("--max-degree must be at least 1");
    if (o.max_page < 1)
        throw InputError("--max-page must be at least 1");
}

// ---------------------------------------------------------------------------
// poset

Report poset_check_admissible(const Options& o)
{
    Json j = read_json_file(o.file);
    Poset p = poset_from_json(j.contains("poset") ? j.at("poset") : j);
    Report r;
    auto cert = is_admissible(p);
    r.json["admissible"] = cert.has_value();
    if (cert) {
        r.json["witness"] = p.label(cert->witness);
        r.json["specially_admissible"] = is_specially_admissible(p).has_value();
    }
    r.csv = {{"admissible", "specially_admissible", "witness"}};
    r.csv.push_back({cert ? "true" : "false", cert && r.json["specially_admissible"].get<bool>() ? "true" : "false",
                     cert ? p.label(cert->witness) : ""});
    return r;
}

Report poset_homology(const Options& o)
{
    Json j = read_json_file(o.file);
    ColouredPoset cp = j.contains("poset")
                           ? coloured_from_json(j, o.ring)
                           : ColouredPoset::constant(poset_from_json(j), CoeffRing::parse(o.ring.empty() ? "q" : o.ring), 1);
    auto h = coloured_homology(cp);
    Report r;
    r.json["ring"] = cp.ring().name();
    r.json["homology"] = homology_to_json(h);
    r.csv = {{"n", "rank", "torsion"}};
    for (const auto& [n, dh] : h.degrees)
        r.csv.push_back({std::to_string(n), std::to_string(dh.free_rank), torsion_text(dh.torsion)});
    return r;
}

// ---------------------------------------------------------------------------
// bundle

Report bundle_total(const Options& o)
{
    auto b = bundle_from_json(read_json_file(o.file), o.ring);
    auto e = total(b);
    Report r;
    r.json["total"] = coloured_to_json(e.total);
    auto h = coloured_homology(e.total);
    r.json["homology"] = homology_to_json(h);
    r.csv = {{"n", "rank", "torsion"}};
    for (const auto& [n, dh] : h.degrees)
        r.csv.push_back({std::to_string(n), std::to_string(dh.free_rank), torsion_text(dh.torsion)});
    return r;
}

void page_rows(Rows& rows, const std::string& tag, const PageSet& ps)
{
    for (const auto& pg : ps.pages)
        for (const auto& [cell, dim] : pg.dims)
            rows.push_back({tag, std::to_string(pg.r), std::to_string(cell.first), std::to_string(cell.second),
                            std::to_string(dim)});
    for (const auto& [cell, dim] : ps.infinity)
        rows.push_back({tag, "inf", std::to_string(cell.first), std::to_string(cell.second), std::to_string(dim)});
}

Report bundle_specseq(const Options& o)
{
    check_degrees(o);
    auto b = bundle_from_json(read_json_file(o.file), o.ring);
    const bool special = is_specially_admissible(b.base()).has_value();
    if (!special && !o.force)
        throw InputError("base is not specially admissible; pass --force-unsupported-base to run anyway");
    auto k = bicomplex(b, o.max_degree + 1);
    auto ps = spectral_sequence(k, o.max_page);
    auto e2 = e2_direct(b, ps.max_degree);
    auto hc = c_complex(total(b).total, static_cast<std::size_t>(o.max_degree) + 1);
    auto he = complex_homology(hc.complex, 0, ps.max_degree);

    Report r;
    r.json["ring"] = b.ring().name();
    r.json["specially_admissible"] = special;
    Json pages = Json::array();
    for (const auto& pg : ps.pages)
        pages.push_back(page_to_json(pg));
    r.json["pages"] = pages;
    r.json["infinity"] = cells_to_json(ps.infinity);
    bool e2_ok = true;
    for (const auto& [cell, dim] : ps.page(2).dims)
        e2_ok = e2_ok && e2.at(cell) == dim;
    r.json["e2_matches_direct"] = e2_ok;
    bool converges = true;
    Json degrees = Json::array();
    for (int n = 0; n <= ps.max_degree; ++n) {
        std::size_t sum = 0;
        for (const auto& [cell, dim] : ps.infinity)
            if (cell.first + cell.second == n)
                sum += dim;
        converges = converges && sum == he.rank(n);
        degrees.push_back({{"n", n}, {"total_complex", ps.total_homology.at(n)}, {"poset", he.rank(n)}, {"infinity", sum}});
    }
    r.json["degrees"] = degrees;
    r.json["converges"] = converges;
    r.csv = {{"run", "r", "p", "q", "dim"}};
    page_rows(r.csv, "bundle", ps);
    if (!e2_ok || (special && !converges))
        r.code = 2;
    return r;
}

Report bundle_les_check(const Options& o)
{
    check_degrees(o);
    auto b = bundle_from_json(read_json_file(o.file), o.ring);
    const auto& base = b.base();
    std::vector<std::size_t> witnesses;
    if (!o.witness.empty()) {
        witnesses.push_back(base.index_of(o.witness));
    } else {
        for (auto x : base.lower_covers(base.top()))
            if (admissible_via(base, x))
                witnesses.push_back(x);
        if (witnesses.empty() && o.force)
            witnesses = base.lower_covers(base.top());
        if (witnesses.empty())
            throw InputError("base has no admissibility witness; pass --force-unsupported-base to run anyway");
    }
    Report r;
    Json runs = Json::array();
    r.csv = {{"witness", "complex", "n", "at", "kernel", "image"}};
    bool ok = true;
    for (auto x : witnesses)
        for (auto which : {LesComplex::total, LesComplex::sequence}) {
            auto rep = les_check(b, x, o.max_degree, which, o.force);
            const std::string name = which == LesComplex::total ? "total" : "sequence";
            Json pos = Json::array();
            for (const auto& p : rep.positions) {
                pos.push_back({{"n", p.n}, {"at", p.at}, {"kernel", p.kernel}, {"image", p.image}});
                r.csv.push_back({base.label(x), name, std::to_string(p.n), p.at, std::to_string(p.kernel),
                                 std::to_string(p.image)});
            }
            runs.push_back({{"witness", base.label(x)},
                            {"complex", name},
                            {"exact", rep.exact},
                            {"quotient_matches", rep.quotient_matches},
                            {"positions", pos}});
            ok = ok && rep.exact && rep.quotient_matches;
        }
    r.json["runs"] = runs;
    r.json["exact"] = ok;
    if (!ok)
        r.code = 2;
    return r;
}

// ---------------------------------------------------------------------------
// khovanov

LinkDiagram read_diagram(const Options& o) { return parse_pd(read_text_file(o.file)); }

CoeffRing khovanov_ring(const Options& o) { return CoeffRing::parse(o.ring.empty() ? "q" : o.ring); }

Report khovanov_homology(const Options& o)
{
    auto d = read_diagram(o);
    auto ring = khovanov_ring(o);
    auto u = unnormalised_homology(d, ring);
    auto n = normalised_homology(d, ring);
    Report r;
    r.json["diagram"] = to_pd(d);
    r.json["ring"] = ring.name();
    r.json["crossings"] = d.size();
    r.json["positive"] = d.positive();
    r.json["negative"] = d.negative();
    r.json["unnormalised"] = bigraded_to_json(u);
    r.json["normalised"] = bigraded_to_json(n);
    r.json["total_rank"] = n.total_rank();
    r.csv = {{"table", "i", "j", "rank", "torsion"}};
    for (const auto& [tag, h] : {std::pair<std::string, const BigradedHomology*>{"unnormalised", &u}, {"normalised", &n}})
        for (const auto& [cell, dh] : h->cells)
            r.csv.push_back({tag, std::to_string(cell.first), std::to_string(cell.second), std::to_string(dh.free_rank),
                             torsion_text(dh.torsion)});
    return r;
}

Json one_based(const std::vector<std::size_t>& v)
{
    Json out = Json::array();
    for (auto c : v)
        out.push_back(c + 1);
    return out;
}

Report khovanov_fixed(const Options& o)
{
    auto d = read_diagram(o);
    auto ring = khovanov_ring(o);
    auto fixed = parse_fixed(o.fixed, d.size());
    auto k = fixed_crossing_complex(d, fixed, ring);
    auto t = fixed_crossing_homology(k);
    Report r;
    r.json["diagram"] = to_pd(d);
    r.json["ring"] = ring.name();
    r.json["fixed"] = one_based(k.fixed);
    r.json["free"] = one_based(k.free);
    r.json["table"] = trigraded_to_json(t);
    r.csv = {{"p", "q", "j", "dim"}};
    for (const auto& [cell, dim] : t) {
        auto [p, q, j] = cell;
        r.csv.push_back({std::to_string(p), std::to_string(q), std::to_string(j), std::to_string(dim)});
    }
    return r;
}

Report khovanov_specseq(const Options& o)
{
    if (o.max_page < 1)
        throw InputError("--max-page must be at least 1");
    auto d = read_diagram(o);
    auto ring = khovanov_ring(o);
    auto fixed = parse_fixed(o.fixed, d.size());
    auto kh = unnormalised_homology(d, ring);
    std::set<int> js;
    for (const auto& [cell, h] : kh.cells)
        js.insert(cell.second);

    Report r;
    r.json["diagram"] = to_pd(d);
    r.json["ring"] = ring.name();
    r.json["fixed"] = one_based(fixed);
    Json runs = Json::array();
    bool all = true;
    r.csv = {{"run", "r", "p", "q", "dim"}};
    for (int j : js) {
        auto run = fixed_crossing_spectral_sequence(d, fixed, j, ring, o.max_page);
        Json pages = Json::array();
        for (const auto& pg : run.pages.pages)
            pages.push_back(page_to_json(pg));
        Json un = Json::array();
        for (const auto& [n, dim] : run.unnormalised)
            un.push_back({{"n", n}, {"dim", dim}});
        runs.push_back({{"j", j},
                        {"shift", run.shift},
                        {"e2_matches", run.e2_matches},
                        {"converges", run.converges},
                        {"pages", pages},
                        {"infinity", cells_to_json(run.pages.infinity)},
                        {"unnormalised", un}});
        page_rows(r.csv, "j=" + std::to_string(j), run.pages);
        all = all && run.e2_matches && run.converges;
    }
    r.json["runs"] = runs;
    r.json["all_converge"] = all;
    if (!all)
        r.code = 2;
    return r;
}

Report selftest(const Options& o)
{
    SelftestConfig cfg;
    cfg.seed = o.seed;
    cfg.count = o.count;
    Report r;
    r.json = selftest_report(cfg);
    r.csv = {{"check", "ok"}};
    for (const auto& c : r.json.at("cases"))
        r.csv.push_back({c.at("name").get<std::string>(), c.at("ok").get<bool>() ? "true" : "false"});
    if (!r.json.at("ok").get<bool>())
        r.code = 2;
    return r;
}

void write_csv(std::ostream& out, const Rows& rows)
{
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// selftest pieces

struct NamedPoset {
    std::string name;
    Poset poset;
};

Json ranks_json(const std::vector<std::size_t>& v)
{
    Json out = Json::array();
    for (auto x : v)
        out.push_back(x);
    return out;
}

Json bundle_case(const SelftestConfig& cfg, std::size_t index)
{
    static const std::vector<std::pair<std::string, int>> bases = {
        {"boolean(1)", 1}, {"boolean(2)", 2}, {"boolean(3)", 3},
        {"bruhat_dihedral(2)", -2}, {"bruhat_dihedral(3)", -3}, {"bruhat_dihedral(4)", -4}};
    const auto& [base_name, code] = bases[index % bases.size()];
    Poset base = code > 0 ? boolean_lattice(static_cast<std::size_t>(code)) : bruhat_dihedral(static_cast<std::size_t>(-code));
    GenParams gp;
    gp.seed = cfg.seed * 1000003 + index;
    gp.ring = index % 2 ? CoeffRing::prime_field(2) : CoeffRing::rationals();
    Json c;
    c["name"] = "bundle " + std::to_string(index);
    c["seed"] = gp.seed;
    c["base"] = base_name;
    c["ring"] = gp.ring.name();
    bool ok = true;
    try {
        auto b = random_bundle(gp, base);
        auto e = total(b);
        c["total_size"] = e.total.size();
        auto k = bicomplex(b, cfg.max_degree + 1);
        c["bicomplex"] = true;
        check_phi_chain_map(k, e, cfg.max_degree);
        c["phi_chain_map"] = true;

        auto qi = quasi_iso_check(b, cfg.max_degree);
        std::vector<std::size_t> ht, he;
        for (const auto& d : qi.degrees) {
            ht.push_back(d.total_rank);
            he.push_back(d.poset_rank);
        }
        c["total_homology"] = ranks_json(ht);
        c["poset_homology"] = ranks_json(he);
        c["quasi_isomorphism"] = qi.all_iso();
        ok = ok && qi.all_iso();

        auto ps = spectral_sequence(k, 3);
        auto e2 = e2_direct(b, ps.max_degree);
        bool e2_ok = true;
        for (const auto& [cell, dim] : ps.page(2).dims)
            e2_ok = e2_ok && e2.at(cell) == dim;
        bool conv = true;
        for (const auto& d : qi.degrees) {
            if (d.n > ps.max_degree)
                continue;
            std::size_t sum = 0;
            for (const auto& [cell, dim] : ps.infinity)
                if (cell.first + cell.second == d.n)
                    sum += dim;
            conv = conv && sum == d.poset_rank;
        }
        std::map<Cell, std::size_t> nonzero;
        for (const auto& [cell, dim] : ps.page(2).dims)
            if (dim)
                nonzero[cell] = dim;
        c["e2"] = cells_to_json(nonzero);
        c["e2_matches_direct"] = e2_ok;
        c["converges"] = conv;
        ok = ok && e2_ok && conv;

        bool les_ok = true;
        for (auto x : base.lower_covers(base.top())) {
            if (!admissible_via(base, x))
                continue;
            for (auto which : {LesComplex::total, LesComplex::sequence}) {
                auto rep = les_check(b, x, cfg.max_degree, which);
                les_ok = les_ok && rep.exact && rep.quotient_matches;
            }
            break;
        }
        c["long_exact_sequences"] = les_ok;
        ok = ok && les_ok;
    } catch (const VerificationError& ex) {
        c["error"] = ex.what();
        ok = false;
    }
    c["ok"] = ok;
    return c;
}

Json admissibility_case()
{
    Json c;
    c["name"] = "admissibility";
    bool ok = true;
    Json rows = Json::array();
    auto add = [&](const std::string& name, const Poset& p, bool want_adm, bool want_special) {
        bool adm = is_admissible(p).has_value();
        bool sp = is_specially_admissible(p).has_value();
        rows.push_back({{"poset", name}, {"admissible", adm}, {"specially_admissible", sp}});
        ok = ok && adm == want_adm && sp == want_special;
    };
    for (std::size_t n = 1; n <= 4; ++n)
        add("boolean(" + std::to_string(n) + ")", boolean_lattice(n), true, true);
    for (std::size_t n = 3; n <= 5; ++n)
        add("chain(" + std::to_string(n) + ")", chain(n), false, false);
    for (std::size_t m = 2; m <= 5; ++m)
        add("bruhat_dihedral(" + std::to_string(m) + ")", bruhat_dihedral(m), true, true);
    auto s4 = bruhat_symmetric(4);
    add("bruhat_symmetric(4)", s4, true, true);
    bool every = true;
    for (auto x : s4.lower_covers(s4.top()))
        every = every && admissible_via(s4, x).has_value();
    c["bruhat_symmetric(4)_every_coatom"] = every;
    ok = ok && every;
    c["posets"] = rows;
    c["ok"] = ok;
    return c;
}

std::map<std::pair<int, int>, std::size_t> rank_table(const BigradedHomology& h)
{
    std::map<std::pair<int, int>, std::size_t> out;
    for (const auto& [cell, dh] : h.cells)
        if (dh.free_rank)
            out[cell] = dh.free_rank;
    return out;
}

Json khovanov_case()
{
    Json c;
    c["name"] = "khovanov";
    bool ok = true;
    try {
        auto q = CoeffRing::rationals();
        auto unknot = rank_table(normalised_homology(parse_pd("PD[] circles=1"), q));
        auto kink = rank_table(normalised_homology(parse_pd("PD[X[1,1,2,2]]"), q));
        c["kink_is_unknot"] = unknot == kink;
        ok = ok && unknot == kink;
        auto trefoil = parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]");
        auto kt = normalised_homology(trefoil, q);
        c["trefoil"] = bigraded_to_json(kt);
        ok = ok && kt.total_rank() == 4;
        bool runs = true;
        for (auto ring : {q, CoeffRing::prime_field(2)}) {
            std::set<int> js;
            for (const auto& [cell, h] : unnormalised_homology(trefoil, ring).cells)
                js.insert(cell.second);
            for (int j : js) {
                auto run = fixed_crossing_spectral_sequence(trefoil, {0}, j, ring);
                runs = runs && run.e2_matches && run.converges;
            }
        }
        c["trefoil_fixed_crossing_runs"] = runs;
        ok = ok && runs;
    } catch (const VerificationError& ex) {
        c["error"] = ex.what();
        ok = false;
    }
    c["ok"] = ok;
    return c;
}

} // namespace

Json selftest_report(const SelftestConfig& cfg)
{
    Json report;
    report["seed"] = cfg.seed;
    report["count"] = cfg.count;
    report["max_degree"] = cfg.max_degree;
    Json cases = Json::array();
    bool ok = true;
    for (std::size_t i = 0; i < cfg.count; ++i) {
        cases.push_back(bundle_case(cfg, i));
        ok = ok && cases.back().at("ok").get<bool>();
    }
    cases.push_back(admissibility_case());
    cases.push_back(khovanov_case());
    ok = ok && cases[cases.size() - 2].at("ok").get<bool>() && cases.back().at("ok").get<bool>();
    report["cases"] = cases;
    report["ok"] = ok;
    return report;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Coloured posets, bundles, their spectral sequence and Khovanov homology"};
    app.require_subcommand(1);
    Options o;
    std::function<Report(const Options&)> action;

    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                    std::function<Report(const Options&)> f, bool takes_file = true) {
        auto* sub = parent->add_subcommand(name, help);
        if (takes_file)
            sub->add_option("file", o.file, "input file")->required();
        sub->add_option("--output", o.output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->callback([&action, f] { action = f; });
        return sub;
    };
    auto ring_opt = [&](CLI::App* sub) { sub->add_option("--ring", o.ring, "q, f2, fp:<p> or z"); };
    auto degree_opts = [&](CLI::App* sub) {
        sub->add_option("--max-degree", o.max_degree, "highest total degree reported");
        sub->add_option("--max-page", o.max_page, "last page computed");
        sub->add_flag("--force-unsupported-base", o.force, "run on bases outside the supported class");
    };

    auto* poset = app.add_subcommand("poset", "plain and coloured posets");
    poset->require_subcommand(1);
    leaf(poset, "check-admissible", "admissibility of a poset", poset_check_admissible);
    ring_opt(leaf(poset, "homology", "homology of a coloured poset", poset_homology));

    auto* bundle = app.add_subcommand("bundle", "bundles of coloured posets");
    bundle->require_subcommand(1);
    auto* bt = leaf(bundle, "total", "total coloured poset and its homology", bundle_total);
    ring_opt(bt);
    auto* bs = leaf(bundle, "specseq", "spectral sequence of a bundle", bundle_specseq);
    ring_opt(bs);
    degree_opts(bs);
    auto* bl = leaf(bundle, "les-check", "long exact sequences along admissibility witnesses", bundle_les_check);
    ring_opt(bl);
    degree_opts(bl);
    bl->add_option("--witness", o.witness, "label of the element below the top");

    auto* kh = app.add_subcommand("khovanov", "Khovanov homology of PD diagrams");
    kh->require_subcommand(1);
    ring_opt(leaf(kh, "homology", "unnormalised and normalised homology", khovanov_homology));
    auto* kf = leaf(kh, "fixed", "homology with respect to fixed crossings", khovanov_fixed);
    ring_opt(kf);
    kf->add_option("--fixed", o.fixed, "fixed crossings, 1-based, comma separated")->required();
    auto* ks = leaf(kh, "specseq", "spectral sequence of fixed crossings, per q-degree", khovanov_specseq);
    ring_opt(ks);
    ks->add_option("--fixed", o.fixed, "fixed crossings, 1-based, comma separated")->required();
    ks->add_option("--max-page", o.max_page, "last page computed");

    auto* st = leaf(&app, "selftest", "property suite with fixed seeds", selftest, false);
    st->add_option("--seed", o.seed, "seed");
    st->add_option("--count", o.count, "number of random bundles");

    std::vector<const char*> argv{"colposet"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    try {
        Report r = action(o);
        if (o.output == "csv")
            write_csv(out, r.csv);
        else
            out << r.json.dump() << '\n';
        if (r.code == 2)
            err << "verification failed\n";
        return r.code;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return 1;
    } catch (const VerificationError& e) {
        err << "verification failed: " << e.what() << '\n';
        return 2;
    }
}

} // namespace colposet
