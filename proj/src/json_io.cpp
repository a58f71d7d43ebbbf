#include "colposet/json_io.hpp"

#include <fstream>
#include <sstream>

namespace colposet {

namespace {

std::string label_of(const Json& j)
{
    if (j.is_string())
        return j.get<std::string>();
    if (j.is_number_integer())
        return std::to_string(j.get<long long>());
    throw InputError("element labels must be strings or integers, got " + j.dump());
}

const Json& field(const Json& j, const char* key, const char* what)
{
    if (!j.is_object() || !j.contains(key))
        throw InputError(std::string(what) + ": missing \"" + key + "\"");
    return j.at(key);
}

Scalar scalar_from_json(const Json& j)
{
    if (j.is_number_integer())
        return Scalar(std::to_string(j.get<long long>()));
    if (j.is_string())
        return parse_scalar(j.get<std::string>());
    if (j.is_number_float()) {
        double v = j.get<double>();
        if (v == static_cast<double>(static_cast<long long>(v)))
            return Scalar(static_cast<long>(v));
    }
    throw InputError("matrix entries must be integers or rational strings, got " + j.dump());
}

std::pair<std::string, std::string> split_cover(const std::string& key)
{
    auto pos = key.find('<');
    if (pos == std::string::npos)
        throw InputError("expected a key of the form \"x<y\", got \"" + key + "\"");
    return {key.substr(0, pos), key.substr(pos + 1)};
}

} // namespace

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json parse_json_text(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("JSON: ") + e.what());
    }
}

Poset poset_from_json(const Json& j)
{
    std::vector<std::string> labels;
    for (const auto& e : field(j, "elements", "poset"))
        labels.push_back(label_of(e));
    std::vector<std::pair<std::string, std::string>> rel;
    if (j.contains("relations"))
        for (const auto& r : j.at("relations")) {
            if (!r.is_array() || r.size() != 2)
                throw InputError("poset: relations are pairs [\"a\",\"b\"], got " + r.dump());
            rel.emplace_back(label_of(r[0]), label_of(r[1]));
        }
    return Poset::build_labelled(std::move(labels), rel);
}

Json poset_to_json(const Poset& p)
{
    Json j;
    j["elements"] = p.labels();
    Json rel = Json::array();
    for (auto [a, b] : p.covers())
        rel.push_back({p.label(a), p.label(b)});
    j["relations"] = rel;
    return j;
}

ExactMatrix matrix_from_json(const Json& j, const CoeffRing& ring, std::size_t rows, std::size_t cols)
{
    if (!j.is_array())
        throw InputError("matrix must be an array of rows, got " + j.dump());
    if (j.size() != rows)
        throw InputError("matrix has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
    std::vector<std::vector<Scalar>> dense;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != cols)
            throw InputError("matrix row " + row.dump() + " should have " + std::to_string(cols) + " entries");
        dense.emplace_back();
        for (const auto& v : row)
            dense.back().push_back(ring.canonical(scalar_from_json(v)));
    }
    return ExactMatrix::from_dense(ring, dense, cols);
}

Json scalar_to_json(const Scalar& s)
{
    if (s.get_den() == 1 && s.get_num().fits_slong_p())
        return s.get_num().get_si();
    return scalar_to_string(s);
}

Json matrix_to_json(const ExactMatrix& m)
{
    Json out = Json::array();
    for (const auto& row : m.to_dense()) {
        Json r = Json::array();
        for (const auto& v : row)
            r.push_back(scalar_to_json(v));
        out.push_back(r);
    }
    return out;
}

ColouredPoset coloured_from_json(const Json& j, const std::string& ring_override)
{
    Poset p = poset_from_json(field(j, "poset", "coloured poset"));
    CoeffRing ring = CoeffRing::parse(ring_override.empty() ? field(j, "ring", "coloured poset").get<std::string>()
                                                            : ring_override);
    std::vector<std::size_t> dims(p.size(), 0);
    const auto& dj = field(j, "dims", "coloured poset");
    for (const auto& [label, d] : dj.items()) {
        if (!d.is_number_integer() || d.get<long long>() < 0)
            throw InputError("dims[" + label + "] must be a nonnegative integer");
        dims[p.index_of(label)] = d.get<std::size_t>();
    }
    for (std::size_t x = 0; x < p.size(); ++x)
        if (!dj.contains(p.label(x)))
            throw InputError("coloured poset: no dimension for " + p.label(x));

    std::map<CoverKey, ExactMatrix> maps;
    if (j.contains("maps"))
        for (const auto& [key, m] : j.at("maps").items()) {
            auto [a, b] = split_cover(key);
            std::size_t x = p.index_of(a), y = p.index_of(b);
            if (!p.is_cover(x, y))
                throw InputError("coloured poset: " + key + " is not a cover");
            maps.emplace(CoverKey{x, y}, matrix_from_json(m, ring, dims[y], dims[x]));
        }
    // maps to or from zero modules may be left out
    for (auto [x, y] : p.covers())
        if (!maps.count({x, y})) {
            if (dims[x] && dims[y])
                throw InputError("coloured poset: missing map " + p.label(x) + "<" + p.label(y));
            maps.emplace(CoverKey{x, y}, ExactMatrix(ring, dims[y], dims[x]));
        }
    auto cp = ColouredPoset::build(p, ring, dims, std::move(maps));
    if (j.contains("degrees")) {
        std::vector<std::vector<int>> deg(p.size());
        for (const auto& [label, v] : j.at("degrees").items())
            deg[p.index_of(label)] = v.get<std::vector<int>>();
        for (std::size_t x = 0; x < p.size(); ++x)
            if (deg[x].size() != dims[x])
                throw InputError("coloured poset: degrees of " + p.label(x) + " do not match its dimension");
        cp = cp.with_grading(std::move(deg));
    }
    return cp;
}

Json coloured_to_json(const ColouredPoset& cp)
{
    const auto& p = cp.poset();
    Json j;
    j["poset"] = poset_to_json(p);
    j["ring"] = cp.ring().name();
    Json dims = Json::object();
    for (std::size_t x = 0; x < p.size(); ++x)
        dims[p.label(x)] = cp.dim(x);
    j["dims"] = dims;
    Json maps = Json::object();
    for (const auto& [key, m] : cp.cover_maps())
        maps[p.label(key.first) + "<" + p.label(key.second)] = matrix_to_json(m);
    j["maps"] = maps;
    if (cp.graded()) {
        Json deg = Json::object();
        for (std::size_t x = 0; x < p.size(); ++x)
            deg[p.label(x)] = cp.degrees(x);
        j["degrees"] = deg;
    }
    return j;
}

Bundle bundle_from_json(const Json& j, const std::string& ring_override)
{
    Poset base = poset_from_json(field(j, "base", "bundle"));
    std::string ring_text = ring_override;
    if (ring_text.empty() && j.contains("ring"))
        ring_text = j.at("ring").get<std::string>();
    const auto& fj = field(j, "fibres", "bundle");
    std::vector<ColouredPoset> fibres(base.size());
    for (std::size_t x = 0; x < base.size(); ++x) {
        if (!fj.contains(base.label(x)))
            throw InputError("bundle: no fibre over " + base.label(x));
        fibres[x] = coloured_from_json(fj.at(base.label(x)), ring_text);
        if (fibres[x].ring() != fibres[0].ring())
            throw InputError("bundle: fibres over different rings");
    }
    for (const auto& [label, v] : fj.items())
        base.index_of(label);

    std::map<CoverKey, ColouredPosetMorphism> morphisms;
    const Json empty = Json::object();
    const auto& mj = j.contains("morphisms") ? j.at("morphisms") : empty;
    for (const auto& [key, v] : mj.items()) {
        auto [a, b] = split_cover(key);
        std::size_t x = base.index_of(a), z = base.index_of(b);
        if (!base.is_cover(x, z))
            throw InputError("bundle: " + key + " is not a cover of the base");
    }
    for (auto [x, z] : base.covers()) {
        const std::string key = base.label(x) + "<" + base.label(z);
        if (!mj.contains(key))
            throw InputError("bundle: missing morphism " + key);
        const auto& m = mj.at(key);
        const auto& src = fibres[x];
        const auto& dst = fibres[z];
        ColouredPosetMorphism mor;
        const auto& f = field(m, "f", "bundle morphism");
        for (std::size_t y = 0; y < src.size(); ++y) {
            const auto& l = src.poset().label(y);
            if (!f.contains(l))
                throw InputError("bundle morphism " + key + ": f has no image for " + l);
            mor.f.push_back(dst.poset().index_of(label_of(f.at(l))));
        }
        const Json& tau = m.contains("tau") ? m.at("tau") : empty;
        for (std::size_t y = 0; y < src.size(); ++y) {
            const auto& l = src.poset().label(y);
            const std::size_t rows = dst.dim(mor.f[y]), cols = src.dim(y);
            if (tau.contains(l))
                mor.tau.push_back(matrix_from_json(tau.at(l), src.ring(), rows, cols));
            else if (rows == 0 || cols == 0)
                mor.tau.emplace_back(src.ring(), rows, cols);
            else
                throw InputError("bundle morphism " + key + ": tau has no matrix for " + l);
        }
        morphisms.emplace(CoverKey{x, z}, std::move(mor));
    }
    return Bundle::build(std::move(base), std::move(fibres), std::move(morphisms));
}

Json bundle_to_json(const Bundle& b)
{
    const auto& base = b.base();
    Json j;
    j["base"] = poset_to_json(base);
    Json fibres = Json::object();
    for (std::size_t x = 0; x < base.size(); ++x)
        fibres[base.label(x)] = coloured_to_json(b.fibre(x));
    j["fibres"] = fibres;
    Json morphisms = Json::object();
    for (const auto& [key, m] : b.cover_morphisms()) {
        const auto& src = b.fibre(key.first);
        const auto& dst = b.fibre(key.second);
        Json f = Json::object(), tau = Json::object();
        for (std::size_t y = 0; y < src.size(); ++y) {
            f[src.poset().label(y)] = dst.poset().label(m.f[y]);
            tau[src.poset().label(y)] = matrix_to_json(m.tau[y]);
        }
        morphisms[base.label(key.first) + "<" + base.label(key.second)] = {{"f", f}, {"tau", tau}};
    }
    j["morphisms"] = morphisms;
    return j;
}

Json homology_to_json(const HomologySummary& h)
{
    Json out = Json::array();
    for (const auto& [n, dh] : h.degrees) {
        Json t = Json::array();
        for (const auto& v : dh.torsion)
            t.push_back(v.get_str());
        out.push_back({{"n", n}, {"rank", dh.free_rank}, {"torsion", t}});
    }
    return out;
}

Json cells_to_json(const std::map<Cell, std::size_t>& cells)
{
    Json out = Json::array();
    for (const auto& [cell, dim] : cells)
        out.push_back({{"p", cell.first}, {"q", cell.second}, {"dim", dim}});
    return out;
}

Json page_to_json(const Page& p)
{
    return {{"r", p.r}, {"cells", cells_to_json(p.dims)}};
}

Json bigraded_to_json(const BigradedHomology& h)
{
    Json out = Json::array();
    for (const auto& [cell, dh] : h.cells) {
        Json t = Json::array();
        for (const auto& v : dh.torsion)
            t.push_back(v.get_str());
        out.push_back({{"i", cell.first}, {"j", cell.second}, {"rank", dh.free_rank}, {"torsion", t}});
    }
    return out;
}

Json trigraded_to_json(const std::map<TriCell, std::size_t>& t)
{
    Json out = Json::array();
    for (const auto& [cell, dim] : t) {
        auto [p, q, j] = cell;
        out.push_back({{"p", p}, {"q", q}, {"j", j}, {"dim", dim}});
    }
    return out;
}

} // namespace colposet
