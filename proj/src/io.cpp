#include "logmonoid/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace logmonoid::io {

namespace {

std::string field(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string field(const std::string& where, std::size_t index) { return where + "/" + std::to_string(index); }

const Json& require(const Json& obj, const std::string& key, const std::string& where)
{
    if (!obj.is_object())
        throw InputError(where.empty() ? "/" : where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw InputError(field(where, key), "missing field");
    return *it;
}

const Json& require_array(const Json& j, const std::string& where)
{
    if (!j.is_array())
        throw InputError(where, "expected an array");
    return j;
}

std::string require_string(const Json& j, const std::string& where)
{
    if (!j.is_string())
        throw InputError(where, "expected a string");
    return j.get<std::string>();
}

Integer integer_from_json(const Json& j, const std::string& where)
{
    if (j.is_number_integer())
        return j.is_number_unsigned() ? Integer(std::to_string(j.get<unsigned long long>()))
                                      : Integer(std::to_string(j.get<long long>()));
    if (j.is_string()) {
        Integer z;
        if (z.set_str(j.get<std::string>(), 10) == 0)
            return z;
    }
    throw InputError(where, "expected an integer");
}

std::size_t count_from_json(const Json& j, const std::string& where)
{
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw InputError(where, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

Rational rational_from_json(const Json& j, const std::string& where)
{
    if (j.is_number_integer())
        return Rational(integer_from_json(j, where));
    if (j.is_string()) {
        Rational q;
        if (q.set_str(j.get<std::string>(), 10) == 0 && q.get_den() != 0) {
            q.canonicalize();
            return q;
        }
    }
    throw InputError(where, "expected a rational such as \"3/2\"");
}

Json integer_to_json(const Integer& z)
{
    if (z.fits_slong_p())
        return z.get_si();
    return z.get_str();
}

Json rational_to_json(const Rational& q)
{
    return q.get_str();
}

IntVector int_vector_from_json(const Json& j, const std::string& where)
{
    require_array(j, where);
    IntVector v;
    for (std::size_t k = 0; k < j.size(); ++k)
        v.push_back(integer_from_json(j[k], field(where, k)));
    return v;
}

template <class T>
std::vector<std::size_t> order_by_id(const std::vector<T>& items)
{
    std::vector<std::size_t> idx(items.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
        idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return items[a].id < items[b].id; });
    return idx;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < text.size() && k + 1 < byte; ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

Json labelled(const MonoidPresentation& p, const IntVector& x)
{
    Json out = Json::object();
    for (std::size_t i = 0; i < x.size(); ++i)
        out[p.labels()[i]] = integer_to_json(x[i]);
    return out;
}

Json datum_to_json(const SaturationDatum& d)
{
    Json values = Json::array();
    for (const auto& u : d.values)
        values.push_back(unit_to_json(u));
    return {{"orders", int_vector_to_json(d.orders)}, {"values", values}};
}

}  // namespace

Json int_vector_to_json(const IntVector& v)
{
    Json out = Json::array();
    for (const auto& z : v)
        out.push_back(integer_to_json(z));
    return out;
}

Json vectors_to_json(const std::vector<IntVector>& vs)
{
    Json out = Json::array();
    for (const auto& v : vs)
        out.push_back(int_vector_to_json(v));
    return out;
}

Json parse_json_text(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        auto [line, col] = line_column(text, e.byte);
        std::string msg = e.what();
        auto pos = msg.find("syntax error");
        throw InputError("line " + std::to_string(line) + ", column " + std::to_string(col),
                         pos == std::string::npos ? msg : msg.substr(pos));
    }
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError(path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

// ---------------------------------------------------------------------------
// Graphs

DecoratedDualGraph graph_from_json(const Json& doc, bool strict_contact)
{
    if (!doc.is_object())
        throw InputError("/", "expected a graph object");
    if (auto it = doc.find("schema_version"); it != doc.end()) {
        std::string v = require_string(*it, "/schema_version");
        if (v.substr(0, v.find('.')) != "1")
            throw InputError("/schema_version", "unsupported version '" + v + "'");
    }
    DecoratedDualGraph g;
    g.r = count_from_json(require(doc, "r", ""), "/r");

    const Json& vs = require_array(require(doc, "vertices", ""), "/vertices");
    for (std::size_t k = 0; k < vs.size(); ++k) {
        std::string w = field("/vertices", k);
        Vertex v;
        v.id = require_string(require(vs[k], "id", w), field(w, "id"));
        if (auto it = vs[k].find("I"); it != vs[k].end()) {
            require_array(*it, field(w, "I"));
            for (std::size_t a = 0; a < it->size(); ++a) {
                std::size_t j = count_from_json((*it)[a], field(field(w, "I"), a));
                if (j < 1 || j > g.r)
                    throw InputError(field(field(w, "I"), a), "branch index outside 1.." + std::to_string(g.r));
                v.degeneracy.push_back(j);
            }
            std::sort(v.degeneracy.begin(), v.degeneracy.end());
            if (std::adjacent_find(v.degeneracy.begin(), v.degeneracy.end()) != v.degeneracy.end())
                throw InputError(field(w, "I"), "repeated branch index");
        }
        if (auto it = vs[k].find("markings"); it != vs[k].end()) {
            require_array(*it, field(w, "markings"));
            for (std::size_t a = 0; a < it->size(); ++a) {
                std::string mw = field(field(w, "markings"), a);
                Marking m;
                m.id = require_string(require((*it)[a], "id", mw), field(mw, "id"));
                m.mu = int_vector_from_json(require((*it)[a], "mu", mw), field(mw, "mu"));
                if (m.mu.size() != g.r)
                    throw InputError(field(mw, "mu"), "expected " + std::to_string(g.r) + " entries");
                if (!is_nonnegative(m.mu))
                    throw InputError(field(mw, "mu"), "contact orders of markings must be >= 0");
                v.markings.push_back(m);
            }
        }
        g.vertices.push_back(v);
    }

    const Json no_edges = Json::array();
    const Json& es = require_array(doc.contains("edges") ? doc["edges"] : no_edges, "/edges");
    for (std::size_t k = 0; k < es.size(); ++k) {
        std::string w = field("/edges", k);
        Edge e;
        e.id = require_string(require(es[k], "id", w), field(w, "id"));
        e.from = require_string(require(es[k], "from", w), field(w, "from"));
        e.to = require_string(require(es[k], "to", w), field(w, "to"));
        e.mu = int_vector_from_json(require(es[k], "mu", w), field(w, "mu"));
        if (e.mu.size() != g.r)
            throw InputError(field(w, "mu"), "expected " + std::to_string(g.r) + " entries");
        g.edges.push_back(e);
    }

    if (auto it = doc.find("metadata"); it != doc.end()) {
        if (!it->is_object())
            throw InputError("/metadata", "expected an object");
        for (const auto& [key, value] : it->items())
            g.metadata[key] = value.dump();
    }

    try {
        g.validate(strict_contact);
    } catch (const InvalidGraph& e) {
        throw InputError("/", e.what());
    }
    return g;
}

Json graph_to_json(const DecoratedDualGraph& g)
{
    Json vs = Json::array();
    for (std::size_t k : order_by_id(g.vertices)) {
        const Vertex& v = g.vertices[k];
        Json marks = Json::array();
        for (std::size_t a : order_by_id(v.markings))
            marks.push_back({{"id", v.markings[a].id}, {"mu", int_vector_to_json(v.markings[a].mu)}});
        std::vector<std::size_t> deg = v.degeneracy;
        std::sort(deg.begin(), deg.end());
        vs.push_back({{"id", v.id}, {"I", deg}, {"markings", marks}});
    }
    Json es = Json::array();
    for (std::size_t k : order_by_id(g.edges)) {
        const Edge& e = g.edges[k];
        es.push_back({{"id", e.id}, {"from", e.from}, {"to", e.to}, {"mu", int_vector_to_json(e.mu)}});
    }
    Json meta = Json::object();
    for (const auto& [key, value] : g.metadata)
        meta[key] = Json::parse(value);
    return {{"schema_version", kSchemaVersion}, {"r", g.r}, {"vertices", vs}, {"edges", es}, {"metadata", meta}};
}

std::string serialize_graph(const DecoratedDualGraph& g)
{
    return graph_to_json(g).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Units and slb documents

ExactUnit unit_from_json(const Json& j, const std::string& where)
{
    if (j.is_number_integer() || j.is_string()) {
        Rational q = rational_from_json(j, where);
        if (q == 0)
            throw InputError(where, "a unit must be nonzero");
        return ExactUnit::from_rational(q);
    }
    if (!j.is_object())
        throw InputError(where, "expected a unit {\"mag\", \"root\", \"phase\"}");
    Rational mag = rational_from_json(require(j, "mag", where), field(where, "mag"));
    if (mag <= 0)
        throw InputError(field(where, "mag"), "magnitude must be positive");
    std::size_t root = 1;
    if (auto it = j.find("root"); it != j.end()) {
        root = count_from_json(*it, field(where, "root"));
        if (root == 0)
            throw InputError(field(where, "root"), "root must be >= 1");
    }
    Rational phase = 0;
    if (auto it = j.find("phase"); it != j.end())
        phase = rational_from_json(*it, field(where, "phase"));
    return ExactUnit(mag, root, phase);
}

Json unit_to_json(const ExactUnit& u)
{
    return {{"mag", rational_to_json(u.base())}, {"root", u.root()}, {"phase", rational_to_json(u.phase())}};
}

ExactScalar scalar_from_json(const Json& j, const std::string& where)
{
    if (j.is_null() || (j.is_number_integer() && j.get<long long>() == 0) || (j.is_string() && j == "0"))
        return ExactScalar::zero();
    return ExactScalar(unit_from_json(j, where));
}

Json scalar_to_json(const ExactScalar& s)
{
    return s.is_zero() ? Json(nullptr) : unit_to_json(s.unit());
}

namespace {

std::vector<ExactUnit> units_from_json(const Json& j, const std::string& where)
{
    require_array(j, where);
    std::vector<ExactUnit> out;
    for (std::size_t k = 0; k < j.size(); ++k)
        out.push_back(unit_from_json(j[k], field(where, k)));
    return out;
}

Json units_to_json(const std::vector<ExactUnit>& us)
{
    Json out = Json::array();
    for (const auto& u : us)
        out.push_back(unit_to_json(u));
    return out;
}

}  // namespace

SlbDocument slb_from_json(const Json& doc)
{
    if (!doc.is_object())
        throw InputError("/", "expected an slb object");
    SlbDocument out;
    if (doc.contains("graph")) {
        DecoratedDualGraph g;
        try {
            g = graph_from_json(doc["graph"]);
        } catch (const InputError& e) {
            throw InputError("/graph" + (e.where() == "/" ? "" : e.where()), e.message());
        }
        out.basic = build_basic_monoid(g);
        LogmapSlbData data = trivial_logmap_data(*out.basic);
        if (doc.contains("relation_units"))
            data.relation_units = units_from_json(doc["relation_units"], "/relation_units");
        if (doc.contains("section_units"))
            data.section_units = units_from_json(doc["section_units"], "/section_units");
        else
            data.section_units.reset();
        try {
            out.slb = assemble_logmap_slb(*out.basic, data);
        } catch (const DimensionMismatch& e) {
            throw InputError("/", e.what());
        }
        return out;
    }

    std::string text = require_string(require(doc, "presentation", ""), "/presentation");
    try {
        out.slb.presentation = parse_presentation(text);
    } catch (const ParseError& e) {
        throw InputError("/presentation", e.what());
    }
    const std::size_t n = out.slb.presentation.n_gens();
    if (doc.contains("sections")) {
        const Json& s = require_array(doc["sections"], "/sections");
        for (std::size_t k = 0; k < s.size(); ++k)
            out.slb.sections.push_back(scalar_from_json(s[k], field("/sections", k)));
    } else {
        out.slb.sections.assign(n, ExactUnit());
    }
    if (doc.contains("relation_units"))
        out.slb.rel_units = units_from_json(doc["relation_units"], "/relation_units");
    else
        out.slb.rel_units.assign(out.slb.presentation.relations().size(), ExactUnit());
    try {
        out.slb.validate();
    } catch (const DimensionMismatch& e) {
        throw InputError("/", e.what());
    }
    return out;
}

Json slb_to_json(const SlbPointPresentation& p)
{
    Json sections = Json::array();
    for (const auto& s : p.sections)
        sections.push_back(scalar_to_json(s));
    return {{"schema_version", kSchemaVersion},
            {"presentation", p.presentation.to_string()},
            {"sections", sections},
            {"relation_units", units_to_json(p.rel_units)}};
}

// ---------------------------------------------------------------------------
// Analysis

Json check_slb(const SlbDocument& doc, std::size_t bound)
{
    if (bound == 0)
        bound = default_membership_bound();
    const SlbPointPresentation& p = doc.slb;
    const MonoidPresentation& q = p.presentation;
    Json out;
    out["presentation"] = q.to_string();

    ConsistencyResult c = consistency_check(p);
    out["consistent"] = c.consistent;
    out["verdict"] = c.consistent ? "consistent" : "inconsistent";
    out["failure"] = to_string(c.failure);
    out["reason"] = c.reason;
    if (c.consistent) {
        out["witness"] = units_to_json(c.witness);
        Json sections = Json::array();
        for (std::size_t i = 0; i < q.n_gens(); ++i) {
            Json entry = {{"generator", q.labels()[i]}};
            try {
                entry["value"] = scalar_to_json(realize_section(p, c.witness, q.gp_image(unit_vector(q.n_gens(), i)), bound));
            } catch (const NoPreimageFound& e) {
                entry["value"] = "unknown";
                entry["bound"] = e.bound();
            }
            sections.push_back(entry);
        }
        out["realized_sections"] = sections;
    } else {
        Json cert;
        if (c.failure == ConsistencyResult::Failure::Support) {
            cert["x"] = int_vector_to_json(c.certificate_x);
            cert["y"] = int_vector_to_json(c.certificate_y);
        } else {
            cert["z"] = int_vector_to_json(c.certificate_z);
            cert["value"] = unit_to_json(c.certificate_value);
        }
        out["certificate"] = cert;
    }

    if (doc.basic) {
        SymplecticCheck s = symplectic_logmap_check(*doc.basic, p);
        out["symplectic"] = {{"ok", s.ok}, {"tropical", s.tropical}, {"consistent", s.consistent},
                             {"diagnostics", s.diagnostics}};
        if (s.tropical) {
            Json data = Json::array();
            for (const auto& d : enumerate_saturation_data(*doc.basic))
                data.push_back(datum_to_json(d));
            out["saturation_data"] = data;
        } else {
            out["saturation_data"] = nullptr;
        }
    }
    return out;
}

Json analyze_graph(const DecoratedDualGraph& g, const AnalysisOptions& opts)
{
    g.validate(opts.strict_contact);
    const std::size_t bound = opts.bound ? opts.bound : default_membership_bound();
    BasicMonoid b = build_basic_monoid(g);
    const MonoidPresentation& q = b.presentation;

    Json out;
    out["schema_version"] = kSchemaVersion;
    out["bound"] = bound;
    out["graph"] = {{"r", g.r}, {"vertices", g.vertices.size()}, {"edges", g.edges.size()}};

    Json reduced = Json::array();
    for (std::size_t i : b.reduced_gens)
        reduced.push_back(q.labels()[i]);
    out["basic_monoid"] = {{"generators", q.labels()},
                           {"presentation", q.to_string()},
                           {"simplified", simplify_presentation(q, TietzeMode::ForcedZeros).presentation.to_string()},
                           {"reduced_generators", reduced}};

    const AbelianGroup& gp = groupification(q);
    out["groupification"] = {{"description", gp.describe()},
                             {"free_rank", gp.free_rank},
                             {"invariant_factors", int_vector_to_json(gp.invariant_factors)},
                             {"torsion_order", integer_to_json(gp.torsion_order())}};

    SharpnessResult sh = is_sharp(q);
    Json sharp = {{"sharp", sh.sharp}, {"reason", sh.reason}};
    if (!sh.sharp) {
        sharp["unit_generator"] = q.labels()[sh.unit_generator];
        sharp["unit_inverse"] = labelled(q, sh.unit_inverse);
    }
    out["sharpness"] = sharp;

    bool reduced_nonzero = true;
    for (std::size_t i : b.reduced_gens)
        if (is_zero(MonoidElement::generator(q, i)))
            reduced_nonzero = false;
    out["reduced_generators_nonzero"] = reduced_nonzero;

    TropicalResult t = tropical_feasible(b);
    Json trop = {{"feasible", t.witness.has_value()}};
    if (t.witness) {
        trop["witness"] = labelled(q, *t.witness);
    } else {
        trop["certificate"] = {{"multipliers", int_vector_to_json(t.certificate_multipliers)},
                               {"combination", labelled(q, t.certificate_combination)}};
    }
    out["tropical"] = trop;
    if (t.witness.has_value() != (sh.sharp && reduced_nonzero))
        throw InvariantViolation("analyze: tropical feasibility disagrees with sharpness");

    Integer count = saturation_count(b);
    Json sat = {{"torsion", integer_to_json(count)}};
    try {
        Integer via_varrho = varrho_saturation_count(g);
        sat["varrho"] = integer_to_json(via_varrho);
        sat["agree"] = via_varrho == count;
        if (via_varrho != count)
            throw InvariantViolation("analyze: the two saturation counts disagree");
    } catch (const InvalidGraph& e) {
        sat["varrho"] = nullptr;
        sat["varrho_note"] = e.what();
    }
    out["saturation_count"] = sat;

    if (t.witness) {
        SaturationResult fs = fs_basic_monoid(b);
        out["fs_basic"] = {{"hilbert_basis", vectors_to_json(fs.hilbert_basis)},
                           {"torsion", fs.torsion.describe()}};
    } else {
        out["fs_basic"] = nullptr;
    }

    SlbDocument doc;
    doc.basic = b;
    doc.slb = assemble_logmap_slb(b, trivial_logmap_data(b));
    Json slb = check_slb(doc, bound);
    out["consistency"] = {{"verdict", slb["verdict"]}, {"failure", slb["failure"]}, {"reason", slb["reason"]}};
    const Json& symp = slb["symplectic"];
    std::string verdict = symp["ok"].get<bool>()
                              ? "symplectic log map"
                              : "not a symplectic log map: " + symp["diagnostics"].get<std::string>();
    out["verdict"] = {{"symplectic", symp["ok"]}, {"summary", verdict}};
    out["saturation_data"] = slb["saturation_data"];
    return out;
}

Json monoid_command(const std::string& sub, const MonoidPresentation& p)
{
    Json out = {{"presentation", p.to_string()}};
    if (sub == "snf") {
        auto snf = smith_normal_form(p.relation_matrix());
        out["diagonal"] = int_vector_to_json(snf.diagonal());
        out["rank"] = snf.rank();
        out["group"] = groupification(p).describe();
    } else if (sub == "gp") {
        const AbelianGroup& g = groupification(p);
        out["group"] = g.describe();
        out["free_rank"] = g.free_rank;
        out["invariant_factors"] = int_vector_to_json(g.invariant_factors);
    } else if (sub == "sharp") {
        SharpnessResult s = is_sharp(p);
        out["sharp"] = s.sharp;
        out["reason"] = s.reason;
        if (s.sharp) {
            out["functional"] = labelled(p, s.beta);
        } else {
            out["unit_generator"] = p.labels()[s.unit_generator];
            out["unit_inverse"] = labelled(p, s.unit_inverse);
        }
    } else if (sub == "saturate") {
        SaturationResult s = saturate(p);
        out["torsion"] = s.torsion.describe();
        out["hilbert_basis"] = vectors_to_json(s.hilbert_basis);
        out["sharp_part"] = s.sharp_part.to_string();
    } else if (sub == "dual" || sub == "ddual") {
        ConeMonoid c = sub == "dual" ? dual_monoid(p) : double_dual(p);
        out["hilbert_basis"] = vectors_to_json(c.hilbert_basis);
        out["monoid"] = c.presentation.to_string();
        out["free"] = c.presentation.relations().empty();
    } else {
        throw PreconditionError("unknown monoid subcommand '" + sub + "'");
    }
    return out;
}

std::string render_monoid(const std::string& sub, const Json& r)
{
    std::ostringstream os;
    auto vectors = [&](const Json& vs) {
        for (const auto& v : vs)
            os << " " << v.dump();
        os << "\n";
    };
    if (sub == "snf") {
        os << "diagonal: " << r["diagonal"].dump() << "\n" << "group: " << r["group"].get<std::string>() << "\n";
    } else if (sub == "gp") {
        os << r["group"].get<std::string>() << "\n";
    } else if (sub == "sharp") {
        os << (r["sharp"].get<bool>() ? "sharp" : "not sharp") << ": " << r["reason"].get<std::string>() << "\n";
    } else if (sub == "saturate") {
        os << "sharp part: " << r["sharp_part"].get<std::string>() << "\n";
        os << "hilbert basis:";
        vectors(r["hilbert_basis"]);
        os << "torsion: " << r["torsion"].get<std::string>() << "\n";
    } else {
        os << "monoid: " << r["monoid"].get<std::string>();
        if (r["free"].get<bool>())
            os << " (free, N^" << r["hilbert_basis"].size() << ")";
        os << "\nhilbert basis:";
        vectors(r["hilbert_basis"]);
    }
    return os.str();
}

std::string render_report(const Json& rep)
{
    std::ostringstream os;
    const Json& g = rep["graph"];
    os << "graph: " << g["vertices"] << " vertices, " << g["edges"] << " edges, r = " << g["r"] << "\n";
    os << "basic monoid: " << rep["basic_monoid"]["presentation"].get<std::string>() << "\n";
    os << "  after removing forced zeros: " << rep["basic_monoid"]["simplified"].get<std::string>() << "\n";
    os << "groupification: " << rep["groupification"]["description"].get<std::string>() << "\n";
    os << "sharp: " << (rep["sharpness"]["sharp"].get<bool>() ? "yes" : "no");
    if (!rep["sharpness"]["sharp"].get<bool>())
        os << " (" << rep["sharpness"]["reason"].get<std::string>() << ")";
    os << "\n";
    const Json& t = rep["tropical"];
    if (t["feasible"].get<bool>()) {
        os << "tropical condition: holds, witness";
        for (const auto& [k, v] : t["witness"].items())
            os << " " << k << "=" << v;
        os << "\n";
    } else {
        os << "tropical condition: fails, certificate";
        for (const auto& [k, v] : t["certificate"]["combination"].items())
            if (v != 0)
                os << " " << k << ":" << v;
        os << "\n";
    }
    const Json& s = rep["saturation_count"];
    os << "saturation count: " << s["torsion"] << " (torsion)";
    if (s["varrho"].is_null())
        os << ", varrho unavailable: " << s["varrho_note"].get<std::string>();
    else
        os << ", " << s["varrho"] << " (varrho)";
    os << "\n";
    if (!rep["fs_basic"].is_null()) {
        os << "fs basic monoid Hilbert basis:";
        for (const auto& v : rep["fs_basic"]["hilbert_basis"])
            os << " " << v.dump();
        if (rep["fs_basic"]["hilbert_basis"].empty())
            os << " (trivial monoid)";
        os << "\n";
    }
    os << "consistency: " << rep["consistency"]["verdict"].get<std::string>() << "\n";
    os << "verdict: " << rep["verdict"]["summary"].get<std::string>() << "\n";
    if (!rep["saturation_data"].is_null())
        os << "saturation data: " << rep["saturation_data"].size() << "\n";
    return os.str();
}

}  // namespace logmonoid::io
