#include "brstkit/io.hpp"

#include "brstkit/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace brstkit {

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError("'" + path + "': JSON syntax error at byte " + std::to_string(e.byte));
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

Rat rat_from_json(const Json& v) {
    try {
        if (v.is_string()) return parse_rat(v.get<std::string>());
        if (v.is_number_integer()) return Rat(v.get<long>());
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("malformed rational: ") + e.what());
    }
    throw InputError("expected a rational \"p/q\", got " + v.dump());
}

namespace {

std::size_t basis_index(const std::vector<std::string>& labels, const Json& v, const std::string& where) {
    if (v.is_number_unsigned() || v.is_number_integer()) {
        const long i = v.get<long>();
        if (i < 0 || static_cast<std::size_t>(i) >= labels.size())
            throw InputError(where + ": index " + std::to_string(i) + " out of range");
        return static_cast<std::size_t>(i);
    }
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == s) return i;
        throw InputError(where + ": unknown label '" + s + "'");
    }
    throw InputError(where + ": expected an index or a label");
}

RatVec vector_from_json(const std::vector<std::string>& labels, const Json& v, const std::string& where) {
    RatVec out(labels.size(), Rat(0));
    if (v.is_object()) {
        for (const auto& [k, c] : v.items()) out[basis_index(labels, Json(k), where)] += rat_from_json(c);
        return out;
    }
    if (v.is_array()) {
        if (v.size() != labels.size())
            throw InputError(where + ": dense vector has length " + std::to_string(v.size()) + ", expected " +
                             std::to_string(labels.size()));
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = rat_from_json(v[i]);
        return out;
    }
    throw InputError(where + ": expected a {label: coefficient} map or a dense array");
}

}  // namespace

AlgebraFile parse_algebra(const Json& doc) {
    if (!doc.is_object()) throw InputError("algebra spec must be a JSON object");
    if (!doc.contains("basis") || !doc["basis"].is_array()) throw InputError("algebra spec: missing \"basis\" array");
    const std::string name = doc.value("name", std::string("algebra"));
    std::vector<std::string> labels;
    std::set<std::string> seen;
    for (const auto& l : doc["basis"]) {
        if (!l.is_string()) throw InputError("algebra spec: basis labels must be strings");
        if (!seen.insert(l.get<std::string>()).second)
            throw InputError("algebra spec: duplicate basis label '" + l.get<std::string>() + "'");
        labels.push_back(l.get<std::string>());
    }
    if (labels.empty()) throw InputError("algebra spec: empty basis");

    LieAlgebra::BracketTable table;
    if (doc.contains("brackets")) {
        const auto& br = doc["brackets"];
        if (!br.is_array()) throw InputError("algebra spec: \"brackets\" must be an array");
        for (std::size_t e = 0; e < br.size(); ++e) {
            const std::string where = "brackets[" + std::to_string(e) + "]";
            const auto& entry = br[e];
            if (!entry.is_array() || entry.size() != 3) throw InputError(where + ": expected [i, j, {label: coeff}]");
            std::size_t i = basis_index(labels, entry[0], where);
            std::size_t j = basis_index(labels, entry[1], where);
            if (i == j) throw InputError(where + ": bracket of a basis vector with itself");
            RatVec v = vector_from_json(labels, entry[2], where);
            if (i > j) {
                std::swap(i, j);
                for (auto& x : v) x = -x;
            }
            if (!table.emplace(std::make_pair(i, j), std::move(v)).second)
                throw InputError(where + ": duplicate entry for pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                 ")");
        }
    }
    for (auto it = table.begin(); it != table.end();)
        it = is_zero_vec(it->second) ? table.erase(it) : std::next(it);

    auto alg = std::make_shared<LieAlgebra>(name, labels, std::move(table));
    const Json form = doc.value("form", Json("killing"));
    if (form.is_string()) {
        if (form.get<std::string>() != "killing") throw InputError("algebra spec: unknown form '" + form.dump() + "'");
        alg->set_form(killing_form(*alg));
    } else if (form.is_array()) {
        if (form.size() != labels.size()) throw InputError("algebra spec: form table has the wrong number of rows");
        RatMatrix m;
        for (std::size_t r = 0; r < form.size(); ++r)
            m.push_back(vector_from_json(labels, form[r], "form[" + std::to_string(r) + "]"));
        alg->set_form(std::move(m));
    } else if (!form.is_null()) {
        throw InputError("algebra spec: \"form\" must be \"killing\" or a table");
    }

    AlgebraFile out;
    if (doc.contains("grading")) out.grading = parse_grading(*alg, doc["grading"]);
    out.alg = std::move(alg);
    return out;
}

AlgebraFile load_algebra(const std::string& path) {
    try {
        return parse_algebra(read_json_file(path));
    } catch (const InputError& e) {
        const std::string msg = e.what();
        if (msg.rfind("'" + path + "'", 0) == 0 || msg.rfind("cannot open", 0) == 0) throw;
        throw InputError("'" + path + "': " + msg);
    }
}

Json algebra_json(const LieAlgebra& alg, const std::optional<Grading>& grading) {
    Json doc;
    doc["name"] = alg.name();
    doc["basis"] = alg.labels();
    Json br = Json::array();
    for (const auto& [key, v] : alg.upper_brackets()) {
        Json coeffs = Json::object();
        for (std::size_t k = 0; k < v.size(); ++k)
            if (v[k] != 0) coeffs[alg.label(k)] = format_rat(v[k]);
        br.push_back(Json::array({alg.label(key.first), alg.label(key.second), coeffs}));
    }
    doc["brackets"] = br;
    doc["form"] = "killing";
    if (grading) {
        Json g = Json::object();
        for (std::size_t i = 0; i < alg.dim(); ++i) g[alg.label(i)] = grading->degrees[i];
        doc["grading"] = g;
    }
    return doc;
}

Element parse_element(const LieAlgebra& alg, const Json& v) { return vector_from_json(alg.labels(), v, "element"); }

std::vector<Element> parse_subspace(const LieAlgebra& alg, const Json& v) {
    if (!v.is_array()) throw InputError("subspace must be an array of vectors");
    std::vector<Element> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(vector_from_json(alg.labels(), v[i], "subspace[" + std::to_string(i) + "]"));
    return out;
}

Grading parse_grading(const LieAlgebra& alg, const Json& v) {
    if (!v.is_object()) throw InputError("grading must be a {label: degree} object");
    Grading g;
    g.degrees.assign(alg.dim(), 0);
    std::vector<bool> set(alg.dim(), false);
    for (const auto& [k, d] : v.items()) {
        const auto i = basis_index(alg.labels(), Json(k), "grading");
        if (!d.is_number_integer()) throw InputError("grading: degree of '" + k + "' must be an integer");
        g.degrees[i] = d.get<int>();
        set[i] = true;
    }
    for (std::size_t i = 0; i < alg.dim(); ++i)
        if (!set[i]) throw InputError("grading: no degree for '" + alg.label(i) + "'");
    return g;
}

Json element_json(const Element& x) {
    Json row = Json::array();
    for (const auto& c : x) row.push_back(format_rat(c));
    return row;
}

Json subspace_json(const std::vector<Element>& span) {
    Json m = Json::array();
    for (const auto& x : span) m.push_back(element_json(x));
    return m;
}

OneForm parse_one_form(const LoopAlgebra& loop, const Json& v) {
    if (!v.is_array()) throw InputError("one-form must be an array of [label, mode, value]");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < loop.rank(); ++i) labels.push_back(loop.label(i));
    OneForm beta;
    for (std::size_t e = 0; e < v.size(); ++e) {
        const std::string where = "beta[" + std::to_string(e) + "]";
        const auto& entry = v[e];
        if (!entry.is_array() || entry.size() != 3 || !entry[1].is_number_integer())
            throw InputError(where + ": expected [label, mode, value]");
        const auto i = basis_index(labels, entry[0], where);
        const int mode = entry[1].get<int>();
        beta.set(i, mode, beta(i, mode) + rat_from_json(entry[2]));
    }
    return beta;
}

Json one_form_json(const LoopAlgebra& loop, const OneForm& beta) {
    Json out = Json::array();
    for (const auto& [key, c] : beta.values) out.push_back(Json::array({loop.label(key.first), key.second, format_rat(c)}));
    return out;
}

Json mono_json(const TensorMono& m, const StateLabels& labels) {
    auto name = [](const std::vector<std::string>& v, std::uint32_t i, const char* fallback) {
        return i < v.size() ? v[i] : fallback + std::to_string(i);
    };
    Json cur = Json::array();
    for (std::size_t i = 0; i < m.cur.size();) {
        std::size_t j = i;
        while (j < m.cur.size() && m.cur[j].mode == m.cur[i].mode && m.cur[j].idx == m.cur[i].idx) ++j;
        cur.push_back(Json::array({name(labels.current, m.cur[i].idx, "x"), m.cur[i].mode, j - i}));
        i = j;
    }
    Json fer = Json::array();
    for (const auto& f : m.fer)
        fer.push_back(Json::array({f.family == Family::Iota ? "iota" : "eps", name(labels.loop, f.idx, "u"), f.mode}));
    Json bos = Json::array();
    for (std::size_t i = 0; i < m.bos.size();) {
        std::size_t j = i;
        while (j < m.bos.size() && m.bos[j] == m.bos[i]) ++j;
        bos.push_back(Json::array({name(labels.boson, m.bos[i].idx, "F"), m.bos[i].mode, j - i}));
        i = j;
    }
    return Json{{"current", cur}, {"fermions", fer}, {"bosons", bos}};
}

}  // namespace brstkit
