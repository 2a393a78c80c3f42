#include "ellipt/instance_io.hpp"

#include "ellipt/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace ellipt {

namespace {

BigInt pow10(int k) {
    BigInt p(1);
    for (int i = 0; i < k; ++i) p *= 10;
    return p;
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

std::string edge_key(int u, int v) { return std::to_string(u) + "," + std::to_string(v); }

std::pair<int, int> parse_edge_key(const std::string& key) {
    const auto comma = key.find(',');
    if (comma == std::string::npos) throw parse_error("edge key '" + key + "' is not 'u,v'");
    const std::string a = key.substr(0, comma), b = key.substr(comma + 1);
    if (!all_digits(a) || !all_digits(b)) throw parse_error("edge key '" + key + "' is not 'u,v'");
    return {std::stoi(a), std::stoi(b)};
}

const json& need(const json& j, const char* field) {
    if (!j.is_object() || !j.contains(field))
        throw parse_error(std::string("missing field '") + field + "'");
    return j.at(field);
}

std::string need_string(const json& j, const char* field) {
    const json& v = need(j, field);
    if (!v.is_string()) throw parse_error(std::string("field '") + field + "' must be a string");
    return v.get<std::string>();
}

int need_int(const json& j, const char* field) {
    const json& v = need(j, field);
    if (!v.is_number_integer()) throw parse_error(std::string("field '") + field + "' must be an integer");
    return v.get<int>();
}

BigInt bigint_from_text(const std::string& s) {
    return parse_bigint(s);
}

} // namespace

Rational rational_from_text(const std::string& text) {
    if (text.find('/') != std::string::npos) {
        try {
            return parse_rational(text);
        } catch (const std::exception& e) {
            throw parse_error(e.what());
        }
    }
    std::string t = text;
    bool neg = false;
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
        neg = t[0] == '-';
        t = t.substr(1);
    }
    int exp = 0;
    const auto epos = t.find_first_of("eE");
    if (epos != std::string::npos) {
        const std::string es = t.substr(epos + 1);
        t = t.substr(0, epos);
        std::string digits = es;
        bool eneg = false;
        if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
            eneg = digits[0] == '-';
            digits = digits.substr(1);
        }
        if (!all_digits(digits) || digits.size() > 6)
            throw parse_error("'" + text + "' has a bad exponent");
        exp = std::stoi(digits) * (eneg ? -1 : 1);
    }
    std::string ipart = t, fpart;
    const auto dot = t.find('.');
    if (dot != std::string::npos) {
        ipart = t.substr(0, dot);
        fpart = t.substr(dot + 1);
    }
    if (ipart.empty() && fpart.empty()) throw parse_error("'" + text + "' is not a number");
    if ((!ipart.empty() && !all_digits(ipart)) || (!fpart.empty() && !all_digits(fpart)))
        throw parse_error("'" + text + "' is not a number");
    BigInt digits = parse_bigint((ipart + fpart).empty() ? "0" : ipart + fpart);
    if (neg) digits = -digits;
    const int shift = exp - static_cast<int>(fpart.size());
    if (shift >= 0) return Rational(digits * pow10(shift), BigInt(1));
    return Rational(digits, pow10(-shift));
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    std::string t = text;
    if (!t.empty() && t[0] == '+') t = t.substr(1);
    double v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v))
        throw parse_error("'" + text + "' is not a finite decimal");
    return v;
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string digest_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
    return std::string(buf);
}

ojson graph_to_json(const Graph& g) {
    ojson j;
    j["n"] = g.node_count();
    auto arr = ojson::array();
    for (const auto& [u, v] : g.edges()) arr.push_back({u, v});
    j["edges"] = arr;
    return j;
}

Graph graph_from_json(const json& j) {
    const int n = need_int(j, "n");
    const json& edges = need(j, "edges");
    if (!edges.is_array()) throw parse_error("'edges' must be an array");
    std::vector<std::pair<int, int>> list;
    for (const json& e : edges) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
            throw parse_error("each edge must be [u,v]");
        list.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    try {
        return Graph(n, std::move(list));
    } catch (const std::exception& e) {
        throw parse_error(e.what());
    }
}

ojson partial_values_to_json(const Graph& g, const PartialVector& x) {
    ojson m;
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto [u, v] = g.edge(e);
        m[edge_key(u, v)] = format_rational(x.values[e]);
    }
    return m;
}

void partial_to_doc(const Graph& g, const PartialVector& x, ojson& doc) {
    doc["mode"] = x.mode == PartialVector::Mode::Cosine ? "cosine" : "distance";
    doc["x"] = partial_values_to_json(g, x);
}

PartialVector partial_from_doc(const Graph& g, const json& doc) {
    PartialVector x;
    const std::string mode = doc.is_object() && doc.contains("mode")
                                 ? need_string(doc, "mode")
                                 : std::string("cosine");
    if (mode == "cosine")
        x.mode = PartialVector::Mode::Cosine;
    else if (mode == "distance")
        x.mode = PartialVector::Mode::Distance;
    else
        throw parse_error("mode must be 'cosine' or 'distance'");
    const json& m = need(doc, "x");
    if (!m.is_object()) throw parse_error("'x' must be an object keyed by 'u,v'");
    x.values.assign(g.edge_count(), Rational(0));
    std::vector<char> seen(g.edge_count(), 0);
    for (const auto& [key, val] : m.items()) {
        const auto [u, v] = parse_edge_key(key);
        const int e = g.edge_index(u, v);
        if (e < 0) throw parse_error("'" + key + "' is not an edge of the graph");
        if (seen[e]) throw parse_error("duplicate value for edge '" + key + "'");
        if (!val.is_string()) throw parse_error("value for '" + key + "' must be a string");
        x.values[e] = rational_from_text(val.get<std::string>());
        seen[e] = 1;
    }
    for (int e = 0; e < g.edge_count(); ++e)
        if (!seen[e]) {
            const auto [u, v] = g.edge(e);
            throw parse_error("no value for edge '" + edge_key(u, v) + "'");
        }
    return x;
}

ojson angles_to_json(const Graph& g, const EdgeAngles& d) {
    ojson j;
    switch (d.mode) {
        case EdgeAngles::Mode::ExactRotation: {
            j["mode"] = "exact-rotation";
            ojson m;
            for (int e = 0; e < g.edge_count(); ++e) {
                const auto [u, v] = g.edge(e);
                m[edge_key(u, v)] = {format_rational(d.rotations[e].c),
                                     format_rational(d.rotations[e].s)};
            }
            j["rotations"] = m;
            break;
        }
        case EdgeAngles::Mode::ExactLength: {
            j["mode"] = "exact-length";
            ojson m;
            for (int e = 0; e < g.edge_count(); ++e) {
                const auto [u, v] = g.edge(e);
                m[edge_key(u, v)] = format_rational(d.lengths[e]);
            }
            j["lengths"] = m;
            break;
        }
        case EdgeAngles::Mode::Float: {
            j["mode"] = "float";
            ojson m;
            for (int e = 0; e < g.edge_count(); ++e) {
                const auto [u, v] = g.edge(e);
                m[edge_key(u, v)] = format_double(d.values[e]);
            }
            j["values"] = m;
            break;
        }
    }
    return j;
}

namespace {

template <typename T, typename Parse>
std::vector<T> edge_map_from_json(const Graph& g, const json& m, const Parse& parse) {
    if (!m.is_object()) throw parse_error("edge map must be an object keyed by 'u,v'");
    std::vector<T> out(g.edge_count());
    std::vector<char> seen(g.edge_count(), 0);
    for (const auto& [key, val] : m.items()) {
        const auto [u, v] = parse_edge_key(key);
        const int e = g.edge_index(u, v);
        if (e < 0) throw parse_error("'" + key + "' is not an edge of the graph");
        if (seen[e]) throw parse_error("duplicate value for edge '" + key + "'");
        out[e] = parse(val, key);
        seen[e] = 1;
    }
    for (int e = 0; e < g.edge_count(); ++e)
        if (!seen[e]) {
            const auto [u, v] = g.edge(e);
            throw parse_error("no value for edge '" + edge_key(u, v) + "'");
        }
    return out;
}

std::string need_value_string(const json& val, const std::string& key) {
    if (!val.is_string()) throw parse_error("value for '" + key + "' must be a string");
    return val.get<std::string>();
}

} // namespace

EdgeAngles angles_from_json(const Graph& g, const json& j) {
    const std::string mode = need_string(j, "mode");
    if (mode == "exact-rotation") {
        auto rot = edge_map_from_json<RationalRotation>(
            g, need(j, "rotations"), [](const json& val, const std::string& key) {
                if (!val.is_array() || val.size() != 2)
                    throw parse_error("rotation for '" + key + "' must be [\"c\",\"s\"]");
                try {
                    return RationalRotation(rational_from_text(need_value_string(val[0], key)),
                                            rational_from_text(need_value_string(val[1], key)));
                } catch (const std::invalid_argument& e) {
                    throw parse_error(e.what());
                }
            });
        return EdgeAngles::from_rotations(std::move(rot));
    }
    if (mode == "exact-length") {
        auto len = edge_map_from_json<Rational>(
            g, need(j, "lengths"), [](const json& val, const std::string& key) {
                return rational_from_text(need_value_string(val, key));
            });
        return EdgeAngles::from_lengths(std::move(len));
    }
    if (mode == "float") {
        auto vals = edge_map_from_json<double>(
            g, need(j, "values"), [](const json& val, const std::string& key) {
                return parse_double(need_value_string(val, key));
            });
        return EdgeAngles::from_floats(std::move(vals));
    }
    throw parse_error("edge-data mode must be exact-rotation, exact-length or float");
}

ojson witness_to_json(const GramWitness& w) {
    ojson j;
    j["k"] = w.k;
    j["exact"] = w.exact;
    auto arr = ojson::array();
    if (w.exact) {
        for (const auto& vec : w.exact_vectors) {
            auto row = ojson::array();
            for (const auto& c : vec) row.push_back(format_rational(c));
            arr.push_back(row);
        }
    } else {
        for (const auto& vec : w.vectors) {
            auto row = ojson::array();
            for (double c : vec) row.push_back(format_double(c));
            arr.push_back(row);
        }
    }
    j["vectors"] = arr;
    return j;
}

GramWitness witness_from_json(const json& j) {
    const int k = need_int(j, "k");
    const json& exact = need(j, "exact");
    if (!exact.is_boolean()) throw parse_error("'exact' must be a boolean");
    const json& vecs = need(j, "vectors");
    if (!vecs.is_array()) throw parse_error("'vectors' must be an array");
    if (exact.get<bool>()) {
        std::vector<std::vector<Rational>> rows;
        for (const json& row : vecs) {
            if (!row.is_array() || static_cast<int>(row.size()) != k)
                throw parse_error("each vector needs k coordinates");
            std::vector<Rational> r;
            for (const json& c : row) r.push_back(rational_from_text(need_value_string(c, "vector")));
            rows.push_back(std::move(r));
        }
        return witness_from_exact(k, std::move(rows));
    }
    std::vector<std::vector<double>> rows;
    for (const json& row : vecs) {
        if (!row.is_array() || static_cast<int>(row.size()) != k)
            throw parse_error("each vector needs k coordinates");
        std::vector<double> r;
        for (const json& c : row) r.push_back(parse_double(need_value_string(c, "vector")));
        rows.push_back(std::move(r));
    }
    return witness_from_float(k, std::move(rows));
}

std::string kind_to_string(ReductionKind k) {
    switch (k) {
        case ReductionKind::PartitionEd1: return "partition-ed1";
        case ReductionKind::PartitionGd2: return "partition-gd2";
        case ReductionKind::SaxeGd2: return "saxe-gd2";
        case ReductionKind::ColoringGd3: return "coloring-gd3";
        case ReductionKind::SaxeEdk: return "saxe-edk";
        case ReductionKind::HatLift: return "hat-lift";
    }
    throw std::invalid_argument("unknown reduction kind");
}

ReductionKind kind_from_string(const std::string& s) {
    if (s == "partition-ed1") return ReductionKind::PartitionEd1;
    if (s == "partition-gd2") return ReductionKind::PartitionGd2;
    if (s == "saxe-gd2") return ReductionKind::SaxeGd2;
    if (s == "coloring-gd3") return ReductionKind::ColoringGd3;
    if (s == "saxe-edk") return ReductionKind::SaxeEdk;
    if (s == "hat-lift") return ReductionKind::HatLift;
    throw parse_error("unknown reduction kind '" + s + "'");
}

ojson reduction_to_json(const ReductionInstance& inst) {
    ojson doc;
    doc["schema"] = "1";
    doc["kind"] = kind_to_string(inst.kind);
    doc["n"] = inst.graph.node_count();
    doc["edges"] = graph_to_json(inst.graph)["edges"];
    if (inst.angles.size() > 0) doc["d"] = angles_to_json(inst.graph, inst.angles);
    if (!inst.x.values.empty()) partial_to_doc(inst.graph, inst.x, doc);
    if (!inst.out_weights.empty()) {
        auto arr = ojson::array();
        for (const auto& w : inst.out_weights) arr.push_back(w.str());
        doc["edge_weights"] = arr;
    }
    if (inst.kind == ReductionKind::ColoringGd3)
        doc["pre_suspension"] = graph_to_json(inst.pre_suspension);
    if (!inst.triangles.empty()) {
        auto arr = ojson::array();
        for (const auto& [i, j, v] : inst.triangles) arr.push_back({i, j, v});
        doc["triangles"] = arr;
    }

    ojson src;
    if (!inst.weights.empty()) {
        auto arr = ojson::array();
        for (const auto& w : inst.weights) arr.push_back(w.str());
        src["weights"] = arr;
    }
    if (inst.source_graph.node_count() > 0) {
        const ojson gj = graph_to_json(inst.source_graph);
        src["n"] = gj["n"];
        src["edges"] = gj["edges"];
        if (!inst.source_x.values.empty()) partial_to_doc(inst.source_graph, inst.source_x, src);
        if (inst.source_angles.size() > 0)
            src["d"] = angles_to_json(inst.source_graph, inst.source_angles);
    }
    if (inst.kind == ReductionKind::ColoringGd3) {
        ojson gj = graph_to_json(inst.gadget.graph);
        gj["t1"] = inst.gadget.t1;
        gj["t2"] = inst.gadget.t2;
        src["gadget"] = gj;
    }
    if (inst.target_k > 0) src["k"] = inst.target_k;
    doc["source"] = src;

    ojson cert;
    if (inst.has_alpha)
        cert["alpha"] = {format_rational(inst.alpha.c), format_rational(inst.alpha.s)};
    cert["total"] = inst.total.str();
    doc["certificate"] = cert;
    return doc;
}

ReductionInstance reduction_from_json(const json& doc) {
    ReductionInstance inst;
    inst.kind = kind_from_string(need_string(doc, "kind"));
    inst.graph = graph_from_json(doc);
    if (doc.contains("d")) inst.angles = angles_from_json(inst.graph, doc.at("d"));
    if (doc.contains("x")) inst.x = partial_from_doc(inst.graph, doc);
    if (doc.contains("edge_weights")) {
        const json& arr = doc.at("edge_weights");
        if (!arr.is_array() || static_cast<int>(arr.size()) != inst.graph.edge_count())
            throw parse_error("'edge_weights' must list one weight per edge");
        for (const json& w : arr) inst.out_weights.push_back(bigint_from_text(need_value_string(w, "edge_weights")));
    }
    if (doc.contains("pre_suspension")) inst.pre_suspension = graph_from_json(doc.at("pre_suspension"));
    if (doc.contains("triangles")) {
        const json& arr = doc.at("triangles");
        if (!arr.is_array()) throw parse_error("'triangles' must be an array");
        for (const json& t : arr) {
            if (!t.is_array() || t.size() != 3) throw parse_error("each triangle must be [i,j,v]");
            inst.triangles.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
        }
    }
    if (doc.contains("source")) {
        const json& src = doc.at("source");
        if (src.contains("weights")) {
            const json& arr = src.at("weights");
            if (!arr.is_array()) throw parse_error("'weights' must be an array");
            for (const json& w : arr)
                inst.weights.push_back(bigint_from_text(need_value_string(w, "weights")));
        }
        if (src.contains("n")) {
            inst.source_graph = graph_from_json(src);
            if (src.contains("x")) inst.source_x = partial_from_doc(inst.source_graph, src);
            if (src.contains("d"))
                inst.source_angles = angles_from_json(inst.source_graph, src.at("d"));
        }
        if (src.contains("gadget")) {
            const json& gj = src.at("gadget");
            inst.gadget.graph = graph_from_json(gj);
            inst.gadget.t1 = need_int(gj, "t1");
            inst.gadget.t2 = need_int(gj, "t2");
        }
        if (src.contains("k")) inst.target_k = need_int(src, "k");
    }
    if (doc.contains("certificate")) {
        const json& cert = doc.at("certificate");
        if (cert.contains("alpha")) {
            const json& a = cert.at("alpha");
            if (!a.is_array() || a.size() != 2) throw parse_error("'alpha' must be [\"c\",\"s\"]");
            try {
                inst.alpha = RationalRotation(rational_from_text(need_value_string(a[0], "alpha")),
                                              rational_from_text(need_value_string(a[1], "alpha")));
            } catch (const std::invalid_argument& e) {
                throw parse_error(e.what());
            }
            inst.has_alpha = true;
        }
        if (cert.contains("total")) inst.total = bigint_from_text(need_value_string(cert.at("total"), "total"));
    }
    return inst;
}

} // namespace ellipt
