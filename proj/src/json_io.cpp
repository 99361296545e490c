#include "coverwalk/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "coverwalk/errors.hpp"

namespace coverwalk {

namespace {

const Json& field(const Json& doc, const char* name, const char* where) {
    if (!doc.is_object())
        throw InputError(std::string(where) + " must be a JSON object");
    auto it = doc.find(name);
    if (it == doc.end())
        throw InputError(std::string(where) + " is missing the field '" + name + "'");
    return *it;
}

int int_field(const Json& doc, const char* name, const char* where) {
    const Json& v = field(doc, name, where);
    if (!v.is_number_integer())
        throw InputError(std::string(where) + " field '" + name + "' must be an integer");
    return v.get<int>();
}

/// A weight/rate entry: exact from strings and integers, binary-exact from
/// fractional numbers.
Rational rational_entry(const Json& v, const char* where) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_float()) return rational_from_double(v.get<double>());
    throw InputError(std::string(where) + " entries must be numbers or strings");
}

double double_entry(const Json& v, const char* where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
    throw InputError(std::string(where) + " entries must be numbers or strings");
}

/// True when the entry can enter the exact lane without passing through a
/// binary double.
bool entry_is_exact(const Json& v) { return v.is_string() || v.is_number_integer(); }

std::vector<Rational> rational_array(const Json& v, const char* where) {
    if (!v.is_array() || v.empty())
        throw InputError(std::string(where) + " must be a non-empty array");
    std::vector<Rational> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(rational_entry(e, where));
    return out;
}

BitVector state_entry(const Json& v, int n, const char* where) {
    if (!v.is_string())
        throw InputError(std::string(where) + " states must be bit-strings");
    BitVector x = BitVector::from_string(v.get<std::string>());
    if (x.n() != n)
        throw InputError(std::string(where) + " state '" + v.get<std::string>() +
                         "' has length " + std::to_string(x.n()) + ", expected " +
                         std::to_string(n));
    return x;
}

BooleanMeasure build_explicit(int n, const Json& spec) {
    const Json& states = field(spec, "states", "explicit spec");
    const Json& weights = field(spec, "weights", "explicit spec");
    if (!states.is_array() || !weights.is_array() || states.size() != weights.size())
        throw InputError("explicit spec needs 'states' and 'weights' arrays of equal length");
    // strings and integers build the exact lane; any fractional JSON number
    // means the document records doubles, and the real lane keeps them as-is
    bool exact = true;
    for (const auto& w : weights) exact = exact && entry_is_exact(w);
    if (exact) {
        std::vector<std::pair<BitVector, Rational>> table;
        table.reserve(states.size());
        for (size_t i = 0; i < states.size(); ++i)
            table.emplace_back(state_entry(states[i], n, "explicit spec"),
                               rational_entry(weights[i], "explicit spec weight"));
        return make_explicit_exact(n, table);
    }
    std::vector<std::pair<BitVector, double>> table;
    table.reserve(states.size());
    for (size_t i = 0; i < states.size(); ++i)
        table.emplace_back(state_entry(states[i], n, "explicit spec"),
                           double_entry(weights[i], "explicit spec weight"));
    return make_explicit_real(n, table);
}

BooleanMeasure build_product(int n, const Json& spec, bool conditioned) {
    std::vector<Rational> p = rational_array(field(spec, "p", "product spec"), "'p'");
    if (static_cast<int>(p.size()) != n)
        throw InputError("'p' has " + std::to_string(p.size()) + " entries but n = " +
                         std::to_string(n));
    if (!conditioned) return make_product(p);
    return make_conditioned_sum(p, int_field(spec, "k", "conditioned_sum spec"));
}

BooleanMeasure build_spanning_tree(int n, const Json& spec) {
    int vertices = int_field(spec, "vertices", "spanning_tree spec");
    const Json& edges = field(spec, "edges", "spanning_tree spec");
    if (!edges.is_array())
        throw InputError("spanning_tree 'edges' must be an array of [u, v] pairs");
    if (static_cast<int>(edges.size()) != n)
        throw InputError("spanning_tree has " + std::to_string(edges.size()) +
                         " edges but n = " + std::to_string(n));
    std::vector<std::pair<int, int>> list;
    list.reserve(edges.size());
    for (const auto& e : edges) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
            throw InputError("spanning_tree edges must be [u, v] integer pairs");
        list.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return make_spanning_tree(vertices, list);
}

BooleanMeasure build_l_ensemble(int n, const Json& spec) {
    const Json& L = field(spec, "L", "l_ensemble spec");
    if (!L.is_array() || static_cast<int>(L.size()) != n)
        throw InputError("l_ensemble 'L' must be an n x n array of rows");
    Matrix<double> mat(n, n);
    for (int i = 0; i < n; ++i) {
        const Json& row = L[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw InputError("l_ensemble 'L' row " + std::to_string(i + 1) +
                             " is not length " + std::to_string(n));
        for (int j = 0; j < n; ++j)
            mat(i, j) = double_entry(row[static_cast<size_t>(j)], "'L'");
    }
    return make_l_ensemble(mat);
}

} // namespace

Json parse_json(const std::string& text, const std::string& origin) {
    Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw InputError(origin + ": malformed JSON");
    return doc;
}

Json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str(), path);
}

BooleanMeasure measure_from_json(const Json& doc) {
    int n = int_field(doc, "n", "measure document");
    if (n < 1) throw InputError("measure dimension n must be at least 1");
    const Json& spec = field(doc, "spec", "measure document");
    std::string kind = field(spec, "kind", "measure spec").get<std::string>();
    if (kind == "explicit") return build_explicit(n, spec);
    if (kind == "product") return build_product(n, spec, false);
    if (kind == "conditioned_sum") return build_product(n, spec, true);
    if (kind == "spanning_tree") return build_spanning_tree(n, spec);
    if (kind == "l_ensemble") return build_l_ensemble(n, spec);
    throw InputError("unknown measure kind '" + kind + "'");
}

BooleanMeasure load_measure(const std::string& path) {
    return measure_from_json(load_json(path));
}

Generator generator_from_json(const Json& doc) {
    int n = int_field(doc, "n", "generator document");
    if (n < 1) throw InputError("generator dimension n must be at least 1");
    const Json& support = field(doc, "support", "generator document");
    const Json& weights = field(doc, "weights", "generator document");
    const Json& rates = field(doc, "rates", "generator document");
    if (!support.is_array() || !weights.is_array() || support.size() != weights.size())
        throw InputError("generator needs 'support' and 'weights' arrays of equal length");
    if (!rates.is_array())
        throw InputError("generator 'rates' must be an array");

    bool exact = true;
    for (const auto& w : weights) exact = exact && entry_is_exact(w);
    for (const auto& r : rates)
        if (r.is_object() && r.contains("rate")) exact = exact && entry_is_exact(r["rate"]);

    BooleanMeasure m;
    {
        std::vector<BitVector> states;
        states.reserve(support.size());
        for (const auto& s : support) states.push_back(state_entry(s, n, "generator"));
        if (exact) {
            std::vector<Rational> w;
            w.reserve(weights.size());
            for (const auto& e : weights) w.push_back(rational_entry(e, "generator weight"));
            m = BooleanMeasure::exact(n, std::move(states), std::move(w));
        } else {
            std::vector<double> w;
            w.reserve(weights.size());
            for (const auto& e : weights) w.push_back(double_entry(e, "generator weight"));
            m = BooleanMeasure::real(n, std::move(states), std::move(w));
        }
    }

    std::vector<RateEntry> entries;
    entries.reserve(rates.size());
    for (const auto& r : rates) {
        if (!r.is_object())
            throw InputError("generator rate entries must be {from, to, rate} objects");
        BitVector from = state_entry(field(r, "from", "rate entry"), n, "rate entry");
        BitVector to = state_entry(field(r, "to", "rate entry"), n, "rate entry");
        int i = m.index_of(from);
        int j = m.index_of(to);
        if (i < 0 || j < 0)
            throw InputError("rate entry references state '" +
                             (i < 0 ? from : to).to_string() + "' outside the support");
        RateEntry e;
        e.from = i;
        e.to = j;
        const Json& rv = field(r, "rate", "rate entry");
        e.rate = double_entry(rv, "rate");
        if (exact) e.rate_exact = rational_entry(rv, "rate");
        entries.push_back(std::move(e));
    }
    return generator_from_rates(m, entries);
}

Generator load_generator(const std::string& path) {
    return generator_from_json(load_json(path));
}

Observable observable_from_json(const Json& doc, const BooleanMeasure& m) {
    const Json* values = &doc;
    if (doc.is_object()) values = &field(doc, "values", "observable document");
    if (!values->is_array())
        throw InputError("observable 'values' must be an array");
    if (static_cast<int>(values->size()) != m.size())
        throw InputError("observable has " + std::to_string(values->size()) +
                         " values for a support of size " + std::to_string(m.size()));
    Observable f;
    f.reserve(values->size());
    for (const auto& v : *values) f.push_back(double_entry(v, "observable"));
    return f;
}

// ---- writers ---------------------------------------------------------------

Json json_number(double x) {
    if (std::isfinite(x)) return Json(x);
    if (std::isnan(x)) return Json("nan");
    return Json(x > 0 ? "inf" : "-inf");
}

namespace {

Json number_array(const std::vector<double>& v) {
    Json out = Json::array();
    for (double x : v) out.push_back(json_number(x));
    return out;
}

Json state_array(const std::vector<BitVector>& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(x.to_string());
    return out;
}

} // namespace

Json measure_to_json(const BooleanMeasure& m) {
    Json spec;
    spec["kind"] = "explicit";
    spec["states"] = state_array(m.support());
    Json w = Json::array();
    if (m.is_exact())
        for (const auto& q : m.exact_weights()) w.push_back(format_rational(q));
    else
        for (double x : m.weights()) w.push_back(x);
    spec["weights"] = std::move(w);

    Json doc;
    doc["n"] = m.dim();
    doc["spec"] = std::move(spec);
    doc["exact"] = m.is_exact();
    doc["homogeneity"] = m.homogeneity() ? Json(*m.homogeneity()) : Json(nullptr);
    doc["notes"] = m.notes();
    return doc;
}

Json generator_to_json(const Generator& g) {
    const BooleanMeasure& m = g.measure();
    Json doc;
    doc["n"] = m.dim();
    doc["support"] = state_array(m.support());
    Json w = Json::array();
    if (g.is_exact())
        for (const auto& q : m.exact_weights()) w.push_back(format_rational(q));
    else
        for (double x : m.weights()) w.push_back(x);
    doc["weights"] = std::move(w);
    doc["exact"] = g.is_exact();

    Json rates = Json::array();
    for (int i = 0; i < g.size(); ++i)
        for (int j = 0; j < g.size(); ++j) {
            if (i == j || g.rate(i, j) <= 0) continue;
            Json e;
            e["from"] = m.state(i).to_string();
            e["to"] = m.state(j).to_string();
            if (g.is_exact())
                e["rate"] = format_rational(g.exact_rates()(i, j));
            else
                e["rate"] = g.rate(i, j);
            rates.push_back(std::move(e));
        }
    doc["rates"] = std::move(rates);
    return doc;
}

Json coupling_to_json(const Coupling& c) {
    Json doc;
    doc["relation"] = c.relation() == Relation::Cover ? "cover" : "flip_swap";
    doc["left"] = state_array(c.left_support());
    doc["right"] = state_array(c.right_support());
    Json pairs = Json::array();
    const int rows = static_cast<int>(c.left_support().size());
    const int cols = static_cast<int>(c.right_support().size());
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            if (c.mass(i, j) <= 0) continue;
            Json e;
            e["left"] = c.left_support()[static_cast<size_t>(i)].to_string();
            e["right"] = c.right_support()[static_cast<size_t>(j)].to_string();
            if (c.is_exact())
                e["mass"] = format_rational(c.exact_mass_matrix()(i, j));
            else
                e["mass"] = c.mass(i, j);
            pairs.push_back(std::move(e));
        }
    doc["pairs"] = std::move(pairs);
    return doc;
}

Json stats_to_json(const ChainStats& s) {
    Json doc;
    doc["delta"] = json_number(s.delta);
    doc["m"] = json_number(s.m);
    doc["M"] = json_number(s.M);
    if (s.delta_exact) doc["delta_exact"] = format_rational(*s.delta_exact);
    if (s.m_exact) doc["m_exact"] = format_rational(*s.m_exact);
    if (s.M_exact) doc["M_exact"] = format_rational(*s.M_exact);
    doc["pairs_vacuous"] = s.pairs_vacuous;
    doc["flip_swap"] = s.flip_swap;
    doc["normalized"] = s.normalized;
    doc["reversibility_residual"] = s.reversibility_residual;
    return doc;
}

Json scp_to_json(const SCPReport& r) {
    Json doc;
    doc["holds"] = r.holds;
    doc["mode"] = r.mode;
    doc["checked_triples"] = r.checked_triples;
    if (r.seed) doc["seed"] = *r.seed;
    if (r.witness) {
        Json w;
        w["S"] = r.witness->S;
        w["x"] = r.witness->x;
        w["y"] = r.witness->y;
        w["obstruction"] = r.witness->obstruction;
        doc["witness"] = std::move(w);
    }
    if (!r.couplings.empty()) {
        Json list = Json::array();
        for (const auto& s : r.couplings) {
            Json e;
            e["S"] = s.S;
            e["x"] = s.x;
            e["y"] = s.y;
            e["coupling"] = coupling_to_json(s.coupling);
            list.push_back(std::move(e));
        }
        doc["couplings"] = std::move(list);
    }
    return doc;
}

Json estimate_to_json(const ConstantEstimate& e) {
    Json doc;
    doc["kind"] = e.kind;
    doc["value"] = json_number(e.value);
    doc["exact"] = e.exact;
    doc["witness"] = number_array(e.witness);
    doc["restarts"] = e.restarts;
    doc["iterations"] = e.iterations;
    doc["seed"] = e.seed;
    return doc;
}

Json two_state_to_json(const TwoStateConstants& t) {
    Json doc;
    doc["lambda"] = json_number(t.lambda);
    doc["alpha_lower"] = json_number(t.alpha_lower);
    doc["alpha_upper"] = json_number(t.alpha_upper);
    doc["rho"] = json_number(t.rho);
    doc["rho_floor"] = json_number(t.rho_floor);
    doc["degenerate"] = t.degenerate;
    return doc;
}

Json forms_to_json(const FormReport& f) {
    Json doc;
    doc["dirichlet_ff"] = json_number(f.dirichlet_ff);
    doc["dirichlet_flogf"] = json_number(f.dirichlet_flogf);
    doc["dirichlet_sqrt"] = json_number(f.dirichlet_sqrt);
    doc["variance"] = json_number(f.variance);
    doc["entropy"] = json_number(f.entropy);
    doc["local_ff"] = json_number(f.local_ff);
    doc["local_flogf"] = json_number(f.local_flogf);
    doc["local_sqrt"] = json_number(f.local_sqrt);
    return doc;
}

Json split_to_json(const SplitResult& s) {
    Json doc;
    doc["pibar"] = Json::array({s.pibar[0], s.pibar[1]});
    if (s.exact)
        doc["pibar_exact"] = Json::array(
            {format_rational(s.pibar_exact[0]), format_rational(s.pibar_exact[1])});
    doc["block0"] = measure_to_json(s.block0);
    doc["block1"] = measure_to_json(s.block1);
    return doc;
}

Json condition_to_json(const ConditionResult& c) {
    Json doc;
    doc["measure"] = measure_to_json(c.measure);
    doc["kept"] = c.kept;
    return doc;
}

Json chi_to_json(const ChiReport& r) {
    Json doc;
    doc["value"] = json_number(r.value);
    if (r.value_exact) doc["value_exact"] = format_rational(*r.value_exact);
    doc["zero"] = r.zero;
    Json quads = Json::array();
    for (const auto& q : r.quads) {
        Json e;
        e["block_i"] = q.block_i;
        e["block_j"] = q.block_j;
        e["x"] = q.x;
        e["y"] = q.y;
        e["ratio"] = json_number(q.ratio);
        e["crude_floor"] = json_number(q.crude_floor);
        quads.push_back(std::move(e));
    }
    doc["quads"] = std::move(quads);
    return doc;
}

Json identities_to_json(const IdentityReport& r) {
    Json doc;
    doc["dec1_variance"] = json_number(r.dec1_variance);
    doc["dec1_entropy"] = json_number(r.dec1_entropy);
    doc["dec2_ff"] = json_number(r.dec2_ff);
    doc["dec2_flogf"] = json_number(r.dec2_flogf);
    doc["dec2_sqrt"] = json_number(r.dec2_sqrt);
    doc["jensen_ff"] = json_number(r.jensen_ff);
    doc["jensen_flogf"] = json_number(r.jensen_flogf);
    doc["jensen_sqrt"] = json_number(r.jensen_sqrt);
    doc["max_residual"] = json_number(r.max_residual);
    return doc;
}

namespace {

Json node_to_json(const CertificateNode& n) {
    Json doc;
    doc["path"] = n.path;
    doc["leaf"] = n.leaf;
    if (n.leaf) {
        doc["state"] = n.state;
    } else {
        doc["coordinate"] = n.coordinate;
        doc["pibar"] = Json::array({n.pibar[0], n.pibar[1]});
        doc["a"] = json_number(n.a);
        doc["b"] = json_number(n.b);
        doc["chi"] = json_number(n.chi);
        doc["m"] = json_number(n.m);
        doc["M"] = json_number(n.M);
        doc["floor"] = json_number(n.floor_value);
        doc["node_bound"] = json_number(n.node_bound);
    }
    doc["claimed"] = json_number(n.claimed);
    if (!n.children.empty()) {
        Json kids = Json::array();
        for (const auto& c : n.children) kids.push_back(node_to_json(c));
        doc["children"] = std::move(kids);
    }
    return doc;
}

} // namespace

Json certificate_to_json(const Certificate& c) {
    Json doc;
    doc["target"] = target_name(c.target);
    doc["valid"] = c.valid;
    doc["vacuous"] = c.vacuous;
    doc["exact"] = c.exact;
    doc["claimed_bound"] = json_number(c.claimed_bound);
    if (c.claimed_bound_exact)
        doc["claimed_bound_exact"] = format_rational(*c.claimed_bound_exact);
    doc["direct_bound"] = json_number(c.direct_bound);
    if (c.direct_bound_exact)
        doc["direct_bound_exact"] = format_rational(*c.direct_bound_exact);
    doc["claimed_route"] = c.claimed_route;
    doc["root"] = node_to_json(c.root);
    Json checks = Json::array();
    for (const auto& k : c.checks) {
        Json e;
        e["node"] = k.node;
        e["what"] = k.what;
        e["lhs"] = json_number(k.lhs);
        e["rhs"] = json_number(k.rhs);
        e["pass"] = k.pass;
        checks.push_back(std::move(e));
    }
    doc["checks"] = std::move(checks);
    return doc;
}

Json synthesis_to_json(const SynthesisResult& s) {
    Json doc;
    doc["homogeneous"] = s.homogeneous;
    doc["delta"] = json_number(s.delta);
    doc["delta_bound"] = json_number(s.delta_bound);
    doc["averaged"] = generator_to_json(s.averaged);
    if (s.normalized) doc["normalized"] = generator_to_json(*s.normalized);
    Json per = Json::object();
    for (const auto& [l, g] : s.per_coordinate) per[std::to_string(l)] = generator_to_json(g);
    doc["per_coordinate"] = std::move(per);
    Json audits = Json::array();
    for (const auto& a : s.audits) {
        Json e;
        e["path"] = a.path;
        e["coordinate"] = a.coordinate;
        e["pibar"] = Json::array({a.pibar[0], a.pibar[1]});
        e["qbar01"] = json_number(a.qbar01);
        e["qbar10"] = json_number(a.qbar10);
        e["chi"] = json_number(a.chi);
        e["crude_max"] = json_number(a.crude_max);
        e["marginal_residual"] = json_number(a.marginal_residual);
        e["diag_ok"] = a.diag_ok;
        audits.push_back(std::move(e));
    }
    doc["audits"] = std::move(audits);
    return doc;
}

Json mixing_to_json(const MixingReport& r) {
    Json doc;
    doc["start_state"] = r.start_state;
    doc["epsilon"] = r.epsilon;
    doc["pi_x"] = r.pi_x;
    doc["t_mix"] = json_number(r.t_mix);
    Json bounds = Json::array();
    for (const auto& b : r.bounds) {
        Json e;
        e["kind"] = b.kind;
        e["provenance"] = b.provenance;
        e["constant"] = json_number(b.constant);
        e["value"] = json_number(b.value);
        e["floored"] = b.floored;
        e["violated"] = b.violated;
        bounds.push_back(std::move(e));
    }
    doc["bounds"] = std::move(bounds);
    doc["notes"] = r.notes;
    doc["violation"] = r.violation;
    return doc;
}

Json tail_to_json(const TailReport& r) {
    Json doc;
    doc["kind"] = r.kind;
    if (r.kind == "herbst") {
        doc["alpha_lb"] = json_number(r.alpha_lb);
        doc["v"] = json_number(r.v);
    } else {
        doc["k"] = r.k;
    }
    doc["lipschitz"] = json_number(r.lipschitz);
    doc["rescaled"] = r.rescaled;
    doc["vacuous"] = r.vacuous;
    doc["all_pass"] = r.all_pass;
    doc["f"] = number_array(r.f);
    Json points = Json::array();
    for (const auto& p : r.points) {
        Json e;
        e["a"] = json_number(p.a);
        e["exact"] = json_number(p.exact);
        e["bound"] = json_number(p.bound);
        e["margin"] = json_number(p.margin);
        e["pass"] = p.pass;
        points.push_back(std::move(e));
    }
    doc["points"] = std::move(points);
    return doc;
}

std::string dump_report(const Json& doc) { return doc.dump(2) + "\n"; }

} // namespace coverwalk
