#include "multiform/json_io.hpp"

#include <cstdio>

namespace multiform {

using nlohmann::json;

namespace {

Kind field_of(const json& j) {
    if (!j.contains("field") || !j["field"].is_string()) throw ParseError("missing \"field\"");
    auto k = kind_from_name(j["field"].get<std::string>());
    if (!k) throw ParseError("unknown field tag '" + j["field"].get<std::string>() + "'");
    return *k;
}

std::string residual_string(double r) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", r);
    return buf;
}

json vector_to_json(const std::vector<Scalar>& v) {
    json out = json::array();
    for (const auto& s : v) out.push_back(s.str());
    return out;
}

std::vector<Scalar> vector_from_json(const json& j, Kind kind, int dim) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw ParseError("vector has wrong length");
    std::vector<Scalar> v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(Scalar::parse(e.get<std::string>(), kind));
    return v;
}

json basis_to_json(const LinearMap& b) {
    json out = json::array();
    for (int c = 0; c < b.cols(); ++c) out.push_back(vector_to_json(b.col_vector(c)));
    return out;
}

LinearMap basis_from_json(const json& j, Kind kind, int dim) {
    if (!j.is_array()) throw ParseError("basis must be an array of vectors");
    LinearMap b(dim, static_cast<int>(j.size()), kind);
    for (std::size_t c = 0; c < j.size(); ++c) {
        std::vector<Scalar> v = vector_from_json(j[c], kind, dim);
        for (int r = 0; r < dim; ++r) b.at(r, static_cast<int>(c)) = v[static_cast<std::size_t>(r)];
    }
    return b;
}

}  // namespace

json form_to_json(const MultiForm& f) {
    json entries = json::array();
    for (std::size_t flat = 0; flat < f.size(); ++flat) {
        if (f.at_flat(flat).is_zero()) continue;
        entries.push_back(json{{"idx", f.unflatten(flat)}, {"val", f.at_flat(flat).str()}});
    }
    return json{{"arity", f.arity()}, {"dim", f.dim()}, {"field", kind_name(f.kind())},
                {"entries", std::move(entries)}};
}

MultiForm form_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("form must be a JSON object");
    if (!j.contains("arity") || !j.contains("dim")) throw ParseError("form needs arity and dim");
    Kind kind = field_of(j);
    MultiForm f(j["arity"].get<int>(), j["dim"].get<int>(), kind);
    if (!j.contains("entries")) return f;
    for (const auto& e : j["entries"]) {
        if (!e.contains("idx") || !e.contains("val")) throw ParseError("entry needs idx and val");
        std::vector<int> idx = e["idx"].get<std::vector<int>>();
        f.at(idx) = Scalar::parse(e["val"].get<std::string>(), kind);
    }
    return f;
}

json map_to_json(const LinearMap& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m.at(i, c).str());
        rows.push_back(std::move(row));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"field", kind_name(m.kind())},
                {"entries", std::move(rows)}};
}

LinearMap map_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("matrix must be a JSON object");
    Kind kind = field_of(j);
    int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
    LinearMap m(rows, cols, kind);
    const json& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != rows) throw ParseError("matrix row count mismatch");
    for (int i = 0; i < rows; ++i) {
        const json& row = entries[static_cast<std::size_t>(i)];
        if (static_cast<int>(row.size()) != cols) throw ParseError("matrix column count mismatch");
        for (int c = 0; c < cols; ++c)
            m.at(i, c) = Scalar::parse(row[static_cast<std::size_t>(c)].get<std::string>(), kind);
    }
    return m;
}

json maps_to_json(const std::vector<LinearMap>& maps) {
    json out = json::array();
    for (const auto& m : maps) out.push_back(map_to_json(m));
    return out;
}

std::vector<LinearMap> maps_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("maps file must hold a JSON array of matrices");
    std::vector<LinearMap> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(map_from_json(e));
    return out;
}

json decomposition_to_json(const Decomposition& d) {
    json blocks = json::array();
    for (const auto& b : d.blocks) blocks.push_back(basis_to_json(b));
    return json{{"field", kind_name(d.kind)}, {"dim", d.dim}, {"blocks", std::move(blocks)},
                {"radical", basis_to_json(d.radical_basis)}};
}

Decomposition decomposition_from_json(const json& j) {
    Decomposition d;
    d.kind = field_of(j);
    d.dim = j.at("dim").get<int>();
    for (const auto& b : j.at("blocks")) d.blocks.push_back(basis_from_json(b, d.kind, d.dim));
    d.radical_basis = j.contains("radical") ? basis_from_json(j["radical"], d.kind, d.dim)
                                            : LinearMap(d.dim, 0, d.kind);
    return d;
}

json certificate_to_json(const SignedCongruence& cert, double residual) {
    json signs = json::array();
    for (const auto& b : cert.blocks)
        signs.push_back(json{{"basis", basis_to_json(b.basis)}, {"sign", b.sign}});
    return json{{"psi", map_to_json(cert.psi)}, {"signs", std::move(signs)},
                {"residual", residual_string(residual)}};
}

SignedCongruence certificate_from_json(const json& j, Kind kind, int dim) {
    SignedCongruence cert;
    cert.psi = map_from_json(j.at("psi"));
    for (const auto& s : j.at("signs")) {
        SignedBlock b{basis_from_json(s.at("basis"), kind, dim), s.at("sign").get<int>()};
        if (b.sign != 1 && b.sign != -1) throw ParseError("block sign must be +1 or -1");
        cert.blocks.push_back(std::move(b));
    }
    return cert;
}

json gen_spec_to_json(const GenSpec& spec, const std::string& type) {
    json eigs = json::array();
    for (const auto& e : spec.eigenvalues) {
        if (e.pair)
            eigs.push_back(json{{"type", "pair"}, {"a", e.a.str()}, {"b", e.b.str()}});
        else
            eigs.push_back(json{{"type", "real"}, {"value", e.a.str()}});
    }
    return json{{"type", type},
                {"seed", spec.seed},
                {"arity", spec.arity},
                {"field", kind_name(spec.kind)},
                {"blockDims", spec.block_dims},
                {"eigenvalues", std::move(eigs)},
                {"radicalDim", spec.radical_dim},
                {"conjugate", spec.conjugate}};
}

std::pair<GenSpec, std::string> gen_spec_from_json(const json& j) {
    GenSpec spec;
    std::string type = j.value("type", std::string("witness"));
    if (type != "witness" && type != "decomposable")
        throw ParseError("spec type must be \"witness\" or \"decomposable\"");
    spec.kind = field_of(j);
    spec.seed = j.value("seed", 1ULL);
    spec.arity = j.value("arity", 3);
    spec.block_dims = j.value("blockDims", std::vector<int>{});
    spec.radical_dim = j.value("radicalDim", 0);
    spec.conjugate = j.value("conjugate", true);
    if (j.contains("eigenvalues")) {
        Kind scalar_kind = spec.kind;
        for (const auto& e : j["eigenvalues"]) {
            std::string t = e.value("type", std::string("real"));
            if (t == "pair") {
                Kind real_kind = spec.kind;  // pairs carry real data
                spec.eigenvalues.push_back(EigenvalueSpec::conjugate_pair(
                    Scalar::parse(e.at("a").get<std::string>(), real_kind),
                    Scalar::parse(e.at("b").get<std::string>(), real_kind)));
            } else {
                spec.eigenvalues.push_back(EigenvalueSpec::real_value(
                    Scalar::parse(e.at("value").get<std::string>(), scalar_kind)));
            }
        }
    }
    return {std::move(spec), std::move(type)};
}

json violation_to_json(const WitnessViolation& v) {
    return json{{"reordering", v.reordering}, {"index", v.index}, {"lhs", v.lhs.str()},
                {"rhs", v.rhs.str()}};
}

std::vector<std::vector<Scalar>> vectors_from_json(const json& j, Kind kind, int dim) {
    if (!j.is_array()) throw ParseError("expected an array of vectors");
    std::vector<std::vector<Scalar>> out;
    for (const auto& v : j) out.push_back(vector_from_json(v, kind, dim));
    return out;
}

}  // namespace multiform
