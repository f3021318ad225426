// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

#include "qgeom/spec_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "qgeom/catalog.hpp"
#include "qgeom/errors.hpp"

namespace qgeom {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw SpecError(path + ": " + msg); }

void check_keys(const ordered_json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j.items()) {
        if (!ok.contains(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
    }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const ordered_json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "expected a finite number");
    return d;
}

cplx complex_entry(const ordered_json& v, const std::string& path) {
    if (v.is_number()) return {number(v, path), 0.0};
    if (v.is_array() && v.size() == 2) return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
    fail(path, "expected a number or a [re, im] pair");
}

Theta theta_point(const ordered_json& v, std::size_t m, const std::string& path) {
    Theta t;
    if (v.is_number() && m == 1) {
        t.push_back(number(v, path));
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) t.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
    } else {
        fail(path, "expected a parameter point");
    }
    if (t.size() != m) {
        fail(path, "expected " + std::to_string(m) + " components, got " + std::to_string(t.size()));
    }
    return t;
}

ordered_json normalize_grid(const ordered_json& g, const std::string& path) {
    check_keys(g, path, {"n_points", "lower", "upper", "periodic"});
    if (!g.contains("n_points") || !g.at("n_points").is_number_integer() || g.at("n_points").get<long long>() < 2) {
        fail(join(path, "n_points"), "expected an integer >= 2");
    }
    if (!g.contains("lower")) fail(join(path, "lower"), "required number is missing");
    if (!g.contains("upper")) fail(join(path, "upper"), "required number is missing");
    const double lo = number(g.at("lower"), join(path, "lower"));
    const double hi = number(g.at("upper"), join(path, "upper"));
    if (!(hi > lo)) fail(path, "upper must exceed lower");
    bool periodic = false;
    if (g.contains("periodic")) {
        if (!g.at("periodic").is_boolean()) fail(join(path, "periodic"), "expected a boolean");
        periodic = g.at("periodic").get<bool>();
    }
    ordered_json out;
    out["n_points"] = g.at("n_points").get<long long>();
    out["lower"] = lo;
    out["upper"] = hi;
    out["periodic"] = periodic;
    return out;
}

ordered_json normalize_basis(const ordered_json& b, const std::string& path) {
    check_keys(b, path, {"dimension", "labels"});
    if (!b.contains("dimension") || !b.at("dimension").is_number_integer() || b.at("dimension").get<long long>() < 1) {
        fail(join(path, "dimension"), "expected an integer >= 1");
    }
    ordered_json out;
    out["dimension"] = b.at("dimension").get<long long>();
    if (b.contains("labels")) {
        const auto& l = b.at("labels");
        if (!l.is_array() || l.size() != static_cast<std::size_t>(out["dimension"].get<long long>())) {
            fail(join(path, "labels"), "expected one label per dimension");
        }
        for (std::size_t i = 0; i < l.size(); ++i) {
            if (!l[i].is_string()) fail(join(path, "labels") + "[" + std::to_string(i) + "]", "expected a string");
        }
        out["labels"] = l;
    }
    return out;
}

Space space_of(const ordered_json& doc) {
    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        return GridSpace(g.at("n_points").get<std::size_t>(), g.at("lower").get<double>(), g.at("upper").get<double>(),
                         g.at("periodic").get<bool>());
    }
    const auto& b = doc.at("basis");
    std::vector<std::string> labels;
    if (b.contains("labels")) labels = b.at("labels").get<std::vector<std::string>>();
    return BasisSpace(b.at("dimension").get<std::size_t>(), std::move(labels));
}

ordered_json normalize_tabulated(const ordered_json& j) {
    check_keys(j, "", {"kind", "name", "grid", "basis", "theta", "amplitudes"});
    ordered_json out;
    out["kind"] = "tabulated";
    std::string name = "tabulated";
    if (j.contains("name")) {
        if (!j.at("name").is_string()) fail("name", "expected a string");
        name = j.at("name").get<std::string>();
    }
    out["name"] = name;
    if (j.contains("grid") == j.contains("basis")) fail("grid", "exactly one of 'grid' and 'basis' is required");
    if (j.contains("grid")) {
        out["grid"] = normalize_grid(j.at("grid"), "grid");
    } else {
        out["basis"] = normalize_basis(j.at("basis"), "basis");
    }
    const std::size_t n = dimension(space_of(out));

    if (!j.contains("theta") || !j.at("theta").is_array() || j.at("theta").size() < 3) {
        fail("theta", "expected an array of at least three parameter values");
    }
    ordered_json thetas = ordered_json::array();
    for (std::size_t k = 0; k < j.at("theta").size(); ++k) {
        thetas.push_back(theta_point(j.at("theta")[k], 1, "theta[" + std::to_string(k) + "]")[0]);
    }
    out["theta"] = thetas;

    if (!j.contains("amplitudes") || !j.at("amplitudes").is_array()) fail("amplitudes", "expected an array of rows");
    const auto& rows = j.at("amplitudes");
    if (rows.size() != thetas.size()) {
        fail("amplitudes", "expected " + std::to_string(thetas.size()) + " rows (one per theta), got " +
                               std::to_string(rows.size()));
    }
    ordered_json amps = ordered_json::array();
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::string rp = "amplitudes[" + std::to_string(k) + "]";
        if (!rows[k].is_array()) fail(rp, "expected an array of amplitudes");
        if (rows[k].size() != n) {
            fail(rp, "expected " + std::to_string(n) + " entries, got " + std::to_string(rows[k].size()));
        }
        ordered_json row = ordered_json::array();
        for (std::size_t i = 0; i < n; ++i) {
            const cplx z = complex_entry(rows[k][i], rp + "[" + std::to_string(i) + "]");
            row.push_back(ordered_json::array({z.real(), z.imag()}));
        }
        amps.push_back(std::move(row));
    }
    out["amplitudes"] = std::move(amps);
    return out;
}

PureStateModel build_tabulated(const ordered_json& doc) {
    const Space space = space_of(doc);
    std::vector<double> thetas = doc.at("theta").get<std::vector<double>>();
    std::vector<CVector> rows;
    for (const auto& r : doc.at("amplitudes")) {
        CVector v(static_cast<Eigen::Index>(r.size()));
        for (std::size_t i = 0; i < r.size(); ++i) v(static_cast<Eigen::Index>(i)) = {r[i][0].get<double>(), r[i][1].get<double>()};
        rows.push_back(std::move(v));
    }
    return tabulated_model(doc.at("name").get<std::string>(), space, std::move(thetas), std::move(rows));
}

nlohmann::json plain(const ordered_json& j) { return nlohmann::json::parse(j.dump()); }

}  // namespace

ordered_json parse_json_text(std::string_view text, const std::string& origin) {
    try {
        return ordered_json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw SpecError(origin + ": " + e.what());
    }
}

ordered_json read_json_file(const std::string& path) {
    std::stringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw SpecError(path + ": cannot open file");
        buf << in.rdbuf();
    }
    return parse_json_text(buf.str(), path);
}

ModelSpec ModelSpec::parse(const ordered_json& j) {
    if (!j.is_object()) fail("(root)", "expected an object");
    if (!j.contains("kind") || !j.at("kind").is_string()) fail("kind", "expected 'catalog' or 'tabulated'");
    const auto kind = j.at("kind").get<std::string>();
    ordered_json out;
    if (kind == "catalog") {
        check_keys(j, "", {"kind", "name", "params"});
        if (!j.contains("name") || !j.at("name").is_string()) fail("name", "expected a catalog model name");
        out["kind"] = "catalog";
        out["name"] = j.at("name");
        out["params"] = j.contains("params") ? j.at("params") : ordered_json::object();
        if (!out["params"].is_object()) fail("params", "expected an object");
    } else if (kind == "tabulated") {
        out = normalize_tabulated(j);
    } else {
        fail("kind", "expected 'catalog' or 'tabulated', got '" + kind + "'");
    }
    ModelSpec spec(std::move(out));
    (void)spec.build();  // validates parameters against the catalog
    return spec;
}

PureStateModel ModelSpec::build() const {
    if (is_catalog()) return catalog(doc_.at("name").get<std::string>(), plain(doc_.at("params")));
    return build_tabulated(doc_);
}

bool ModelSpec::is_catalog() const { return doc_.at("kind") == "catalog"; }

std::string ModelSpec::name() const { return doc_.at("name").get<std::string>(); }

PureStateModel parse_model_spec(const ordered_json& document) { return ModelSpec::parse(document).build(); }

LoopSpec parse_loop_spec(const ordered_json& j, std::size_t m) {
    check_keys(j, "", {"points", "polyline", "closed"});
    LoopSpec out;
    if (j.contains("closed")) {
        if (!j.at("closed").is_boolean()) fail("closed", "expected a boolean");
        out.closed = j.at("closed").get<bool>();
    }
    if (j.contains("points") == j.contains("polyline")) fail("points", "exactly one of 'points' and 'polyline' is required");
    if (j.contains("points")) {
        const auto& p = j.at("points");
        if (!p.is_array() || p.size() < 2) fail("points", "expected at least two points");
        for (std::size_t k = 0; k < p.size(); ++k) out.points.push_back(theta_point(p[k], m, "points[" + std::to_string(k) + "]"));
        return out;
    }
    const auto& pl = j.at("polyline");
    check_keys(pl, "polyline", {"vertices", "subdivisions"});
    if (!pl.contains("vertices") || !pl.at("vertices").is_array() || pl.at("vertices").size() < 2) {
        fail("polyline.vertices", "expected at least two vertices");
    }
    std::size_t sub = 1;
    if (pl.contains("subdivisions")) {
        if (!pl.at("subdivisions").is_number_integer() || pl.at("subdivisions").get<long long>() < 1) {
            fail("polyline.subdivisions", "expected a positive integer");
        }
        sub = pl.at("subdivisions").get<std::size_t>();
    }
    std::vector<Theta> vertices;
    for (std::size_t k = 0; k < pl.at("vertices").size(); ++k) {
        vertices.push_back(theta_point(pl.at("vertices")[k], m, "polyline.vertices[" + std::to_string(k) + "]"));
    }
    for (std::size_t e = 0; e + 1 < vertices.size(); ++e) {
        for (std::size_t s = 0; s < sub; ++s) {
            const double t = static_cast<double>(s) / static_cast<double>(sub);
            Theta p(m);
            for (std::size_t i = 0; i < m; ++i) p[i] = (1.0 - t) * vertices[e][i] + t * vertices[e + 1][i];
            out.points.push_back(std::move(p));
        }
    }
    out.points.push_back(vertices.back());
    return out;
}

std::vector<Theta> parse_theta_list(std::string_view text, std::size_t m) {
    std::vector<std::vector<double>> groups;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(';', start), text.size());
        const std::string_view group = text.substr(start, end - start);
        std::vector<double> values;
        std::size_t s = 0;
        while (s <= group.size()) {
            const std::size_t e = std::min(group.find(',', s), group.size());
            std::string token(group.substr(s, e - s));
            const auto first = token.find_first_not_of(" \t");
            const auto last = token.find_last_not_of(" \t");
            token = first == std::string::npos ? "" : token.substr(first, last - first + 1);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
            if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
                throw SpecError("theta list: cannot parse '" + token + "' as a number");
            }
            values.push_back(v);
            s = e + 1;
        }
        groups.push_back(std::move(values));
        start = end + 1;
    }
    std::vector<Theta> out;
    if (m == 1 && groups.size() == 1) {
        for (double v : groups.front()) out.push_back({v});
        return out;
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].size() != m) {
            throw SpecError("theta list: point " + std::to_string(g) + " has " + std::to_string(groups[g].size()) +
                            " components, expected " + std::to_string(m));
        }
        out.push_back(groups[g]);
    }
    return out;
}

Povm parse_povm_spec(const ordered_json& j, const Space& space) {
    check_keys(j, "", {"kind", "labels", "elements"});
    if (!j.contains("kind") || j.at("kind") != "povm") fail("kind", "expected 'povm'");
    if (!j.contains("elements") || !j.at("elements").is_array() || j.at("elements").empty()) {
        fail("elements", "expected a non-empty array of matrices");
    }
    const auto n = static_cast<Eigen::Index>(dimension(space));
    std::vector<CMatrix> elements;
    const auto& els = j.at("elements");
    for (std::size_t k = 0; k < els.size(); ++k) {
        const std::string ep = "elements[" + std::to_string(k) + "]";
        if (!els[k].is_array() || els[k].size() != static_cast<std::size_t>(n)) {
            fail(ep, "expected " + std::to_string(n) + " rows");
        }
        CMatrix e(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto& row = els[k][static_cast<std::size_t>(r)];
            const std::string rp = ep + "[" + std::to_string(r) + "]";
            if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) fail(rp, "expected " + std::to_string(n) + " entries");
            for (Eigen::Index c = 0; c < n; ++c) e(r, c) = complex_entry(row[static_cast<std::size_t>(c)], rp + "[" + std::to_string(c) + "]");
        }
        elements.push_back(std::move(e));
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        const auto& l = j.at("labels");
        if (!l.is_array() || l.size() != els.size()) fail("labels", "expected one label per element");
        for (std::size_t k = 0; k < l.size(); ++k) {
            if (!l[k].is_string()) fail("labels[" + std::to_string(k) + "]", "expected a string");
            labels.push_back(l[k].get<std::string>());
        }
    } else {
        for (std::size_t k = 0; k < els.size(); ++k) labels.push_back(std::to_string(k));
    }
    try {
        return Povm::from_elements(space, std::move(labels), elements);
    } catch (const MeasurementDefinitionError& e) {
        throw SpecError(std::string("elements: ") + e.what());
    }
}

ordered_json to_json(const RMatrix& m) {
    ordered_json out = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

ordered_json to_json(const RVector& v) {
    ordered_json out = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

ordered_json to_json(const Theta& t) {
    ordered_json out = ordered_json::array();
    for (double v : t) out.push_back(v);
    return out;
}

}  // namespace qgeom
