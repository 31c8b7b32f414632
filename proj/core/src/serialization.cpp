#include "lseries/serialization.hpp"

#include <charconv>

namespace lseries {

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("complex: expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const UnitAngle& a) {
    if (a.exact())
        return json{{"turns", std::to_string(a.num()) + "/" + std::to_string(a.den())},
                    {"exact", true}};
    return json{{"turns", a.turns()}, {"exact", false}};
}

namespace {

UnitAngle parse_turns_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::int64_t num = 0, den = 0;
        auto r1 = std::from_chars(s.data(), s.data() + slash, num);
        auto r2 = std::from_chars(s.data() + slash + 1, s.data() + s.size(), den);
        if (r1.ec != std::errc{} || r2.ec != std::errc{} || r2.ptr != s.data() + s.size())
            throw std::invalid_argument("angle: bad fraction '" + s + "'");
        return UnitAngle::rational(num, den);
    }
    // Bare integers are exact whole turns; anything else reads as a float.
    std::int64_t whole = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), whole);
    if (r.ec == std::errc{} && r.ptr == s.data() + s.size())
        return UnitAngle::rational(whole, 1);
    try {
        std::size_t used = 0;
        double t = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return UnitAngle::floating(t);
    } catch (...) {
        throw std::invalid_argument("angle: cannot parse turns '" + s + "'");
    }
}

}  // namespace

UnitAngle angle_from_json(const json& j) {
    if (j.is_number()) return UnitAngle::floating(j.get<double>());
    if (j.is_string()) return parse_turns_string(j.get<std::string>());
    if (!j.is_object() || !j.contains("turns"))
        throw std::invalid_argument("angle: expected {\"turns\": ...}");
    const json& t = j["turns"];
    if (t.is_string()) return parse_turns_string(t.get<std::string>());
    if (t.is_number_integer()) return UnitAngle::rational(t.get<std::int64_t>(), 1);
    if (t.is_number()) {
        if (j.value("exact", false))
            throw std::invalid_argument("angle: exact angles need a fraction string");
        return UnitAngle::floating(t.get<double>());
    }
    throw std::invalid_argument("angle: bad turns value");
}

json to_json(const CoefficientSet& s) {
    json arr = json::array();
    for (cplx v : s.elements()) arr.push_back(to_json(v));
    return arr;
}

CoefficientSet coefficient_set_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("coefficient set: expected an array");
    std::vector<cplx> el;
    for (const auto& v : j) el.push_back(complex_from_json(v));
    return CoefficientSet(std::move(el));
}

json to_json(const SparseAssignment& a) {
    json terms = json::array();
    for (const auto& t : a.terms()) terms.push_back(json::array({t.index, to_json(t.value)}));
    return json{{"terms", std::move(terms)}};
}

SparseAssignment assignment_from_json(const json& j) {
    const json& terms = j.is_object() ? j.at("terms") : j;
    if (!terms.is_array()) throw std::invalid_argument("assignment: expected terms array");
    std::vector<SparseAssignment::Term> out;
    for (const auto& t : terms) {
        if (!t.is_array() || t.size() != 2)
            throw std::invalid_argument("assignment: term must be [index, [re, im]]");
        out.push_back({t[0].get<std::uint64_t>(), complex_from_json(t[1])});
    }
    return SparseAssignment(std::move(out));
}

json to_json(const AffineTransform& t) {
    return json{{"scale", to_json(t.scale)}, {"shift", to_json(t.shift)}};
}

AffineTransform transform_from_json(const json& j) {
    AffineTransform t{complex_from_json(j.at("scale")), complex_from_json(j.at("shift"))};
    if (t.scale == cplx{0.0, 0.0}) throw std::invalid_argument("transform: zero scale");
    return t;
}

json to_json(const Certificate& c) {
    return json{{"tau", to_json(c.tau)},
                {"assignment", to_json(c.assignment)},
                {"target", to_json(c.target)},
                {"epsilon", c.epsilon},
                {"achieved_error", c.achieved_error},
                {"tail_bound", c.tail_bound}};
}

Certificate certificate_from_json(const json& j) {
    Certificate c;
    c.tau = complex_from_json(j.at("tau"));
    c.assignment = assignment_from_json(j.at("assignment"));
    c.target = complex_from_json(j.at("target"));
    c.epsilon = j.at("epsilon").get<double>();
    c.achieved_error = j.at("achieved_error").get<double>();
    c.tail_bound = j.at("tail_bound").get<double>();
    return c;
}

json to_json(const RegionSpec& r) {
    json pieces = json::array();
    for (const auto& p : r.pieces()) {
        if (const auto* d = std::get_if<Disk>(&p)) {
            pieces.push_back(json{{"type", "disk"},
                                  {"center", to_json(d->center)},
                                  {"radius", d->radius}});
        } else {
            const auto& w = std::get<Wedge>(p);
            pieces.push_back(json{{"type", "wedge"},
                                  {"re_lo", w.re_lo},
                                  {"re_hi", w.re_hi},
                                  {"arg_center", w.arg_center},
                                  {"half_angle", w.half_angle}});
        }
    }
    return json{{"pieces", std::move(pieces)}, {"accumulation_point", to_json(r.accumulation_point())}};
}

RegionSpec region_from_json(const json& j) {
    std::vector<RegionPiece> pieces;
    for (const auto& p : j.at("pieces")) {
        std::string type = p.at("type").get<std::string>();
        if (type == "disk")
            pieces.push_back(Disk{complex_from_json(p.at("center")), p.at("radius").get<double>()});
        else if (type == "wedge")
            pieces.push_back(Wedge{p.at("re_lo").get<double>(), p.at("re_hi").get<double>(),
                                   p.at("arg_center").get<double>(),
                                   p.at("half_angle").get<double>()});
        else
            throw std::invalid_argument("region: unknown piece type '" + type + "'");
    }
    return RegionSpec(std::move(pieces), angle_from_json(j.at("accumulation_point")));
}

json to_json(const nets::ExponentSum& e) {
    return json{{"zeta", to_json(e.zeta)},
                {"min_index", e.min_index},
                {"exponents", e.exponents}};
}

nets::ExponentSum exponent_sum_from_json(const json& j) {
    nets::ExponentSum e{angle_from_json(j.at("zeta")), j.at("min_index").get<std::uint64_t>(),
                        j.at("exponents").get<std::vector<std::uint64_t>>()};
    return e;
}

json to_json(const geometry::DescentQuadruple& q) {
    json el = json::array();
    for (cplx v : q.elements) el.push_back(to_json(v));
    return json{{"elements", std::move(el)}, {"max_arg_gap", q.max_arg_gap}};
}

json to_json(const geometry::LambdaClass& c) {
    json out;
    switch (c.kind) {
        case geometry::LambdaClass::Kind::ContainedInLine: out["kind"] = "line"; break;
        case geometry::LambdaClass::Kind::ContainedInHalfPlane: out["kind"] = "half-plane"; break;
        case geometry::LambdaClass::Kind::Spanning: out["kind"] = "spanning"; break;
    }
    if (c.kind == geometry::LambdaClass::Kind::ContainedInLine) {
        out["line_direction"] = to_json(c.line_direction);
        out["line_offset"] = to_json(c.line_offset);
    }
    if (c.half_plane_alpha)
        out["half_plane_alpha"] = *c.half_plane_alpha;
    else
        out["half_plane_alpha"] = nullptr;
    json w = json::array();
    for (cplx v : c.witness) w.push_back(to_json(v));
    out["witness"] = std::move(w);
    return out;
}

json to_json(const cex::WedgeRegion& w) {
    return json{{"k", w.k},
                {"side", w.side == cex::WedgeSide::AtMinusOne ? "minus-one" : "plus-one"},
                {"re_lo", w.re_lo},
                {"re_hi", w.re_hi},
                {"half_angle", w.half_angle},
                {"block_len", w.block_len}};
}

cex::WedgeRegion wedge_from_json(const json& j) {
    cex::WedgeRegion w;
    w.k = j.at("k").get<int>();
    w.side = j.at("side").get<std::string>() == "minus-one" ? cex::WedgeSide::AtMinusOne
                                                            : cex::WedgeSide::AtPlusOne;
    w.re_lo = j.at("re_lo").get<double>();
    w.re_hi = j.at("re_hi").get<double>();
    w.half_angle = j.at("half_angle").get<double>();
    w.block_len = j.at("block_len").get<std::uint64_t>();
    return w;
}

json evasion_report_to_json(const cex::EvasionReport& r, bool imag_side) {
    json out;
    out[imag_side ? "max_imag" : "min_real"] = r.extreme;
    out["bound"] = imag_side ? r.bound : r.bound;
    out["trials"] = r.trials;
    out["seed"] = r.seed;
    out["pass"] = r.pass;
    return out;
}

json to_json(const oracle::OracleResult& r) {
    return json{{"best_error", r.best_error},
                {"best_assignment", to_json(r.best_assignment)},
                {"evaluated_count", r.evaluated_count}};
}

json to_json(const engines::VerifyReport& r) {
    json out{{"valid", r.valid}, {"margin", r.margin}, {"tau_in_region", r.tau_in_region}};
    if (!r.reason.empty()) out["reason"] = r.reason;
    return out;
}

json coverage_summary(const sampler::ImageCloud& cloud) {
    json cov = json::object();
    for (std::size_t lev = 0; lev < cloud.grid.eps_levels.size(); ++lev)
        cov[std::to_string(cloud.grid.eps_levels[lev])] = cloud.coverage(lev);
    return json{{"trials", cloud.trials},
                {"prefix_len", cloud.prefix_len},
                {"seed", cloud.seed},
                {"samples", cloud.samples.size()},
                {"coverage", std::move(cov)}};
}

}  // namespace lseries
