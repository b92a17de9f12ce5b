#include "steklov/json_io.hpp"

#include <fstream>

#include "steklov/errors.hpp"

namespace steklov {

json periodic_fn_to_json(const PeriodicFn& f) {
    const int d = f.degree();
    std::vector<double> re, im;
    for (int n = -d; n <= d; ++n) {
        re.push_back(f.coeff(n).real());
        im.push_back(f.coeff(n).imag());
    }
    return json{{"re", re}, {"im", im}};
}

PeriodicFn periodic_fn_from_json(const json& j, bool require_real) {
    if (!j.contains("re")) throw IoError("periodic fn: missing 're' array");
    std::vector<double> re = j.at("re").get<std::vector<double>>();
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("im")) im = j.at("im").get<std::vector<double>>();
    if (im.size() != re.size()) throw IoError("periodic fn: re/im length mismatch");
    if (re.size() % 2 != 1) throw IoError("periodic fn: coefficient count must be odd (n = -N..N)");
    int d = static_cast<int>(re.size() / 2);
    std::vector<cplx> c(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) c[i] = cplx(re[i], im[i]);
    PeriodicFn f(std::move(c), d);
    if (require_real && !f.is_real(1e-12))
        throw IoError("periodic fn: coefficients violate conjugate symmetry beyond 1e-12");
    return f;
}

json boundary_to_json(const SurfaceBoundary& sb) {
    json comps = json::array();
    for (const auto& c : sb.components)
        comps.push_back(json{{"g11", periodic_fn_to_json(c.g11)},
                             {"h1", periodic_fn_to_json(c.h1)},
                             {"w1", periodic_fn_to_json(c.w1)},
                             {"q", periodic_fn_to_json(c.q)}});
    json j{{"components", comps}};
    json meta = json::object();
    if (sb.cylinder_half_length) meta["cylinder_half_length"] = *sb.cylinder_half_length;
    j["meta"] = meta;
    return j;
}

SurfaceBoundary boundary_from_json(const json& j) {
    if (!j.contains("components") || !j.at("components").is_array() ||
        j.at("components").empty())
        throw IoError("boundary: nonempty 'components' array required");
    SurfaceBoundary sb;
    for (const auto& cj : j.at("components")) {
        sb.components.push_back(make_component(periodic_fn_from_json(cj.at("g11")),
                                               periodic_fn_from_json(cj.at("h1")),
                                               periodic_fn_from_json(cj.at("w1")),
                                               periodic_fn_from_json(cj.at("q"))));
    }
    if (j.contains("meta") && j.at("meta").contains("cylinder_half_length"))
        sb.cylinder_half_length = j.at("meta").at("cylinder_half_length").get<double>();
    return sb;
}

json graded_symbol_to_json(const GradedSymbol& s) {
    json comps = json::array();
    for (int i = 0; i < s.depth(); ++i) {
        HomogComponent c = s.component(i);
        comps.push_back(json{{"order", c.order},
                             {"plus", periodic_fn_to_json(c.plus)},
                             {"minus", periodic_fn_to_json(c.minus)}});
    }
    return json{{"m", s.leading_order()}, {"components", comps}};
}

GradedSymbol graded_symbol_from_json(const json& j) {
    double m = j.at("m").get<double>();
    std::vector<HomogComponent> comps;
    for (const auto& cj : j.at("components")) {
        comps.push_back(HomogComponent{cj.at("order").get<double>(),
                                       periodic_fn_from_json(cj.at("plus"), false),
                                       periodic_fn_from_json(cj.at("minus"), false)});
    }
    return GradedSymbol(m, std::move(comps));
}

json genmultiset_to_json(const GenMultiset& R) {
    json out = json::array();
    for (const auto& p : R.pairs) {
        json pj{{"a", p.a.str()}, {"b", p.b.str()}};
        if (!p.unit.empty()) pj["unit"] = p.unit;
        out.push_back(pj);
    }
    return out;
}

GenMultiset genmultiset_from_json(const json& j) {
    const json& arr = j.is_array() ? j : j.at("pairs");
    std::vector<APPair> pairs;
    for (const auto& pj : arr) {
        std::string unit = pj.contains("unit") ? pj.at("unit").get<std::string>() : "";
        pairs.emplace_back(Rational::parse(pj.at("a").get<std::string>()),
                           Rational::parse(pj.at("b").get<std::string>()), unit);
    }
    return GenMultiset(std::move(pairs));
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw IoError("json parse failure in " + path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace steklov
