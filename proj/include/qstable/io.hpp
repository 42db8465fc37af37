#pragma once

#include <fstream>
#include <optional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "counting.hpp"
#include "errors.hpp"
#include "qfield.hpp"
#include "quiver.hpp"
#include "series.hpp"

namespace qstable::io {

using json = nlohmann::json;

/// Malformed input files or flags.
class ParseError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

inline std::string rational_string(const BigRational& r) { return r.get_num().get_str() + "/" + r.get_den().get_str(); }

inline BigRational parse_rational(const std::string& s) {
    BigRational r;
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            r = BigRational(mpz_class(s));
        } else {
            const mpz_class d(s.substr(slash + 1));
            if (d == 0) throw ParseError("zero denominator in \"" + s + "\"");
            r = BigRational(mpz_class(s.substr(0, slash)), d);
        }
    } catch (const std::invalid_argument&) {
        throw ParseError("not a rational number: \"" + s + "\"");
    }
    r.canonicalize();
    return r;
}

inline json to_json(const QPoly& p) {
    json a = json::array();
    for (const auto& c : p.coefficients()) a.push_back(rational_string(c));
    return a;
}

inline json to_json(const std::vector<BigRational>& v) {
    json a = json::array();
    for (const auto& c : v) a.push_back(rational_string(c));
    return a;
}

inline QPoly qpoly_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("polynomial must be an array of coefficient strings");
    std::vector<BigRational> c;
    for (const auto& x : j) {
        if (!x.is_string()) throw ParseError("polynomial coefficients must be strings");
        c.push_back(parse_rational(x.get<std::string>()));
    }
    return QPoly(std::move(c));
}

inline json to_json(const RationalFunction& f) { return {{"num", to_json(f.num())}, {"den", to_json(f.den())}}; }

inline RationalFunction rational_function_from_json(const json& j) {
    if (!j.is_object() || !j.contains("num") || !j.contains("den"))
        throw ParseError("rational function must have \"num\" and \"den\"");
    return RationalFunction(qpoly_from_json(j.at("num")), qpoly_from_json(j.at("den")));
}

inline json to_json(const DimVector& a) { return json(a.entries()); }

/// Terms come out in lexicographic order of alpha (the map order).
inline json to_json(const QSeries& s) {
    json terms = json::array();
    for (const auto& [a, c] : s.terms()) terms.push_back({{"alpha", to_json(a)}, {"coeff", to_json(c)}});
    return {{"max_height", s.truncation().max_height}, {"terms", terms}};
}

inline json to_json(const RatSeries& s) {
    json terms = json::array();
    for (const auto& [a, c] : s.terms()) terms.push_back({{"alpha", to_json(a)}, {"coeff", rational_string(c)}});
    return {{"max_height", s.truncation().max_height}, {"terms", terms}};
}

inline QSeries series_from_json(const json& j, std::size_t num_vars) {
    if (!j.is_object() || !j.contains("max_height") || !j.contains("terms"))
        throw ParseError("series must have \"max_height\" and \"terms\"");
    QSeries s(TruncationSpec(num_vars, j.at("max_height").get<long>()));
    for (const auto& t : j.at("terms")) s.set(DimVector(t.at("alpha").get<std::vector<long>>()), rational_function_from_json(t.at("coeff")));
    return s;
}

inline json to_json(const CountTable<QPoly>& t) {
    json rows = json::array();
    for (const auto& [a, p] : t.entries)
        rows.push_back({{"alpha", to_json(a)}, {"poly_q", to_json(p)}, {"poly_qminus1", to_json(in_qminus1_basis(p))}});
    return rows;
}

/// A quiver file, with the stability if the file names one.
struct QuiverFile {
    Quiver quiver;
    std::optional<std::vector<long>> theta;
};

inline QuiverFile quiver_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("quiver file must hold a JSON object");
    if (!j.contains("vertices") || !j.at("vertices").is_array() || j.at("vertices").empty())
        throw ParseError("quiver file needs a nonempty \"vertices\" array");
    std::vector<std::string> names;
    std::map<std::string, std::size_t> index;
    for (const auto& v : j.at("vertices")) {
        const std::string name = v.is_string() ? v.get<std::string>() : v.dump();
        if (!index.emplace(name, names.size()).second) throw ParseError("duplicate vertex \"" + name + "\"");
        names.push_back(name);
    }
    const std::size_t n = names.size();
    IntMatrix m(n);
    const bool has_arrows = j.contains("arrows"), has_matrix = j.contains("matrix");
    if (has_arrows == has_matrix) throw ParseError("quiver file needs exactly one of \"arrows\" and \"matrix\"");
    auto vertex = [&](const json& v) {
        const std::string name = v.is_string() ? v.get<std::string>() : v.dump();
        auto it = index.find(name);
        if (it == index.end()) throw ParseError("arrow endpoint \"" + name + "\" is not a vertex");
        return it->second;
    };
    if (has_arrows) {
        for (const auto& a : j.at("arrows")) {
            if (!a.is_array() || a.size() != 2) throw ParseError("each arrow must be a [source, target] pair");
            m(vertex(a[0]), vertex(a[1])) += 1;
        }
    } else {
        const json& rows = j.at("matrix");
        if (!rows.is_array() || rows.size() != n) throw ParseError("\"matrix\" must have one row per vertex");
        for (std::size_t i = 0; i < n; ++i) {
            if (!rows[i].is_array() || rows[i].size() != n) throw ParseError("\"matrix\" must be square");
            for (std::size_t k = 0; k < n; ++k) {
                if (!rows[i][k].is_number_integer() || rows[i][k].get<long>() < 0)
                    throw ParseError("arrow counts must be nonnegative integers");
                m(i, k) = rows[i][k].get<long>();
            }
        }
    }
    QuiverFile out{Quiver(std::move(names), std::move(m)), std::nullopt};
    if (j.contains("theta")) {
        const auto th = j.at("theta").get<std::vector<long>>();
        if (th.size() != n) throw ParseError("\"theta\" length does not match the vertices");
        out.theta = th;
    }
    return out;
}

inline QuiverFile load_quiver(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open quiver file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("quiver file " + path + ": " + e.what());
    }
    try {
        return quiver_from_json(j);
    } catch (const json::exception& e) {
        throw ParseError("quiver file " + path + ": " + e.what());
    }
}

inline json to_json(const Quiver& q) {
    json rows = json::array();
    for (std::size_t i = 0; i < q.size(); ++i) {
        json r = json::array();
        for (std::size_t k = 0; k < q.size(); ++k) r.push_back(q.arrow_count(i, k));
        rows.push_back(r);
    }
    return {{"vertices", q.vertices()}, {"matrix", rows}};
}

/// c_0 + c_1 v + c_2 v^2 + ... in ascending order, e.g. "1 - 2*t".
inline std::string ascending(const std::vector<BigRational>& c, const std::string& var) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (sgn(c[i]) == 0) continue;
        const BigRational a = abs(c[i]);
        os << (first ? (sgn(c[i]) < 0 ? "-" : "") : (sgn(c[i]) < 0 ? " - " : " + "));
        first = false;
        if (i == 0 || a != 1) os << a.get_str() << (i == 0 ? "" : "*");
        if (i > 0) os << var << (i > 1 ? "^" + std::to_string(i) : "");
    }
    return first ? "0" : os.str();
}

/// LaTeX for sum c_i v^i in ascending order; v is typed verbatim.
inline std::string latex_poly(const std::vector<BigRational>& c, const std::string& var) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (sgn(c[i]) == 0) continue;
        const BigRational a = abs(c[i]);
        os << (first ? (sgn(c[i]) < 0 ? "-" : "") : (sgn(c[i]) < 0 ? " - " : " + "));
        first = false;
        if (i == 0 || a != 1) {
            if (a.get_den() == 1)
                os << a.get_num().get_str();
            else
                os << "\\frac{" << a.get_num().get_str() << "}{" << a.get_den().get_str() << "}";
        }
        if (i == 1) os << var;
        if (i > 1) os << var << "^{" << i << "}";
    }
    return first ? "0" : os.str();
}

inline std::string latex(const RationalFunction& f) {
    const std::string num = latex_poly(f.num().coefficients(), "q");
    if (f.is_polynomial()) return num;
    return "\\frac{" + num + "}{" + latex_poly(f.den().coefficients(), "q") + "}";
}

}  // namespace qstable::io
