#pragma once

#include <complex>
#include <sstream>
#include <string>

#include <json.hpp>

#include "linops.hpp"
#include "locally_constant.hpp"
#include "pseudodiff.hpp"
#include "shell_measure.hpp"

namespace nam {

using json = nlohmann::json;

// ---- scalars ------------------------------------------------------------------

inline std::string int_str(const Int& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

inline Int int_parse(const std::string& s) { return Int(s); }

inline json rat_json(const Rat& r) {
    return json{{"num", int_str(r.numerator())}, {"den", int_str(r.denominator())}};
}

inline Rat rat_from_json(const json& j) {
    return Rat(int_parse(j.at("num").get<std::string>()),
               int_parse(j.at("den").get<std::string>()));
}

// ---- field elements -----------------------------------------------------------

inline json padic_json(const PAdic& x) {
    json j;
    j["p"] = x.field().p;
    j["kind"] = x.field().kind == FieldKind::char_zero ? "Qp" : "Fp_theta";
    if (x.is_zero()) {
        j["ord"] = 0;
        j["digits"] = json::array();
    } else {
        j["ord"] = x.ord();
        j["digits"] = x.digits();
    }
    return j;
}

inline PAdic padic_from_json(const json& j) {
    Field f = j.at("kind").get<std::string>() == "Qp" ? Qp(j.at("p").get<int>())
                                                      : Fp_theta(j.at("p").get<int>());
    auto digits = j.at("digits").get<std::vector<int>>();
    if (digits.empty()) return PAdic::zero(f);
    return PAdic::from_digits(f, j.at("ord").get<int>(), digits);
}

// textual form "p^k * (d0 d1 d2 ...)_p"
inline std::string padic_text(const PAdic& x) {
    std::ostringstream os;
    if (x.is_zero()) {
        os << x.field().p << "^0 * ()_" << x.field().p;
        return os.str();
    }
    os << x.field().p << "^" << x.ord() << " * (";
    const auto& d = x.digits();
    for (size_t i = 0; i < d.size(); ++i) {
        if (i) os << ' ';
        os << d[i];
    }
    os << ")_" << x.field().p;
    return os.str();
}

inline PAdic padic_parse(const Field& f, const std::string& s) {
    // accepts the textual form above, or a plain rational "a" / "a/b"
    auto caret = s.find('^');
    if (caret == std::string::npos || s.find('(') == std::string::npos) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return PAdic::from_rational(f, Int(s), Int(1));
        return PAdic::from_rational(f, Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    }
    int base = std::stoi(s.substr(0, caret));
    if (base != f.p) throw std::invalid_argument("padic_parse: base does not match the field");
    size_t star = s.find('*', caret);
    int ord = std::stoi(s.substr(caret + 1, star - caret - 1));
    size_t lp = s.find('(', star), rp = s.find(')', lp);
    std::istringstream is(s.substr(lp + 1, rp - lp - 1));
    std::vector<int> digits;
    int d;
    while (is >> d) digits.push_back(d);
    if (digits.empty()) return PAdic::zero(f);
    return PAdic::from_digits(f, ord, digits);
}

// ---- locally constant functions -------------------------------------------------

inline json lcfn_json(const LcFn<std::complex<double>>& fn) {
    json pieces = json::array();
    for (const auto& [ball, v] : fn.pieces)
        pieces.push_back(json{{"center", padic_json(ball.center)},
                              {"m", ball.m},
                              {"re", v.real()},
                              {"im", v.imag()}});
    return json{{"pieces", pieces},
                {"default",
                 json{{"re", fn.default_value.real()}, {"im", fn.default_value.imag()}}}};
}

inline LcFn<std::complex<double>> lcfn_from_json(const json& j) {
    const json& pieces = j.at("pieces");
    if (pieces.empty()) throw std::invalid_argument("lcfn_from_json: no pieces");
    Field f = padic_from_json(pieces[0].at("center")).field();
    LcFn<std::complex<double>> fn = LcFn<std::complex<double>>::zero_fn(f);
    for (const auto& pc : pieces)
        fn.add_piece(Ball{padic_from_json(pc.at("center")), pc.at("m").get<int>()},
                     {pc.at("re").get<double>(), pc.at("im").get<double>()});
    if (j.contains("default"))
        fn.default_value = {j["default"].at("re").get<double>(),
                            j["default"].at("im").get<double>()};
    return fn;
}

// ---- measures -------------------------------------------------------------------

inline json measure_json(const ShellMeasure1D& m) {
    json j;
    switch (m.kind) {
        case MeasureKind::thm320: j["kind"] = "thm320"; break;
        case MeasureKind::exp_q: j["kind"] = "exp"; break;
        case MeasureKind::dirac: j["kind"] = "dirac"; break;
        default: j["kind"] = "custom"; break;
    }
    j["p"] = m.field.p;
    j["window"] = json{{"jmin", m.jmin}, {"n", m.n}};
    json params;
    params["center"] = padic_json(m.center);
    if (m.kind == MeasureKind::thm320) params["ratio"] = rat_json(m.ratio320);
    if (m.kind == MeasureKind::exp_q) {
        params["xi_norm"] = m.xi_norm;
        params["q"] = m.q;
        params["cprime"] = m.cprime;
        params["exp_norm"] = m.exp_norm;
    }
    j["params"] = params;
    json w = json::array();
    for (int jj = m.jmin; jj <= m.n; ++jj) {
        Rat wj = m.weight(jj);
        w.push_back(json{{"j", jj},
                         {"w_num", int_str(wj.numerator())},
                         {"w_den", int_str(wj.denominator())}});
    }
    j["weights"] = w;
    j["tail"] = rat_json(m.tail);
    return j;
}

inline ShellMeasure1D measure_from_json(const json& j) {
    ShellMeasure1D m;
    m.field = Qp(j.at("p").get<int>());
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "thm320") m.kind = MeasureKind::thm320;
    else if (kind == "exp") m.kind = MeasureKind::exp_q;
    else if (kind == "dirac") m.kind = MeasureKind::dirac;
    else m.kind = MeasureKind::custom;
    m.jmin = j.at("window").at("jmin").get<int>();
    m.n = j.at("window").at("n").get<int>();
    const json& params = j.at("params");
    m.center = params.contains("center") ? padic_from_json(params["center"])
                                         : PAdic::zero(m.field);
    if (m.kind == MeasureKind::thm320) m.ratio320 = rat_from_json(params.at("ratio"));
    if (m.kind == MeasureKind::exp_q) {
        m.xi_norm = params.at("xi_norm").get<double>();
        m.q = params.at("q").get<int>();
        m.cprime = params.at("cprime").get<double>();
        m.exp_norm = params.at("exp_norm").get<double>();
    }
    m.w.assign(m.n - m.jmin + 1, Rat(0));
    for (const auto& e : j.at("weights"))
        m.w[e.at("j").get<int>() - m.jmin] =
            Rat(int_parse(e.at("w_num").get<std::string>()),
                int_parse(e.at("w_den").get<std::string>()));
    m.tail = j.contains("tail") ? rat_from_json(j["tail"]) : Rat(0);
    return m;
}

// ---- matrices -------------------------------------------------------------------

inline json matrix_json(const MatrixK& a, int tail_horizon = 0) {
    json j;
    j["n"] = a.n;
    json rows = json::array();
    for (const auto& row : a.e) {
        json r = json::array();
        for (const auto& v : row) r.push_back(padic_json(v));
        rows.push_back(r);
    }
    j["entries"] = rows;
    if (a.tail_ord && tail_horizon > 0) {
        json k = json::array();
        for (int i = 0; i < tail_horizon; ++i) {
            json r = json::array();
            for (int c = 0; c < tail_horizon; ++c) r.push_back(a.tail_ord(i, c));
            k.push_back(r);
        }
        j["tail"] = json{{"profile", "p^-k"}, {"k", k}};
    }
    return j;
}

inline MatrixK matrix_from_json(const json& j) {
    MatrixK a;
    a.n = j.at("n").get<int>();
    for (const auto& row : j.at("entries")) {
        std::vector<PAdic> r;
        for (const auto& v : row) r.push_back(padic_from_json(v));
        a.e.push_back(std::move(r));
    }
    if (a.n == 0 || a.e.empty() || a.e[0].empty())
        throw std::invalid_argument("matrix_from_json: empty matrix");
    a.field = a.e[0][0].field();
    if (j.contains("tail")) {
        auto k = j["tail"].at("k").get<std::vector<std::vector<int>>>();
        a.tail_ord = [k](int i, int c) {
            if (i < static_cast<int>(k.size()) && c < static_cast<int>(k[i].size()))
                return k[i][c];
            return kOrdInf;
        };
    }
    return a;
}

// ---- results --------------------------------------------------------------------

inline json pd_result_json(const PDResult& r) {
    return json{{"value_re", r.value.real()},
                {"value_im", r.value.imag()},
                {"tail_bound", r.tail_bound},
                {"shells", json::array({r.l_min, r.l_max})}};
}

}  // namespace nam
