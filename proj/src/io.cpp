#include "expoly/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace expoly {

using nlohmann::json;

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// ---- polynomial text form ----------------------------------------------------

std::string poly_to_text(const Poly& p) {
    std::string out;
    bool first = true;
    for (const auto& [alpha, c] : p.terms()) {
        if (!first) out += ';';
        first = false;
        out += format_double(c.real());
        out += ',';
        out += format_double(c.imag());
        out += ':';
        out += alpha.to_string();
    }
    return out;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& tok) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw ParseError("trailing junk in number '" + tok + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("malformed number '" + tok + "'");
    }
}

int parse_int(const std::string& tok) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw ParseError("trailing junk in integer '" + tok + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("malformed integer '" + tok + "'");
    }
}

} // namespace

Poly poly_from_text(const std::string& text, int dim) {
    const std::string body = strip(text);
    if (body.empty()) {
        if (dim < 0) throw ParseError("cannot infer dimension of an empty polynomial");
        return Poly(dim);
    }
    Poly p;
    bool have_dim = dim >= 0;
    if (have_dim) p = Poly(dim);
    for (const std::string& term : split(body, ';')) {
        const auto halves = split(strip(term), ':');
        if (halves.size() != 2)
            throw ParseError("polynomial term '" + term + "' is not re,im:exps");
        const auto cs = split(strip(halves[0]), ',');
        if (cs.size() != 2)
            throw ParseError("coefficient '" + halves[0] + "' is not re,im");
        const cplx c(parse_number(strip(cs[0])), parse_number(strip(cs[1])));
        std::vector<int> exps;
        for (const std::string& e : split(strip(halves[1]), ','))
            exps.push_back(parse_int(strip(e)));
        if (!have_dim) {
            p = Poly(static_cast<int>(exps.size()));
            have_dim = true;
        }
        if (static_cast<int>(exps.size()) != p.dim())
            throw ParseError("inconsistent exponent length in polynomial text");
        MultiIndex alpha(0);
        try {
            alpha = MultiIndex(exps);
        } catch (const std::exception& e) {
            throw ParseError(std::string("bad exponent: ") + e.what());
        }
        p.add_term(alpha, c);
    }
    return p;
}

// ---- polynomial json form ----------------------------------------------------

ordered_json poly_to_json(const Poly& p) {
    ordered_json j;
    if (p.basis() == PolyBasis::falling) j["basis"] = "falling";
    j["terms"] = ordered_json::array();
    for (const auto& [alpha, c] : p.terms()) {
        ordered_json t;
        t["exp"] = alpha.data();
        t["re"] = c.real();
        t["im"] = c.imag();
        j["terms"].push_back(std::move(t));
    }
    return j;
}

Poly poly_from_json(const json& j, int dim) {
    if (j.is_string()) return poly_from_text(j.get<std::string>(), dim);
    if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
        throw ParseError("polynomial json must be a string or {\"terms\": [...]}");
    PolyBasis basis = PolyBasis::monomial;
    if (j.contains("basis")) {
        const std::string b = j["basis"].get<std::string>();
        if (b == "falling")
            basis = PolyBasis::falling;
        else if (b != "monomial")
            throw ParseError("unknown polynomial basis '" + b + "'");
    }
    Poly p;
    bool have_dim = dim >= 0;
    if (have_dim) p = Poly(dim, basis);
    for (const json& t : j["terms"]) {
        if (!t.is_object() || !t.contains("exp"))
            throw ParseError("polynomial term needs an \"exp\" array");
        std::vector<int> exps;
        for (const json& e : t["exp"]) exps.push_back(e.get<int>());
        if (!have_dim) {
            p = Poly(static_cast<int>(exps.size()), basis);
            have_dim = true;
        }
        if (static_cast<int>(exps.size()) != p.dim())
            throw ParseError("inconsistent exponent length in polynomial json");
        const double re = t.value("re", 0.0);
        const double im = t.value("im", 0.0);
        MultiIndex alpha(0);
        try {
            alpha = MultiIndex(exps);
        } catch (const std::exception& e) {
            throw ParseError(std::string("bad exponent: ") + e.what());
        }
        p.add_term(alpha, cplx(re, im));
    }
    if (!have_dim) throw ParseError("cannot infer dimension of an empty polynomial");
    return p;
}

// ---- model json ---------------------------------------------------------------

namespace {

ordered_json complex_pair(const cplx& z) {
    return ordered_json::array({z.real(), z.imag()});
}

cplx parse_complex_pair(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2)
        throw ParseError(std::string(what) + " must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

ordered_json model_to_json(const ExpPolyModel& m) {
    ordered_json j;
    j["dim"] = m.dim();
    j["components"] = ordered_json::array();
    for (const Component& c : m.components()) {
        ordered_json comp;
        comp["omega"] = ordered_json::array();
        for (const cplx& w : c.omega) comp["omega"].push_back(complex_pair(w));
        comp["poly"] = poly_to_json(c.coeff);
        j["components"].push_back(std::move(comp));
    }
    return j;
}

ExpPolyModel model_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim"))
        throw ParseError("model json needs an integer \"dim\"");
    const int dim = j["dim"].get<int>();
    if (dim < 1) throw ParseError("model dimension must be at least 1");

    std::vector<std::pair<std::vector<cplx>, Poly>> comps;
    if (j.contains("components")) {
        if (!j["components"].is_array())
            throw ParseError("\"components\" must be an array");
        for (const json& c : j["components"]) {
            if (!c.is_object() || !c.contains("omega") || !c.contains("poly"))
                throw ParseError("component needs \"omega\" and \"poly\"");
            if (!c["omega"].is_array() ||
                static_cast<int>(c["omega"].size()) != dim)
                throw ParseError("\"omega\" must list one [re, im] pair per "
                                 "coordinate");
            std::vector<cplx> omega;
            for (const json& w : c["omega"])
                omega.push_back(parse_complex_pair(w, "frequency"));
            Poly p = poly_from_json(c["poly"], dim).to_monomial();
            comps.emplace_back(std::move(omega), std::move(p));
        }
    }
    return ExpPolyModel(dim, std::move(comps));
}

ExpPolyModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const std::exception& e) {
        throw ParseError("model file '" + path + "': " + e.what());
    }
    return model_from_json(j);
}

// ---- reconstruction output -----------------------------------------------------

namespace {

ordered_json index_list(const std::vector<MultiIndex>& v) {
    ordered_json j = ordered_json::array();
    for (const MultiIndex& a : v) j.push_back(a.data());
    return j;
}

} // namespace

ordered_json ideal_to_json(const IdealData& ideal) {
    ordered_json j;
    j["mult_bound"] = ideal.mult_bound;
    j["tau_rank"] = ideal.tau_rank;
    j["rows"] = index_list(ideal.rows.elements());
    j["normal"] = index_list(ideal.normal.elements());
    j["kernel"] = ordered_json::array();
    for (const Poly& q : ideal.kernel) j["kernel"].push_back(poly_to_json(q));
    j["hilbert_trace"] = ordered_json::array();
    for (const auto& [n, rank] : ideal.hilbert_trace)
        j["hilbert_trace"].push_back(ordered_json::array({n, rank}));
    j["n_stop"] = ideal.n_stop;
    j["n_sat"] = ideal.n_sat;
    j["max_kernel_residual"] = ideal.max_kernel_residual;
    return j;
}

ordered_json report_to_json(const Report& report) {
    ordered_json j;
    j["multiplicity"] = report.multiplicity;
    j["hilbert_trace"] = ordered_json::array();
    for (const auto& [n, rank] : report.hilbert_trace)
        j["hilbert_trace"].push_back(ordered_json::array({n, rank}));
    j["max_kernel_residual"] = report.max_kernel_residual;
    j["min_normal_gap"] = report.min_normal_gap;
    j["max_commutator"] = report.max_commutator;
    j["clusters"] = ordered_json::array();
    for (const ClusterReport& cl : report.clusters) {
        ordered_json c;
        c["xi"] = ordered_json::array();
        for (const cplx& z : cl.xi) c["xi"].push_back(complex_pair(z));
        c["omega"] = ordered_json::array();
        for (const cplx& w : cl.omega) c["omega"].push_back(complex_pair(w));
        c["mult"] = cl.mult;
        c["deg_bound"] = cl.deg_bound;
        c["residual"] = cl.residual;
        j["clusters"].push_back(std::move(c));
    }
    j["lsq_residual"] = report.lsq_residual;
    j["refine_steps"] = report.refine_steps;
    j["resynthesis_residual"] = report.resynthesis_residual;
    return j;
}

ordered_json reconstruction_to_json(const ExpPolyModel& m, const IdealData& ideal,
                                    const Report& report) {
    ordered_json j = model_to_json(m);
    j["ideal"] = ideal_to_json(ideal);
    j["report"] = report_to_json(report);
    return j;
}

// ---- sample CSV ------------------------------------------------------------------

void write_samples_csv(std::ostream& os, int dim,
                       const std::vector<std::vector<int>>& points,
                       const std::vector<cplx>& values) {
    if (points.size() != values.size())
        throw std::invalid_argument("points/values size mismatch");
    for (int j = 0; j < dim; ++j) os << 'a' << (j + 1) << ',';
    os << "re,im\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (static_cast<int>(points[i].size()) != dim)
            throw std::invalid_argument("grid point dimension mismatch");
        for (int j = 0; j < dim; ++j) os << points[i][static_cast<std::size_t>(j)] << ',';
        os << format_double(values[i].real()) << ','
           << format_double(values[i].imag()) << '\n';
    }
}

TableSource read_samples_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("empty sample file");
    auto header = split(strip(line), ',');
    if (header.size() < 3 || strip(header[header.size() - 2]) != "re" ||
        strip(header.back()) != "im")
        throw ParseError("sample header must be a1,...,as,re,im");
    const int dim = static_cast<int>(header.size()) - 2;
    for (int j = 0; j < dim; ++j) {
        const std::string want = "a" + std::to_string(j + 1);
        if (strip(header[static_cast<std::size_t>(j)]) != want)
            throw ParseError("sample header must be a1,...,as,re,im");
    }

    std::vector<std::vector<int>> pts;
    std::vector<cplx> vals;
    while (std::getline(is, line)) {
        const std::string body = strip(line);
        if (body.empty()) continue;
        const auto cells = split(body, ',');
        if (static_cast<int>(cells.size()) != dim + 2)
            throw ParseError("sample row '" + body + "' has the wrong arity");
        std::vector<int> a(static_cast<std::size_t>(dim));
        for (int j = 0; j < dim; ++j)
            a[static_cast<std::size_t>(j)] = parse_int(strip(cells[static_cast<std::size_t>(j)]));
        const double re = parse_number(strip(cells[static_cast<std::size_t>(dim)]));
        const double im = parse_number(strip(cells[static_cast<std::size_t>(dim) + 1]));
        pts.push_back(std::move(a));
        vals.emplace_back(re, im);
    }
    if (pts.empty()) throw ParseError("sample file has no data rows");

    std::vector<int> lo = pts[0], hi = pts[0];
    for (const auto& a : pts)
        for (int j = 0; j < dim; ++j) {
            lo[static_cast<std::size_t>(j)] = std::min(lo[static_cast<std::size_t>(j)], a[static_cast<std::size_t>(j)]);
            hi[static_cast<std::size_t>(j)] = std::max(hi[static_cast<std::size_t>(j)], a[static_cast<std::size_t>(j)]);
        }
    long long count = 1;
    for (int j = 0; j < dim; ++j)
        count *= hi[static_cast<std::size_t>(j)] - lo[static_cast<std::size_t>(j)] + 1;
    if (count != static_cast<long long>(pts.size()))
        throw ParseError("samples must fill a dense box; got " +
                         std::to_string(pts.size()) + " rows for a box of " +
                         std::to_string(count));

    // place rows by box offset, last coordinate fastest
    std::vector<long long> stride(static_cast<std::size_t>(dim), 1);
    for (int j = dim - 2; j >= 0; --j)
        stride[static_cast<std::size_t>(j)] =
            stride[static_cast<std::size_t>(j) + 1] *
            (hi[static_cast<std::size_t>(j) + 1] - lo[static_cast<std::size_t>(j) + 1] + 1);
    std::vector<cplx> values(static_cast<std::size_t>(count));
    std::vector<char> seen(static_cast<std::size_t>(count), 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        long long off = 0;
        for (int j = 0; j < dim; ++j)
            off += stride[static_cast<std::size_t>(j)] *
                   (pts[i][static_cast<std::size_t>(j)] - lo[static_cast<std::size_t>(j)]);
        if (seen[static_cast<std::size_t>(off)])
            throw ParseError("duplicate grid point in sample file");
        seen[static_cast<std::size_t>(off)] = 1;
        values[static_cast<std::size_t>(off)] = vals[i];
    }
    return TableSource(lo, hi, std::move(values));
}

TableSource load_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open sample file '" + path + "'");
    return read_samples_csv(in);
}

} // namespace expoly
