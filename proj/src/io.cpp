#include "crfuchs/io.hpp"

#include <cmath>
#include <fstream>

namespace crfuchs {

namespace {

constexpr int kFormatVersion = 1;

Json scalar_to_json(const Scalar& c)
{
    if (c.is_rational()) {
        const GaussianRational& q = c.rational();
        if (q.is_real()) return q.re().get_str();
        return Json::array({q.re().get_str(), q.im().get_str()});
    }
    if (c.is_float()) {
        auto z = c.f64();
        if (z.imag() == 0.0) return z.real();
        return Json::array({z.real(), z.imag()});
    }
    throw std::runtime_error("cannot serialize parameter-polynomial coefficients");
}

Scalar scalar_from_json(const Json& j)
{
    if (j.is_string()) return Scalar(GaussianRational(GaussianRational::parse_rat(j.get<std::string>())));
    if (j.is_number()) return Scalar(std::complex<double>(j.get<double>(), 0.0));
    if (j.is_array() && j.size() == 2) {
        if (j[0].is_string())
            return Scalar(GaussianRational(GaussianRational::parse_rat(j[0].get<std::string>()),
                                           GaussianRational::parse_rat(j[1].get<std::string>())));
        return Scalar(std::complex<double>(j[0].get<double>(), j[1].get<double>()));
    }
    throw ParseError("bad coefficient literal: " + j.dump());
}

void expect(bool ok, const std::string& msg)
{
    if (!ok) throw ParseError(msg);
}

void check_magic(const Json& j, const std::string& magic)
{
    expect(j.is_object(), "expected a JSON object");
    expect(j.contains("format") && j["format"] == magic,
           "bad or missing format magic (expected \"" + magic + "\")");
    expect(j.contains("version") && j["version"].is_number_integer() &&
               j["version"].get<int>() == kFormatVersion,
           "unsupported file version");
}

} // namespace

Json jet_to_json(const Jet& a)
{
    Json j;
    j["vars"] = *a.vars();
    j["caps"] = a.trunc().var_caps;
    j["total_cap"] = a.trunc().total_cap;
    Json terms = Json::array();
    for (const auto& [e, c] : a.terms()) {
        Json t;
        t["e"] = std::vector<int>(e.begin(), e.end());
        t["c"] = scalar_to_json(c);
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

Jet jet_from_json(const Json& j)
{
    expect(j.is_object() && j.contains("vars") && j.contains("caps") && j.contains("terms"),
           "jet record missing vars/caps/terms");
    VarsPtr vars = make_vars(j["vars"].get<std::vector<std::string>>());
    Truncation t;
    t.var_caps = j["caps"].get<std::vector<int>>();
    expect(t.var_caps.size() == vars->size(), "jet caps arity mismatch");
    t.total_cap = j.value("total_cap", 0);
    Jet a(vars, t);
    for (const auto& term : j["terms"]) {
        expect(term.contains("e") && term.contains("c"), "jet term missing e/c");
        std::vector<int> ei = term["e"].get<std::vector<int>>();
        expect(ei.size() == vars->size(), "jet term exponent arity mismatch");
        Jet::Mono e(ei.size());
        for (size_t i = 0; i < ei.size(); ++i) {
            expect(ei[i] >= 0 && ei[i] <= 255, "jet exponent out of range");
            e[i] = static_cast<unsigned char>(ei[i]);
        }
        a.add_term(e, scalar_from_json(term["c"]));
    }
    return a;
}

namespace {

const std::map<std::pair<int, int>, Jet>& access_slices(const RealAdmissibleForm& f)
{
    return f.h;
}
const std::map<std::pair<int, int>, Jet>& access_slices(const ComplexDefiningForm& f)
{
    return f.Theta;
}
const std::map<std::pair<int, int>, Jet>& access_slices(const ExponentialForm& f)
{
    return f.phi;
}

template <typename Form>
Json form_to_json(const Form& f, const std::string& kind, int depth_cap)
{
    Json j;
    j["format"] = "crfuchs-hypersurface";
    j["version"] = kFormatVersion;
    j["form"] = kind;
    j["m"] = f.m;
    j["epsilon"] = f.eps;
    j["depth_cap"] = depth_cap;
    j["index_cap"] = f.index_cap;
    Json slices = Json::array();
    for (const auto& [kl, jet] : access_slices(f)) {
        Json s;
        s["k"] = kl.first;
        s["l"] = kl.second;
        s["jet"] = jet_to_json(jet);
        slices.push_back(std::move(s));
    }
    j["slices"] = std::move(slices);
    return j;
}

} // namespace

Json hypersurface_to_json(const RealAdmissibleForm& h)
{
    return form_to_json(h, "real", h.u_cap);
}
Json hypersurface_to_json(const ComplexDefiningForm& t)
{
    return form_to_json(t, "complex", t.tau_cap);
}
Json hypersurface_to_json(const ExponentialForm& x)
{
    return form_to_json(x, "exponential", x.tau_cap);
}

HypersurfaceFile hypersurface_from_json(const Json& j)
{
    check_magic(j, "crfuchs-hypersurface");
    HypersurfaceFile out;
    out.form = j.value("form", "");
    expect(out.form == "real" || out.form == "complex" || out.form == "exponential",
           "hypersurface form must be real|complex|exponential");
    int m = j.value("m", 0);
    int eps = j.value("epsilon", 1);
    int depth = j.value("depth_cap", 0);
    int icap = j.value("index_cap", 0);
    expect(m >= 1, "m must be >= 1");
    auto load = [&](auto& f) {
        f.m = m;
        f.eps = eps;
        f.index_cap = icap;
        for (const auto& s : j["slices"]) {
            expect(s.contains("k") && s.contains("l") && s.contains("jet"),
                   "slice record missing k/l/jet");
            f.set(s["k"].get<int>(), s["l"].get<int>(), jet_from_json(s["jet"]));
        }
    };
    if (out.form == "real") {
        out.real.u_cap = depth;
        load(out.real);
    } else if (out.form == "complex") {
        out.cplx.tau_cap = depth;
        load(out.cplx);
    } else {
        out.expo.tau_cap = depth;
        load(out.expo);
    }
    return out;
}

Json ode_to_json(const SingularODE& e)
{
    Json j;
    j["format"] = "crfuchs-ode";
    j["version"] = kFormatVersion;
    j["m"] = e.m;
    j["phi"] = jet_to_json(e.Phi);
    return j;
}

SingularODE ode_from_json(const Json& j)
{
    check_magic(j, "crfuchs-ode");
    SingularODE e;
    e.m = j.value("m", 0);
    expect(e.m >= 1, "m must be >= 1");
    e.Phi = embed(jet_from_json(j.at("phi")), ode_space(), jet_from_json(j.at("phi")).trunc());
    ValidationReport vr = validate(e);
    if (!vr.ok()) throw ParseError("invalid ODE file: " + vr.joined());
    return e;
}

Json map_to_json(const NormalizedMap& H)
{
    Json j;
    j["format"] = "crfuchs-map";
    j["version"] = kFormatVersion;
    j["kind"] = "normalized";
    j["m"] = H.m;
    j["f"] = jet_to_json(H.f);
    j["g0"] = jet_to_json(H.g0);
    j["g"] = jet_to_json(H.g);
    return j;
}

Json map_to_json(const GeneralMap& H)
{
    Json j;
    j["format"] = "crfuchs-map";
    j["version"] = kFormatVersion;
    j["kind"] = "general";
    j["m"] = H.m;
    j["F"] = jet_to_json(H.F);
    j["G"] = jet_to_json(H.G);
    return j;
}

MapFile map_from_json(const Json& j)
{
    check_magic(j, "crfuchs-map");
    MapFile out;
    out.kind = j.value("kind", "");
    out.m = j.value("m", 0);
    expect(out.m >= 1, "m must be >= 1");
    if (out.kind == "normalized") {
        out.normalized.m = out.m;
        out.normalized.f = embed(jet_from_json(j.at("f")), map_space(),
                                 jet_from_json(j.at("f")).trunc());
        out.normalized.g0 =
            embed(jet_from_json(j.at("g0")), w_space(), jet_from_json(j.at("g0")).trunc());
        out.normalized.g = embed(jet_from_json(j.at("g")), map_space(),
                                 jet_from_json(j.at("g")).trunc());
    } else if (out.kind == "general") {
        out.general.m = out.m;
        out.general.F = embed(jet_from_json(j.at("F")), map_space(),
                              jet_from_json(j.at("F")).trunc());
        out.general.G = embed(jet_from_json(j.at("G")), map_space(),
                              jet_from_json(j.at("G")).trunc());
    } else {
        throw ParseError("map kind must be normalized|general");
    }
    return out;
}

Json bb_to_json(const BBSystem& sys)
{
    Json j;
    j["format"] = "crfuchs-bb";
    j["version"] = kFormatVersion;
    j["n"] = sys.n;
    Json F = Json::array();
    for (const auto& f : sys.F) F.push_back(jet_to_json(f));
    j["F"] = std::move(F);
    return j;
}

BBSystem bb_from_json(const Json& j)
{
    check_magic(j, "crfuchs-bb");
    BBSystem sys;
    sys.n = j.value("n", 0);
    expect(sys.n >= 1, "bb system dimension must be >= 1");
    expect(j.contains("F") && j["F"].is_array() && static_cast<int>(j["F"].size()) == sys.n,
           "bb system needs n component jets");
    for (const auto& fj : j["F"]) {
        Jet f = jet_from_json(fj);
        sys.F.push_back(embed(f, bb_space(sys.n), f.trunc()));
    }
    return sys;
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw ParseError("JSON parse error in " + path + ": " + ex.what());
    }
    return j;
}

void write_json_file(const std::string& path, const Json& j)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << j.dump(1) << "\n";
}

Jet jet_to_float(const Jet& a)
{
    Jet r(a.vars(), a.trunc());
    for (const auto& [e, c] : a.terms()) r.add_term(e, Scalar(c.to_complex()));
    return r;
}

} // namespace crfuchs
