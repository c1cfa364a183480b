#include <cstring>
#include "srs/specfile.hpp"

#include "json.hpp"

#include <fstream>

namespace srs {

using nlohmann::json;

namespace {

json rationalc_to_json(const RationalC& c) {
    return json::array(
        {c.real().num(), c.real().den(), c.imag().num(), c.imag().den()});
}

RationalC rationalc_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 4)
        throw SpecFileError(where + ": rational coefficient must be [nre,dre,nim,dim]");
    return RationalC(Rational(j[0].get<long long>(), j[1].get<long long>()),
                     Rational(j[2].get<long long>(), j[3].get<long long>()));
}

json laurent_to_json(const LaurentFn& f) {
    json coeffs = json::array();
    for (auto& [k, c] : f.coeffs()) coeffs.push_back(json::array({k, rationalc_to_json(c)}));
    return json{{"coeffs", coeffs}};
}

LaurentFn laurent_from_json(const json& j, const std::string& where) {
    LaurentFn f;
    if (!j.contains("coeffs")) throw SpecFileError(where + ": missing 'coeffs'");
    for (auto& e : j["coeffs"])
        f.set(e.at(0).get<int>(), rationalc_from_json(e.at(1), where));
    return f;
}

json qpoly_to_json(const QPoly& f) {
    json modes = json::array();
    for (auto& [m, a] : f.modes()) modes.push_back(json::array({m, a.real(), a.imag()}));
    return json{{"modes", modes}};
}

QPoly qpoly_from_json(const json& j, const std::string& where) {
    QPoly f;
    if (!j.contains("modes")) throw SpecFileError(where + ": missing 'modes'");
    for (auto& e : j["modes"])
        f.set(e.at(0).get<int>(), cd(e.at(1).get<double>(), e.at(2).get<double>()));
    return f;
}

json modes2d_to_json(const FourierModes& f) {
    json modes = json::array();
    int N = f.cutoff();
    for (int m = -N; m <= N; ++m)
        for (int n = -N; n <= N; ++n)
            if (f.at(m, n) != cd(0.0))
                modes.push_back(json::array({m, n, f.at(m, n).real(), f.at(m, n).imag()}));
    return json{{"N", N}, {"modes", modes}};
}

FourierModes modes2d_from_json(const json& j, const std::string& where) {
    if (!j.contains("N")) throw SpecFileError(where + ": missing 'N'");
    FourierModes f(j["N"].get<int>());
    for (auto& e : j["modes"])
        f.at(e.at(0).get<int>(), e.at(1).get<int>()) =
            cd(e.at(2).get<double>(), e.at(3).get<double>());
    return f;
}

// keys "1".."n" and "i,j"
int parse_index(const std::string& key, int n, const std::string& where) {
    int i = std::stoi(key);
    if (i < 1 || i > n) throw SpecFileError(where + ": index " + key + " out of 1..n");
    return i;
}
std::pair<int, int> parse_pair(const std::string& key, int n, const std::string& where) {
    auto comma = key.find(',');
    if (comma == std::string::npos)
        throw SpecFileError(where + ": pair key must look like \"i,j\"");
    int i = parse_index(key.substr(0, comma), n, where);
    int j = parse_index(key.substr(comma + 1), n, where);
    if (i >= j) throw SpecFileError(where + ": pair key needs i < j");
    return {i, j};
}

template <class Ring>
json series_tables(const SuperconformalMap<Ring>& t,
                   json (*fn_to_json)(const Ring&)) {
    json comp;
    json psi = json::object(), g = json::object(), fm = json::object(), z2 = json::object();
    int n = t.n();
    for (int i = 1; i <= n; ++i) {
        if (!t.psi_coeff(i).is_zero(0.0)) psi[std::to_string(i)] = fn_to_json(t.psi_coeff(i));
        if (!t.f_coeff(i).is_zero(0.0)) fm[std::to_string(i)] = fn_to_json(t.f_coeff(i));
    }
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            std::string key = std::to_string(i) + "," + std::to_string(j);
            if (!t.g_coeff(i, j).is_zero(0.0)) g[key] = fn_to_json(t.g_coeff(i, j));
            if (!t.zeta2_coeff(i, j).is_zero(0.0)) z2[key] = fn_to_json(t.zeta2_coeff(i, j));
        }
    comp["psi"] = psi;
    comp["g"] = g;
    comp["f"] = fm;
    comp["zeta2"] = z2;
    return comp;
}

// Build one transition from tables: psi/g prescribed, f/zeta2 derived from
// the superconformal relations unless explicitly overridden (overrides exist
// so defect-injection fixtures can be written down).
template <class Ring>
SuperconformalMap<Ring> transition_from_json(
    const json& comp, int n, typename Ring::ChartMap chart, Ring spin,
    Ring (*fn_from_json)(const json&, const std::string&), const std::string& where) {
    SuperSeries<Ring> psi(n), g(n);
    if (comp.contains("psi"))
        for (auto& [key, val] : comp["psi"].items())
            psi.set(OddIndex::of_xi(parse_index(key, n, where + "/psi")),
                    fn_from_json(val, where + "/psi/" + key));
    if (comp.contains("g"))
        for (auto& [key, val] : comp["g"].items()) {
            auto [i, j] = parse_pair(key, n, where + "/g");
            g.set(OddIndex::of_xi(i, j), fn_from_json(val, where + "/g/" + key));
        }
    auto t = make_superconformal<Ring>(n, chart, spin, psi, g);
    if (comp.contains("f"))
        for (auto& [key, val] : comp["f"].items()) {
            auto fm = t.fminus();
            fm.set(OddIndex::of_xi(parse_index(key, n, where + "/f")),
                   fn_from_json(val, where + "/f/" + key));
            t.fminus() = fm;
        }
    if (comp.contains("zeta2"))
        for (auto& [key, val] : comp["zeta2"].items()) {
            auto [i, j] = parse_pair(key, n, where + "/zeta2");
            auto z = t.zeta();
            z.set(OddIndex::of_xi(i, j), fn_from_json(val, where + "/zeta2/" + key));
            t.zeta() = z;
        }
    return t;
}

} // namespace

SpecFile load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecFileError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SpecFileError(std::string("json parse error: ") + e.what());
    }

    SpecFile s;
    if (!j.contains("schema_version")) throw SpecFileError("missing schema_version");
    s.schema_version = j["schema_version"].get<int>();
    if (s.schema_version != 1)
        throw SpecFileError("unsupported schema_version " + std::to_string(s.schema_version));
    if (!j.contains("header")) throw SpecFileError("missing header");
    const json& h = j["header"];
    if (!h.contains("backend") || !h.contains("n"))
        throw SpecFileError("header needs 'backend' and 'n'");
    s.backend = h["backend"].get<std::string>();
    s.n = h["n"].get<int>();
    if (s.n < 0 || s.n > 6) throw SpecFileError("header/n out of supported range 0..6");
    if (h.contains("tau")) s.tau = cd(h["tau"].at(0).get<double>(), h["tau"].at(1).get<double>());
    if (h.contains("cutoff")) s.cutoff = h["cutoff"].get<int>();
    if (h.contains("grid")) s.grid = h["grid"].get<int>();
    if (j.contains("kernel")) s.kernel_path = j["kernel"].get<std::string>();

    bool has_alg = j.contains("algebraic");
    bool has_ana = j.contains("analytic");
    if (has_alg == has_ana)
        throw SpecFileError("exactly one of 'algebraic'/'analytic' must be present");

    if (s.backend == "p1-laurent") {
        if (has_ana) throw SpecFileError("analytic sections require the torus backend");
        P1Backend base;
        AlgebraicDeformation<P1Backend> d;
        d.base = base;
        d.n = s.n;
        const json& comps = j["algebraic"]["components"];
        if (int(comps.size()) != base.components())
            throw SpecFileError("algebraic/components: expected 1 component on p1-laurent");
        d.transitions.push_back(transition_from_json<LaurentFn>(
            comps[0], s.n, base.transition(0), base.spin(0), laurent_from_json,
            "algebraic/components/0"));
        s.alg_p1 = std::move(d);
    } else if (s.backend == "torus-fourier") {
        TorusBackend base;
        base.tau = s.tau;
        if (has_alg) {
            AlgebraicDeformation<TorusBackend> d;
            d.base = base;
            d.n = s.n;
            const json& comps = j["algebraic"]["components"];
            if (int(comps.size()) != base.components())
                throw SpecFileError("algebraic/components: expected 2 components on torus");
            for (int c = 0; c < 2; ++c)
                d.transitions.push_back(transition_from_json<QPoly>(
                    comps[c], s.n, base.transition(c), base.spin(c), qpoly_from_json,
                    "algebraic/components/" + std::to_string(c)));
            s.alg_torus = std::move(d);
        } else {
            AnalyticDeformation a = AnalyticDeformation::zero(TorusGeom(s.tau), s.n, s.cutoff,
                                                              s.grid);
            const json& ana = j["analytic"];
            if (ana.contains("chi"))
                for (auto& [key, val] : ana["chi"].items())
                    a.chi_at(parse_index(key, s.n, "analytic/chi")) =
                        modes2d_from_json(val, "analytic/chi/" + key).resized(s.cutoff);
            if (ana.contains("h"))
                for (auto& [key, val] : ana["h"].items()) {
                    auto [i, jj] = parse_pair(key, s.n, "analytic/h");
                    a.h_at(i, jj) = modes2d_from_json(val, "analytic/h/" + key).resized(s.cutoff);
                }
            s.analytic = std::move(a);
        }
    } else {
        throw SpecFileError("unknown backend '" + s.backend + "'");
    }
    return s;
}

void save_spec(const SpecFile& s, const std::string& path) {
    json j;
    j["schema_version"] = 1;
    json h;
    h["backend"] = s.backend;
    h["n"] = s.n;
    if (s.is_torus()) {
        h["tau"] = json::array({s.tau.real(), s.tau.imag()});
        h["cutoff"] = s.cutoff;
        h["grid"] = s.grid;
    }
    j["header"] = h;
    if (!s.kernel_path.empty()) j["kernel"] = s.kernel_path;

    if (s.alg_p1) {
        json comps = json::array();
        comps.push_back(series_tables<LaurentFn>(s.alg_p1->at(0), laurent_to_json));
        j["algebraic"] = json{{"components", comps}};
    } else if (s.alg_torus) {
        json comps = json::array();
        for (int c = 0; c < 2; ++c)
            comps.push_back(series_tables<QPoly>(s.alg_torus->at(c), qpoly_to_json));
        j["algebraic"] = json{{"components", comps}};
    } else if (s.analytic) {
        json ana;
        json chi = json::object(), hh = json::object();
        for (int i = 1; i <= s.n; ++i)
            if (!s.analytic->chi_at(i).is_zero(0.0))
                chi[std::to_string(i)] = modes2d_to_json(s.analytic->chi_at(i));
        for (auto& [ij, f] : s.analytic->h)
            if (!f.fn.is_zero(0.0))
                hh[std::to_string(ij.first) + "," + std::to_string(ij.second)] =
                    modes2d_to_json(f.fn);
        ana["chi"] = chi;
        ana["h"] = hh;
        j["analytic"] = ana;
    } else {
        throw SpecFileError("save_spec: nothing to save");
    }

    std::ofstream out(path);
    if (!out) throw SpecFileError("cannot write '" + path + "'");
    out << j.dump(1) << "\n";
}

namespace {
constexpr char kKernelMagic[8] = {'S', 'R', 'S', 'K', 'R', 'N', '1', '\n'};
}

PairingKernel load_kernel(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecFileError("cannot open kernel '" + path + "'");
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kKernelMagic, 8) != 0)
        throw SpecFileError("kernel file: bad magic");
    int32_t kgrid = 0, flat = 0, cut = 0;
    double tre = 0, tim = 0, resid = 0;
    in.read(reinterpret_cast<char*>(&kgrid), 4);
    in.read(reinterpret_cast<char*>(&tre), 8);
    in.read(reinterpret_cast<char*>(&tim), 8);
    in.read(reinterpret_cast<char*>(&resid), 8);
    in.read(reinterpret_cast<char*>(&flat), 4);
    in.read(reinterpret_cast<char*>(&cut), 4);
    if (!in || kgrid <= 0 || kgrid > 256) throw SpecFileError("kernel file: bad header");
    PairingKernel k;
    k.kgrid = kgrid;
    k.tau = cd(tre, tim);
    k.compat_residual = resid;
    k.flat_band = flat;
    k.cutoff_band = cut;
    int64_t P = int64_t(kgrid) * kgrid;
    k.R.resize(P);
    in.read(reinterpret_cast<char*>(k.R.data()), P * sizeof(cd));
    k.K.resize(P, P);
    in.read(reinterpret_cast<char*>(k.K.data()), P * P * sizeof(cd));
    if (!in) throw SpecFileError("kernel file: truncated data");
    return k;
}

void save_kernel(const PairingKernel& k, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SpecFileError("cannot write kernel '" + path + "'");
    out.write(kKernelMagic, 8);
    int32_t kgrid = k.kgrid, flat = k.flat_band, cut = k.cutoff_band;
    double tre = k.tau.real(), tim = k.tau.imag(), resid = k.compat_residual;
    out.write(reinterpret_cast<const char*>(&kgrid), 4);
    out.write(reinterpret_cast<const char*>(&tre), 8);
    out.write(reinterpret_cast<const char*>(&tim), 8);
    out.write(reinterpret_cast<const char*>(&resid), 8);
    out.write(reinterpret_cast<const char*>(&flat), 4);
    out.write(reinterpret_cast<const char*>(&cut), 4);
    int64_t P = int64_t(k.kgrid) * k.kgrid;
    out.write(reinterpret_cast<const char*>(k.R.data()), P * sizeof(cd));
    out.write(reinterpret_cast<const char*>(k.K.data()), P * P * sizeof(cd));
}

} // namespace srs
