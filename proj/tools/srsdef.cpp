// srsdef: command-line driver for deformation-spec files.
//
// subcommands:
//   verify <file>                 check atlas / analytic-deformation validity
//   convert <file> --to <dir>     torus conversions between the two sections
//   equiv <file1> <file2>         equivalence witness or obstructing classes
//   obstruction <file>            cocycles, reduced class, split verdict
//   pairing <file>                invariant pairing against a kernel
//   roundtrip <file>              conversion round trip + equivalence check
//
// exit codes: 0 pass, 1 fail (verification or obstruction), 2 usage/IO.

#include "CLI11.hpp"
#include "json.hpp"

#include "srs/bridge.hpp"
#include "srs/specfile.hpp"

#include <iostream>

using namespace srs;
using nlohmann::json;

namespace {

struct Options {
    bool json_out = false;
    double tol = -1.0; // negative: backend default
    int grid = 0;
    int cutoff = 0;
    std::string kernel_path;
};

json report_to_json(const CheckReport& rep) {
    json items = json::array();
    for (auto& it : rep.items)
        items.push_back({{"check", it.name}, {"residual", it.residual}, {"ok", it.ok}});
    return {{"ok", rep.ok}, {"items", items}};
}

json report_to_json(const AnalyticReport& rep) {
    json items = json::array();
    for (auto& it : rep.items)
        items.push_back({{"check", it.name}, {"residual", it.residual}, {"ok", it.ok}});
    return {{"ok", rep.ok}, {"items", items}};
}

void print_report(const std::string& head, const json& j, bool as_json) {
    if (as_json) {
        std::cout << json{{head, j}}.dump(1) << "\n";
        return;
    }
    std::cout << head << ":\n";
    for (auto& it : j["items"])
        std::cout << (it["ok"].get<bool>() ? "  ok   " : "  FAIL ") << it["check"].get<std::string>()
                  << "  residual=" << it["residual"].get<double>() << "\n";
    std::cout << (j["ok"].get<bool>() ? "PASS" : "FAIL") << "\n";
}

json fn_to_json(const LaurentFn& f) {
    json a = json::array();
    for (auto& [k, c] : f.coeffs())
        a.push_back(json::array(
            {k, c.real().num(), c.real().den(), c.imag().num(), c.imag().den()}));
    return a;
}

json fn_to_json(const QPoly& f) {
    json a = json::array();
    for (auto& [m, c] : f.modes()) a.push_back(json::array({m, c.real(), c.imag()}));
    return a;
}

template <class Ring>
json series_to_json(const SuperSeries<Ring>& s) {
    json out = json::object();
    for (auto& [m, c] : s.terms()) {
        std::string key = m.theta ? "theta" : "";
        for (int i : m.xi) key += (key.empty() ? "xi" : " xi") + std::to_string(i);
        out[key.empty() ? "1" : key] = fn_to_json(c);
    }
    return out;
}

template <class B>
json gauge_to_json(const GaugeCochain<B>& lam) {
    return {{"alpha", {{"psi", series_to_json(lam.lambda_alpha.psi())},
                       {"u", series_to_json(lam.lambda_alpha.fplus_nil())}}},
            {"beta", {{"psi", series_to_json(lam.lambda_beta.psi())},
                      {"u", series_to_json(lam.lambda_beta.fplus_nil())}}}};
}

json class_to_json(const ReducedClass& c) {
    json lin = json::object(), quad = json::object();
    for (auto& [i, v] : c.linear) lin[std::to_string(i)] = json::array({v.real(), v.imag()});
    for (auto& [ij, v] : c.quadratic)
        quad[std::to_string(ij.first) + "," + std::to_string(ij.second)] =
            json::array({v.real(), v.imag()});
    return {{"linear", lin}, {"quadratic", quad}, {"zero", c.is_zero()}};
}

TorusCechContext make_ctx(const SpecFile& s, const Options& opt) {
    TorusBackend base;
    base.tau = s.tau;
    BridgeConfig cfg;
    cfg.N = opt.cutoff > 0 ? opt.cutoff : s.cutoff;
    cfg.G = opt.grid > 0 ? opt.grid : s.grid;
    return TorusCechContext(base, cfg);
}

int cmd_verify(const std::string& path, const Options& opt) {
    SpecFile s = load_spec(path);
    json out;
    bool ok = true;
    if (s.alg_p1) {
        auto rep = verify_atlas(*s.alg_p1);
        auto wrep = wronskian_check(*s.alg_p1);
        out["verify_atlas"] = report_to_json(rep);
        out["wronskian"] = report_to_json(wrep);
        ok = rep.ok && wrep.ok;
    } else if (s.alg_torus) {
        if (opt.tol > 0) s.alg_torus->base.zero_tol = opt.tol;
        auto rep = verify_atlas(*s.alg_torus);
        auto wrep = wronskian_check(*s.alg_torus);
        out["verify_atlas"] = report_to_json(rep);
        out["wronskian"] = report_to_json(wrep);
        ok = rep.ok && wrep.ok;
    } else {
        double tol = opt.tol > 0 ? opt.tol : 1e-8;
        auto rep = check_analytic_deformation(*s.analytic, tol);
        out["analytic_check"] = report_to_json(rep);
        ok = rep.ok;
    }
    out["ok"] = ok;
    if (opt.json_out) std::cout << out.dump(1) << "\n";
    else {
        for (auto& [key, val] : out.items())
            if (val.is_object()) print_report(key, val, false);
    }
    return ok ? 0 : 1;
}

int cmd_obstruction(const std::string& path, const Options&) {
    SpecFile s = load_spec(path);
    if (!s.has_algebraic()) {
        std::cerr << "obstruction: file has no algebraic section\n";
        return 2;
    }
    json out;
    auto run = [&](auto& d) {
        auto om = obstruction(d);
        auto [theta, cls] = extension_class(d);
        json entries = json::array();
        for (size_t c = 0; c < om.entries.size(); ++c)
            entries.push_back(series_to_json(om.entries[c]));
        out["obstruction_cocycle"] = entries;
        out["extension_class"] = class_to_json(cls);
        out["split_verdict"] =
            split_verdict(d) == SplitVerdict::non_split ? "non-split" : "undetermined-split";
        out["projection_identity_residual"] = projection_identity_residual(d);
    };
    if (s.alg_p1) run(*s.alg_p1);
    else run(*s.alg_torus);
    std::cout << out.dump(1) << "\n";
    return 0;
}

int cmd_convert(const std::string& path, const std::string& to, const std::string& out_path,
                const Options& opt) {
    SpecFile s = load_spec(path);
    if (!s.is_torus()) {
        std::cerr << "convert: conversions need the torus backend (no smooth structure on the "
                     "exact backend)\n";
        return 1;
    }
    TorusCechContext ctx = make_ctx(s, opt);
    SpecFile out = s;
    if (to == "analytic") {
        if (!s.alg_torus) {
            std::cerr << "convert: file has no algebraic section\n";
            return 1;
        }
        out.analytic = algebraic_to_analytic(ctx, *s.alg_torus);
        out.alg_torus.reset();
    } else if (to == "algebraic") {
        if (!s.analytic) {
            std::cerr << "convert: file has no analytic section\n";
            return 1;
        }
        out.alg_torus = analytic_to_algebraic(ctx, *s.analytic);
        out.analytic.reset();
    } else {
        std::cerr << "convert: --to must be 'analytic' or 'algebraic'\n";
        return 2;
    }
    save_spec(out, out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_equiv(const std::string& p1, const std::string& p2, const Options& opt) {
    SpecFile s1 = load_spec(p1);
    SpecFile s2 = load_spec(p2);
    if (s1.backend != s2.backend || s1.n != s2.n) {
        std::cerr << "equiv: incompatible files (backend or parameter count)\n";
        return 2;
    }
    json out;
    bool found = false;
    if (s1.alg_p1 && s2.alg_p1) {
        auto res = find_equivalence(*s1.alg_p1, *s2.alg_p1);
        found = res.witness.has_value();
        out["witness_found"] = found;
        out["verify_residual"] = res.verify_residual;
        if (found) out["witness"] = gauge_to_json(*res.witness);
        else out["obstructing_class_difference"] = class_to_json(res.obstruction);
    } else if (s1.alg_torus && s2.alg_torus) {
        auto res = find_equivalence(*s1.alg_torus, *s2.alg_torus);
        found = res.witness.has_value();
        out["witness_found"] = found;
        out["verify_residual"] = res.verify_residual;
        if (found) out["witness"] = gauge_to_json(*res.witness);
        else out["obstructing_class_difference"] = class_to_json(res.obstruction);
    } else if (s1.analytic && s2.analytic) {
        if (!s1.analytic->compatible(*s2.analytic)) {
            std::cerr << "equiv: incompatible analytic grids\n";
            return 2;
        }
        auto res = find_gauge(*s1.analytic, *s2.analytic);
        found = res.witness.has_value();
        out["witness_found"] = found;
        out["verify_residual"] = res.verify_residual;
        json lin = json::object(), quad = json::object();
        for (auto& [i, c] : res.linear_obstruction)
            lin[std::to_string(i)] = json::array({c.real(), c.imag()});
        for (auto& [ij, c] : res.quadratic_obstruction)
            quad[std::to_string(ij.first) + "," + std::to_string(ij.second)] =
                json::array({c.real(), c.imag()});
        out["obstructing_class_difference"] = {{"linear", lin}, {"quadratic", quad}};
    } else {
        std::cerr << "equiv: files carry different section kinds\n";
        return 2;
    }
    std::cout << out.dump(1) << "\n";
    (void)opt;
    return found ? 0 : 1;
}

int cmd_pairing(const std::string& path, const Options& opt) {
    SpecFile s = load_spec(path);
    if (!s.is_torus()) {
        std::cerr << "pairing: torus backend required\n";
        return 1;
    }
    AnalyticDeformation a = AnalyticDeformation::zero(TorusGeom(s.tau), s.n, s.cutoff, s.grid);
    if (s.analytic) a = *s.analytic;
    else a = algebraic_to_analytic(make_ctx(s, opt), *s.alg_torus);

    PairingKernel k;
    std::string kpath = !opt.kernel_path.empty() ? opt.kernel_path : s.kernel_path;
    if (!kpath.empty()) k = load_kernel(kpath);
    else k = make_spectral_kernel(TorusGeom(s.tau), 64);

    cd value = pairing(a, k);
    json out{{"pairing", json::array({value.real(), value.imag()})},
             {"kernel_compat_residual", k.compat_residual},
             {"kernel_grid", k.kgrid}};
    std::cout << out.dump(1) << "\n";
    return 0;
}

int cmd_roundtrip(const std::string& path, const Options& opt) {
    SpecFile s = load_spec(path);
    if (!s.is_torus()) {
        std::cerr << "roundtrip: torus backend required\n";
        return 1;
    }
    TorusCechContext ctx = make_ctx(s, opt);
    json out;
    bool ok = false;
    if (s.alg_torus) {
        auto a = algebraic_to_analytic(ctx, *s.alg_torus);
        auto back = analytic_to_algebraic(ctx, a);
        auto res = find_equivalence(*s.alg_torus, back);
        ok = res.witness.has_value();
        out["direction"] = "algebraic -> analytic -> algebraic";
        out["equivalent_to_input"] = ok;
        out["verify_residual"] = res.verify_residual;
        out["obstructing_class_difference"] = class_to_json(res.obstruction);
    } else {
        auto d = analytic_to_algebraic(ctx, *s.analytic);
        auto back = algebraic_to_analytic(ctx, d);
        auto res = find_gauge(*s.analytic, back);
        ok = res.witness.has_value();
        out["direction"] = "analytic -> algebraic -> analytic";
        out["gauge_equivalent_to_input"] = ok;
        out["verify_residual"] = res.verify_residual;
    }
    std::cout << out.dump(1) << "\n";
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"superconformal deformation calculus"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand
    Options opt;
    app.add_flag("--json", opt.json_out, "machine-readable output");
    app.add_option("--tol", opt.tol, "tolerance override");
    app.add_option("--grid", opt.grid, "grid override");
    app.add_option("--cutoff", opt.cutoff, "mode cutoff override");
    app.add_option("--kernel", opt.kernel_path, "pairing kernel file");

    std::string file1, file2, to_dir, out_path = "out.json";
    auto* v = app.add_subcommand("verify", "verify a deformation-spec file");
    v->add_option("file", file1)->required();
    auto* c = app.add_subcommand("convert", "convert between sections");
    c->add_option("file", file1)->required();
    c->add_option("--to", to_dir, "analytic | algebraic")->required();
    c->add_option("--out", out_path, "output path");
    auto* e = app.add_subcommand("equiv", "equivalence of two files");
    e->add_option("file1", file1)->required();
    e->add_option("file2", file2)->required();
    auto* o = app.add_subcommand("obstruction", "obstruction and class report");
    o->add_option("file", file1)->required();
    auto* p = app.add_subcommand("pairing", "invariant pairing");
    p->add_option("file", file1)->required();
    auto* r = app.add_subcommand("roundtrip", "conversion round trip");
    r->add_option("file", file1)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (v->parsed()) return cmd_verify(file1, opt);
        if (c->parsed()) return cmd_convert(file1, to_dir, out_path, opt);
        if (e->parsed()) return cmd_equiv(file1, file2, opt);
        if (o->parsed()) return cmd_obstruction(file1, Options{});
        if (p->parsed()) return cmd_pairing(file1, opt);
        if (r->parsed()) return cmd_roundtrip(file1, opt);
    } catch (const SpecFileError& err) {
        std::cerr << "spec error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 2;
}
