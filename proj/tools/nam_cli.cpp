#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <nam/suites.hpp>

using namespace nam;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitRange = 3;
constexpr int kExitEval = 4;

struct range_error_cli : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// flat key-value config with [section] headers; keys become "section.key"
std::map<std::string, std::string> parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    std::map<std::string, std::string> kv;
    std::string line, section;
    auto trim = [](std::string s) {
        size_t a = s.find_first_not_of(" \t\r");
        size_t b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line has no '=': " + t);
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        kv[section.empty() ? key : section + "." + key] = val;
    }
    return kv;
}

std::string need(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("config key missing: " + key);
    return it->second;
}

std::string get_or(const std::map<std::string, std::string>& kv, const std::string& key,
                   const std::string& dflt) {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : it->second;
}

Rat parse_rat(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty rational");
    size_t slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    return json::parse(in);
}

void write_text(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body << "\n";
        return;
    }
    std::ofstream out(path);
    out << body << "\n";
}

int cmd_build(const std::string& config_path, std::uint64_t seed, const std::string& out_path) {
    auto kv = parse_config(config_path);
    int p = std::stoi(need(kv, "field.p"));
    if (p < 2) throw range_error_cli("field.p must be at least 2");
    std::string fkind = get_or(kv, "field.kind", "Qp");
    Field f = fkind == "Fp_theta" ? Fp_theta(p) : Qp(p);

    std::string preset = need(kv, "measure.kind");
    PAdic center = PAdic::zero(f);
    if (kv.count("measure.center")) center = padic_parse(f, kv.at("measure.center"));
    ShellMeasure1D m;
    if (preset == "thm320") {
        int n = std::stoi(need(kv, "measure.n"));
        int jmin = std::stoi(get_or(kv, "measure.jmin", std::to_string(n - 6)));
        Rat r = parse_rat(need(kv, "measure.r"));
        if (r <= Rat(1)) throw range_error_cli("measure.r must exceed 1");
        if (jmin > n) throw range_error_cli("measure.jmin must not exceed measure.n");
        m = shell_measure_thm320(f, n, r, jmin);
        m.center = center;
    } else if (preset == "exp") {
        int q = std::stoi(get_or(kv, "measure.q", "2"));
        if (q < 1) throw range_error_cli("measure.q must be positive");
        int jmin = std::stoi(get_or(kv, "measure.jmin", "-10"));
        int n = std::stoi(get_or(kv, "measure.n", "10"));
        if (jmin > n) throw range_error_cli("measure.jmin must not exceed measure.n");
        PAdic xi = padic_parse(f, need(kv, "measure.xi"));
        m = exp_measure(f, xi, center, q, jmin, n);
    } else if (preset == "custom") {
        int jmin = std::stoi(need(kv, "measure.jmin"));
        std::vector<Rat> w;
        std::istringstream ws(need(kv, "measure.weights"));
        std::string tok;
        while (std::getline(ws, tok, ',')) w.push_back(parse_rat(tok));
        if (w.empty()) throw range_error_cli("measure.weights must be nonempty");
        m = custom_measure(f, jmin, w, center);
    } else if (preset == "dirac") {
        m = dirac_measure(f, center);
    } else {
        throw range_error_cli("unknown measure.kind: " + preset);
    }
    json artifact = measure_json(m);
    artifact["seed"] = seed;
    write_text(out_path, artifact.dump(2));
    return kExitOk;
}

std::complex<double> parse_order(const std::string& s) {
    // "<re>" or "<re>+<im>i" / "<re>-<im>i"
    size_t i_pos = s.find('i');
    if (i_pos == std::string::npos) return {std::stod(s), 0.0};
    size_t split = s.find_last_of("+-", i_pos);
    if (split == std::string::npos || split == 0)
        throw std::invalid_argument("bad complex order: " + s);
    double re = std::stod(s.substr(0, split));
    std::string ims = s.substr(split, i_pos - split);
    double im = (ims == "+" || ims == "-") ? (ims == "-" ? -1.0 : 1.0) : std::stod(ims);
    return {re, im};
}

int cmd_eval(const std::string& op, const std::map<std::string, std::string>& args,
             const std::string& out_path) {
    json result;
    if (op == "charfun") {
        ShellMeasure1D m = measure_from_json(load_json(args.at("m")));
        PAdic z = padic_parse(m.field, args.at("z"));
        std::complex<double> v = charfun(m, z);
        result = json{{"re", v.real()}, {"im", v.imag()}};
    } else if (op == "pd") {
        LcFn<std::complex<double>> fn = lcfn_from_json(load_json(args.at("f")));
        std::complex<double> b = parse_order(args.at("b"));
        PAdic x = padic_parse(fn.field, args.at("x"));
        bool unit = args.count("unit-ball") > 0;
        double tol = args.count("tol") ? std::stod(args.at("tol")) : 1e-12;
        result = pd_result_json(pd(b, fn, x, unit, tol));
    } else if (op == "det") {
        MatrixK a = matrix_from_json(load_json(args.at("a")));
        result = json{{"det", padic_text(det(a))}};
    } else if (op == "mass") {
        ShellMeasure1D m = measure_from_json(load_json(args.at("m")));
        PAdic c = padic_parse(m.field, get_or(args, "center", "0"));
        int radius_exp = std::stoi(get_or(args, "radius-exp", "0"));
        result = json{{"mass", nam::to_string(mass_of_ball(m, Ball{c, radius_exp}))}};
    } else if (op == "moment") {
        ShellMeasure1D m = measure_from_json(load_json(args.at("m")));
        int q = std::stoi(get_or(args, "q", "2"));
        result = json{{"moment", moment_q(m, q)}};
    } else {
        std::cerr << "unknown op: " << op << "\n";
        return kExitParse;
    }
    write_text(out_path, result.dump(2));
    return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, double tol,
               const std::string& out_path) {
    auto names = suite_names();
    bool known = false;
    for (const auto& n : names) known |= (n == suite);
    if (!known) {
        std::cerr << "unknown suite: " << suite << "\n";
        return kExitParse;
    }
    Report rep = run_suite(suite, seed, tol);
    write_text(out_path, report_json(rep).dump(2));
    std::cerr << suite << ": " << rep.passed() << "/" << rep.cases.size() << " passed ("
              << rep.wall_ms << " ms)\n";
    return rep.ok() ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic measure and operator toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, op_name, suite_name;
    std::uint64_t seed = 42;
    if (const char* env = std::getenv("NAM_SEED")) seed = std::strtoull(env, nullptr, 10);
    double tol = 0;
    std::vector<std::string> eval_args;

    auto* build = app.add_subcommand("build", "build a measure artifact from a config file");
    build->add_option("--config", config_path, "config file path")->required();
    build->add_option("--seed", seed, "rng seed");
    build->add_option("--out", out_path, "output path (default stdout)");

    auto* eval = app.add_subcommand("eval", "evaluate a named operation");
    eval->add_option("op", op_name, "operation name")->required();
    eval->add_option("args", eval_args, "key=value arguments");
    eval->add_option("--out", out_path, "output path (default stdout)");
    eval->add_option("--tol", tol, "tolerance override");

    auto* verify = app.add_subcommand("verify", "run a named verification suite");
    verify->add_option("suite", suite_name, "suite name")->required();
    verify->add_option("--seed", seed, "rng seed");
    verify->add_option("--tol", tol, "tolerance override");
    verify->add_option("--out", out_path, "report path (default stdout)");

    app.add_subcommand("list-suites", "list the registered verification suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitParse;
    }

    try {
        if (build->parsed()) return cmd_build(config_path, seed, out_path);
        if (eval->parsed()) {
            std::map<std::string, std::string> args;
            if (tol > 0) args["tol"] = std::to_string(tol);
            for (const auto& a : eval_args) {
                size_t eq = a.find('=');
                if (eq == std::string::npos) args[a] = "1";
                else args[a.substr(0, eq)] = a.substr(eq + 1);
            }
            return cmd_eval(op_name, args, out_path);
        }
        if (verify->parsed()) return cmd_verify(suite_name, seed, tol, out_path);
        // list-suites
        for (const auto& n : suite_names()) std::cout << n << "\n";
        return kExitOk;
    } catch (const range_error_cli& e) {
        std::cerr << "range error: " << e.what() << "\n";
        return kExitRange;
    } catch (const std::invalid_argument& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        json err{{"error", e.what()}};
        write_text(out_path, err.dump(2));
        return kExitEval;
    }
}
