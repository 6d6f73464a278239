// isospectra: compute zeros, isospectral matrices and zero dynamics for the
// hypergeometric and Askey-scheme families and print JSON reports on stdout.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "isospectra/errors.hpp"
#include "isospectra/report.hpp"

using namespace isospectra;

namespace {

int log_level() {
    const char* v = std::getenv("ISOSPECTRA_LOG");
    if (!v) return 1;
    const std::string s(v);
    if (s == "quiet" || s == "0") return 0;
    if (s == "debug" || s == "2") return 2;
    return 1;
}

void diag(int level, const std::string& msg) {
    if (log_level() >= level) std::cerr << "isospectra: " << msg << "\n";
}

/// "2", "-1.5", "1+2i", "0.5-3i", "2i", "1,2" or "(1,2)".
cplx parse_complex_arg(std::string s) {
    auto bad = [&] { return InvalidParameters("cannot parse complex number '" + s + "'"); };
    std::string t;
    for (char c : s)
        if (c != ' ' && c != '(' && c != ')') t += c;
    auto num = [&](const std::string& x) {
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(x, &used);
        } catch (const std::exception&) {
            throw bad();
        }
        if (used != x.size()) throw bad();
        return v;
    };
    if (t.empty()) throw bad();
    if (auto comma = t.find(','); comma != std::string::npos) return {num(t.substr(0, comma)), num(t.substr(comma + 1))};
    if (t.back() != 'i' && t.back() != 'j') return {num(t), 0.0};
    t.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = t.size(); k-- > 1;)
        if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
            split = k;
            break;
        }
    auto imag = [&](const std::string& x) {
        if (x.empty() || x == "+") return 1.0;
        if (x == "-") return -1.0;
        return num(x);
    };
    if (split == std::string::npos) return {0.0, imag(t)};
    return {num(t.substr(0, split)), imag(t.substr(split))};
}

struct SpecFlags {
    std::string family;
    int N = 0;
    std::vector<std::string> alphas, betas;
    std::string q;
    std::string spec_file;
    CLI::Option* o_family = nullptr;
    CLI::Option* o_N = nullptr;
    CLI::Option* o_alphas = nullptr;
    CLI::Option* o_betas = nullptr;
    CLI::Option* o_q = nullptr;

    void attach(CLI::App* app) {
        o_family = app->add_option("--family", family, "ghyp, gbasic, jacobi, wilson, racah, aw, qracah");
        o_N = app->add_option("-N,--N", N, "degree");
        o_alphas = app->add_option("--alphas", alphas, "alpha-type parameters")->allow_extra_args();
        o_betas = app->add_option("--betas", betas, "beta-type parameters")->allow_extra_args();
        o_q = app->add_option("--q", q, "base of the q-families");
        app->add_option("--spec-file", spec_file, "JSON spec; flags override its fields");
    }

    FamilySpec resolve() const {
        FamilySpec s;
        bool have_family = false, have_N = false;
        if (!spec_file.empty()) {
            std::ifstream in(spec_file);
            if (!in) throw InvalidParameters("cannot open spec file " + spec_file);
            json j;
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                throw InvalidParameters(std::string("spec file: ") + e.what());
            }
            s = spec_from_json(j);
            have_family = have_N = true;
        }
        if (o_family->count()) {
            s.family = parse_family(family);
            have_family = true;
        }
        if (o_N->count()) {
            s.N = N;
            have_N = true;
        }
        if (!have_family) throw InvalidParameters("--family or --spec-file is required");
        if (!have_N) throw InvalidParameters("-N or --spec-file is required");
        if (o_alphas->count()) {
            s.alphas.clear();
            for (const auto& a : alphas) s.alphas.push_back(parse_complex_arg(a));
        }
        if (o_betas->count()) {
            s.betas.clear();
            for (const auto& b : betas) s.betas.push_back(parse_complex_arg(b));
        }
        if (o_q->count()) s.q = parse_complex_arg(q);
        return s;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isospectral matrices and solvable zero dynamics of hypergeometric-type polynomials"};
    app.require_subcommand(1);

    Tolerances tol;
    auto add_tols = [&](CLI::App* sub) {
        sub->add_option("--tol-spectral", tol.spectral, "eigenvalue match tolerance");
        sub->add_option("--tol-identity", tol.identity, "identity, equilibrium and defining-equation tolerance");
    };

    SpecFlags zf, mf, vf, ef;
    auto* zeros = app.add_subcommand("zeros", "zeros of the polynomial");
    zf.attach(zeros);
    auto* matrix = app.add_subcommand("matrix", "isospectral matrix and its spectrum");
    mf.attach(matrix);
    add_tols(matrix);
    auto* verify = app.add_subcommand("verify", "all checks for one spec");
    vf.attach(verify);
    add_tols(verify);

    EvolveOptions eo;
    auto* evolve = app.add_subcommand("evolve", "integrate the zero dynamics and compare with the algebraic solution");
    ef.attach(evolve);
    evolve->add_option("--t1", eo.t1, "final time");
    evolve->add_option("--steps", eo.steps, "RK4 steps");
    evolve->add_option("--perturb", eo.perturb, "size of the initial displacement from equilibrium");
    evolve->add_option("--seed", eo.seed, "seed of the displacement");
    evolve->add_option("--tol-spectral", tol.deviation, "deviation tolerance");

    SweepOptions so;
    std::string sweep_family;
    auto* sweep = app.add_subcommand("sweep", "verify random safe-box specs");
    sweep->add_option("--family", sweep_family, "family")->required();
    sweep->add_option("--draws", so.draws, "number of specs");
    sweep->add_option("--seed", so.seed, "seed");
    sweep->add_option("--nmax", so.nmax, "largest degree");
    add_tols(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        CommandResult r;
        if (*zeros) {
            r = cmd_zeros(zf.resolve());
        } else if (*matrix) {
            r = cmd_matrix(mf.resolve(), tol);
        } else if (*verify) {
            r = cmd_verify(vf.resolve(), tol);
        } else if (*evolve) {
            r = cmd_evolve(ef.resolve(), eo, tol);
        } else {
            so.family = parse_family(sweep_family);
            r = cmd_sweep(so, tol);
        }
        std::cout << dump(r.report);
        diag(2, "exit " + std::to_string(r.exit_code));
        if (r.exit_code != 0) diag(1, "verification failed");
        return r.exit_code;
    } catch (const Error& e) {
        diag(0, std::string(e.kind()) + ": " + e.what());
        std::cout << dump(error_report(e.kind(), e.what()));
        return e.exit_code();
    } catch (const std::exception& e) {
        diag(0, std::string("error: ") + e.what());
        std::cout << dump(error_report("Error", e.what()));
        return 2;
    }
}
