#include "muderiv/certificate.hpp"
#include "muderiv/cm_forms.hpp"
#include "muderiv/fourier_mu.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace muderiv;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    long d = 0;
    long p = 0;
    int k = 1;
    std::string twist;
    std::string conductor;
    long beta_bound = 500;
    long precision = kDefaultPrecision;
    std::string out;
    std::string config;
    int threads = 0;
    long place = 0;
    std::string betas;
    bool probe = false;
};

struct Bound {
    CLI::Option* d;
    CLI::Option* p;
    CLI::Option* k;
    CLI::Option* twist;
    CLI::Option* conductor;
    CLI::Option* beta_bound;
    CLI::Option* precision;
    CLI::Option* out;
    CLI::Option* threads;
};

Bound add_common(CLI::App* sub, RunConfig& cfg) {
    Bound b;
    b.d = sub->add_option("--d", cfg.d, "field Q(sqrt(-d))");
    b.p = sub->add_option("--p", cfg.p, "odd prime split in K");
    b.k = sub->add_option("--k", cfg.k, "odd weight of the character");
    b.twist = sub->add_option("--twist", cfg.twist, "canonical[+split:ell:j|+inert:ell:j]...");
    b.conductor = sub->add_option("--conductor", cfg.conductor, "ell:e,ell:e,... (used when no twist label is given)");
    b.beta_bound = sub->add_option("--beta-bound", cfg.beta_bound, "grid bound B (verify) or q-expansion bound");
    b.precision = sub->add_option("--precision", cfg.precision, "p-adic working precision");
    b.out = sub->add_option("--out", cfg.out, "output path");
    b.threads = sub->add_option("--threads", cfg.threads, "grid threads (default: MU_DERIV_THREADS or hardware)");
    sub->add_option("--config", cfg.config, "JSON file with the same keys (flags win)");
    return b;
}

void apply_config(RunConfig& cfg, const Bound& b) {
    if (cfg.config.empty()) return;
    std::ifstream in(cfg.config);
    if (!in) throw UsageError("cannot read config " + cfg.config);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError(std::string("malformed config: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("malformed config: expected an object");
    auto take = [&](const char* key, CLI::Option* opt, auto& field) {
        if (!j.contains(key) || opt->count() > 0) return;
        try {
            j.at(key).get_to(field);
        } catch (const json::exception&) {
            throw UsageError(std::string("malformed config: bad value for ") + key);
        }
    };
    for (const auto& [key, _] : j.items()) {
        static const std::set<std::string> known{"d", "p", "k", "twist", "conductor", "beta_bound",
                                                 "precision", "out", "threads"};
        if (!known.count(key)) throw UsageError("malformed config: unknown key " + key);
    }
    take("d", b.d, cfg.d);
    take("p", b.p, cfg.p);
    take("k", b.k, cfg.k);
    take("twist", b.twist, cfg.twist);
    take("conductor", b.conductor, cfg.conductor);
    take("beta_bound", b.beta_bound, cfg.beta_bound);
    take("precision", b.precision, cfg.precision);
    take("out", b.out, cfg.out);
    take("threads", b.threads, cfg.threads);
}

std::vector<std::pair<long, int>> parse_conductor(const std::string& s) {
    std::vector<std::pair<long, int>> r;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        try {
            if (colon == std::string::npos) r.push_back({std::stol(item), 1});
            else r.push_back({std::stol(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
        } catch (const std::exception&) {
            throw UsageError("malformed conductor: " + s);
        }
    }
    return r;
}

GlobalHeckeChar make_char(const RunConfig& cfg) {
    if (cfg.d <= 0) throw UsageError("--d is required and must be positive");
    QuadField K(cfg.d);
    if (K.class_number() != 1) {
        if (cfg.p > 0 && K.class_number() % cfg.p == 0)
            throw HypothesisError(Refusal::class_number, "p divides h_K = " + std::to_string(K.class_number()));
        throw HypothesisError(Refusal::unsupported, "h_K = " + std::to_string(K.class_number()) + " > 1");
    }
    if (!cfg.conductor.empty()) return build_selfdual_char(K, cfg.k, parse_conductor(cfg.conductor), cfg.twist);
    return GlobalHeckeChar(K, cfg.k, parse_twist_label(cfg.twist.empty() ? "canonical" : cfg.twist));
}

void need_p(const RunConfig& cfg) {
    if (cfg.p <= 0) throw UsageError("--p is required");
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + cfg.out);
    out << text;
}

void gate(const GlobalHeckeChar& lam, long p) {
    Hypotheses h = check_hypotheses(lam, p);
    Refusal r = h.first_failure();
    if (r != Refusal::none) throw HypothesisError(r, "hypothesis " + refusal_str(r) + " fails");
}

int cmd_verify(const RunConfig& cfg) {
    need_p(cfg);
    GlobalHeckeChar lam = make_char(cfg);
    try {
        MuCertificate c = verify_theorem_a(lam, cfg.p, cfg.beta_bound, cfg.precision, cfg.threads);
        json j = certificate_json(c);
        if (!cfg.out.empty()) write_certificate(j, cfg.out);
        std::cout << "verdict " << j["verdict"].get<std::string>() << " rhs " << j["rhs"].get<std::string>()
                  << " grid_min " << c.grid.min_half().str() << " bound " << cfg.beta_bound << "\n";
        for (const auto& f : c.failures) std::cout << "failure: " << f << "\n";
        return c.equal() ? 0 : 1;
    } catch (const HypothesisError& e) {
        if (!cfg.out.empty()) write_certificate(refusal_json(lam, cfg.p, check_hypotheses(lam, cfg.p), e), cfg.out);
        throw;
    }
}

int cmd_rhs(const RunConfig& cfg) {
    need_p(cfg);
    GlobalHeckeChar lam = make_char(cfg);
    RhsResult r = mu_formula_rhs(lam, cfg.p);
    std::ostringstream os;
    os << "place,kind,mu_p,vp_log,log_ratio,mu_prime_v\n";
    for (const auto& e : r.ledger)
        os << e.ell << ',' << to_string(e.kind) << ',' << e.mu.str() << ',' << e.vp_log << ','
           << e.log_ratio.get_str() << ',' << e.mu_prime_v.get_str() << '\n';
    os << "mu_prime," << r.mu_prime.get_str() << "\nrhs," << r.rhs.get_str() << '\n';
    emit(cfg, os.str());
    return 0;
}

int cmd_witness(const RunConfig& cfg) {
    need_p(cfg);
    GlobalHeckeChar lam = make_char(cfg);
    gate(lam, cfg.p);
    AssemblyContext ctx(lam, cfg.p);
    json j;
    j["global"] = witness_json(construct_witness(ctx, WitnessTarget::global));
    json pw = json::array();
    for (long ell : ctx.conductor_ells) {
        if (ell != ctx.q) continue;
        pw.push_back(witness_json(construct_witness(ctx, WitnessTarget::place, ell)));
    }
    j["places"] = pw;
    emit(cfg, j.dump(2) + "\n");
    return 0;
}

int cmd_local(const RunConfig& cfg) {
    need_p(cfg);
    GlobalHeckeChar lam = make_char(cfg);
    const QuadField& K = lam.field();
    RootNumberData roots = root_number_data(lam);
    std::vector<long> ells;
    if (cfg.place > 0) ells.push_back(cfg.place);
    else
        for (const auto& v : roots.places)
            if (v.ell != 0) ells.push_back(v.ell);
    GlobalHeckeChar ls = lambda_star(lam);
    std::ostringstream os;
    os << "place,kind,in_conductor,cond_exp,xi_value,tate_W,tate_sign,literal_W,literal_sign,mu_p\n";
    for (long ell : ells) {
        Place w = place_of(K, ell);
        LocalChar chi = local_component(lam, w);
        Valuation mu = mu_p_local(chi, cfg.p);
        auto it = std::find_if(roots.places.begin(), roots.places.end(), [&](const auto& v) { return v.ell == ell; });
        PlaceRootData row;
        if (it != roots.places.end()) {
            row = *it;
        } else {
            row.ell = ell;
            row.kind = w.kind;
            row.xi_value = lambda_star_xi(lam, ell);
            row.tate_W = row.xi_value;
            row.literal_W = local_root_number(local_component(ls, w), row.xi_value);
            row.literal_sign = row.literal_W == row.xi_value ? 1 : -1;
        }
        os << ell << ',' << to_string(row.kind) << ',' << row.in_conductor << ',' << row.cond_exp << ','
           << row.xi_value.str() << ',' << row.tate_W.str() << ',' << row.tate_sign << ',' << row.literal_W.str()
           << ',' << row.literal_sign << ',' << mu.str() << '\n';
    }
    Hypotheses h = check_hypotheses(lam, cfg.p);
    if (h.first_failure() == Refusal::none) {
        AssemblyContext ctx(lam, cfg.p);
        std::vector<mpq_class> betas;
        if (cfg.betas.empty()) {
            for (long n : {1L, 2L, 3L}) betas.push_back(n), betas.push_back(mpq_class(n, ctx.q));
        } else {
            std::stringstream ss(cfg.betas);
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    mpq_class b(item);
                    b.canonicalize();
                    betas.push_back(b);
                } catch (const std::exception&) {
                    throw UsageError("malformed beta: " + item);
                }
            }
        }
        for (const auto& beta : betas) {
            if (beta <= 0) throw UsageError("beta must be positive");
            long u = d0_class(beta, cfg.p);
            if (u == 0) continue;
            CoefficientAssembly a = assemble_coefficient(ctx, AssemblyMode::derivative, beta, u);
            os << "\nbeta " << beta.get_str() << " u " << u << " total " << a.total.str() << " vp_derivative "
               << a.deriv_val(cfg.p, cfg.precision).str() << '\n';
            os << factors_csv(a.factors, cfg.p);
        }
    }
    emit(cfg, os.str());
    return 0;
}

int cmd_qexp(const RunConfig& cfg) {
    GlobalHeckeChar lam = make_char(cfg);
    QExpansion f = q_expansion(lam, cfg.beta_bound);
    emit(cfg, qexp_csv(f));
    return 0;
}

int cmd_roots(const RunConfig& cfg) {
    GlobalHeckeChar lam = make_char(cfg);
    json j = roots_json(root_number_data(lam));
    if (cfg.probe) {
        QExpansion f = q_expansion(lam, std::max(cfg.beta_bound, 200L));
        ProbeResult pr = functional_equation_probe(f);
        std::ostringstream res;
        res << std::scientific << pr.residual;
        j["probe"] = {{"bound", pr.bound}, {"sign", pr.sign}, {"conclusive", pr.conclusive}, {"residual", res.str()}};
    }
    emit(cfg, j.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mu-deriv: mu-invariant of the derivative of the anticyclotomic Katz L-function"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::map<CLI::App*, std::pair<Bound, int (*)(const RunConfig&)>> subs;
    auto add = [&](const char* name, const char* help, int (*fn)(const RunConfig&)) {
        CLI::App* s = app.add_subcommand(name, help);
        subs.emplace(s, std::make_pair(add_common(s, cfg), fn));
        return s;
    };
    add("verify", "verify the mu-invariant formula and write a certificate", cmd_verify);
    add("rhs", "print the mu-formula ledger", cmd_rhs);
    add("witness", "construct the global and place witnesses", cmd_witness);
    CLI::App* local = add("local", "local root numbers, mu_p and factor table", cmd_local);
    local->add_option("--place", cfg.place, "F-place ell (default: conductor places)");
    local->add_option("--beta", cfg.betas, "comma separated sample beta, e.g. 1,2,3/11");
    add("qexp", "q-expansion CSV up to --beta-bound", cmd_qexp);
    CLI::App* roots = add("roots", "exact root-number data", cmd_roots);
    roots->add_flag("--probe", cfg.probe, "also run the numeric functional-equation probe");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        for (auto& [s, entry] : subs) {
            if (!s->parsed()) continue;
            apply_config(cfg, entry.first);
            return entry.second(cfg);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const HypothesisError& e) {
        std::cerr << "refused (" << refusal_str(e.code) << "): " << e.what() << "\n";
        return static_cast<int>(e.code);
    } catch (const CharacterError& e) {
        std::cerr << "refused (CHARACTER): " << e.what() << "\n";
        return static_cast<int>(Refusal::character);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 8;
    }
    return 2;
}
