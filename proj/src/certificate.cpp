#include "muderiv/certificate.hpp"

#include <fstream>

namespace muderiv {

using nlohmann::json;

namespace {

std::string q_str(mpq_class v) {
    v.canonicalize();
    return v.get_str();
}

json character_json(const GlobalHeckeChar& lam) {
    json j;
    j["label"] = lam.label();
    j["d"] = lam.q();
    j["disc"] = lam.field().disc();
    j["k"] = lam.weight();
    j["class_number"] = lam.field().class_number();
    json cond = json::array();
    for (const auto& c : lam.conductor()) cond.push_back({{"place", c.place.str()}, {"exponent", c.exponent}});
    j["conductor"] = cond;
    j["conductor_norm"] = lam.conductor_norm();
    return j;
}

json grid_json(const GridResult& g) {
    json j;
    j["bound"] = g.bound;
    j["evaluated"] = g.evaluated;
    j["in_support"] = g.in_support;
    j["all_totals_vanish"] = g.all_totals_vanish;
    j["single_vanishing"] = g.single_vanishing;
    j["floors_hold"] = g.floors_hold;
    j["min"] = g.min().str();
    j["min_half"] = g.min_half().str();
    j["argmin"] = g.argmin ? json{{"beta", q_str(g.argmin->beta)}, {"u", g.argmin->u}} : json(nullptr);
    j["argmin_half"] = g.argmin_half ? json{{"beta", q_str(g.argmin_half->beta)}, {"u", g.argmin_half->u}} : json(nullptr);
    return j;
}

}  // namespace

json hypotheses_json(const Hypotheses& h) {
    return {{"p_odd_prime", h.p_odd_prime},
            {"p_split", h.p_split},
            {"p_ndvd_h", h.p_ndvd_h},
            {"p_ndvd_units", h.p_ndvd_units},
            {"p_ndvd_conductor", h.p_ndvd_conductor},
            {"minus_part_supported", h.minus_part_supported},
            {"W", h.W}};
}

json roots_json(const RootNumberData& r) {
    json j;
    j["W"] = r.W;
    j["W_literal"] = r.W_literal;
    j["literal_agrees"] = r.literal_agrees();
    json pl = json::array();
    for (const auto& v : r.places) {
        pl.push_back({{"place", v.ell == 0 ? std::string("inf") : std::to_string(v.ell)},
                      {"kind", v.ell == 0 ? std::string("archimedean") : to_string(v.kind)},
                      {"in_conductor", v.in_conductor},
                      {"cond_exp", v.cond_exp},
                      {"xi_value", v.xi_value.str()},
                      {"tate_W", v.tate_W.str()},
                      {"tate_sign", v.tate_sign},
                      {"literal_W", v.literal_W.str()},
                      {"literal_sign", v.literal_sign}});
    }
    j["places"] = pl;
    return j;
}

json ledger_json(const RhsResult& r) {
    json a = json::array();
    for (const auto& e : r.ledger) {
        a.push_back({{"place", e.ell},
                     {"kind", to_string(e.kind)},
                     {"mu_p", e.mu.str()},
                     {"vp_log", e.vp_log},
                     {"log_ratio", q_str(e.log_ratio)},
                     {"mu_prime_v", q_str(e.mu_prime_v)}});
    }
    return a;
}

json witness_json(const Witness& w) {
    json j;
    j["target"] = w.target == WitnessTarget::global ? "global" : "place";
    j["place"] = w.place;
    j["aux_prime"] = w.aux_prime;
    j["beta"] = q_str(w.beta);
    j["u"] = w.u;
    json cm = json::object();
    for (const auto& [ell, e] : w.cmap) cm[std::to_string(ell)] = e;
    j["cmap"] = cm;
    j["achieved"] = w.achieved.str();
    j["expected"] = q_str(w.expected);
    j["vanishing"] = {{"place", w.vanishing.ell}, {"kind", to_string(w.vanishing.kind)}, {"case", w.vanishing.case_no}};
    return j;
}

json certificate_json(const MuCertificate& c) {
    json j;
    j["character"] = {{"label", c.label}, {"d", c.d}, {"k", c.k}};
    j["p"] = c.p;
    j["hypotheses"] = hypotheses_json(c.hyp);
    j["root_number"] = roots_json(c.roots);
    j["epsilon"] = {{"q", c.eps.q},
                    {"raw", c.eps.raw.str()},
                    {"kappa", c.eps.kappa.str()},
                    {"value", c.eps.value.str()},
                    {"sigma", c.eps.sigma}};
    j["rhs"] = q_str(c.rhs.rhs);
    j["mu_prime"] = q_str(c.rhs.mu_prime);
    j["ledger"] = ledger_json(c.rhs);
    j["witness"] = c.global_witness ? witness_json(*c.global_witness) : json(nullptr);
    json pw = json::array();
    for (const auto& w : c.place_witnesses) pw.push_back(witness_json(w));
    j["place_witnesses"] = pw;
    json lw = json::array();
    for (const auto& w : c.local_witnesses)
        lw.push_back({{"place", w.ell}, {"eta", q_str(w.eta)}, {"achieved", w.achieved.str()}, {"mu_p", w.mu.str()}});
    j["local_witnesses"] = lw;
    j["grid"] = grid_json(c.grid);
    j["c_convention"] = 2;
    j["d_F"] = 1;
    j["precision"] = c.precision;
    j["lower_bound_attested"] = c.lower_bound_attested;
    j["stabilized"] = c.stabilized;
    j["beta_uniformity"] = "tested-not-proved";
    j["failures"] = c.failures;
    j["first_failure"] = c.failures.empty() ? json(nullptr) : json(c.failures.front());
    j["verdict"] = c.equal() ? "equal" : "not_equal";
    return j;
}

json refusal_json(const GlobalHeckeChar& lam, long p, const Hypotheses& h, const HypothesisError& err) {
    json j;
    j["character"] = character_json(lam);
    j["p"] = p;
    j["hypotheses"] = hypotheses_json(h);
    j["verdict"] = "refused";
    j["refusal"] = refusal_str(err.code);
    j["first_failure"] = err.what();
    return j;
}

std::string dump_certificate(const json& j) { return j.dump(2) + "\n"; }

void write_certificate(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << dump_certificate(j);
}

}  // namespace muderiv
