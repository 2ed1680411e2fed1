#pragma once

#include "muderiv/local_analysis.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace muderiv {

// exit-code aligned refusal reasons
enum class Refusal { none = 0, ord = 3, class_number = 4, root_number = 5, character = 6, unsupported = 7 };
std::string refusal_str(Refusal r);

struct HypothesisError : std::runtime_error {
    Refusal code;
    HypothesisError(Refusal c, const std::string& what) : std::runtime_error(what), code(c) {}
};

struct Hypotheses {
    bool p_odd_prime = false;
    bool p_split = false;
    bool p_ndvd_h = false;
    bool p_ndvd_units = false;
    bool p_ndvd_conductor = false;
    bool minus_part_supported = false;  // conductor minus part is (sqrt(-q)) only
    int W = 0;
    Refusal first_failure() const;
};

Hypotheses check_hypotheses(const GlobalHeckeChar& lam, long p);

enum class AssemblyMode { value, derivative };

// coef * log_p|w_ell|
struct LogTerm {
    ExactValue coef;
    long ell = 0;
};

struct CoefficientAssembly {
    mpq_class beta;
    long u = 0;                   // class in D_0, 1 <= u <= (p-1)/2; 0 if beta is not a unit at p
    std::map<long, long> cmap;    // v(c_v) at the listed places, 0 elsewhere
    std::vector<LocalFactor> factors;
    ExactValue total;
    std::vector<LogTerm> deriv_terms;  // deriv_total = sum of the terms
    bool in_support = true;
    std::string reason;           // why beta is outside the support

    int vanished_count() const;
    bool deriv_is_zero() const;
    // v_p(deriv_total), infinite when it vanishes
    Valuation deriv_val(long p, long prec = kDefaultPrecision) const;
    // v_p(deriv_total / log_p(1+p))
    Valuation normalized_val(long p, long prec = kDefaultPrecision) const;
    ExactValue constant_product() const;
    // product of the rational s-parts at integer s, and the closed-form derivative of that product at 0
    PadicNum rational_product_at(long p, const mpz_class& s, long prec = kDefaultPrecision) const;
    PadicNum rational_derivative_padic(long p, long prec = kDefaultPrecision) const;
};

// context shared by many assemblies of one character at one prime
struct AssemblyContext {
    GlobalHeckeChar lam;
    long p;
    long q;
    RootNumberData roots;
    PinnedEpsilon eps;
    std::vector<Place> split_F;     // w | F
    std::vector<long> conductor_ells;  // sorted

    AssemblyContext(const GlobalHeckeChar& lam, long p);
};

// D_0 class of a p-adic unit rational: a with beta = +-a mod p, 1 <= a <= (p-1)/2
long d0_class(const mpq_class& beta, long p);

CoefficientAssembly assemble_coefficient(const AssemblyContext& ctx, AssemblyMode mode, const mpq_class& beta, long u,
                                         const std::map<long, long>& cmap = {});

struct VanishingWitness {
    long ell = 0;
    SplitKind kind = SplitKind::inert;
    int case_no = 0;  // 1: A-factor at a conductor place, 2: a-factor at an inert place outside the conductor
};

VanishingWitness vanishing_witness(const AssemblyContext& ctx, const mpq_class& beta, const std::map<long, long>& cmap = {});

struct LedgerEntry {
    long ell = 0;
    SplitKind kind = SplitKind::ramified;
    Valuation mu;                // mu_p(lambda_v)
    long vp_log = 0;             // v_p(log_p ell)
    mpq_class log_ratio;         // v_p(log_p|w_v| / log_p(1+p))
    mpq_class mu_prime_v;        // mu'_{p,v}
};

struct RhsResult {
    std::vector<LedgerEntry> ledger;
    mpq_class mu_prime;  // mu'_p = sum of mu_p(lambda_v)
    mpq_class rhs;
};

RhsResult mu_formula_rhs(const GlobalHeckeChar& lam, long p);
// fills mu_prime, mu_prime_v and rhs from the mu and log_ratio columns
RhsResult rhs_from_ledger(std::vector<LedgerEntry> ledger);

struct GridPoint {
    mpq_class beta;
    long u = 0;
    Valuation val;
};

struct GridResult {
    long bound = 0;
    long evaluated = 0;
    long in_support = 0;
    bool all_totals_vanish = true;
    bool single_vanishing = true;   // deriv_total != 0 only with exactly one vanishing factor
    bool floors_hold = true;        // every v_p(A_{beta,v}) >= mu_p(lambda_v)
    std::optional<GridPoint> argmin;      // over numerators <= bound
    std::optional<GridPoint> argmin_half; // over numerators <= bound / 2
    Valuation min() const { return argmin ? argmin->val : Valuation::inf(); }
    Valuation min_half() const { return argmin_half ? argmin_half->val : Valuation::inf(); }
};

// beta in {n, n/q : 1 <= n <= bound}; threads <= 0 reads MU_DERIV_THREADS or uses the hardware count
GridResult brute_force_mu(const AssemblyContext& ctx, long bound, int threads = 0);

enum class WitnessTarget { global, place };

struct Witness {
    WitnessTarget target = WitnessTarget::global;
    long place = 0;      // v_1 for place targets
    long aux_prime = 0;  // q_1 for the global target
    mpq_class beta;
    long u = 0;
    std::map<long, long> cmap;
    Valuation achieved;
    mpq_class expected;
    VanishingWitness vanishing;
};

// smallest inert prime q1 not dividing p q with q1 = a mod p and q1 != a mod p^2 for some 1 <= a < p
bool lemma_congruence(long q1, long p);
// auxiliary inert prime with v_p(log_p q1) = 1, avoiding the listed primes
long find_aux_prime(const QuadField& K, long p, const std::vector<long>& avoid, long limit = 100000);

Witness construct_witness(const AssemblyContext& ctx, WitnessTarget target, long place = 0, long search_limit = 200000);

// eta with v_p(A_{eta,v}) = mu_p(lambda_v) at a conductor place v
struct LocalWitness {
    long ell = 0;
    mpq_class eta;
    Valuation achieved;
    Valuation mu;
};

std::optional<LocalWitness> local_floor_witness(const AssemblyContext& ctx, long ell, long search = 1000);

struct MuCertificate {
    std::string label;
    long d = 0, p = 0;
    int k = 0;
    Hypotheses hyp;
    RootNumberData roots;
    PinnedEpsilon eps;
    RhsResult rhs;
    std::optional<Witness> global_witness;
    std::vector<Witness> place_witnesses;
    std::vector<LocalWitness> local_witnesses;
    GridResult grid;
    bool lower_bound_attested = false;
    bool stabilized = false;
    long precision = kDefaultPrecision;
    std::vector<std::string> failures;
    bool equal() const { return failures.empty(); }
};

MuCertificate verify_theorem_a(const GlobalHeckeChar& lam, long p, long bound, long precision = kDefaultPrecision,
                               int threads = 0);

}  // namespace muderiv
