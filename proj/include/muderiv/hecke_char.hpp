#pragma once

#include "muderiv/exact.hpp"
#include "muderiv/quad_field.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace muderiv {

struct CharacterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// a finite place of K: the prime above ell with index `which` in classify_prime order
struct Place {
    long ell = 0;
    SplitKind kind = SplitKind::inert;
    int which = 0;
    std::string str() const;
    bool operator<(const Place& o) const { return std::tie(ell, which) < std::tie(o.ell, o.which); }
    bool operator==(const Place& o) const { return ell == o.ell && which == o.which; }
};

struct UnitEntry {
    Elt residue;         // representative unit
    int depth = 0;       // largest n with residue in 1 + pi^n, 0 if residue is not 1 mod pi
    RootOfUnity value;
};

// Local character of F_v^x (f_level) or K_w^x. The uniformizer value refers to the
// uniformizer ell of F_v and is present whenever it is rational (non-split places).
struct LocalChar {
    Place place;
    bool f_level = false;
    int modulus_exp = 1;  // units tabulated modulo pi^modulus_exp
    std::optional<ExactValue> uniformizer_value;
    std::vector<UnitEntry> unit_table;
    int cond_exp = 0;
};

// tabulate a character of Z_ell^x given on residues mod ell^e
LocalChar make_f_level_char(long ell, SplitKind kind, int e, const std::function<RootOfUnity(long)>& chi,
                            std::optional<ExactValue> uniformizer_value);

enum class TwistType { split, inert };

// anticyclotomic finite-order twist: split ell -> phi^j(a/b), inert ell -> chi_G^j on F_{ell^2}^x/F_ell^x
struct TwistComponent {
    TwistType type = TwistType::split;
    long ell = 0;
    long j = 1;
};

struct ConductorPrime {
    Place place;
    PrimeIdeal prime;
    int exponent = 1;
};

class GlobalHeckeChar {
public:
    GlobalHeckeChar(const QuadField& K, int k, std::vector<TwistComponent> twists);

    const QuadField& field() const { return K_; }
    int weight() const { return k_; }
    long q() const { return q_; }
    const std::vector<TwistComponent>& twists() const { return twists_; }
    long norm_shift() const { return shift_; }
    bool is_star() const { return star_; }
    bool is_conjugate() const { return conj_; }
    std::string label() const;
    long cyclo_level() const { return level_; }

    const std::vector<ConductorPrime>& conductor() const { return conductor_; }
    std::vector<ConductorPrime> conductor_plus() const;
    std::vector<ConductorPrime> conductor_minus() const;
    // split refinement: F collects the first prime above each split conductor prime, F_c the second
    std::vector<ConductorPrime> split_F() const;
    std::vector<ConductorPrime> split_Fc() const;
    long conductor_norm() const;

    bool coprime_to_conductor(const Elt& a) const;
    // value of the local component at w on a unit alpha (alpha prime to w); trivial if w unramified
    RootOfUnity local_unit_value(const Place& w, const Elt& alpha) const;
    RootOfUnity epsilon(const Elt& alpha) const;
    // lambda((alpha)) for alpha prime to the conductor, exact (not available for the unitary star form)
    Cyclo value(const Elt& alpha) const;
    Complex value_complex(const Elt& alpha) const;
    Cyclo ideal_value(const IdealRep& I) const;
    Complex ideal_value_complex(const IdealRep& I) const;

    GlobalHeckeChar with_norm_shift(long s) const;
    GlobalHeckeChar star() const;
    GlobalHeckeChar conjugate() const;

    const std::vector<PrimeSplit>& conductor_splits() const { return splits_; }

private:
    QuadField K_;
    int k_;
    long q_;
    std::vector<TwistComponent> twists_;
    long shift_ = 0;
    bool star_ = false;
    bool conj_ = false;
    long level_ = 1;
    std::vector<ConductorPrime> conductor_;
    std::vector<PrimeSplit> splits_;
    std::map<long, std::vector<long>> split_log_;  // split ell -> discrete log on F_ell^x
    std::map<long, std::vector<long>> inert_log_;  // inert ell -> discrete log on F_{ell^2}^x, index a + b*ell

    RootOfUnity base_unit_value(const Place& w, const Elt& alpha) const;
    const TwistComponent* twist_at(long ell) const;
};

// twist label grammar: "canonical" or "canonical+split:ell:j+inert:ell:j..."
std::vector<TwistComponent> parse_twist_label(const std::string& label);
std::string twist_label(const std::vector<TwistComponent>& twists);

// conductor given as [[ell, e], ...]; the label selects the twist characters (j = 1 when omitted)
GlobalHeckeChar build_selfdual_char(const QuadField& K, int k, const std::vector<std::pair<long, int>>& conductor,
                                    const std::string& label = "");

// local component at w; for non-split places the uniformizer value is lambda_v(ell)
LocalChar local_component(const GlobalHeckeChar& lambda, const Place& w);
// restriction of a non-split local component to F_v^x
LocalChar restrict_to_F(const LocalChar& chi);
GlobalHeckeChar lambda_star(const GlobalHeckeChar& lambda);
GlobalHeckeChar twist_by_norm(const GlobalHeckeChar& lambda, long s);
// the self-duality invariant on F_v^x: restriction of lambda* equals tau_{K_v/F_v}
bool restriction_is_tau(const GlobalHeckeChar& lambda, const Place& w);
// lambda_v(ell) on the F-uniformizer at any finite place v = ell (both primes together when v splits)
ExactValue f_uniformizer_value(const GlobalHeckeChar& lambda, long ell);
Place place_of(const QuadField& K, long ell, int which = 0);
// tau_{K_v/F_v} on a nonzero rational, F_v = Q_ell
int tau_local(const QuadField& K, long ell, const mpq_class& x);

}  // namespace muderiv
