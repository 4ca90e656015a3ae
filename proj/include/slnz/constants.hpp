#ifndef SLNZ_CONSTANTS_HPP
#define SLNZ_CONSTANTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "slnz/errors.hpp"
#include "slnz/surd.hpp"

namespace slnz {

// ---- relative-property constants ----

// l(p) = sqrt(p + 25) + 3, the relative constant for SL_p x| Z^p (p >= 2).
double rel_const_l(long p);
// k(n) = sqrt(5n/2 + 60) + 6, the relative constant for the parabolic
// (SL_p x SL_q) x| Z^pq with n = p + q (n >= 4).
double rel_const_k(long n);

// ---- the h(n) displacement bound ----

// Quadratic displacement base: 33n^2 - 11n + 1152.
double h_quadratic_base(long n);

// Dynamic program H(n) = min(base, min over 2 <= i <= n/3 of
// H(n-i) + 10*k(n)); H(3..) computed in one sweep.
class HTable {
public:
    explicit HTable(long n_max);
    double at(long n) const;
    long n_max() const { return static_cast<long>(h_.size()) - 1; }

    // Exact surd form of H(n), reconstructed along the DP decision path.
    SurdSum exact_at(long n) const;

private:
    std::vector<double> h_;
    std::vector<long> choice_; // 0 = quadratic base, else the step i taken
};

double h_closed_form(long n); // 90*sqrt(n) + 4000

// ---- the displacement recursion ----

struct RecursionParams {
    double a = 0, b = 0, c = 0;
    double lambda = 0; // ratio in (0,1)
    long n0 = 0;
    double f_n0 = 0;

    void validate() const; // n0 > 1/(1 - lambda^2), positivity
    double A() const;      // sqrt(a)/(1 - lambda)
    double B() const;      // (b + a/(1-lambda^2)) / ((1-lambda)*sqrt(a))
    double n0_tilde() const;
};

RecursionParams displacement_recursion_params(); // a=250 b=6000 c=60 lambda=sqrt(2/3) n0=7 f=2692

double recursion_closed_form(const RecursionParams& p, long n);

// Exact iteration oracle F(n) = F(ceil(lambda^2 n)) + sqrt(a n + b) + c,
// F(m <= n0) = f(n0), tabulated up to n_max.
std::vector<double> recursion_iterate_oracle(const RecursionParams& p, long n_max);

// ---- Kazhdan constants ----

struct KazhdanBounds {
    long n = 0;
    double lower_A = 0;            // 1/(64 sqrt(n) + 2850)
    double lower_Aprime = 0;       // 1/(42 sqrt(n) + 860)
    double lower_Adoubleprime = 0; // 1/(31 sqrt(n) + 700)
    double upper = 0;              // sqrt(2/n)
    double sqrt2_over_h_dp = 0;
    double sqrt2_over_h_closed = 0;
};

KazhdanBounds kazhdan_bounds(long n, const HTable& table);

struct ApplicationBounds {
    long n = 0;
    std::optional<long> p;
    double kazhdan_used = 0;    // A'' constant when p is given, else A'
    double spectral_lower = 0;  // K^2/4
    double spectral_upper = 0;  // 1/n
    double log_group_size = 0;  // natural log
    double mixing_bound = 0;    // beta^-1 * log|G| (dimensionally consistent form)
    double mixing_bound_literal = 0; // beta * log|G| (the literal text form)
    double pra_bound = 0;       // n * K(SL_n(Z),E_n)^-2 * log|Gamma|
};

// log_group_size: natural log of |G| (or of |Gamma| for the product
// replacement bound). When p is given and group_log is absent, uses
// log |SL_n(F_p)|.
ApplicationBounds application_bounds(long n, std::optional<long> p,
                                     std::optional<double> group_log = std::nullopt);

double log_order_sl_fp(long n, long p); // natural log of |SL_n(F_p)|

// ---- inequality chains (all exact) ----

struct ChainCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ChainReport {
    std::vector<ChainCheck> checks;
    long violations = 0;
    bool all_pass() const;
};

// Exact algebra behind the torus measure chain on T^2: quadratic roots,
// the two square identities, and the Cauchy-Schwarz step.
ChainReport verify_chain_R2(std::uint64_t sample_seed = 2024, int samples = 1000);

// (p + 6 sqrt(p) + 33) <= (sqrt(p+25) + 3)^2 for all 2 <= p <= p_max, plus
// the aggregation step bound; exact arithmetic.
ChainReport verify_chain_Rp(long p_max);

// (3p + 2q + 97 + 18 sqrt(p)) <= (sqrt(3p+2q+60) + 6)^2 for all pairs
// 2 <= p <= p_max, 2 <= q <= q_max; exact squared forms.
ChainReport verify_chain_Rpq(long p_max, long q_max);

// ---- cross-consistency of the stated constants ----

struct ConsistencyFlag {
    std::string id;
    std::string description;
};

struct ConsistencyReport {
    std::vector<ConsistencyFlag> flags; // exactly the known textual discrepancies
    std::vector<ChainCheck> verified;   // relations that do hold (exact)
    // Informational: the alternate field-case constant 1/(24 sqrt(n) + 100)
    // alongside (31 sqrt(n) + 700)^-1; reported, not flagged.
    double fp_remark_constant_n3 = 0;
};

ConsistencyReport consistency_report(long n_lo, long n_hi, const HTable& table);

} // namespace slnz

#endif
