#include "slnz/constants.hpp"

#include <cmath>
#include <deque>
#include <random>

#include "slnz/errors.hpp"

namespace slnz {

double rel_const_l(long p) {
    if (p < 2) throw PolicyError("rel_const_l: p >= 2 required");
    return std::sqrt(static_cast<double>(p) + 25.0) + 3.0;
}

double rel_const_k(long n) {
    if (n < 4) throw PolicyError("rel_const_k: n >= 4 required (p, q >= 2)");
    return std::sqrt(2.5 * static_cast<double>(n) + 60.0) + 6.0;
}

double h_quadratic_base(long n) {
    double x = static_cast<double>(n);
    return 33.0 * x * x - 11.0 * x + 1152.0;
}

double h_closed_form(long n) { return 90.0 * std::sqrt(static_cast<double>(n)) + 4000.0; }

HTable::HTable(long n_max) {
    if (n_max < 3) throw PolicyError("HTable: n_max >= 3 required");
    h_.assign(n_max + 1, 0.0);
    choice_.assign(n_max + 1, 0);
    // Sliding-window minimum over j in [ceil(2n/3), n-2] (the recursion
    // h(n) <= h(n-i) + 10k(n), 2 <= i <= n/3).
    std::deque<long> dq;
    long pushed = 2; // next j to enter the window
    for (long n = 3; n <= n_max; ++n) {
        double best = h_quadratic_base(n);
        long pick = 0;
        if (n >= 6) {
            long jr = n - 2, jl = (2 * n + 2) / 3;
            while (pushed <= jr) {
                if (pushed >= 3) {
                    while (!dq.empty() && h_[dq.back()] > h_[pushed]) dq.pop_back();
                    dq.push_back(pushed);
                }
                ++pushed;
            }
            while (!dq.empty() && dq.front() < jl) dq.pop_front();
            if (!dq.empty()) {
                double cand = h_[dq.front()] + 10.0 * rel_const_k(n);
                if (cand < best) {
                    best = cand;
                    pick = n - dq.front(); // the step i
                }
            }
        }
        h_[n] = best;
        choice_[n] = pick;
    }
}

double HTable::at(long n) const {
    if (n < 3 || n > n_max()) throw PolicyError("HTable::at: n out of range");
    return h_[n];
}

SurdSum HTable::exact_at(long n) const {
    if (n < 3 || n > n_max()) throw PolicyError("HTable::exact_at: n out of range");
    SurdSum acc;
    long m = n;
    while (choice_[m] != 0) {
        // 10*k(m) = 5*sqrt(10m + 240) + 60 exactly
        acc = acc + SurdSum::sqrt_of(10 * m + 240, 5) + SurdSum(60);
        m -= choice_[m];
    }
    long q = 33 * m * m - 11 * m + 1152;
    return acc + SurdSum(q);
}

void RecursionParams::validate() const {
    if (a <= 0 || b <= 0 || c <= 0) throw PolicyError("recursion: a, b, c must be positive");
    if (!(lambda > 0 && lambda < 1)) throw PolicyError("recursion: lambda in (0,1) required");
    if (!(static_cast<double>(n0) > 1.0 / (1.0 - lambda * lambda)))
        throw PolicyError("recursion: n0 > 1/(1 - lambda^2) required");
}

double RecursionParams::A() const { return std::sqrt(a) / (1.0 - lambda); }

double RecursionParams::B() const {
    return (b + a / (1.0 - lambda * lambda)) / ((1.0 - lambda) * std::sqrt(a));
}

double RecursionParams::n0_tilde() const {
    return static_cast<double>(n0) - 1.0 / (1.0 - lambda * lambda);
}

RecursionParams displacement_recursion_params() {
    RecursionParams p;
    p.a = 250;
    p.b = 6000;
    p.c = 60;
    p.lambda = std::sqrt(2.0 / 3.0);
    p.n0 = 7;
    p.f_n0 = 2692;
    return p;
}

double recursion_closed_form(const RecursionParams& p, long n) {
    p.validate();
    if (n < p.n0) throw PolicyError("recursion_closed_form: n >= n0 required");
    double nt = p.n0_tilde();
    double lam2 = p.lambda * p.lambda;
    double log_l2 = std::log(static_cast<double>(n) / nt) / std::log(lam2);
    return p.A() * (std::sqrt(static_cast<double>(n)) - p.lambda * std::sqrt(nt)) -
           p.c * (log_l2 + 1.0) + p.B() / std::sqrt(nt) + p.f_n0;
}

std::vector<double> recursion_iterate_oracle(const RecursionParams& p, long n_max) {
    p.validate();
    // Exact integer ceil for the rational ratio lambda^2 = 2/3; for other
    // ratios fall back to a guarded floating ceil.
    bool two_thirds = std::abs(p.lambda * p.lambda - 2.0 / 3.0) < 1e-15;
    std::vector<double> f(n_max + 1, p.f_n0);
    for (long n = p.n0 + 1; n <= n_max; ++n) {
        long next;
        if (two_thirds) {
            next = (2 * n + 2) / 3;
        } else {
            double x = p.lambda * p.lambda * static_cast<double>(n);
            next = static_cast<long>(std::ceil(x - 1e-12));
            if (static_cast<double>(next) < x) ++next;
        }
        if (next > n_max) throw Error("recursion oracle: step escaped the table (internal)");
        f[n] = f[std::min(next, n)] + std::sqrt(p.a * static_cast<double>(n) + p.b) + p.c;
    }
    return f;
}

KazhdanBounds kazhdan_bounds(long n, const HTable& table) {
    if (n < 3) throw PolicyError("kazhdan_bounds: n >= 3 required");
    KazhdanBounds kb;
    kb.n = n;
    double s = std::sqrt(static_cast<double>(n));
    kb.lower_A = 1.0 / (64.0 * s + 2850.0);
    kb.lower_Aprime = 1.0 / (42.0 * s + 860.0);
    kb.lower_Adoubleprime = 1.0 / (31.0 * s + 700.0);
    kb.upper = std::sqrt(2.0 / static_cast<double>(n));
    kb.sqrt2_over_h_dp = std::sqrt(2.0) / table.at(n);
    kb.sqrt2_over_h_closed = std::sqrt(2.0) / h_closed_form(n);
    return kb;
}

double log_order_sl_fp(long n, long p) {
    double lp = std::log(static_cast<double>(p));
    double acc = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1) * lp;
    for (long i = 2; i <= n; ++i)
        acc += static_cast<double>(i) * lp + std::log1p(-std::pow(static_cast<double>(p), -static_cast<double>(i)));
    return acc;
}

ApplicationBounds application_bounds(long n, std::optional<long> p,
                                     std::optional<double> group_log) {
    if (n < 3) throw PolicyError("application_bounds: n >= 3 required");
    ApplicationBounds ab;
    ab.n = n;
    ab.p = p;
    double s = std::sqrt(static_cast<double>(n));
    ab.kazhdan_used = p ? 1.0 / (31.0 * s + 700.0) : 1.0 / (42.0 * s + 860.0);
    ab.spectral_lower = ab.kazhdan_used * ab.kazhdan_used / 4.0;
    ab.spectral_upper = 1.0 / static_cast<double>(n);
    if (group_log) {
        ab.log_group_size = *group_log;
    } else if (p) {
        ab.log_group_size = log_order_sl_fp(n, *p);
    }
    if (ab.log_group_size > 0) {
        ab.mixing_bound = ab.log_group_size / ab.spectral_lower;
        ab.mixing_bound_literal = ab.spectral_lower * ab.log_group_size;
        double kA = 64.0 * s + 2850.0;
        ab.pra_bound = static_cast<double>(n) * kA * kA * ab.log_group_size;
    }
    return ab;
}

bool ChainReport::all_pass() const {
    if (violations != 0) return false;
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

namespace {

ChainCheck exact_check(const std::string& name, bool pass, const std::string& detail = "") {
    return ChainCheck{name, pass, detail};
}

} // namespace

ChainReport verify_chain_R2(std::uint64_t sample_seed, int samples) {
    ChainReport rep;

    // c = 2 + sqrt(10) is the positive root of c^2 = 4c + 6.
    SurdSum c = SurdSum(2) + SurdSum::sqrt_of(10);
    rep.checks.push_back(exact_check("root_2_plus_sqrt10", (c * c - SurdSum(4) * c - SurdSum(6)).is_zero()));

    // (2+sqrt(10))^2 = 14 + 4 sqrt(10) and (13 + 4 sqrt(10)) + 1 matches it.
    SurdSum csq = c * c;
    SurdSum s13 = SurdSum(13) + SurdSum::sqrt_of(10, 4);
    rep.checks.push_back(exact_check("sum_identity", csq == SurdSum(14) + SurdSum::sqrt_of(10, 4)));
    rep.checks.push_back(exact_check("sum_plus_one_is_square", s13 + SurdSum(1) == csq));

    // r = 7/2 + 2 sqrt(3) is the positive root of r^2 - 7r + 1/4 = 0.
    SurdSum r = SurdSum(mpq_class(7, 2)) + SurdSum::sqrt_of(3, 2);
    rep.checks.push_back(exact_check(
        "root_7half_plus_2sqrt3",
        (r * r - SurdSum(7) * r + SurdSum(mpq_class(1, 4))).is_zero()));

    // (1+sqrt(3))^2 = 4 + 2 sqrt(3) and (7/2 + 2 sqrt(3)) + 1/2 matches it.
    SurdSum u = SurdSum(1) + SurdSum::sqrt_of(3);
    rep.checks.push_back(exact_check("max_identity", u * u == SurdSum(4) + SurdSum::sqrt_of(3, 2)));
    rep.checks.push_back(exact_check("max_plus_half_is_square", r + SurdSum(mpq_class(1, 2)) == u * u));

    // Roots are maximal: beyond them the quadratics are positive, below
    // they are nonpositive (checked on exact rational offsets).
    bool root_sides = true;
    for (int t = 1; t <= 20; ++t) {
        mpq_class eps(t, 7);
        SurdSum above = c + SurdSum(eps);
        if ((above * above - SurdSum(4) * above - SurdSum(6)).sign() <= 0) root_sides = false;
        SurdSum below = c - SurdSum(eps);
        if (below.sign() > 0 && (below * below - SurdSum(4) * below - SurdSum(6)).sign() > 0)
            root_sides = false;
        SurdSum rabove = r + SurdSum(eps);
        if ((rabove * rabove - SurdSum(7) * rabove + SurdSum(mpq_class(1, 4))).sign() <= 0)
            root_sides = false;
    }
    rep.checks.push_back(exact_check("roots_are_maximal", root_sides));

    // Cauchy-Schwarz step: sum sqrt(a_i) <= sqrt(k * sum a_i), exact on
    // random integer samples (squared comparison in Z[sqrt(...)]).
    std::mt19937_64 rng(sample_seed);
    bool cs_ok = true;
    for (int it = 0; it < samples && cs_ok; ++it) {
        int k = 1 + static_cast<int>(rng() % 6);
        std::vector<long> a(k);
        for (auto& x : a) x = 1 + static_cast<long>(rng() % 1000);
        SurdSum lhs;
        for (long x : a) lhs = lhs + SurdSum::sqrt_of(x);
        SurdSum lhs2 = lhs * lhs;
        long total = 0;
        for (long x : a) total += x;
        SurdSum rhs2 = SurdSum(static_cast<long>(k)) * SurdSum(total);
        if ((rhs2 - lhs2).sign() < 0) cs_ok = false;
    }
    rep.checks.push_back(exact_check("cauchy_schwarz_step", cs_ok));

    for (const auto& ck : rep.checks)
        if (!ck.pass) ++rep.violations;
    return rep;
}

ChainReport verify_chain_Rp(long p_max) {
    ChainReport rep;
    long bad_main = 0, bad_aggr = 0;
    for (long p = 2; p <= p_max; ++p) {
        // (p + 6 sqrt p + 33) <= (sqrt(p+25) + 3)^2  <=>  6 sqrt p <= 1 + 6 sqrt(p+25)
        SurdSum lhs = SurdSum::sqrt_of(p, 6);
        SurdSum rhs = SurdSum(1) + SurdSum::sqrt_of(p + 25, 6);
        if (!(lhs <= rhs)) ++bad_main;
        // aggregation: 4 sqrt10 + 2 sqrt3 + 2 sqrt(p-2) + 2 sqrt(3(p-2)) <= 17 + 6 sqrt p
        SurdSum al = SurdSum::sqrt_of(10, 4) + SurdSum::sqrt_of(3, 2) +
                     SurdSum::sqrt_of(p - 2, 2) + SurdSum::sqrt_of(3 * (p - 2), 2);
        SurdSum ar = SurdSum(17) + SurdSum::sqrt_of(p, 6);
        if (!(al <= ar)) ++bad_aggr;
    }
    rep.checks.push_back(exact_check("rp_main_inequality", bad_main == 0,
                                     std::to_string(bad_main) + " violations"));
    rep.checks.push_back(exact_check("rp_aggregation_step", bad_aggr == 0,
                                     std::to_string(bad_aggr) + " violations"));
    rep.violations = bad_main + bad_aggr;
    return rep;
}

ChainReport verify_chain_Rpq(long p_max, long q_max) {
    ChainReport rep;
    long bad = 0;
    // (3p + 2q + 97 + 18 sqrt p) <= (sqrt(3p+2q+60) + 6)^2
    //   <=>  1 + 18 sqrt p <= 12 sqrt(3p+2q+60)
    //   <=>  1296 p <= (108 p + 288 q + 8639)^2   [exact, both sides >= 0]
    for (long p = 2; p <= p_max; ++p) {
        long long lhs = 1296LL * p;
        for (long q = 2; q <= q_max; ++q) {
            long long r = 108LL * p + 288LL * q + 8639LL;
            if (lhs > r * r) ++bad;
        }
    }
    // Exact spot checks at the corner via surd arithmetic.
    SurdSum corner_l = SurdSum(1) + SurdSum::sqrt_of(2, 18);
    SurdSum corner_r = SurdSum::sqrt_of(3 * 2 + 2 * 2 + 60, 12);
    rep.checks.push_back(exact_check("rpq_corner_p2_q2", corner_l <= corner_r));
    rep.checks.push_back(exact_check("rpq_sweep", bad == 0, std::to_string(bad) + " violations"));
    rep.violations = bad;
    return rep;
}

ConsistencyReport consistency_report(long n_lo, long n_hi, const HTable& table) {
    ConsistencyReport rep;
    SurdSum sqrt2 = SurdSum::sqrt_of(2);

    // sqrt(2)*(64 sqrt n + 2850) >= 90 sqrt n + 4000 holds coefficientwise.
    bool lead_ok = (sqrt2 * SurdSum(64) - SurdSum(90)).sign() > 0;
    bool tail_ok = (sqrt2 * SurdSum(2850) - SurdSum(4000)).sign() > 0;
    rep.verified.push_back(
        exact_check("thmA_implied_by_h_bound", lead_ok && tail_ok,
                    "sqrt2*64 > 90 and sqrt2*2850 > 4000, exact"));

    // The 50-variant fails the same coefficient test: flagged.
    bool fifty_lead = (sqrt2 * SurdSum(50) - SurdSum(90)).sign() >= 0;
    if (!fifty_lead)
        rep.flags.push_back(
            {"lowerA_50_vs_64",
             "stated constant pair (50*sqrt(n)+2850)^-1 vs (64*sqrt(n)+2850)^-1: the "
             "displacement bound 90*sqrt(n)+4000 implies only the 64-variant "
             "(sqrt(2)*50 < 90, exact)"});

    // (33 sqrt n + 317)^-1 strictly exceeds (42 sqrt n + 860)^-1 for every n,
    // so only the 42-variant is implied by h <= sqrt(2)(42 sqrt n + 860).
    bool remark_stronger = 33 < 42 && 317 < 860;
    if (remark_stronger)
        rep.flags.push_back(
            {"lowerAprime_33_317_vs_42_860",
             "stated constant pair (33*sqrt(n)+317)^-1 vs (42*sqrt(n)+860)^-1: the former is "
             "strictly larger for all n and is not implied by h <= sqrt(2)*(42*sqrt(n)+860)"});

    // Sweep: H(n) <= 90 sqrt(n) + 4000, with an exact fallback near margins.
    long bad = 0;
    for (long n = std::max(3L, n_lo); n <= std::min(n_hi, table.n_max()); ++n) {
        double lhs = table.at(n), rhs = h_closed_form(n);
        if (lhs <= rhs && rhs - lhs > 1e-9 * rhs) continue;
        SurdSum exact_rhs = SurdSum(4000) + SurdSum::sqrt_of(n, 90);
        if (!(table.exact_at(n) <= exact_rhs)) ++bad;
    }
    rep.verified.push_back(exact_check("h_dp_below_90sqrtn_4000", bad == 0,
                                       std::to_string(bad) + " violations in sweep"));

    // The DP never exceeds its quadratic base (structural, still checked).
    long bad_base = 0;
    for (long n = std::max(3L, n_lo); n <= std::min(n_hi, table.n_max()); ++n)
        if (table.at(n) > h_quadratic_base(n) + 1e-9) ++bad_base;
    rep.verified.push_back(exact_check("h_dp_below_quadratic_base", bad_base == 0));

    rep.fp_remark_constant_n3 = 1.0 / (24.0 * std::sqrt(3.0) + 100.0);
    return rep;
}

} // namespace slnz
