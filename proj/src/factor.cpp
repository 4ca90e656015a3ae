#include "slnz/factor.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace slnz {

Factor Factor::generalized(GenTransvection g, FactorSide side, int level) {
    Factor f;
    f.kind = FactorKind::Generalized;
    f.side = side;
    f.level = level;
    f.gen = std::move(g);
    return f;
}

Factor Factor::elementary(ElemTransvection e, int level) {
    Factor f;
    f.kind = FactorKind::Elementary;
    f.side = FactorSide::Left;
    f.level = level;
    f.elem = std::move(e);
    return f;
}

IntMat Factor::matrix() const {
    return kind == FactorKind::Generalized ? to_matrix(gen) : to_matrix(elem);
}

namespace {

// Lift a factor of an embedded SL_{n-off} block into ambient dimension n.
Factor shift_factor(const Factor& f, int off, int n) {
    if (f.kind == FactorKind::Elementary) {
        Factor r = Factor::elementary(ElemTransvection(n, f.elem.i + off, f.elem.j + off, f.elem.m),
                                      f.level);
        r.side = f.side;
        return r;
    }
    std::vector<int> I = f.gen.I, J = f.gen.J;
    for (int& x : I) x += off;
    for (int& x : J) x += off;
    Factor r = Factor::generalized(GenTransvection(n, I, J, f.gen.alpha), f.side, f.level);
    return r;
}

} // namespace

BlockDecomposition decompose_block(const IntMat& g, int k, ReducePolicy policy) {
    if (!g.is_square()) throw DimensionError("decompose_block: square matrix expected");
    int n = g.rows();
    if (k < 1) throw PolicyError("decompose_block: k >= 1 required");
    if (policy == ReducePolicy::Z3k && n < 3 * k)
        throw PolicyError("decompose_block: n >= 3k required");
    if (policy == ReducePolicy::Z2k1 && n < 2 * k + 1)
        throw PolicyError("decompose_block: n >= 2k+1 required");
    if (policy == ReducePolicy::Fp2k) throw PolicyError("decompose_block: integer policies only");
    if (det_exact(g) != 1)
        throw NotUnimodularError("decompose_block: determinant is not 1");

    // The first k entries of each row form a complete system of n vectors in
    // Z^k; reduce it to the standard system by left multiplications.
    IntMat block(n, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) block.at(i, j) = g.at(i, j);
    VectorSystem sys = VectorSystem::from_rows(block);
    ReductionTrace tr = reduce_to_standard(sys, policy);

    BlockDecomposition dec;
    dec.n = n;
    dec.k = k;

    IntMat reduced = g;
    for (const auto& op : tr.ops) reduced = mul(to_matrix(op), reduced);
    dec.intermediate = reduced;

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j)
            if (reduced.at(i, j) != (i == j ? 1 : 0))
                throw Error("decompose_block: peeling did not standardize (internal)");

    // reduced = op_m ... op_1 * g, so g = op_1^-1 ... op_m^-1 * reduced:
    // inverted factors keep the application order.
    for (const auto& op : tr.ops)
        dec.left.push_back(Factor::generalized(inverse(op), FactorSide::Left, 0));

    // One right multiplication clears the upper-right block.
    IntMat b(k, n - k);
    bool nz = false;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n - k; ++j) {
            b.at(i, j) = reduced.at(i, k + j);
            if (b.at(i, j) != 0) nz = true;
        }
    dec.g_star = IntMat(n - k, n - k);
    for (int i = 0; i < n - k; ++i)
        for (int j = 0; j < n - k; ++j) dec.g_star.at(i, j) = reduced.at(k + i, k + j);

    if (nz) {
        std::vector<int> I(n - k), J(k);
        for (int i = 0; i < n - k; ++i) I[i] = k + i + 1;
        for (int j = 0; j < k; ++j) J[j] = j + 1;
        IntMat alpha(n - k, k);
        for (int a = 0; a < n - k; ++a)
            for (int bb = 0; bb < k; ++bb) alpha.at(a, bb) = b.at(bb, a);
        dec.right = Factor::generalized(GenTransvection(n, I, J, alpha), FactorSide::Right, 0);
        dec.has_right = true;
    }
    return dec;
}

std::vector<Factor> base_case_sl3(const IntMat& g) {
    if (!g.is_square()) throw DimensionError("base_case: square matrix expected");
    int n = g.rows();
    if (det_exact(g) != 1) throw NotUnimodularError("base_case: determinant is not 1");

    IntMat m = g;
    std::vector<ElemTransvection> applied; // left-multiplied in order

    auto apply = [&](int i, int j, const Int& amt) { // row_i += amt * row_j
        if (amt == 0) return;
        for (int c = 0; c < n; ++c) m.at(i - 1, c) += amt * m.at(j - 1, c);
        applied.emplace_back(n, i, j, amt);
    };
    auto round_quot = [](const Int& a, const Int& b) {
        Int q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        if (b > 0 ? r * 2 > b : r * 2 < b) q += 1;
        return q;
    };

    // Forward pass: gcd-driven column clearing below the diagonal.
    for (int c = 0; c < n - 1; ++c) {
        for (;;) {
            int below = -1;
            for (int r = c + 1; r < n; ++r)
                if (m.at(r, c) != 0) { below = r; break; }
            if (below < 0) break;
            if (m.at(c, c) == 0) {
                apply(c + 1, below + 1, 1);
                continue;
            }
            if (abs(m.at(below, c)) >= abs(m.at(c, c))) {
                apply(below + 1, c + 1, -round_quot(m.at(below, c), m.at(c, c)));
            } else {
                apply(c + 1, below + 1, -round_quot(m.at(c, c), m.at(below, c)));
            }
        }
    }
    // Triangular with integer diagonal of product 1: every entry is +-1.
    // Back-substitute above the diagonal.
    for (int c = n - 1; c > 0; --c)
        for (int r = 0; r < c; ++r)
            if (m.at(r, c) != 0) apply(r + 1, c + 1, -m.at(r, c) * m.at(c, c));
    // Cancel -1 signs in pairs via embedded rotations (det is 1, so the
    // number of -1 entries is even).
    std::vector<int> negs;
    for (int i = 0; i < n; ++i)
        if (m.at(i, i) == -1) negs.push_back(i + 1);
    for (size_t t = 0; t + 1 < negs.size(); t += 2) {
        int i = negs[t], j = negs[t + 1];
        for (int rep = 0; rep < 2; ++rep) {
            apply(i, j, 1);
            apply(j, i, -1);
            apply(i, j, 1);
        }
    }
    if (!m.is_identity()) throw Error("base_case: elimination incomplete (internal)");

    // I = L_m ... L_1 * g, so g = L_1^-1 ... L_m^-1.
    std::vector<Factor> out;
    for (const auto& e : applied) out.push_back(Factor::elementary(inverse(e), 0));
    return out;
}

FactorCertificate factor_full(const IntMat& g, ReducePolicy policy) {
    if (!g.is_square()) throw DimensionError("factor_full: square matrix expected");
    int n = g.rows();
    if (n < 3) throw PolicyError("factor_full: n >= 3 required");
    if (policy == ReducePolicy::Fp2k) throw PolicyError("factor_full: integer policies only");
    if (det_exact(g) != 1)
        throw NotUnimodularError("factor_full: determinant is not 1");

    FactorCertificate cert;
    cert.n = n;
    cert.policy = policy;

    // Inputs that already are a single transvection certify themselves.
    {
        std::vector<int> rows_nz, cols_nz;
        bool offdiag_ok = true;
        for (int i = 0; i < n && offdiag_ok; ++i)
            if (g.at(i, i) != 1) offdiag_ok = false;
        if (offdiag_ok) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j || g.at(i, j) == 0) continue;
                    if (rows_nz.empty() || rows_nz.back() != i) rows_nz.push_back(i);
                    if (std::find(cols_nz.begin(), cols_nz.end(), j) == cols_nz.end())
                        cols_nz.push_back(j);
                }
            std::sort(cols_nz.begin(), cols_nz.end());
            bool disjoint = true;
            for (int r : rows_nz)
                if (std::find(cols_nz.begin(), cols_nz.end(), r) != cols_nz.end()) disjoint = false;
            bool single = rows_nz.size() == 1 && cols_nz.size() == 1;
            if (!rows_nz.empty() && disjoint && (single || n > 3)) {
                Factor f;
                if (single) {
                    f = Factor::elementary(
                        ElemTransvection(n, rows_nz[0] + 1, cols_nz[0] + 1, g.at(rows_nz[0], cols_nz[0])),
                        0);
                } else {
                    std::vector<int> I(cols_nz.size()), J(rows_nz.size());
                    for (size_t a = 0; a < cols_nz.size(); ++a) I[a] = cols_nz[a] + 1;
                    for (size_t b = 0; b < rows_nz.size(); ++b) J[b] = rows_nz[b] + 1;
                    IntMat alpha(static_cast<int>(I.size()), static_cast<int>(J.size()));
                    for (size_t a = 0; a < I.size(); ++a)
                        for (size_t b = 0; b < J.size(); ++b)
                            alpha.at(static_cast<int>(a), static_cast<int>(b)) = g.at(J[b] - 1, I[a] - 1);
                    f = Factor::generalized(GenTransvection(n, I, J, alpha), FactorSide::Left, 0);
                }
                cert.factors.push_back(f);
                cert.levels = 0;
                cert.generalized_count = single ? 0 : 1;
                cert.base_elementary_count = 0;
                cert.elementary_word_length = 0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        if (i != j) cert.elementary_word_length += abs(g.at(i, j));
                cert.max_entry_bits = g.max_entry_bits();
                cert.product_hash = product_hash_of(g);
                cert.verified = verify_certificate(cert, g);
                if (!cert.verified) throw Error("factor_full: product mismatch (internal)");
                return cert;
            }
        }
    }

    std::vector<Factor> lefts, rights; // rights collected outermost-first
    IntMat cur = g;
    int off = 0, level = 0;
    while (cur.rows() > 3) {
        int dim = cur.rows();
        int k = policy == ReducePolicy::Z3k ? dim / 3 : (dim - 1) / 2;
        BlockDecomposition dec = decompose_block(cur, k, policy);
        for (const auto& f : dec.left) {
            Factor lifted = shift_factor(f, off, n);
            lifted.level = level;
            lefts.push_back(lifted);
        }
        if (dec.has_right) {
            Factor lifted = shift_factor(dec.right, off, n);
            lifted.level = level;
            rights.push_back(lifted);
        }
        cur = dec.g_star;
        off += k;
        ++level;
    }
    cert.levels = level;

    std::vector<Factor> base = base_case_sl3(cur);
    cert.base_elementary_count = static_cast<long>(base.size());

    cert.factors = lefts;
    for (const auto& f : base) {
        Factor lifted = shift_factor(f, off, n);
        lifted.level = level;
        cert.factors.push_back(lifted);
    }
    for (auto it = rights.rbegin(); it != rights.rend(); ++it) cert.factors.push_back(*it);

    cert.generalized_count = 0;
    cert.elementary_word_length = 0;
    for (const auto& f : cert.factors) {
        if (f.kind == FactorKind::Generalized) {
            ++cert.generalized_count;
            for (int a = 0; a < f.gen.alpha.rows(); ++a)
                for (int b = 0; b < f.gen.alpha.cols(); ++b)
                    cert.elementary_word_length += abs(f.gen.alpha.at(a, b));
        } else {
            cert.elementary_word_length += abs(f.elem.m);
        }
    }

    IntMat prod = IntMat::identity(n);
    size_t bits = g.max_entry_bits();
    for (const auto& f : cert.factors) {
        prod = mul(prod, f.matrix());
        bits = std::max(bits, prod.max_entry_bits());
    }
    cert.max_entry_bits = bits;
    cert.product_hash = product_hash_of(prod);
    cert.verified = (prod == g);
    if (!cert.verified) throw Error("factor_full: product mismatch (internal)");
    return cert;
}

std::vector<ElemStep> expand_to_elementary(const FactorCertificate& cert, long max_steps) {
    if (cert.elementary_word_length > max_steps)
        throw SizeError("expand_to_elementary: word length " +
                        cert.elementary_word_length.get_str() + " exceeds the cap");
    std::vector<ElemStep> word;
    auto push_entry = [&word](int i, int j, const Int& m) {
        if (m == 0) return;
        int s = m > 0 ? 1 : -1;
        Int cnt = abs(m);
        for (Int t = 0; t < cnt; ++t) word.push_back(ElemStep{i, j, s});
    };
    for (const auto& f : cert.factors) {
        if (f.kind == FactorKind::Elementary) {
            push_entry(f.elem.i, f.elem.j, f.elem.m);
        } else {
            for (int a = 0; a < f.gen.alpha.rows(); ++a)
                for (int b = 0; b < f.gen.alpha.cols(); ++b)
                    push_entry(f.gen.J[b], f.gen.I[a], f.gen.alpha.at(a, b));
        }
    }
    return word;
}

IntMat word_product(const std::vector<ElemStep>& word, int n) {
    IntMat prod = IntMat::identity(n);
    for (const auto& s : word)
        prod = mul(prod, to_matrix(ElemTransvection(n, s.i, s.j, s.sign)));
    return prod;
}

bool verify_certificate(const FactorCertificate& cert, const IntMat& g) {
    if (g.rows() != cert.n || g.cols() != cert.n) return false;
    IntMat prod = IntMat::identity(cert.n);
    for (const auto& f : cert.factors) prod = mul(prod, f.matrix());
    return prod == g;
}

IntMat random_sl(int n, int word_length, std::uint64_t seed) {
    if (n < 2) throw DimensionError("random_sl: n >= 2 required");
    // Raw draws from the (standard-specified) engine keep the output
    // machine-independent; std::uniform_int_distribution is not portable.
    std::mt19937_64 rng(seed);
    IntMat m = IntMat::identity(n);
    int placed = 0;
    while (placed < word_length) {
        int i = 1 + static_cast<int>(rng() % n);
        int j = 1 + static_cast<int>(rng() % n);
        if (i == j) continue;
        int s = (rng() & 1) ? 1 : -1;
        m = mul(m, to_matrix(ElemTransvection(n, i, j, s)));
        ++placed;
    }
    return m;
}

std::string product_hash_of(const IntMat& m) {
    // FNV-1a over the canonical text form.
    std::uint64_t h = 14695981039346656037ull;
    for (char c : m.to_text()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

} // namespace slnz
