#ifndef SLNZ_REPORT_JSON_HPP
#define SLNZ_REPORT_JSON_HPP

#include <json.hpp>

#include <optional>

#include "slnz/constants.hpp"
#include "slnz/factor.hpp"
#include "slnz/spectral.hpp"
#include "slnz/torus.hpp"
#include "slnz/vecsys.hpp"

// Builders for every machine-readable report the CLI emits. Key order is
// fixed (ordered_json) so identical runs produce byte-identical output.
namespace slnz::reports {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

inline json gen_op(const GenTransvection& t) {
    json alpha = json::array();
    for (int a = 0; a < t.alpha.rows(); ++a) {
        json row = json::array();
        for (int b = 0; b < t.alpha.cols(); ++b) row.push_back(t.alpha.at(a, b).get_str());
        alpha.push_back(row);
    }
    return json{{"I", t.I}, {"J", t.J}, {"alpha", alpha}};
}

inline json factor(const Factor& f) {
    json j;
    j["kind"] = f.kind == FactorKind::Generalized ? "generalized" : "elementary";
    j["side"] = f.side == FactorSide::Left ? "left" : "right";
    j["level"] = f.level;
    if (f.kind == FactorKind::Generalized) {
        j.update(gen_op(f.gen));
    } else {
        j["i"] = f.elem.i;
        j["j"] = f.elem.j;
        j["m"] = f.elem.m.get_str();
    }
    return j;
}

inline json bound_report(long n, std::optional<long> p, const HTable& table, bool literal) {
    auto kb = kazhdan_bounds(n, table);
    auto ab = application_bounds(n, p);
    auto cons = consistency_report(3, std::min(n, 5000L), table);
    json out{{"schema_version", kSchemaVersion}, {"kind", "bound_report"}, {"n", n}};
    if (p) {
        out["p"] = *p;
        out["l"] = rel_const_l(*p);
    }
    if (n >= 4) out["k"] = rel_const_k(n);
    out["h_dp"] = table.at(n);
    out["h_closed"] = h_closed_form(n);
    out["kazhdan"] = json{{"lower_A", kb.lower_A},
                          {"lower_Aprime", kb.lower_Aprime},
                          {"lower_Adoubleprime", kb.lower_Adoubleprime},
                          {"upper", kb.upper},
                          {"sqrt2_over_h_dp", kb.sqrt2_over_h_dp},
                          {"sqrt2_over_h_closed", kb.sqrt2_over_h_closed}};
    json apps{{"spectral_lower", ab.spectral_lower}, {"spectral_upper", ab.spectral_upper}};
    if (ab.log_group_size > 0) {
        apps["log_group_size"] = ab.log_group_size;
        apps["mixing_bound"] = literal ? ab.mixing_bound_literal : ab.mixing_bound;
        if (literal) apps["mixing_bound_form"] = "beta*log|G| (literal)";
        apps["pra_bound"] = ab.pra_bound;
    }
    out["applications"] = apps;
    json flags = json::array();
    for (const auto& f : cons.flags)
        flags.push_back({{"id", f.id}, {"description", f.description}});
    out["consistency_flags"] = flags;
    return out;
}

inline json chain_report(const ChainReport& r2, const ChainReport& rp, const ChainReport& rpq) {
    auto dump = [](const ChainReport& r) {
        json checks = json::array();
        for (const auto& c : r.checks)
            checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        return json{{"violations", r.violations}, {"checks", checks}};
    };
    json out{{"schema_version", kSchemaVersion}, {"kind", "chain_report"}};
    out["r2"] = dump(r2);
    out["rp"] = dump(rp);
    out["rpq"] = dump(rpq);
    out["all_pass"] = r2.all_pass() && rp.all_pass() && rpq.all_pass();
    return out;
}

inline json factor_certificate(const FactorCertificate& cert, const std::string& policy,
                               const std::vector<ElemStep>* word) {
    json out{{"schema_version", kSchemaVersion},
             {"kind", "factor_certificate"},
             {"n", cert.n},
             {"policy", policy},
             {"verified", cert.verified},
             {"levels", cert.levels},
             {"generalized_count", cert.generalized_count},
             {"base_elementary_count", cert.base_elementary_count},
             {"elementary_word_length", cert.elementary_word_length.get_str()},
             {"max_entry_bits", cert.max_entry_bits},
             {"product_hash", cert.product_hash}};
    json fs = json::array();
    for (const auto& f : cert.factors) fs.push_back(factor(f));
    out["factors"] = fs;
    if (word) {
        json w = json::array();
        for (const auto& s : *word) w.push_back({s.i, s.j, s.sign});
        out["word"] = w;
    }
    return out;
}

inline json reduction_trace(const VectorSystem& v, const ReductionTrace& tr, bool verified,
                            const std::string& policy) {
    json out{{"schema_version", kSchemaVersion},
             {"kind", "reduction_trace"},
             {"policy", policy},
             {"k", v.k},
             {"n", v.n},
             {"op_count", tr.op_count()},
             {"verified", verified}};
    json ops = json::array();
    for (const auto& op : tr.ops) ops.push_back(gen_op(op));
    out["ops"] = ops;
    return out;
}

inline json torus_report(long grid, const PartitionReport& part,
                         const std::vector<IdentityReport>& ids, long control,
                         const BpCpReport* bp, int bp_p, long bp_grid, bool emit_table) {
    json idj = json::array();
    for (const auto& i : ids) idj.push_back({{"name", i.name}, {"violations", i.violations}});
    json out{{"schema_version", kSchemaVersion},
             {"kind", "torus_report"},
             {"grid", grid},
             {"partition", {{"points", part.points}, {"violations", part.violations}}},
             {"identity_violations", idj},
             {"negative_control_violations", control}};
    if (bp) {
        out["bp_cp"] = {{"p", bp_p},
                        {"grid", bp_grid},
                        {"points", bp->points},
                        {"mapping_violations", bp->mapping_violations},
                        {"disjoint_violations", bp->disjoint_violations},
                        {"union_violations", bp->union_violations}};
    }
    if (emit_table) {
        json tbl = json::array();
        for (const auto& [label, clauses] : partition_table())
            tbl.push_back({{"label", label}, {"clauses", clauses}});
        out["partition_table"] = tbl;
    }
    return out;
}

inline json spectral_report(const CompareReport& rep) {
    return json{{"schema_version", kSchemaVersion},
                {"kind", "spectral_report"},
                {"n", rep.n},
                {"p", rep.p},
                {"order", rep.spectral.order},
                {"degree", rep.spectral.degree},
                {"beta", rep.spectral.beta},
                {"lambda2", rep.spectral.lambda2},
                {"lambda_min", rep.spectral.lambda_min},
                {"dense_path", rep.spectral.dense_path},
                {"iterations", rep.spectral.iterations},
                {"bounds",
                 {{"property_t_applicable", rep.property_t_applicable},
                  {"lower", rep.lower_bound},
                  {"lower_ok", rep.lower_ok},
                  {"upper_informational", rep.upper_informational}}},
                {"displacement_sq", rep.displacement_sq}};
}

inline json mixing_report(int n, long p, double threshold, long order, long steps) {
    return json{{"schema_version", kSchemaVersion},
                {"kind", "mixing_report"},
                {"n", n},
                {"p", p},
                {"threshold", threshold},
                {"order", order},
                {"steps", steps}};
}

} // namespace slnz::reports

#endif
