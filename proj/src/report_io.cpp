#include "conj1d/report_io.hpp"

#include <charconv>
#include <json.hpp>

namespace conj1d {

std::string fmt(double v) {
    if (v == 0.0) v = 0.0; // normalize -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fixed_points_csv(const std::vector<FixedPointInfo>& fps) {
    std::string out = "x,multiplier,stability\n";
    for (const auto& fp : fps)
        out += fmt(fp.x_star) + "," + fmt(fp.multiplier) + "," + stability_name(fp.stability) + "\n";
    return out;
}

std::string law_csv(const LawReport& report) {
    std::string out = "itinerary,period,points...,multiplier,exempt,rel_error\n";
    for (const auto& row : report.rows) {
        out += row.orbit.itinerary + "," + std::to_string(row.orbit.period);
        for (double x : row.orbit.points) out += "," + fmt(x);
        out += "," + fmt(row.orbit.multiplier) + "," + (row.exempt ? std::string("1") : std::string("0")) +
               "," + fmt(row.rel_error) + "\n";
    }
    return out;
}

std::string density_csv(const DensityHistogram& h) {
    std::string out = "bin_lo,bin_hi,mass\n";
    for (size_t i = 0; i + 1 < h.bin_edges.size(); ++i)
        out += fmt(h.bin_edges[i]) + "," + fmt(h.bin_edges[i + 1]) + "," + fmt(h.masses[i]) + "\n";
    return out;
}

std::string table_csv(const ConjugacyTable& table) {
    std::string out = "x,h,junction\n";
    for (size_t i = 0; i < table.xs.size(); ++i) {
        bool junction = false;
        for (size_t j : table.junctions) junction = junction || j == i;
        out += fmt(table.xs[i]) + "," + fmt(table.hs[i]) + "," + (junction ? "1" : "0") + "\n";
    }
    return out;
}

std::string table_json(const ConjugacyTable& table, const std::vector<SmoothnessReport>& reports) {
    nlohmann::ordered_json j;
    j["pairing"] = table.pairing;
    j["residual_sup"] = fmt(table.residual_sup);
    j["points"] = table.xs.size();
    j["junctions"] = table.junctions;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (size_t i = 0; i < table.xs.size(); ++i)
        rows.push_back({fmt(table.xs[i]), fmt(table.hs[i])});
    j["table"] = rows;
    nlohmann::ordered_json reps = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        reps.push_back({{"location", fmt(r.location)},
                        {"left_deriv", fmt(r.left_deriv)},
                        {"right_deriv", fmt(r.right_deriv)},
                        {"match_error", fmt(r.match_error)},
                        {"second_deriv_jump", fmt(r.second_deriv_jump)}});
    }
    j["smoothness"] = reps;
    return j.dump(2) + "\n";
}

std::string lemma_report_json(const exact::LemmaSuiteReport& report) {
    nlohmann::ordered_json j;
    j["family"] = report.family;
    j["pass"] = report.all_pass();
    nlohmann::ordered_json items = nlohmann::ordered_json::array();
    for (const auto& it : report.items) {
        nlohmann::ordered_json e;
        e["label"] = it.label;
        e["admissible"] = it.admissible;
        e["pass"] = it.pass;
        if (!it.note.empty()) e["note"] = it.note;
        items.push_back(e);
    }
    j["items"] = items;
    return j.dump(2) + "\n";
}

std::string sn_sweep_csv(const std::vector<SNFit>& fits) {
    std::string out = "mu,nu,a,residual\n";
    for (const auto& f : fits)
        out += fmt(f.mu) + "," + fmt(f.nu) + "," + fmt(f.a) + "," + fmt(f.multiplier_residual) + "\n";
    return out;
}

std::string pf_sweep_csv(const std::vector<PFFit>& fits) {
    std::string out = "mu,nu,a,b,residual\n";
    for (const auto& f : fits)
        out += fmt(f.mu) + "," + fmt(f.nu) + "," + fmt(f.a) + "," + fmt(f.b) + "," + fmt(f.residual) + "\n";
    return out;
}

std::string bc_sweep_csv(const std::vector<BCFit>& fits) {
    std::string out = "mu,sL,sR,t,residual_L,residual_R,residual_slope\n";
    for (const auto& f : fits)
        out += fmt(f.mu) + "," + fmt(f.s_L) + "," + fmt(f.s_R) + "," + fmt(f.t) + "," +
               fmt(f.residual_L) + "," + fmt(f.residual_R) + "," + fmt(f.residual_slope) + "\n";
    return out;
}

} // namespace conj1d
