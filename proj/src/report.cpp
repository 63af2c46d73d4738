#include "vlab/report.hpp"

#include <fstream>

namespace vlab {

Json to_json(const FlowLine& line) {
    Json j;
    j["termination"] = FlowLine::termination_name(line.termination);
    j["param"] = line.param;
    Json pos = Json::array();
    for (const auto& [x, y] : line.pos) pos.push_back(Json::array({x, y}));
    j["pos"] = pos;
    j["w"] = line.w_values;
    if (!line.h2_values.empty()) j["h2"] = line.h2_values;
    return j;
}

Json to_json(const CertificateReport& rep) {
    Json j;
    j["proposition"] = rep.proposition;
    j["verdict"] = verdict_name(rep.verdict);
    Json hyp = Json::array();
    for (const auto& h : rep.hypotheses) {
        Json item;
        item["name"] = h.name;
        item["pass"] = h.pass;
        if (!h.witness.empty()) item["witness"] = h.witness;
        hyp.push_back(item);
    }
    j["hypotheses"] = hyp;
    j["conclusion"] = rep.conclusion;

    Json traces;
    auto pairs = [](const std::vector<std::pair<double, double>>& v) {
        Json a = Json::array();
        for (const auto& [p, r] : v) a.push_back(Json::array({p, r}));
        return a;
    };
    if (!rep.traces.p_roots_bulk.empty()) traces["p_roots_bulk"] = pairs(rep.traces.p_roots_bulk);
    if (!rep.traces.p_roots_ray_hi.empty())
        traces["p_roots_ray_hi"] = pairs(rep.traces.p_roots_ray_hi);
    if (!rep.traces.p_roots_ray_lo.empty())
        traces["p_roots_ray_lo"] = pairs(rep.traces.p_roots_ray_lo);
    if (!rep.traces.integral_terms.empty()) traces["integral_terms"] = rep.traces.integral_terms;
    if (!rep.traces.basis_integrals.empty()) traces["basis_integrals"] = rep.traces.basis_integrals;
    if (!rep.traces.seeds.empty()) traces["seeds"] = rep.traces.seeds;
    if (!rep.traces.flowlines.empty()) {
        Json fl = Json::array();
        for (const auto& line : rep.traces.flowlines) fl.push_back(to_json(line));
        traces["flowlines"] = fl;
    }
    j["traces"] = traces;
    return j;
}

std::string dump_report(const CertificateReport& rep) { return to_json(rep).dump(2); }

void write_report(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open report path for writing: " + path);
    out << j.dump(2) << '\n';
}

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace vlab
