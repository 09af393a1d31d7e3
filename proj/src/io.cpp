#include "phs3/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "phs3/common.hpp"

namespace phs3 {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open output file " + path);
    return out;
}

}  // namespace

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_profile_csv(const CurvatureProfile& k, const std::string& path) {
    auto out = open_out(path);
    out << "s,k\n";
    const double h = k.period_L / static_cast<double>(k.values.size());
    for (std::size_t j = 0; j < k.values.size(); ++j)
        out << format_real(h * static_cast<double>(j)) << ',' << format_real(k.values[j]) << '\n';
}

CurvatureProfile read_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open profile file " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("s,k", 0) != 0)
        throw validation_error("profile file must start with the header s,k");
    CurvatureProfile k;
    std::vector<double> nodes;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        double s = 0.0, v = 0.0;
        char comma = 0;
        if (!(row >> s >> comma >> v) || comma != ',')
            throw validation_error("malformed profile row: " + line);
        nodes.push_back(s);
        k.values.push_back(v);
    }
    if (k.values.size() < 4) throw validation_error("profile needs at least 4 nodes");
    const double h = nodes[1] - nodes[0];
    if (!(h > 0.0)) throw validation_error("profile nodes must increase uniformly");
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j)
        if (std::fabs(nodes[j + 1] - nodes[j] - h) > 1e-9 * std::max(1.0, std::fabs(h)))
            throw validation_error("profile nodes must increase uniformly");
    if (std::fabs(nodes[0]) > 1e-12) throw validation_error("profile must start at s = 0");
    k.period_L = h * static_cast<double>(k.values.size());
    return k;
}

void write_curve_csv(const SampledCurve& curve, const std::string& path) {
    auto out = open_out(path);
    out << "s,re_z1,im_z1,re_z2,im_z2,hx,hy,hz\n";
    const double h = curve.period_L / static_cast<double>(curve.size());
    for (std::size_t j = 0; j < curve.size(); ++j) {
        const ComplexPair& p = curve.samples[j];
        Vec3 hp = heisenberg_point(p);
        out << format_real(h * static_cast<double>(j)) << ',' << format_real(p.z1.real()) << ','
            << format_real(p.z1.imag()) << ',' << format_real(p.z2.real()) << ','
            << format_real(p.z2.imag()) << ',' << format_real(hp[0]) << ',' << format_real(hp[1])
            << ',' << format_real(hp[2]) << '\n';
    }
}

void write_snapshots_csv(const std::vector<double>& times,
                         const std::vector<CurvatureProfile>& profiles, const std::string& path) {
    if (times.size() != profiles.size())
        throw validation_error("snapshot times and profiles must pair up");
    auto out = open_out(path);
    out << "t,s,k\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        const CurvatureProfile& k = profiles[i];
        const double h = k.period_L / static_cast<double>(k.values.size());
        for (std::size_t j = 0; j < k.values.size(); ++j)
            out << format_real(times[i]) << ',' << format_real(h * static_cast<double>(j)) << ','
                << format_real(k.values[j]) << '\n';
    }
}

void write_conservation_csv(const std::vector<ConservationRow>& rows, const std::string& path) {
    auto out = open_out(path);
    out << "t,i1,i2,i3,sup_k\n";
    for (const ConservationRow& r : rows)
        out << format_real(r.t) << ',' << format_real(r.integrals[0]) << ','
            << format_real(r.integrals[1]) << ',' << format_real(r.integrals[2]) << ','
            << format_real(r.sup_k) << '\n';
}

void write_scan_csv(const ScanResult& res, const std::string& path) {
    auto out = open_out(path);
    out << "e1,e3,phi2_regularized,lambda,omega,wave_ratio\n";
    for (const ScanPoint& p : res.points)
        out << format_real(p.e1) << ',' << format_real(p.e3) << ','
            << format_real(p.phi2_regularized) << ',' << format_real(p.lambda) << ','
            << format_real(p.omega) << ',' << format_real(p.wave_ratio) << '\n';
}

std::string closure_report_json(const ClosureReport& rep) {
    nlohmann::json j;
    j["phi1"] = rep.phi1;
    j["phi2"] = rep.phi2;
    j["phi2_regularized"] = rep.phi2_regularized;
    j["closed"] = rep.closed;
    j["exceptional"] = rep.exceptional;
    j["lambda"] = rep.lambda;
    j["omega"] = rep.omega;
    if (rep.rational_pair) {
        j["phi1_rational"] = {rep.rational_pair->first.first, rep.rational_pair->first.second};
        j["phi2_rational"] = {rep.rational_pair->second.first, rep.rational_pair->second.second};
    }
    if (rep.wave_number) j["wave_number"] = *rep.wave_number;
    j["monodromy"] = {{"a11", {rep.monodromy.a11.real(), rep.monodromy.a11.imag()}},
                      {"a22", {rep.monodromy.a22.real(), rep.monodromy.a22.imag()}}};
    return j.dump(2);
}

std::string invariant_report_json(const InvariantReport& rep) {
    nlohmann::json j;
    j["maslov"] = rep.maslov;
    j["clifford_index"] = rep.clifford_index;
    j["spin"] = rep.spin.value();
    j["turning_number"] = rep.turning_number;
    if (rep.bennequin) j["bennequin"] = *rep.bennequin;
    return j.dump(2);
}

void write_text_file(const std::string& text, const std::string& path) {
    auto out = open_out(path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

}  // namespace phs3
