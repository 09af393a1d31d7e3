#pragma once

#include <string>
#include <vector>

#include "phs3/geom.hpp"
#include "phs3/invariants.hpp"
#include "phs3/stationary.hpp"

namespace phs3 {

// fixed 17-significant-digit formatting: identical values give identical bytes
std::string format_real(double x);

// header "s,k"; uniform nodes, period = node spacing times count
void write_profile_csv(const CurvatureProfile& k, const std::string& path);

// inverse of write_profile_csv; throws validation_error on malformed input
CurvatureProfile read_profile_csv(const std::string& path);

// polyline with the sphere samples and their Heisenberg image; the Lagrangian
// projection is the (hx, hy) pair of columns
void write_curve_csv(const SampledCurve& curve, const std::string& path);

// long-form snapshot table: one (t, s, k) row per node per snapshot
void write_snapshots_csv(const std::vector<double>& times,
                         const std::vector<CurvatureProfile>& profiles, const std::string& path);

struct ConservationRow {
    double t = 0.0;
    std::array<double, 3> integrals{};
    double sup_k = 0.0;
};

void write_conservation_csv(const std::vector<ConservationRow>& rows, const std::string& path);

// traced level set with the wave ratio column
void write_scan_csv(const ScanResult& res, const std::string& path);

std::string closure_report_json(const ClosureReport& rep);
std::string invariant_report_json(const InvariantReport& rep);

void write_text_file(const std::string& text, const std::string& path);

}  // namespace phs3
