#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "phs3/common.hpp"
#include "phs3/geom.hpp"

namespace phs3 {

struct RationalDetect {
    double value = 0.0;
    std::int64_t max_denominator = 64;
    double tolerance = 1e-9;
};

// best continued-fraction convergent p/q with q <= max_denominator and
// |value - p/q| <= tolerance, or absent
std::optional<std::pair<std::int64_t, std::int64_t>> detect_rational(const RationalDetect& cfg);

struct Spin {
    // numerator over 2: whole = true means spin 1, false means spin 1/2
    bool whole = false;
    double value() const { return whole ? 1.0 : 0.5; }
};

struct InvariantReport {
    int maslov = 0;
    int clifford_index = 0;
    Spin spin;
    std::optional<long> bennequin;  // absent for non-embedded curves
    int turning_number = 0;
};

// degree of the contact-fiber phase: total curvature divided by 2 pi, which
// must be an integer for a closed curve supplied over its full period
int maslov_index(const CurvatureProfile& k);

// sum of crossing signs of the planar projection onto the first two
// coordinates of the Heisenberg image, over/under resolved by the third
long bennequin_number(const SampledCurve& curve);

// winding number of the tangent direction, counterclockwise positive
int turning_number(const std::vector<std::array<double, 2>>& planar);

// least-period ratio of the curve against its projected spherical image,
// together with the closure sign of the SU(2) frame lift of that image
std::pair<int, Spin> clifford_index_and_spin(const SampledCurve& curve);

InvariantReport invariant_report(const SampledCurve& curve, bool with_bennequin = true);

}  // namespace phs3
