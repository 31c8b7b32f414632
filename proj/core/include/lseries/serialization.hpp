#pragma once

#include <json.hpp>

#include "lseries/core.hpp"
#include "lseries/counterexamples.hpp"
#include "lseries/engines.hpp"
#include "lseries/geometry.hpp"
#include "lseries/nets.hpp"
#include "lseries/oracle.hpp"
#include "lseries/sampler.hpp"

// JSON wire formats. Complex numbers are two-element arrays [re, im]; angles
// are {"turns": <fraction string or number>, "exact": bool}; the Certificate
// object carries exactly the fields tau, assignment, target, epsilon,
// achieved_error, tail_bound.

namespace lseries {

using json = nlohmann::json;

json to_json(cplx z);
cplx complex_from_json(const json& j);

json to_json(const UnitAngle& a);
UnitAngle angle_from_json(const json& j);

json to_json(const CoefficientSet& s);
CoefficientSet coefficient_set_from_json(const json& j);

json to_json(const SparseAssignment& a);
SparseAssignment assignment_from_json(const json& j);

json to_json(const AffineTransform& t);
AffineTransform transform_from_json(const json& j);

json to_json(const Certificate& c);
Certificate certificate_from_json(const json& j);

json to_json(const RegionSpec& r);
RegionSpec region_from_json(const json& j);

json to_json(const nets::ExponentSum& e);
nets::ExponentSum exponent_sum_from_json(const json& j);

json to_json(const geometry::DescentQuadruple& q);
json to_json(const geometry::LambdaClass& c);

json to_json(const cex::WedgeRegion& w);
cex::WedgeRegion wedge_from_json(const json& j);
/// Keyed max_imag or min_real depending on the wedge side checked.
json evasion_report_to_json(const cex::EvasionReport& r, bool imag_side);

json to_json(const oracle::OracleResult& r);
json to_json(const engines::VerifyReport& r);
json coverage_summary(const sampler::ImageCloud& cloud);

}  // namespace lseries
