#pragma once

#include "sep4/engine.hpp"
#include "sep4/grassmann.hpp"
#include "sep4/oracle.hpp"
#include "sep4/ppt.hpp"
#include "sep4/tensor.hpp"

#include "json.hpp"

namespace sep4 {

using Json = nlohmann::json;

// Complex numbers are [re, im]; matrices are dense row-major nested arrays.
// Readers accept a bare number for a real entry and throw ParseError on
// anything malformed, NaN or Inf.
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

// {"dims": [...], "matrix": [[[re, im], ...], ...]}
Json state_to_json(const Operator& op);
MultiState state_from_json(const Json& j, const ToleranceConfig& cfg = {});

// {"dims": [...], "rows": [[[re, im], ...], ...]}, one row per basis vector.
Json basis_to_json(const SubspaceBasis& basis);
SubspaceBasis basis_from_json(const Json& j, double tol_rank = ToleranceConfig{}.tol_rank);

// Party lists are sorted and 1-based.
Json subset_to_json(SubsetMask s);
SubsetMask subset_from_json(const Json& j);

Json ppt_to_json(const PptReport& r);
PptReport ppt_from_json(const Json& j);

// "i1,i2,...,ik" -> [re, im] for every nonzero raw coordinate.
Json pluecker_to_json(const PlueckerVector& p);

Json hit_to_json(const ProductVectorHit& h);
Json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const Json& j);

Json report_to_json(const ClassificationReport& r);
ClassificationReport report_from_json(const Json& j);

Json tolerance_to_json(const ToleranceConfig& cfg);
// Missing keys keep the values of `base`.
ToleranceConfig tolerance_from_json(const Json& j, ToleranceConfig base = {});

}  // namespace sep4
