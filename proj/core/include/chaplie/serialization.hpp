#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chaplie/dynamics.hpp"
#include "chaplie/hamiltonization.hpp"
#include "chaplie/root_engine.hpp"

namespace chaplie {

using Json = nlohmann::ordered_json;

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);

/// "l1", "l2", "l1+l2", "2l1+3l2", ... from simple-root coefficients.
std::string root_label(const std::vector<int>& coefficients);

/// Label of the positive root attached to an adapted k index ("m" on m).
std::string adapted_label(const RootDatum& rd, int k_index);

Json root_datum_json(const AlgebraStructure& st, bool include_bases = false);
Json ham_report_json(const ChaplyginModel& model, const HamResidualReport& rep);
Json rubber_report_json(const RubberReport& rep);
Json trajectory_json(const Trajectory& traj);
Json drift_json(const DriftReport& d);

/// t, Hc, J_H..., f, s (row-major), u, [x...]
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// Byte-stable text: two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace chaplie
