#pragma once

// JSON descriptors for every object the library exchanges, plus digests.

#include <string>

#include <json.hpp>

#include "coarse/coarse_maps.hpp"
#include "coarse/dimension.hpp"
#include "coarse/msp.hpp"
#include "coarse/trees.hpp"

namespace coarse::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Malformed or inconsistent input; the message names the location.
class InputError : public Error {
 public:
  using Error::Error;
};

json read_json_file(const std::string& path);
std::string sha256_hex(const std::string& bytes);
/// Digest of the canonical (compact, key-sorted) serialization.
std::string digest(const json& value);

/// Doubles as JSON numbers; infinities as the strings "inf" / "-inf".
json number(double v);
double to_number(const json& v, const std::string& where);
/// Labels that read as numbers are written as numbers.
json label_json(const std::string& label);
std::string label_string(const json& v, const std::string& where);

FiniteMetricSpace space_from_json(const json& j);
json space_to_json(const FiniteMetricSpace& space);

PointSet set_from_json(const FiniteMetricSpace& space, const json& j, const std::string& where);
json set_to_json(const FiniteMetricSpace& space, const PointSet& s);

Family family_from_json(const FiniteMetricSpace& space, const json& j);
json family_to_json(const FiniteMetricSpace& space, const Family& f);

/// {"domain": space, "codomain": space, "assign": [codomain label per domain point] | {label: label}}.
CoarseMap map_from_json(const json& j);
json map_to_json(const CoarseMap& f);

/// {"table": [[g*h]], "perms": [[label of g.x for x in order]]}.
GroupAction action_from_json(SpacePtr space, const json& j);

/// {"kind": "affine", "slope", "offset"} or {"kind": "step", "breakpoints": [[r, value]]}; optional "strict".
ControlFunction control_from_json(const json& j);
json control_to_json(const ControlFunction& c);

ApcWitness witness_from_json(const FiniteMetricSpace& space, const json& j);
json witness_to_json(const FiniteMetricSpace& space, const ApcWitness& w);
DimSequenceWitness dim_sequence_from_json(const FiniteMetricSpace& space, const json& j);

DecompositionTree tree_from_json(const FiniteMetricSpace& space, const json& j);
json tree_to_json(const FiniteMetricSpace& space, const DecompositionTree& t, TreeMode mode);
json tree_verification_to_json(const FiniteMetricSpace& space, const TreeVerification& v);

ProbMeasure measure_from_json(const FiniteMetricSpace& space, const json& j);
json measure_to_json(const FiniteMetricSpace& space, const ProbMeasure& mu);

MassFamily mass_family_from_json(const FiniteMetricSpace& space, const json& j);
json mass_family_to_json(const FiniteMetricSpace& space, const MassFamily& m);

}  // namespace coarse::io
