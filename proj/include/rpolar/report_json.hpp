#pragma once

// JSON encoding of library results. Doubles are written in shortest
// round-trip form, so parsing a payload back yields bit-identical values.
// Infinite quantities (rho and friends in the classical regime) become null.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpolar/branches.hpp"
#include "rpolar/energy.hpp"
#include "rpolar/relax.hpp"
#include "rpolar/rotcore.hpp"
#include "rpolar/sampling.hpp"

namespace rpolar {

inline constexpr const char* kToolName = "rpolar";
inline constexpr const char* kToolVersion = "0.1.0";

nlohmann::json to_json(const Vec3& v);
nlohmann::json to_json(const Mat3& m);  // nine numbers, row-major
nlohmann::json to_json(const Quaternion& q);
nlohmann::json to_json(const AxisAngle& aa);
nlohmann::json to_json(const MaterialParams& p);
nlohmann::json to_json(const RelaxedRotations& r, const MaterialParams& p);
nlohmann::json to_json(const CaseRecord& rec);
nlohmann::json to_json(const ValidationReport& report);

Mat3 mat3_from_json(const nlohmann::json& j);
Vec3 vec3_from_json(const nlohmann::json& j);

nlohmann::json optional_number(const std::optional<double>& v);

struct ResultEnvelope {
  std::vector<std::string> command;
  std::optional<std::uint64_t> seed;
  nlohmann::json payload;
  std::optional<double> timing_ms;

  nlohmann::json to_json() const;
};

// Shortest round-trip decimal, locale independent.
std::string format_number(double v);

}  // namespace rpolar
