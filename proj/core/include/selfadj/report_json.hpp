#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "selfadj/ab_family.hpp"
#include "selfadj/ab_transform.hpp"
#include "selfadj/endpoint.hpp"
#include "selfadj/extensions.hpp"
#include "selfadj/ivp.hpp"
#include "selfadj/spectral.hpp"

namespace selfadj::report {

inline constexpr const char* kSchemaVersion = "1.0";

using Json = nlohmann::ordered_json;

/// Two-space indented JSON with every double printed as %.17g; NaN and
/// infinities become null. Keys keep insertion order.
std::string dump(const Json& j);
/// One number in the same format as dump().
std::string format_double(double x);

Json to_json(const Interval& d);
Json to_json(const Potential& q);
Json to_json(const WindowDiagnostics& d);
Json to_json(const EndpointClassification& c);
Json to_json(const ExtensionStructure& s);
Json to_json(const IvpControls& c);
Json to_json(const Trajectory& t);
Json to_json(const ThetaDecomposition& d);
Json to_json(const Frame& f);
Json to_json(const ExtensionDescriptor& e);
Json to_json(const SigmaDecomposition& s);
Json to_json(const SpectralControls& c);
/// Eigenfunction samples are included only on request.
Json to_json(const EigenSearch& s, bool with_eigenfunctions = false);
Json to_json(const ABSpectrumReport& r);
Json to_json(const TransformDiagnostics& d);

/// {schema_version, command, inputs, results, diagnostics}.
Json envelope(const std::string& command, Json inputs, Json results, Json diagnostics = Json::object());

/// CSV with header "m,p,E,kind".
std::string spectrum_csv(const ABSpectrumReport& r);
std::string eigen_csv(const EigenSearch& s);

}  // namespace selfadj::report
