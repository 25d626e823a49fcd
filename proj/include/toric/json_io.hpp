#pragma once

#include "toric/common.hpp"
#include "toric/embedding.hpp"
#include "toric/equilibria.hpp"
#include "toric/experiments.hpp"
#include "toric/geometry.hpp"
#include "toric/network.hpp"
#include "toric/surface.hpp"

#include <json.hpp>

#include <string>

namespace toric {

using Json = nlohmann::json;

inline constexpr int kReportSchema = 1;

Json vector_json(const Vector& v);
Vector vector_from_json(const Json& j);

/// {weakly_reversible, reversible, linkage_classes, deficiency, s, ...}
Json analysis_json(const ReactionNetwork& net);
Json equilibrium_json(const EquilibriumReport& r);
Json cone_json(const ConeGenerators& c);
Json certificate_json(const EmbeddingCertificate& cert);
Json witness_json(const EmbeddingWitness& w);
Json embedding_report_json(const EmbeddingSampleReport& r);
Json curve_json(const PolygonalCurve2D& c);
PolygonalCurve2D curve_from_json(const Json& j);
Json surface_certificate_json(const SurfaceCertificate& c);
SurfaceCertificate surface_certificate_from_json(const Json& j);
Json separation_json(const SeparationReport& r);
Json crossing_json(const CrossingReport& r);
Json convergence_json(const ConvergenceReport& r);
Json trajectory_json(const Trajectory& t);

/// Wraps `body` as {"schema": 1, "kind": kind, ...body} and dumps with a
/// two-space indent and a trailing newline.
std::string dump_report(const std::string& kind, const Json& body);

/// One row per outcome; doubles printed with %.17g.
std::string convergence_csv(const ConvergenceReport& r);

} // namespace toric
