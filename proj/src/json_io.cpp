#include "toric/json_io.hpp"

#include <cstdio>
#include <sstream>

namespace toric {

Json vector_json(const Vector& v)
{
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(v[i]);
    }
    return a;
}

Vector vector_from_json(const Json& j)
{
    if (!j.is_array()) {
        throw Error(ErrorCode::InvalidArgument, "expected a numeric array");
    }
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            throw Error(ErrorCode::InvalidArgument, "expected a numeric array");
        }
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

namespace {

Json partition_json(const Partition& p)
{
    Json a = Json::array();
    for (const auto& c : p.classes) {
        a.push_back(c);
    }
    return a;
}

} // namespace

Json analysis_json(const ReactionNetwork& net)
{
    Json j;
    j["species"] = net.species();
    Json cx = Json::array();
    for (const auto& c : net.complexes()) {
        cx.push_back(vector_json(c.y));
    }
    j["complexes"] = cx;
    Json ed = Json::array();
    for (const auto& r : net.reactions()) {
        ed.push_back({{"source", r.source}, {"target", r.target}, {"rate", r.rate}});
    }
    j["reactions"] = ed;
    j["weakly_reversible"] = is_weakly_reversible(net);
    j["reversible"] = is_reversible(net);
    j["linkage_classes"] = partition_json(linkage_classes(net));
    j["strong_components"] = partition_json(strongly_connected_components(net));
    j["deficiency"] = deficiency(net);
    j["s"] = stoichiometric_subspace(net).dim;
    return j;
}

Json equilibrium_json(const EquilibriumReport& r)
{
    Json j;
    j["x0"] = r.x0 ? vector_json(*r.x0) : Json(nullptr);
    j["residual"] = vector_json(r.residual);
    j["max_residual"] = r.max_residual;
    j["method"] = to_string(r.method);
    return j;
}

Json cone_json(const ConeGenerators& c)
{
    Json g = Json::array();
    for (const auto& v : c.gens) {
        g.push_back(vector_json(v));
    }
    return {{"dim", c.dim}, {"generators", g}};
}

Json certificate_json(const EmbeddingCertificate& cert)
{
    Json normals = Json::array();
    for (const auto& h : cert.arrangement.hyperplanes()) {
        normals.push_back(vector_json(h.normal));
    }
    Json j;
    j["dimension"] = cert.arrangement.dimension();
    j["normals"] = normals;
    j["delta0"] = cert.delta0;
    j["epsilon"] = cert.epsilon;
    j["epsilon_split"] = cert.epsilon_split;
    j["cycles"] = cert.cover.cycles;
    j["multiplicity"] = cert.cover.multiplicity;
    return j;
}

Json witness_json(const EmbeddingWitness& w)
{
    return {{"seed", w.seed},
            {"trial", w.trial},
            {"X", vector_json(w.X)},
            {"rates", vector_json(w.rates)},
            {"field", vector_json(w.field)},
            {"farkas", vector_json(w.farkas)},
            {"residual", w.residual}};
}

Json embedding_report_json(const EmbeddingSampleReport& r)
{
    Json f = Json::array();
    for (const auto& w : r.failures) {
        f.push_back(witness_json(w));
    }
    return {{"trials", r.trials}, {"pass", r.passed}, {"all_passed", r.all_passed()}, {"failures", f}};
}

Json curve_json(const PolygonalCurve2D& c)
{
    Json v = Json::array(), d = Json::array();
    for (const auto& p : c.vertices) {
        v.push_back(vector_json(p));
    }
    for (const auto& u : c.directions) {
        d.push_back(vector_json(u));
    }
    return {{"scale", c.scale},
            {"vertices", v},
            {"directions", d},
            {"lengths", c.lengths},
            {"band_of_segment", c.band_of_segment}};
}

PolygonalCurve2D curve_from_json(const Json& j)
{
    PolygonalCurve2D c;
    try {
        c.scale = j.at("scale").get<double>();
        for (const auto& p : j.at("vertices")) {
            c.vertices.push_back(vector_from_json(p));
        }
        for (const auto& u : j.at("directions")) {
            c.directions.push_back(vector_from_json(u));
        }
        c.lengths = j.at("lengths").get<std::vector<double>>();
        c.band_of_segment = j.at("band_of_segment").get<std::vector<int>>();
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed curve: ") + e.what());
    }
    const std::size_t segs = c.segment_count();
    if (c.directions.size() != segs || c.lengths.size() != segs || c.band_of_segment.size() != segs) {
        throw Error(ErrorCode::DimensionMismatch, "curve arrays disagree on the segment count");
    }
    return c;
}

Json surface_certificate_json(const SurfaceCertificate& c)
{
    Json s = Json::array();
    for (const auto& p : c.samples) {
        s.push_back({{"x", vector_json(p.x)}, {"normal", vector_json(p.normal)}});
    }
    return {{"spacing", c.spacing}, {"samples", s}};
}

SurfaceCertificate surface_certificate_from_json(const Json& j)
{
    SurfaceCertificate c;
    try {
        c.spacing = j.value("spacing", 0.0);
        for (const auto& s : j.at("samples")) {
            SurfaceSample p{vector_from_json(s.at("x")), vector_from_json(s.at("normal"))};
            if (p.x.size() != p.normal.size()) {
                throw Error(ErrorCode::DimensionMismatch, "sample point and normal differ in dimension");
            }
            if (!((p.x.array() > 0.0).all())) {
                throw Error(ErrorCode::InvalidArgument, "sample points must be strictly positive");
            }
            double n = p.normal.norm();
            if (!(std::abs(n - 1.0) <= 1e-9)) {
                throw Error(ErrorCode::InvalidArgument, "sample normals must have unit length");
            }
            c.samples.push_back(std::move(p));
        }
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed surface certificate: ") + e.what());
    }
    return c;
}

Json separation_json(const SeparationReport& r)
{
    Json v = Json::array();
    for (const auto& x : r.violations) {
        v.push_back({{"sample", x.sample},
                     {"x", vector_json(x.x)},
                     {"normal", vector_json(x.normal)},
                     {"generator", vector_json(x.generator)},
                     {"dot", x.dot}});
    }
    return {{"passed", r.passed()}, {"violations", v}};
}

Json crossing_json(const CrossingReport& r)
{
    Json s = Json::array();
    for (const auto& x : r.starts) {
        s.push_back(vector_json(x));
    }
    return {{"trajectories", r.trajectories},
            {"min_signed_distance", r.min_signed_distance},
            {"never_crossed", r.never_crossed()},
            {"per_trajectory_min", r.per_trajectory_min},
            {"starts", s}};
}

Json convergence_json(const ConvergenceReport& r)
{
    Json out = Json::array();
    for (const auto& o : r.outcomes) {
        Json j;
        j["index"] = o.index;
        j["initial"] = vector_json(o.initial);
        if (o.error.empty()) {
            j["final"] = vector_json(o.final_state);
            j["birch"] = vector_json(o.birch);
            j["final_distance"] = o.final_distance;
            j["max_lyapunov_increase"] = o.max_lyapunov_increase;
            j["persistence_min"] = vector_json(o.persistence_min);
            j["persistence_floor"] = o.persistence_floor;
            j["steps"] = o.steps;
        } else {
            j["error"] = o.error;
        }
        j["converged"] = o.converged;
        j["lyapunov_ok"] = o.lyapunov_ok;
        j["persistent"] = o.persistent;
        out.push_back(j);
    }
    return {{"experiment", r.kind},
            {"equilibrium", vector_json(r.equilibrium)},
            {"outcomes", out},
            {"all_converged", r.all_converged()},
            {"all_lyapunov_ok", r.all_lyapunov_ok()},
            {"all_persistent", r.all_persistent()},
            {"passed", r.passed()}};
}

Json trajectory_json(const Trajectory& t)
{
    Json s = Json::array();
    for (const auto& x : t.states) {
        s.push_back(vector_json(x));
    }
    return {{"times", t.times},
            {"states", s},
            {"conserved_residual", t.conserved_residual},
            {"accepted_steps", t.accepted_steps},
            {"rejected_steps", t.rejected_steps}};
}

std::string dump_report(const std::string& kind, const Json& body)
{
    Json j;
    j["schema"] = kReportSchema;
    j["kind"] = kind;
    for (auto it = body.begin(); it != body.end(); ++it) {
        j[it.key()] = it.value();
    }
    return j.dump(2) + "\n";
}

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const Vector& v)
{
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += fmt(v[i]);
    }
    return s;
}

} // namespace

std::string convergence_csv(const ConvergenceReport& r)
{
    std::ostringstream os;
    os << "index,initial,final,birch,final_distance,max_lyapunov_increase,persistence_min,persistence_floor,"
          "converged,lyapunov_ok,persistent,error\n";
    for (const auto& o : r.outcomes) {
        os << o.index << ',' << join(o.initial) << ',' << join(o.final_state) << ',' << join(o.birch) << ','
           << fmt(o.final_distance) << ',' << fmt(o.max_lyapunov_increase) << ',' << join(o.persistence_min)
           << ',' << fmt(o.persistence_floor) << ',' << o.converged << ',' << o.lyapunov_ok << ','
           << o.persistent << ',' << '"' << o.error << '"' << '\n';
    }
    return os.str();
}

} // namespace toric
