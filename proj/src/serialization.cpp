#include "lcgeom/serialization.hpp"

#include <cmath>
#include <limits>

#include "lcgeom/errors.hpp"

namespace lcgeom {

namespace {

Json mat_to_json(const Mat& a) {
    Json out = Json::array();
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) out.push_back(a(i, j));
    return out;
}

Mat mat_from_json(const Json& j, int dim, const char* what) {
    if (!j.is_array() || int(j.size()) != dim * dim)
        throw ConfigError(std::string(what) + ": expected a flat row-major array of " +
                          std::to_string(dim * dim) + " numbers");
    Mat a(dim);
    for (int i = 0; i < dim; ++i)
        for (int k = 0; k < dim; ++k) a(i, k) = j[size_t(i * dim + k)].get<double>();
    return a;
}

Json vec_to_json(const Vec& v) {
    Json out = Json::array();
    for (int i = 0; i < v.n; ++i) out.push_back(v[i]);
    return out;
}

Vec vec_from_json(const Json& j, int dim, const char* what) {
    if (!j.is_array() || int(j.size()) != dim)
        throw ConfigError(std::string(what) + ": expected an array of " +
                          std::to_string(dim) + " numbers");
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = j[size_t(i)].get<double>();
    return v;
}

int dim_of(const Json& j) {
    if (!j.contains("dim")) throw ConfigError("spec: missing \"dim\"");
    const int dim = j.at("dim").get<int>();
    if (dim < 1 || dim > kMaxDim) throw ConfigError("spec: dim must be 1..3");
    return dim;
}

const Json& params_of(const Json& j) {
    static const Json empty = Json::object();
    return j.contains("params") ? j.at("params") : empty;
}

} // namespace

Json to_json(const ConvexFunctionSpec& spec) {
    Json j;
    Json params = Json::object();
    switch (spec.family) {
        case Family::Quadratic:
            j["family"] = "quadratic";
            params["a"] = mat_to_json(spec.a);
            params["b"] = vec_to_json(spec.b);
            params["c"] = spec.c;
            break;
        case Family::PowerSum:
            j["family"] = "powersum";
            params["p"] = spec.p;
            params["scale"] = spec.scale;
            params["offset"] = spec.offset;
            break;
        case Family::GaugeSquare:
            j["family"] = "gauge_square";
            params["body"] = to_json(*spec.body);
            break;
        case Family::Tabulated:
            j["family"] = "tabulated";
            params["grid"] = to_json(*spec.grid);
            break;
        case Family::AffineImage:
            throw ConfigError("spec: affine images are in-memory only, not serialized");
    }
    j["dim"] = spec.dim;
    j["params"] = std::move(params);
    return j;
}

ConvexFunctionSpec spec_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("family"))
        throw ConfigError("spec: expected an object with a \"family\" field");
    const std::string family = j.at("family").get<std::string>();
    const Json& p = params_of(j);
    if (family == "quadratic") {
        const int dim = dim_of(j);
        const Mat a = p.contains("a") ? mat_from_json(p.at("a"), dim, "quadratic a")
                                      : Mat::identity(dim);
        const Vec b = p.contains("b") ? vec_from_json(p.at("b"), dim, "quadratic b")
                                      : Vec::zero(dim);
        return ConvexFunctionSpec::quadratic(a, b, p.value("c", 0.0));
    }
    if (family == "powersum") {
        const int dim = dim_of(j);
        if (!p.contains("p")) throw ConfigError("powersum: missing exponent \"p\"");
        return ConvexFunctionSpec::power_sum(dim, p.at("p").get<double>(),
                                             p.value("scale", 1.0), p.value("offset", 0.0));
    }
    if (family == "gauge_square") {
        if (!p.contains("body")) throw ConfigError("gauge_square: missing \"body\"");
        return ConvexFunctionSpec::gauge_square(body_from_json(p.at("body")));
    }
    if (family == "tabulated") {
        if (!p.contains("grid")) throw ConfigError("tabulated: missing \"grid\"");
        return ConvexFunctionSpec::tabulated(grid_from_json(p.at("grid")));
    }
    throw ConfigError("spec: unknown function family \"" + family + "\"");
}

Json to_json(const BodySpec& body) {
    Json j;
    Json params = Json::object();
    switch (body.family) {
        case BodyFamily::Ellipsoid:
            j["family"] = "ellipsoid";
            params["a"] = mat_to_json(body.a);
            break;
        case BodyFamily::PBall:
            j["family"] = "pball";
            params["p"] = body.p;
            params["radii"] = vec_to_json(body.radii);
            break;
        case BodyFamily::PerturbedSphere:
            j["family"] = "perturbed_sphere";
            params["epsilon"] = body.epsilon;
            params["cos"] = body.cos_coeffs;
            params["sin"] = body.sin_coeffs;
            break;
        case BodyFamily::PolarWrap:
            throw ConfigError("body: polar wrappers are in-memory only, not serialized");
    }
    j["dim"] = body.dim;
    j["params"] = std::move(params);
    return j;
}

BodySpec body_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("family"))
        throw ConfigError("body: expected an object with a \"family\" field");
    const std::string family = j.at("family").get<std::string>();
    const int dim = dim_of(j);
    const Json& p = params_of(j);
    if (family == "ellipsoid") {
        const Mat a = p.contains("a") ? mat_from_json(p.at("a"), dim, "ellipsoid a")
                                      : Mat::identity(dim);
        return BodySpec::ellipsoid(a);
    }
    if (family == "pball") {
        if (!p.contains("p")) throw ConfigError("pball: missing exponent \"p\"");
        Vec radii(dim);
        for (int i = 0; i < dim; ++i) radii[i] = 1.0;
        if (p.contains("radii")) radii = vec_from_json(p.at("radii"), dim, "pball radii");
        return BodySpec::pball(dim, p.at("p").get<double>(), radii);
    }
    if (family == "perturbed_sphere") {
        std::vector<double> cc, sc;
        if (p.contains("cos")) cc = p.at("cos").get<std::vector<double>>();
        if (p.contains("sin")) sc = p.at("sin").get<std::vector<double>>();
        return BodySpec::perturbed_sphere(dim, p.value("epsilon", 0.0), std::move(cc),
                                          std::move(sc));
    }
    throw ConfigError("body: unknown body family \"" + family + "\"");
}

Json to_json(const QuadratureSpec& quad) {
    Json j;
    switch (quad.method) {
        case QuadMethod::TensorGauss: j["method"] = "gauss"; break;
        case QuadMethod::MonteCarlo: j["method"] = "mc"; break;
        case QuadMethod::AdaptiveRefine: j["method"] = "adaptive"; break;
    }
    j["nodes"] = quad.nodes;
    j["half_width"] = quad.half_width;
    j["samples"] = quad.samples;
    j["seed"] = quad.seed;
    j["target_rel_tol"] = quad.target_rel_tol;
    j["max_doublings"] = quad.max_doublings;
    j["jobs"] = quad.jobs;
    return j;
}

QuadratureSpec quad_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("quadrature: expected an object");
    QuadratureSpec q;
    const std::string method = j.value("method", std::string("gauss"));
    if (method == "gauss")
        q.method = QuadMethod::TensorGauss;
    else if (method == "mc")
        q.method = QuadMethod::MonteCarlo;
    else if (method == "adaptive")
        q.method = QuadMethod::AdaptiveRefine;
    else
        throw ConfigError("quadrature: unknown method \"" + method + "\"");
    q.nodes = j.value("nodes", q.nodes);
    q.half_width = j.value("half_width", q.half_width);
    q.samples = j.value("samples", q.samples);
    q.seed = j.value("seed", q.seed);
    q.target_rel_tol = j.value("target_rel_tol", q.target_rel_tol);
    q.max_doublings = j.value("max_doublings", q.max_doublings);
    q.jobs = j.value("jobs", q.jobs);
    return q;
}

QuadratureSpec quad_preset(const std::string& name) {
    if (name == "gauss") return QuadratureSpec::gauss();
    if (name == "gauss-fine") return QuadratureSpec::gauss(96);
    if (name == "mc") return QuadratureSpec::monte_carlo(200000, 20260825);
    if (name == "adaptive") return QuadratureSpec::adaptive();
    throw ConfigError("unknown quadrature preset \"" + name + "\"");
}

Json to_json(const GridFunction& g) {
    Json j;
    j["dim"] = g.dim;
    j["lower"] = vec_to_json(g.lower);
    j["upper"] = vec_to_json(g.upper);
    Json pts = Json::array();
    for (int a = 0; a < g.dim; ++a) pts.push_back(g.points[size_t(a)]);
    j["points"] = std::move(pts);
    j["values"] = g.values;
    return j;
}

GridFunction grid_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("grid: expected an object");
    const int dim = dim_of(j);
    for (const char* key : {"lower", "upper", "points", "values"})
        if (!j.contains(key))
            throw ConfigError(std::string("grid: missing \"") + key + "\"");
    std::array<int, kMaxDim> pts{1, 1, 1};
    const Json& jp = j.at("points");
    if (!jp.is_array() || int(jp.size()) != dim)
        throw ConfigError("grid: \"points\" must list one count per axis");
    for (int a = 0; a < dim; ++a) pts[size_t(a)] = jp[size_t(a)].get<int>();
    return GridFunction::create(dim, vec_from_json(j.at("lower"), dim, "grid lower"),
                                vec_from_json(j.at("upper"), dim, "grid upper"), pts,
                                j.at("values").get<std::vector<double>>());
}

Json to_json(const DivergenceGenerator& gen) {
    Json j;
    switch (gen.shape) {
        case GenShape::NegLog: j["name"] = "neg_log"; break;
        case GenShape::TLogT: j["name"] = "t_log_t"; break;
        case GenShape::AbsDev: j["name"] = "abs_dev"; break;
        case GenShape::Power:
            j["name"] = "power";
            j["lambda"] = gen.lam;
            break;
        case GenShape::Custom:
            throw ConfigError("generator: custom generators are in-memory only");
    }
    return j;
}

DivergenceGenerator generator_from_json(const Json& j) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "neg_log") return DivergenceGenerator::neg_log();
        if (name == "t_log_t") return DivergenceGenerator::t_log_t();
        if (name == "abs_dev") return DivergenceGenerator::abs_dev();
        throw ConfigError("generator: unknown name \"" + name + "\"");
    }
    if (!j.is_object() || !j.contains("name"))
        throw ConfigError("generator: expected a name or an object with \"name\"");
    const std::string name = j.at("name").get<std::string>();
    if (name == "power") {
        if (!j.contains("lambda")) throw ConfigError("generator power: missing \"lambda\"");
        return DivergenceGenerator::power(j.at("lambda").get<double>());
    }
    return generator_from_json(Json(name));
}

Json json_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double number_from_json(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw ConfigError("expected a number or \"inf\"/\"-inf\"/\"nan\"");
}

} // namespace lcgeom
