#include "lar/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lar/errors.hpp"
#include "lar/simplex.hpp"

namespace lar {

using nlohmann::json;

namespace {

constexpr const char* kSchemaId = "lar-dyn/1";

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) throw validation_error(path + key, "missing required field");
    return obj.at(key);
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw validation_error(path, "expected a number");
    return v.get<double>();
}

std::size_t as_positive_int(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<long long>() <= 0)
        throw validation_error(path, "expected a positive integer");
    return static_cast<std::size_t>(v.get<long long>());
}

Vec as_vector(const json& v, std::size_t n, const std::string& path) {
    if (!v.is_array() || v.size() != n)
        throw validation_error(path, "expected an array of length " + std::to_string(n));
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = as_number(v.at(i), path + "[" + std::to_string(i) + "]");
        if (!std::isfinite(out[i])) throw validation_error(path, "non-finite entry");
    }
    return out;
}

Mat as_matrix(const json& v, std::size_t n, const std::string& path) {
    if (!v.is_array() || v.size() != n)
        throw validation_error(path, "expected an " + std::to_string(n) + "-row matrix");
    Mat out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec row = as_vector(v.at(i), n, path + "[" + std::to_string(i) + "]");
        for (std::size_t j = 0; j < n; ++j) out(i, j) = row[j];
    }
    return out;
}

GeneratorSpec parse_generator(const json& g, std::size_t n) {
    GeneratorSpec spec;
    const std::string path = "generator.";
    int found = 0;
    for (const char* key : {"matrix", "split", "diagonal", "random"})
        if (g.contains(key)) ++found;
    if (found != 1)
        throw validation_error("generator",
                               "exactly one of matrix/split/diagonal/random is required");

    if (g.contains("matrix")) {
        spec.value = GeneratorSpec::Explicit{as_matrix(g.at("matrix"), n, path + "matrix")};
    } else if (g.contains("split")) {
        const json& s = g.at("split");
        Mat sym = as_matrix(require(s, "S", path + "split."), n, path + "split.S");
        Mat skew = as_matrix(require(s, "F", path + "split."), n, path + "split.F");
        if (frob_norm(sym - transpose(sym)) > tol::sym_check * std::max(1.0, frob_norm(sym)))
            throw validation_error(path + "split.S", "declared symmetric part is not symmetric");
        if (frob_norm(skew + transpose(skew)) > tol::skew_check * std::max(1.0, frob_norm(skew)))
            throw validation_error(path + "split.F", "declared skew part is not skew");
        spec.value = GeneratorSpec::Split{std::move(sym), std::move(skew)};
    } else if (g.contains("diagonal")) {
        spec.value = GeneratorSpec::Diagonal{as_vector(g.at("diagonal"), n, path + "diagonal")};
    } else {
        const json& r = g.at("random");
        GeneratorSpec::Random rnd;
        if (r.contains("seed")) {
            if (!r.at("seed").is_number_unsigned() && !r.at("seed").is_number_integer())
                throw validation_error(path + "random.seed", "expected an integer");
            rnd.seed = r.at("seed").get<std::uint64_t>();
        }
        if (r.contains("scale")) rnd.scale = as_number(r.at("scale"), path + "random.scale");
        if (r.contains("kind")) {
            const std::string kind = r.at("kind").get<std::string>();
            if (kind == "general")
                rnd.family = MatrixFamily::General;
            else if (kind == "symmetric")
                rnd.family = MatrixFamily::Symmetric;
            else if (kind == "skew")
                rnd.family = MatrixFamily::Skew;
            else
                throw validation_error(path + "random.kind",
                                       "expected general, symmetric, or skew");
        }
        spec.value = rnd;
    }
    return spec;
}

InitialSpec parse_initial(const json& v, std::size_t n) {
    InitialSpec spec;
    int found = 0;
    for (const char* key : {"lottery", "amplitude", "phase"})
        if (v.contains(key)) ++found;
    if (found != 1)
        throw validation_error("initial", "exactly one of lottery/amplitude/phase is required");

    if (v.contains("lottery")) {
        Vec q = as_vector(v.at("lottery"), n, "initial.lottery");
        double sum = 0;
        for (double p : q) {
            if (p < 0) throw validation_error("initial.lottery", "negative probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > tol::lottery_sum)
            throw validation_error("initial.lottery", "probabilities do not sum to 1");
        spec.value = InitialSpec::FromLottery{std::move(q)};
    } else if (v.contains("amplitude")) {
        Vec rho = as_vector(v.at("amplitude"), n, "initial.amplitude");
        if (!(norm2(rho) > 0.0)) throw validation_error("initial.amplitude", "zero amplitude");
        spec.value = InitialSpec::FromAmplitude{std::move(rho)};
    } else {
        const json& p = v.at("phase");
        Vec rho = as_vector(require(p, "rho", "initial.phase."), n, "initial.phase.rho");
        Vec y = as_vector(require(p, "y", "initial.phase."), n, "initial.phase.y");
        spec.value = InitialSpec::FromPhase{std::move(rho), std::move(y)};
    }
    return spec;
}

}  // namespace

Mat GeneratorSpec::materialize(std::size_t n) const {
    if (const auto* e = std::get_if<Explicit>(&value)) return e->v;
    if (const auto* s = std::get_if<Split>(&value)) return s->sym + s->skew;
    if (const auto* d = std::get_if<Diagonal>(&value)) return Mat::diagonal(d->theta);
    const auto& r = std::get<Random>(value);
    XorShift64 rng(r.seed);
    return random_matrix(rng, n, r.family, r.scale);
}

Vec InitialSpec::amplitude() const {
    if (const auto* l = std::get_if<FromLottery>(&value)) {
        Vec rho(l->q0.size());
        for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::sqrt(l->q0[i]);
        return rho;
    }
    if (const auto* a = std::get_if<FromAmplitude>(&value)) return a->rho0;
    return std::get<FromPhase>(value).rho0;
}

std::optional<Vec> InitialSpec::residual() const {
    if (const auto* p = std::get_if<FromPhase>(&value)) return p->y0;
    return std::nullopt;
}

std::vector<double> Scenario::time_grid() const {
    std::vector<double> grid(samples);
    const double step = (t_end - t_start) / static_cast<double>(samples - 1);
    for (std::size_t k = 0; k < samples; ++k)
        grid[k] = t_start + step * static_cast<double>(k);
    grid.back() = t_end;
    return grid;
}

Scenario parse_scenario(const std::string& text, const std::string& fallback_name,
                        std::optional<std::uint64_t> seed_override) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("scenario parse error: ") + e.what());
    }
    if (!doc.is_object()) throw validation_error("$", "scenario must be a JSON object");

    if (doc.contains("schema") && doc.at("schema").get<std::string>() != kSchemaId)
        throw validation_error("schema", std::string("expected ") + kSchemaId);

    Scenario s;
    s.name = doc.value("name", fallback_name);
    s.n = as_positive_int(require(doc, "n", ""), "n");
    if (s.n < 2 || s.n > 64) throw validation_error("n", "supported range is 2..64");

    s.generator = parse_generator(require(doc, "generator", ""), s.n);
    s.initial = parse_initial(require(doc, "initial", ""), s.n);

    const json& time = require(doc, "time", "");
    s.t_start = as_number(require(time, "start", "time."), "time.start");
    s.t_end = as_number(require(time, "end", "time."), "time.end");
    s.samples = as_positive_int(require(time, "samples", "time."), "time.samples");
    if (s.samples < 2) throw validation_error("time.samples", "need at least 2 samples");
    if (!(s.t_end > s.t_start)) throw validation_error("time.end", "end must exceed start");

    const json& tasks = require(doc, "tasks", "");
    if (!tasks.is_array() || tasks.empty())
        throw validation_error("tasks", "expected a non-empty array of task tags");
    for (const auto& t : tasks) {
        const std::string tag = t.get<std::string>();
        static const char* known[] = {"onshell",     "lifted",   "clar",      "holonomy",
                                      "interference", "contexts", "invariants"};
        bool ok = false;
        for (const char* k : known) ok = ok || (tag == k);
        if (!ok) throw validation_error("tasks", "unknown task tag: " + tag);
        s.tasks.push_back(tag);
    }

    if (doc.contains("contexts")) {
        const json& cs = doc.at("contexts");
        if (!cs.is_array()) throw validation_error("contexts", "expected an array");
        std::size_t idx = 0;
        for (const auto& c : cs) {
            const std::string path = "contexts[" + std::to_string(idx++) + "]";
            ContextSpec spec;
            if (c.contains("matrix")) {
                spec.matrix = as_matrix(c.at("matrix"), s.n, path + ".matrix");
                const Mat gram = transpose(*spec.matrix) * (*spec.matrix);
                if (frob_norm(gram - Mat::identity(s.n)) > tol::orthogonality)
                    throw validation_error(path + ".matrix", "context basis is not orthogonal");
            } else if (c.contains("rotation")) {
                const json& r = c.at("rotation");
                if (r.contains("axis")) {
                    const json& axis = r.at("axis");
                    if (!axis.is_array() || axis.size() != 2 || !axis.at(0).is_number_integer() ||
                        !axis.at(1).is_number_integer())
                        throw validation_error(path + ".rotation.axis", "expected [i, j]");
                    const long long ai = axis.at(0).get<long long>();
                    const long long aj = axis.at(1).get<long long>();
                    if (ai < 0 || aj < 0 || ai >= static_cast<long long>(s.n) ||
                        aj >= static_cast<long long>(s.n) || ai == aj)
                        throw validation_error(path + ".rotation.axis", "bad coordinate pair");
                    spec.axis_i = static_cast<std::size_t>(ai);
                    spec.axis_j = static_cast<std::size_t>(aj);
                }
                spec.angle = as_number(require(r, "angle", path + ".rotation."),
                                       path + ".rotation.angle");
            } else {
                throw validation_error(path, "expected matrix or rotation");
            }
            s.contexts.push_back(std::move(spec));
        }
    }
    if (s.contexts.empty()) {
        ContextSpec rot;
        rot.angle = 0.7853981633974483;  // pi/4 on the first coordinate pair
        s.contexts.push_back(ContextSpec{});
        s.contexts.push_back(rot);
        s.contexts.front().matrix = Mat::identity(s.n);
    }

    s.loop.center = Vec(s.n, 1.0 / static_cast<double>(s.n));
    if (doc.contains("loop")) {
        const json& l = doc.at("loop");
        if (l.contains("points")) {
            const json& pts = l.at("points");
            if (!pts.is_array() || pts.size() < 4)
                throw validation_error("loop.points", "expected at least 4 samples");
            std::vector<Vec> loop;
            std::size_t idx = 0;
            for (const auto& p : pts)
                loop.push_back(as_vector(p, s.n, "loop.points[" + std::to_string(idx++) + "]"));
            s.loop.points = std::move(loop);
        } else {
            if (l.contains("center")) s.loop.center = as_vector(l.at("center"), s.n, "loop.center");
            if (l.contains("radius")) {
                s.loop.radius = as_number(l.at("radius"), "loop.radius");
                if (!(s.loop.radius > 0)) throw validation_error("loop.radius", "must be positive");
            }
            if (l.contains("samples"))
                s.loop.samples = as_positive_int(l.at("samples"), "loop.samples");
        }
    }

    s.polarization_r = Mat::identity(s.n);
    if (doc.contains("polarization")) {
        const json& p = doc.at("polarization");
        s.polarization_r = as_matrix(require(p, "R", "polarization."), s.n, "polarization.R");
        if (frob_norm(s.polarization_r - transpose(s.polarization_r)) >
            tol::sym_check * std::max(1.0, frob_norm(s.polarization_r)))
            throw validation_error("polarization.R", "R must be symmetric");
    }

    s.interference_time = doc.contains("interference_time")
                              ? as_number(doc.at("interference_time"), "interference_time")
                              : s.t_end;

    if (doc.contains("seed")) s.seed = doc.at("seed").get<std::uint64_t>();
    if (seed_override) {
        s.seed = *seed_override;
        if (auto* r = std::get_if<GeneratorSpec::Random>(&s.generator.value)) r->seed = *seed_override;
    }
    return s;
}

Scenario load_scenario(const std::string& path, std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("scenario parse error: cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), std::filesystem::path(path).stem().string(),
                          seed_override);
}

namespace {

json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
    json doc;
    doc["schema"] = kSchemaId;
    doc["name"] = s.name;
    doc["n"] = s.n;

    json gen;
    if (const auto* e = std::get_if<GeneratorSpec::Explicit>(&s.generator.value)) {
        gen["matrix"] = matrix_to_json(e->v);
    } else if (const auto* sp = std::get_if<GeneratorSpec::Split>(&s.generator.value)) {
        gen["split"]["S"] = matrix_to_json(sp->sym);
        gen["split"]["F"] = matrix_to_json(sp->skew);
    } else if (const auto* d = std::get_if<GeneratorSpec::Diagonal>(&s.generator.value)) {
        gen["diagonal"] = d->theta;
    } else {
        const auto& r = std::get<GeneratorSpec::Random>(s.generator.value);
        gen["random"]["seed"] = r.seed;
        gen["random"]["scale"] = r.scale;
        gen["random"]["kind"] = (r.family == MatrixFamily::General)    ? "general"
                                : (r.family == MatrixFamily::Symmetric) ? "symmetric"
                                                                        : "skew";
    }
    doc["generator"] = std::move(gen);

    json init;
    if (const auto* l = std::get_if<InitialSpec::FromLottery>(&s.initial.value)) {
        init["lottery"] = l->q0;
    } else if (const auto* a = std::get_if<InitialSpec::FromAmplitude>(&s.initial.value)) {
        init["amplitude"] = a->rho0;
    } else {
        const auto& p = std::get<InitialSpec::FromPhase>(s.initial.value);
        init["phase"]["rho"] = p.rho0;
        init["phase"]["y"] = p.y0;
    }
    doc["initial"] = std::move(init);

    doc["time"] = {{"start", s.t_start}, {"end", s.t_end}, {"samples", s.samples}};
    doc["tasks"] = s.tasks;

    json ctxs = json::array();
    for (const auto& c : s.contexts) {
        json jc;
        if (c.matrix)
            jc["matrix"] = matrix_to_json(*c.matrix);
        else
            jc["rotation"] = {{"axis", {c.axis_i, c.axis_j}}, {"angle", c.angle}};
        ctxs.push_back(std::move(jc));
    }
    doc["contexts"] = std::move(ctxs);

    if (s.loop.points) {
        doc["loop"]["points"] = *s.loop.points;
    } else {
        doc["loop"] = {{"center", s.loop.center},
                       {"radius", s.loop.radius},
                       {"samples", s.loop.samples}};
    }
    doc["polarization"]["R"] = matrix_to_json(s.polarization_r);
    doc["interference_time"] = s.interference_time;
    doc["seed"] = s.seed;
    return doc.dump(2);
}

}  // namespace lar
