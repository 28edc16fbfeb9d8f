// cocycle: command-line runs of the library's experiments.
// Every subcommand prints a JSON summary, writes it to <out>/summary.json and
// drops plot-ready CSVs next to it.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

#include <cocycle/cocycle.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace cocycle;

namespace {

// ---------------------------------------------------------------------------
// Shared settings and output
// ---------------------------------------------------------------------------

struct Globals {
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out = "cocycle-out";
    std::string config;
};

std::uint64_t effective_seed(const Globals& g)
{
    if (const char* env = std::getenv("COCYCLE_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size())
                return v;
        } catch (const std::exception&) {
        }
        fail(ErrorKind::ConfigInvalid, std::string("COCYCLE_SEED is not an unsigned integer: ") + env);
    }
    return g.seed;
}

class Csv {
public:
    Csv(const fs::path& path, const std::vector<std::string>& header) : f_(path)
    {
        require(static_cast<bool>(f_), ErrorKind::ConfigInvalid, "cannot write " + path.string());
        f_ << std::setprecision(17);
        for (std::size_t i = 0; i < header.size(); ++i)
            f_ << (i ? "," : "") << header[i];
        f_ << '\n';
    }

    template <class... T>
    void row(const T&... v)
    {
        bool first = true;
        ((f_ << (first ? "" : ",") << v, first = false), ...);
        f_ << '\n';
    }

private:
    std::ofstream f_;
};

fs::path prepare_out(const Globals& g)
{
    const fs::path dir(g.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(!ec, ErrorKind::ConfigInvalid, "cannot create output directory " + g.out + ": " + ec.message());
    return dir;
}

void emit(const fs::path& dir, json summary)
{
    const std::string text = summary.dump(2);
    std::ofstream(dir / "summary.json") << text << '\n';
    std::cout << text << std::endl;
}

json to_json(const Matrix& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json to_json(const Eigen::VectorXd& v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(v(i));
    return a;
}

json to_json(const TrigPoly& p)
{
    json o = json::object();
    for (const auto& [n, c] : p.coefficients())
        o[std::to_string(n)] = {c.real(), c.imag()};
    return o;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// Descriptor parsing
// ---------------------------------------------------------------------------

double parse_number(const std::string& s, const std::string& what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size())
            return v;
    } catch (const std::exception&) {
    }
    fail(ErrorKind::ConfigInvalid, what + " is not a number: '" + s + "'");
}

double parse_alpha(const std::string& s)
{
    if (s == "golden")
        return kGoldenMean;
    if (s == "silver")
        return std::sqrt(2.0) - 1.0;
    return parse_number(s, "alpha");
}

/// "golden", "silver", "parabolic" or a rotation angle.
Base parse_base(const std::string& s)
{
    if (s == "parabolic")
        return Base::parabolic();
    return Base::rotation(parse_alpha(s));
}

json base_json(const Base& b)
{
    json j{{"type", b.name()}};
    if (b.is_rotation())
        j["alpha"] = b.alpha();
    return j;
}

json read_json_file(const std::string& path)
{
    std::ifstream f(path);
    require(static_cast<bool>(f), ErrorKind::ConfigInvalid, "cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        fail(ErrorKind::ConfigInvalid, path + ": " + e.what());
    }
}

TrigPoly trig_from_json(const json& j)
{
    require(j.is_object(), ErrorKind::ConfigInvalid, "trigonometric polynomial must be an object {\"n\": [re, im]}");
    std::map<int, Complex> c;
    for (const auto& [key, value] : j.items()) {
        int n = 0;
        try {
            std::size_t used = 0;
            n = std::stoi(key, &used);
            require(used == key.size(), ErrorKind::ConfigInvalid, "bad mode '" + key + "'");
        } catch (const std::logic_error&) {
            fail(ErrorKind::ConfigInvalid, "bad mode '" + key + "'");
        }
        if (value.is_number()) {
            c[n] = value.get<double>();
        } else {
            require(value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number(),
                    ErrorKind::ConfigInvalid, "mode " + key + " must be a number or [re, im]");
            c[n] = Complex(value[0].get<double>(), value[1].get<double>());
        }
    }
    return TrigPoly(std::move(c));
}

/// "single-mode", "random:D", "random0:D" (zero mean), "constant:C" or a JSON file.
TrigPoly parse_rho(const std::string& s, std::mt19937_64& rng)
{
    if (s == "single-mode")
        return TrigPoly::mode(1);
    auto degree_after = [&](std::size_t prefix) {
        const double d = parse_number(s.substr(prefix), "degree");
        require(d >= 0 && d <= 512 && d == std::floor(d), ErrorKind::ConfigInvalid, "degree must be in 0..512");
        return static_cast<int>(d);
    };
    if (s.rfind("random:", 0) == 0)
        return TrigPoly::random(degree_after(7), rng, true);
    if (s.rfind("random0:", 0) == 0)
        return TrigPoly::random(degree_after(8), rng, false);
    if (s.rfind("constant:", 0) == 0)
        return TrigPoly::constant(parse_number(s.substr(9), "constant"));
    return trig_from_json(read_json_file(s));
}

Matrix matrix_from_json(const json& j)
{
    require(j.is_array() && !j.empty(), ErrorKind::ConfigInvalid, "matrix must be a nonempty array of rows");
    const int n = static_cast<int>(j.size());
    require_dim(n);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        require(j[i].is_array() && static_cast<int>(j[i].size()) == n, ErrorKind::DimensionMismatch,
                "matrix rows must all have length " + std::to_string(n));
        for (int k = 0; k < n; ++k) {
            require(j[i][k].is_number(), ErrorKind::ConfigInvalid, "matrix entries must be numbers");
            m(i, k) = j[i][k].get<double>();
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// center
// ---------------------------------------------------------------------------

struct CenterArgs {
    std::string points;
    std::string method = "auto";
    double tol = 1e-9;
};

template <class S>
json center_report(const S& space, const PointSet<S>& pts, const CenterOptions& opt, const fs::path& dir)
{
    const auto ctr = chebyshev_center(space, pts, opt);
    const auto star = bt_center(space, pts);
    json j;
    j["points"] = pts.size();
    j["radius"] = ctr.radius;
    j["covering_residual"] = ctr.covering_residual;
    j["iterations"] = ctr.iterations;
    j["method"] = ctr.method == CenterMethod::TangentChart ? "chart" : "descent";
    j["diameter"] = diameter(space, pts);
    j["center_gap"] = space.distance(ctr.center, star);
    if (pts.size() >= 2) {
        const auto shrink = check_diameter_shrink(space, pts);
        j["shrink_ratio"] = shrink.ratio;
        j["shrink_pass"] = shrink.pass;
    }
    Csv csv(dir / "points.csv", {"index", "distance_to_ctr", "distance_to_ctr_star"});
    for (std::size_t i = 0; i < pts.size(); ++i)
        csv.row(i, space.distance(pts[i], ctr.center), space.distance(pts[i], star));
    if constexpr (std::is_same_v<typename S::Point, SpdMatrix>) {
        j["ctr"] = to_json(ctr.center.matrix());
        j["ctr_star"] = to_json(star.matrix());
    } else {
        j["ctr"] = to_json(ctr.center);
        j["ctr_star"] = to_json(star);
    }
    return j;
}

json run_center(const Globals& g, const CenterArgs& a)
{
    const json doc = read_json_file(a.points);
    require(doc.is_object() && doc.contains("points") && doc["points"].is_array() && !doc["points"].empty(),
            ErrorKind::ConfigInvalid, "point file needs a nonempty \"points\" array");
    const std::string space = doc.value("space", "euclidean");
    CenterOptions opt;
    opt.tol = a.tol;
    if (a.method == "descent")
        opt.method = CenterMethod::FarthestPointDescent;
    else if (a.method == "chart")
        opt.method = CenterMethod::TangentChart;
    const fs::path dir = prepare_out(g);
    json j;
    if (space == "euclidean") {
        const auto& first = doc["points"][0];
        require(first.is_array() && !first.empty(), ErrorKind::ConfigInvalid, "points must be coordinate arrays");
        const int d = static_cast<int>(first.size());
        PointSet<EuclideanSpace> pts;
        for (const auto& p : doc["points"]) {
            require(p.is_array() && static_cast<int>(p.size()) == d, ErrorKind::DimensionMismatch,
                    "all points must have dimension " + std::to_string(d));
            Eigen::VectorXd v(d);
            for (int i = 0; i < d; ++i)
                v(i) = p[i].get<double>();
            pts.push_back(v);
        }
        j = center_report(EuclideanSpace(d), pts, opt, dir);
    } else if (space == "spd" || space == "conf") {
        PointSet<SpdSpace> pts;
        for (const auto& p : doc["points"])
            pts.push_back(SpdMatrix(matrix_from_json(p)));
        const int n = pts.front().dim();
        for (const auto& p : pts)
            require(p.dim() == n, ErrorKind::DimensionMismatch, "all matrices must have the same size");
        if (space == "spd") {
            j = center_report(SpdSpace(n), pts, opt, dir);
        } else {
            for (const auto& p : pts)
                require(is_unit_determinant(p), ErrorKind::NotUnitDeterminant, "conf points need determinant 1");
            j = center_report(ConfSpace(n), pts, opt, dir);
        }
    } else {
        fail(ErrorKind::ConfigInvalid, "unknown space '" + space + "' (euclidean, spd, conf)");
    }
    j["command"] = "center";
    j["space"] = space;
    return j;
}

// ---------------------------------------------------------------------------
// lemmas
// ---------------------------------------------------------------------------

struct LemmaArgs {
    int sets = 500;
    int spd_sets = 100;
    long samples = 10000;
};

json run_lemmas(const Globals& g, const LemmaArgs& a)
{
    require(a.sets >= 1 && a.spd_sets >= 0 && a.samples >= 1, ErrorKind::ConfigInvalid, "counts must be positive");
    std::mt19937_64 rng(effective_seed(g));
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_int_distribution<int> size(3, 20);
    const fs::path dir = prepare_out(g);
    const EuclideanSpace plane(2);
    const SpdSpace pos(2);

    auto random_planar = [&](int m) {
        PointSet<EuclideanSpace> b;
        for (int i = 0; i < m; ++i)
            b.push_back(Eigen::Vector2d(u(rng), u(rng)));
        return b;
    };
    auto random_spd = [&](int m) {
        PointSet<SpdSpace> b;
        for (int i = 0; i < m; ++i)
            b.push_back(pos.sample_ball(SpdMatrix::identity(2), 1.5, rng));
        return b;
    };

    Csv cont(dir / "continuity.csv", {"set", "space", "eps_level", "hausdorff", "lhs", "rhs", "pass"});
    int cont_cases = 0, cont_fail = 0;
    double cont_worst = -1e300;
    const double levels[] = {1e-3, 1e-2, 1e-1};
    auto continuity = [&](const auto& space, const auto& b, int set, const char* name) {
        for (double eps : levels) {
            std::decay_t<decltype(b)> moved;
            for (const auto& p : b)
                moved.push_back(space.sample_ball(p, eps, rng));
            const auto r = check_center_continuity(space, b, moved);
            const bool ok = r.lhs <= r.rhs + 1e-7;
            ++cont_cases;
            cont_fail += ok ? 0 : 1;
            cont_worst = std::max(cont_worst, r.lhs - r.rhs);
            cont.row(set, name, eps, r.eps, r.lhs, r.rhs, ok ? 1 : 0);
        }
    };
    for (int s = 0; s < a.sets; ++s)
        continuity(plane, random_planar(size(rng)), s, "plane");
    for (int s = 0; s < a.spd_sets; ++s)
        continuity(pos, random_spd(size(rng)), s, "pos2");

    Csv shrink(dir / "shrink.csv", {"set", "ratio", "pass"});
    int shrink_fail = 0;
    double shrink_worst = 0.0;
    for (int s = 0; s < a.sets; ++s) {
        const auto r = check_diameter_shrink(plane, random_planar(size(rng)));
        shrink_fail += r.pass ? 0 : 1;
        shrink_worst = std::max(shrink_worst, r.ratio);
        shrink.row(s, r.ratio, r.pass ? 1 : 0);
    }
    const double k = 1.0 / (2.0 * std::sqrt(2.0));
    const PointSet<EuclideanSpace> tetra{Eigen::Vector3d(k, k, k), Eigen::Vector3d(k, -k, -k),
                                         Eigen::Vector3d(-k, k, -k), Eigen::Vector3d(-k, -k, k)};
    const auto tet = check_diameter_shrink(EuclideanSpace(3), tetra);

    const auto planar_ball =
        check_ball_intersection_radius(plane, Eigen::VectorXd(Eigen::Vector2d(0, 0)),
                                       Eigen::VectorXd(Eigen::Vector2d(0.4, 0)), 1.0, 0.01, a.samples, rng);
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = 0.5 / std::sqrt(2.0);
    h(1, 1) = -h(0, 0);
    const auto spd_ball = check_ball_intersection_radius(pos, SpdMatrix::identity(2), spd_exp(SymmetricMatrix(h)),
                                                         1.0, 0.015, a.samples, rng);

    json j;
    j["command"] = "lemmas";
    j["seed"] = effective_seed(g);
    j["continuity"] = {{"cases", cont_cases}, {"failures", cont_fail}, {"max_lhs_minus_rhs", cont_worst}};
    j["diameter_shrink"] = {{"sets", a.sets},
                            {"failures", shrink_fail},
                            {"worst_ratio", shrink_worst},
                            {"tetrahedron_ratio", tet.ratio}};
    j["ball_intersection"] = {{"planar_max_distance", planar_ball.max_distance_to_midpoint},
                              {"planar_bound", planar_ball.bound},
                              {"planar_accepted", planar_ball.accepted},
                              {"spd_max_distance", spd_ball.max_distance_to_midpoint},
                              {"spd_bound", spd_ball.bound},
                              {"spd_accepted", spd_ball.accepted}};
    const bool pass = cont_fail == 0 && shrink_fail == 0 && tet.pass && planar_ball.pass && spd_ball.pass;
    j["pass"] = pass;
    if (!pass)
        j["note"] = "a lemma battery failed; see the CSVs";
    return j;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct SolveArgs {
    std::string method; // fourier, cyclotomic, shift
    std::string alpha = "golden";
    double beta = 1.0;
    std::string rho = "single-mode";
    int q = 2;
    int grid = kDefaultGrid;
    double floor = kDivisorFloor;
    std::string preset = "geometric-coboundary";
    int truncation = 32;
    int depth = 8;
    double x = 0.0;
};

void write_poly(const fs::path& dir, const TrigPoly& phi, int grid)
{
    Csv coef(dir / "coefficients.csv", {"n", "re", "im"});
    for (const auto& [n, c] : phi.coefficients())
        coef.row(n, c.real(), c.imag());
    Csv sec(dir / "section.csv", {"theta", "re", "im"});
    const int samples = std::min(grid, 1024);
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / samples;
        const Complex v = phi(t);
        sec.row(t, v.real(), v.imag());
    }
}

json run_solve(const Globals& g, const SolveArgs& a)
{
    std::mt19937_64 rng(effective_seed(g));
    const double alpha = parse_alpha(a.alpha);
    const fs::path dir = prepare_out(g);
    json j;
    j["command"] = "solve";
    j["method"] = a.method;
    j["alpha"] = alpha;
    if (a.method == "fourier" || a.method == "cyclotomic") {
        require(a.grid >= 16, ErrorKind::ConfigInvalid, "grid must be at least 16");
        const TrigPoly rho = parse_rho(a.rho, rng);
        j["beta"] = a.beta;
        j["rho"] = to_json(rho);
        TrigPoly phi;
        if (a.method == "fourier") {
            const TwistedEquation eq{alpha, a.beta, rho};
            phi = fourier_solve(eq, a.floor);
            j["residual"] = residual(eq, phi, a.grid);
        } else {
            require(a.q >= 1, ErrorKind::ConfigInvalid, "q must be at least 1");
            phi = cyclotomic_solve(rho, alpha, a.beta, a.q, a.floor);
            j["q"] = a.q;
            j["residual"] = cyclotomic_verify(phi, rho, alpha, a.beta, a.q, std::max(a.grid, 4096));
        }
        j["phi"] = to_json(phi);
        j["grid"] = a.grid;
        write_poly(dir, phi, a.grid);
        return j;
    }
    if (a.method == "shift") {
        const Base base = Base::rotation(alpha);
        std::optional<ShiftCocycle> c;
        if (a.preset == "single-mode")
            c = ShiftCocycle::single_mode(base, a.truncation);
        else if (a.preset == "geometric-constants")
            c = ShiftCocycle::geometric_constants(base, a.truncation);
        else if (a.preset == "geometric-coboundary")
            c = ShiftCocycle::geometric_coboundary(base, a.depth, a.truncation);
        else
            fail(ErrorKind::ConfigInvalid,
                 "unknown shift preset '" + a.preset + "' (single-mode, geometric-constants, geometric-coboundary)");
        const ShiftSolution s = shift_solve_unilateral(*c, a.x);
        Csv csv(dir / "coordinates.csv", {"j", "re", "im", "abs"});
        double max_coord = 0.0;
        for (int k = 0; k <= c->truncation(); ++k) {
            const Complex z = s.at(k);
            csv.row(k, z.real(), z.imag(), std::abs(z));
            max_coord = std::max(max_coord, std::abs(z));
        }
        j["preset"] = a.preset;
        j["truncation"] = a.truncation;
        j["x"] = a.x;
        j["norm"] = s.norm;
        j["max_coordinate"] = max_coord;
        j["tail_fraction"] = s.tail_fraction;
        j["not_square_summable"] = s.not_square_summable;
        j["invariance_residual"] = s.invariance_residual;
        return j;
    }
    fail(ErrorKind::ConfigInvalid, "unknown solver '" + a.method + "' (fourier, cyclotomic, shift)");
}

// ---------------------------------------------------------------------------
// birkhoff
// ---------------------------------------------------------------------------

struct BirkhoffArgs {
    std::string base = "golden";
    std::string cocycle = "rotation-translation";
    double beta = 1.0;
    std::string rho = "random:4";
    double jump = 1.0;
    long steps = 100000;
    double x0 = 0.1;
    std::vector<double> v0;
    long every = 100;
};

json run_birkhoff(const Globals& g, const BirkhoffArgs& a)
{
    std::mt19937_64 rng(effective_seed(g));
    require(a.steps >= 1 && a.every >= 1, ErrorKind::ConfigInvalid, "steps and every must be positive");
    std::optional<IsometryCocycle> c;
    if (a.cocycle == "rotation-translation")
        c = IsometryCocycle::rotation_translation(parse_base(a.base), a.beta, parse_rho(a.rho, rng));
    else if (a.cocycle == "counterexample")
        c = IsometryCocycle::counterexample(a.jump);
    else if (a.cocycle == "translation")
        c = IsometryCocycle::constant(parse_base(a.base), Eigen::MatrixXd::Identity(1, 1),
                                      Eigen::VectorXd::Constant(1, a.jump));
    else
        fail(ErrorKind::ConfigInvalid,
             "unknown cocycle '" + a.cocycle + "' (rotation-translation, counterexample, translation)");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(c->dim());
    if (!a.v0.empty()) {
        require(static_cast<int>(a.v0.size()) == c->dim(), ErrorKind::DimensionMismatch,
                "v0 needs " + std::to_string(c->dim()) + " entries");
        for (int i = 0; i < c->dim(); ++i)
            v(i) = a.v0[static_cast<std::size_t>(i)];
    }
    const fs::path dir = prepare_out(g);
    const BoundednessReport probe = boundedness_probe(*c, a.x0, v, a.steps);

    std::vector<std::string> header{"k", "x", "norm"};
    for (int i = 0; i < c->dim(); ++i)
        header.push_back("v" + std::to_string(i));
    Csv csv(dir / "orbit.csv", header);
    double x = a.x0;
    Eigen::VectorXd w = v;
    for (long k = 0; k <= a.steps; ++k) {
        if (k % a.every == 0 || k == a.steps) {
            std::ostringstream line;
            line << std::setprecision(17) << k << ',' << x << ',' << w.norm();
            for (int i = 0; i < c->dim(); ++i)
                line << ',' << w(i);
            csv.row(line.str());
        }
        if (k < a.steps) {
            w = c->at(x)(w);
            x = c->base().step_n(a.x0, k + 1);
        }
    }
    json j;
    j["command"] = "birkhoff";
    j["cocycle"] = a.cocycle;
    j["base"] = base_json(c->base());
    j["steps"] = a.steps;
    j["sup_norm"] = probe.sup_norm;
    j["argmax_k"] = probe.argmax_k;
    j["growth_slope"] = probe.growth_slope;
    j["final"] = to_json(w);
    if (a.cocycle == "counterexample") {
        j["bound"] = 2.0 * std::abs(a.jump) + v.norm();
        j["bounded"] = probe.sup_norm <= 2.0 * std::abs(a.jump) + v.norm();
    }
    return j;
}

// ---------------------------------------------------------------------------
// reduce
// ---------------------------------------------------------------------------

struct ReduceArgs {
    std::string preset = "coboundary";
    int cells = 512;
    long steps = 200000;
    bool oracle = false;
    std::string center = "chebyshev";
    double s0 = -1.0;
    double tol = 1e-9;
    bool identity_start = false;
    std::string base = "golden";
};

json run_reduce(const Globals& g, const ReduceArgs& a)
{
    const auto t0 = std::chrono::steady_clock::now();
    const Base base = parse_base(a.base);
    require(base.is_rotation(), ErrorKind::ConfigInvalid, "reduction presets need a rotation base");
    std::optional<MatrixCocycle> c;
    FiberGeometry geometry = FiberGeometry::Pos;
    if (a.preset == "coboundary") {
        c = coboundary_preset(base, a.s0 > 0 ? a.s0 : 0.7);
    } else if (a.preset == "conformal") {
        c = conformal_coboundary_preset(base, a.s0 > 0 ? a.s0 : 0.5);
        geometry = FiberGeometry::Conf;
    } else if (a.preset == "scalar") {
        c = scalar_orthogonal_preset(base);
        geometry = FiberGeometry::Conf;
    } else {
        fail(ErrorKind::ConfigInvalid, "unknown preset '" + a.preset + "' (coboundary, conformal, scalar)");
    }
    require(a.center == "chebyshev" || a.center == "bt", ErrorKind::ConfigInvalid,
            "center must be chebyshev or bt");
    const fs::path dir = prepare_out(g);

    ReductionResult r;
    json j;
    if (a.oracle) {
        r = reduce_with_oracle(*c, a.cells, geometry);
    } else {
        PipelineOptions opt;
        opt.cells = a.cells;
        opt.steps = a.steps;
        opt.threads = g.threads;
        opt.center = a.center == "bt" ? CenterKind::BruhatTits : CenterKind::Chebyshev;
        opt.center_tol = a.tol;
        opt.sample.geometry = geometry;
        if (!a.identity_start) {
            Matrix d = Matrix::Zero(2, 2);
            d(0, 0) = 1.5;
            d(1, 1) = 1.0 / 1.5;
            opt.sample.v0 = SpdMatrix(d);
        }
        const PipelineResult p = reduction_pipeline(*c, opt);
        r = p.reduction;
        j["steps"] = a.steps;
        j["min_occupancy"] = p.buckets.min_occupancy;
        j["mean_occupancy"] = p.buckets.mean_occupancy;
    }
    Csv csv(dir / "cells.csv", {"cell", "x", "defect", "invariance", "oracle_gap"});
    for (std::size_t i = 0; i < r.defects.size(); ++i)
        csv.row(i, r.xs[i], r.defects[i], r.invariance[i], i < r.oracle_gap.size() ? r.oracle_gap[i] : 0.0);

    j["command"] = "reduce";
    j["preset"] = a.preset;
    j["base"] = base_json(base);
    j["geometry"] = geometry == FiberGeometry::Pos ? "pos" : "conf";
    j["oracle"] = a.oracle;
    j["center"] = a.center;
    j["cells"] = a.cells;
    j["defect"] = r.defect;
    j["invariance_residual"] = r.invariance_residual;
    j["oracle_distance"] = r.oracle_distance;
    j["max_distortion"] = r.max_distortion;
    j["runtime_seconds"] = seconds_since(t0);
    return j;
}

// ---------------------------------------------------------------------------
// demo-counterexample
// ---------------------------------------------------------------------------

struct DemoArgs {
    double jump = 1.0;
    long steps = 100000;
    int grid = 1024;
    long sum_length = 2000;
    double x0 = 0.37;
    double v0 = 0.5;
};

json run_demo(const Globals& g, const DemoArgs& a)
{
    require(a.grid >= 64, ErrorKind::ConfigInvalid, "grid must be at least 64");
    require(a.sum_length >= 1, ErrorKind::ConfigInvalid, "sum length must be positive");
    const IsometryCocycle c = IsometryCocycle::counterexample(a.jump);
    const fs::path dir = prepare_out(g);
    Eigen::VectorXd v0(1);
    v0(0) = a.v0;
    const BoundednessReport probe = boundedness_probe(c, a.x0, v0, a.steps);
    const double bound = 2.0 * std::abs(a.jump) + std::abs(a.v0);

    ComplexGrid phi;
    phi.values.resize(static_cast<std::size_t>(a.grid));
    Csv sec(dir / "section.csv", {"theta", "candidate"});
    for (int i = 0; i < a.grid; ++i) {
        const double value = -twisted_birkhoff(c, phi.point(i), a.sum_length)(0);
        phi.values[static_cast<std::size_t>(i)] = value;
        sec.row(phi.point(i), value);
    }
    std::vector<double> scales;
    for (double s = 0.25; s >= 8.0 / a.grid; s /= 2)
        scales.push_back(s);
    const OscillationReport osc = oscillation_estimate(phi, c.base().fixed_point(), scales);
    Csv oc(dir / "oscillation.csv", {"scale", "oscillation"});
    double min_osc = 1e300;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        oc.row(scales[i], osc.values[i]);
        min_osc = std::min(min_osc, osc.values[i]);
    }
    json j;
    j["command"] = "demo-counterexample";
    j["jump"] = a.jump;
    j["steps"] = a.steps;
    j["sup_norm"] = probe.sup_norm;
    j["bound"] = bound;
    j["bounded"] = probe.sup_norm <= bound;
    j["min_oscillation"] = min_osc;
    j["oscillation_persists"] = min_osc >= 0.9 * std::abs(a.jump);
    j["fixed_point"] = c.base().fixed_point();
    return j;
}

// ---------------------------------------------------------------------------
// recurrence
// ---------------------------------------------------------------------------

struct RecurrenceArgs {
    std::string base = "golden";
    double beta = 0.9;
    std::string rho = "random:3";
    double delta = 0.01;
    long horizon = 5000;
    double x = 0.2;
    int pairs = 6;
};

json run_recurrence(const Globals& g, const RecurrenceArgs& a)
{
    std::mt19937_64 rng(effective_seed(g));
    const Base base = parse_base(a.base);
    require(base.is_rotation(), ErrorKind::ConfigInvalid, "recurrence sampling needs a rotation base");
    const IsometryCocycle c = IsometryCocycle::rotation_translation(base, a.beta, parse_rho(a.rho, rng));
    const fs::path dir = prepare_out(g);
    const auto samples = recurrence_isometries(c, a.x, a.delta, a.horizon);
    Csv csv(dir / "returns.csv", {"k", "return_distance", "angle", "translation_x", "translation_y"});
    for (const auto& s : samples)
        csv.row(s.k, circle_distance(base.step_n(a.x, s.k), a.x),
                std::atan2(s.iso.linear(1, 0), s.iso.linear(0, 0)), s.iso.translation(0), s.iso.translation(1));
    const auto closure = check_semigroup_closure(c, a.x, a.delta, a.horizon, a.pairs);
    json j;
    j["command"] = "recurrence";
    j["base"] = base_json(base);
    j["returns"] = samples.size();
    j["pairs"] = closure.pairs;
    j["constant_c"] = closure.constant_c;
    j["worst_ratio"] = closure.worst_ratio;
    j["worst_distance"] = closure.worst_distance;
    j["closure_pass"] = closure.pass;
    return j;
}

// ---------------------------------------------------------------------------
// JSON config → argv
// ---------------------------------------------------------------------------

std::vector<std::string> config_to_args(const json& cfg)
{
    require(cfg.is_object(), ErrorKind::ConfigInvalid, "config must be a JSON object");
    require(cfg.contains("command") && cfg["command"].is_string(), ErrorKind::ConfigInvalid,
            "config needs a \"command\" string");
    std::vector<std::string> args;
    // globals first
    for (const char* key : {"seed", "threads", "out"})
        if (cfg.contains(key))
            args.insert(args.end(), {std::string("--") + key, cfg[key].is_string() ? cfg[key].get<std::string>()
                                                                                     : cfg[key].dump()});
    const std::string cmd = cfg["command"].get<std::string>();
    std::istringstream words(cmd);
    for (std::string w; words >> w;)
        args.push_back(w);
    for (const auto& [key, value] : cfg.items()) {
        if (key == "command" || key == "seed" || key == "threads" || key == "out")
            continue;
        const std::string flag = "--" + key;
        if (value.is_boolean()) {
            if (value.get<bool>())
                args.push_back(flag);
        } else if (value.is_array()) {
            for (const auto& v : value) {
                args.push_back(flag);
                args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
            }
        } else if (value.is_string()) {
            args.insert(args.end(), {flag, value.get<std::string>()});
        } else if (value.is_number()) {
            args.insert(args.end(), {flag, value.dump()});
        } else {
            fail(ErrorKind::ConfigInvalid, "config key '" + key + "' has an unsupported type");
        }
    }
    return args;
}

int report_error(const Error& e)
{
    json err{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
    if (const auto* sd = dynamic_cast<const SmallDivisorError*>(&e))
        err["modes"] = sd->modes();
    if (const auto* ec = dynamic_cast<const EmptyCellError*>(&e))
        err["empty_cells"] = ec->cells().size();
    std::cerr << err.dump() << std::endl;
    return static_cast<int>(exit_code_for(e.kind()));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cocycle reduction experiments: centers, twisted equations, invariant sections", "cocycle"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Random seed (COCYCLE_SEED overrides)")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads for per-cell work (0 = all cores)")->capture_default_str();
    app.add_option("--out", g.out, "Output directory for summary.json and CSVs")->capture_default_str();
    app.add_option("--config", g.config, "JSON config: {\"command\": ..., <option>: <value>}");
    app.footer("Exit codes: 0 ok, 2 config, 3 numeric failure, 4 invariant violation.");

    std::function<json()> action;

    CenterArgs ca;
    auto* center = app.add_subcommand("center", "Chebyshev center ctr and midpoint center ctr* of a point-set file");
    center->add_option("points", ca.points, "Point-set JSON {\"space\": euclidean|spd|conf, \"points\": [...]}")
        ->required();
    center->add_option("--method", ca.method, "auto, chart or descent")->capture_default_str();
    center->add_option("--tol", ca.tol, "Center tolerance")->capture_default_str();
    center->footer("points.csv: index, distance_to_ctr, distance_to_ctr_star");
    center->callback([&] { action = [&] { return run_center(g, ca); }; });

    LemmaArgs la;
    auto* lemmas = app.add_subcommand("lemmas", "Center continuity, diameter shrink and ball intersection batteries");
    lemmas->add_option("--sets", la.sets, "Random planar sets")->capture_default_str();
    lemmas->add_option("--spd-sets", la.spd_sets, "Random Pos(2) sets")->capture_default_str();
    lemmas->add_option("--samples", la.samples, "Ball-intersection samples")->capture_default_str();
    lemmas->footer("continuity.csv: set, space, eps_level, hausdorff, lhs, rhs, pass\n"
                   "shrink.csv: set, ratio, pass");
    lemmas->callback([&] { action = [&] { return run_lemmas(g, la); }; });

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "Twisted cohomological equations");
    solve->add_option("method", sa.method, "fourier, cyclotomic or shift")->required();
    solve->add_option("--alpha", sa.alpha, "Rotation angle: golden, silver or a number")->capture_default_str();
    solve->add_option("--beta", sa.beta, "Twist angle (radians)")->capture_default_str();
    solve->add_option("--rho", sa.rho, "single-mode, random:D, random0:D, constant:C or a JSON file")
        ->capture_default_str();
    solve->add_option("--q", sa.q, "Cyclotomic order")->capture_default_str();
    solve->add_option("--grid", sa.grid, "Residual grid")->capture_default_str();
    solve->add_option("--floor", sa.floor, "Small-divisor floor")->capture_default_str();
    solve->add_option("--preset", sa.preset, "Shift preset: single-mode, geometric-constants, geometric-coboundary")
        ->capture_default_str();
    solve->add_option("--truncation", sa.truncation, "Shift truncation level")->capture_default_str();
    solve->add_option("--depth", sa.depth, "Depth of the geometric section")->capture_default_str();
    solve->add_option("--x", sa.x, "Base point for the shift solution")->capture_default_str();
    solve->footer("coefficients.csv: n, re, im\nsection.csv: theta, re, im\ncoordinates.csv (shift): j, re, im, abs");
    solve->callback([&] { action = [&] { return run_solve(g, sa); }; });

    BirkhoffArgs ba;
    auto* birk = app.add_subcommand("birkhoff", "Twisted Birkhoff sums and the boundedness probe");
    birk->add_option("--base", ba.base, "golden, silver, parabolic or an angle")->capture_default_str();
    birk->add_option("--cocycle", ba.cocycle, "rotation-translation, counterexample or translation")
        ->capture_default_str();
    birk->add_option("--beta", ba.beta, "Rotation of the linear part")->capture_default_str();
    birk->add_option("--rho", ba.rho, "Translation part (see solve --rho)")->capture_default_str();
    birk->add_option("--jump", ba.jump, "Sawtooth jump / translation size")->capture_default_str();
    birk->add_option("--steps", ba.steps, "Iterates")->capture_default_str();
    birk->add_option("--x0", ba.x0, "Base point")->capture_default_str();
    birk->add_option("--v0", ba.v0, "Initial fiber vector");
    birk->add_option("--every", ba.every, "CSV stride")->capture_default_str();
    birk->footer("orbit.csv: k, x, norm, v0..v{l-1}");
    birk->callback([&] { action = [&] { return run_birkhoff(g, ba); }; });

    ReduceArgs ra;
    auto* reduce = app.add_subcommand("reduce", "Invariant-section reduction of a linear cocycle");
    reduce->add_option("--preset", ra.preset, "coboundary, conformal or scalar")->capture_default_str();
    reduce->add_option("--cells", ra.cells, "Base cells")->capture_default_str();
    reduce->add_option("--steps", ra.steps, "Orbit length")->capture_default_str();
    reduce->add_flag("--oracle", ra.oracle, "Use the attached exact section");
    reduce->add_option("--center", ra.center, "chebyshev or bt")->capture_default_str();
    reduce->add_option("--s0", ra.s0, "Norm of the generator S0 (preset default if omitted)");
    reduce->add_option("--tol", ra.tol, "Center tolerance")->capture_default_str();
    reduce->add_flag("--identity-start", ra.identity_start, "Start the orbit at the identity");
    reduce->add_option("--base", ra.base, "Rotation angle: golden, silver or a number")->capture_default_str();
    reduce->footer("cells.csv: cell, x, defect, invariance, oracle_gap");
    reduce->callback([&] { action = [&] { return run_reduce(g, ra); }; });

    DemoArgs da;
    auto* demo = app.add_subcommand("demo-counterexample",
                                    "Bounded orbits without a continuous solution over the parabolic map");
    demo->add_option("--jump", da.jump, "Sawtooth jump")->capture_default_str();
    demo->add_option("--steps", da.steps, "Probe iterates")->capture_default_str();
    demo->add_option("--grid", da.grid, "Grid for the candidate section")->capture_default_str();
    demo->add_option("--sum-length", da.sum_length, "Birkhoff sum length per grid point")->capture_default_str();
    demo->add_option("--x0", da.x0, "Probe start")->capture_default_str();
    demo->add_option("--v0", da.v0, "Probe fiber start")->capture_default_str();
    demo->footer("section.csv: theta, candidate\noscillation.csv: scale, oscillation");
    demo->callback([&] { action = [&] { return run_demo(g, da); }; });

    RecurrenceArgs rca;
    auto* rec = app.add_subcommand("recurrence", "Return-time isometries and semigroup closure");
    rec->add_option("--base", rca.base, "golden, silver or an angle")->capture_default_str();
    rec->add_option("--beta", rca.beta, "Rotation of the linear part")->capture_default_str();
    rec->add_option("--rho", rca.rho, "Translation part (see solve --rho)")->capture_default_str();
    rec->add_option("--delta", rca.delta, "Return window")->capture_default_str();
    rec->add_option("--horizon", rca.horizon, "Largest return time")->capture_default_str();
    rec->add_option("--x", rca.x, "Base point")->capture_default_str();
    rec->add_option("--pairs", rca.pairs, "Returns used for closure pairs")->capture_default_str();
    rec->footer("returns.csv: k, return_distance, angle, translation_x, translation_y");
    rec->callback([&] { action = [&] { return run_recurrence(g, rca); }; });

    // A --config file is expanded into ordinary arguments and parsed the same way.
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] != "--config" && args[i].rfind("--config=", 0) != 0)
            continue;
        try {
            const std::string path = args[i] == "--config" ? (i + 1 < args.size() ? args[i + 1] : "")
                                                           : args[i].substr(9);
            require(!path.empty(), ErrorKind::ConfigInvalid, "--config needs a file");
            auto expanded = config_to_args(read_json_file(path));
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + (args[i] == "--config" ? 2 : 1));
            args.insert(args.begin() + static_cast<long>(i), expanded.begin(), expanded.end());
        } catch (const Error& e) {
            return report_error(e);
        }
        break;
    }
    std::reverse(args.begin(), args.end());

    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::Config);
    }

    try {
        emit(prepare_out(g), action());
    } catch (const Error& e) {
        return report_error(e);
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << std::endl;
        return static_cast<int>(ExitCode::Numeric);
    }
    return 0;
}
