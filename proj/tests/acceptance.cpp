// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: acceptance [criterion numbers...]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"

using namespace cocycle;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

template <class S>
PointSet<S> perturb(const S& space, const PointSet<S>& b, double eps, std::mt19937_64& rng)
{
    PointSet<S> out;
    for (const auto& p : b)
        out.push_back(space.sample_ball(p, eps, rng));
    return out;
}

Outcome center_continuity()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> size(3, 24);
    const double levels[] = {1e-3, 1e-2, 1e-1};
    double worst = -1e300;
    int cases = 0, failures = 0;

    const EuclideanSpace plane(2);
    for (int s = 0; s < 500; ++s) {
        const auto b = oracle::random_planar(size(rng), rng);
        for (double eps : levels) {
            const auto r = check_center_continuity(plane, b, perturb(plane, b, eps, rng));
            worst = std::max(worst, r.lhs - r.rhs);
            ++cases;
            failures += r.lhs <= r.rhs + 1e-7 ? 0 : 1;
        }
    }
    const SpdSpace pos(2);
    for (int s = 0; s < 100; ++s) {
        PointSet<SpdSpace> b;
        const int m = size(rng);
        for (int i = 0; i < m; ++i)
            b.push_back(oracle::random_spd(2, rng, 1.0));
        for (double eps : levels) {
            const auto r = check_center_continuity(pos, b, perturb(pos, b, eps, rng));
            worst = std::max(worst, r.lhs - r.rhs);
            ++cases;
            failures += r.lhs <= r.rhs + 1e-7 ? 0 : 1;
        }
    }
    const double t = seconds_since(t0);
    return {failures == 0 && t < 60.0, std::to_string(cases) + " cases, " + std::to_string(failures) +
                                            " violations, max(lhs - rhs) = " + fmt("%.3e", worst) +
                                            ", " + fmt("%.1f s", t)};
}

Outcome diameter_shrink()
{
    // Generic random sets have a single diametral pair (ratio 0), so a quarter of the sets embed a
    // randomly rotated regular simplex, which has many diametral pairs, plus interior points.
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<int> size(2, 16);
    std::uniform_int_distribution<int> vertices(3, 6);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_real_distribution<double> unit(0, 1);
    double worst = 0.0, worst_generic = 0.0;
    int failures = 0;
    const EuclideanSpace plane(2);
    const EuclideanSpace space6(6);
    const SpdSpace pos(2);
    for (int s = 0; s < 500; ++s) {
        DiameterShrinkReport r;
        if (s % 4 == 0) {
            const int m = vertices(rng);
            const Matrix q = oracle::random_orthogonal(6, rng);
            const double side = std::exp(u(rng));
            PointSet<EuclideanSpace> b;
            for (int i = 0; i < m; ++i)
                b.push_back(q.col(i) * (side / std::sqrt(2.0)));
            const int extra = size(rng);
            for (int e = 0; e < extra; ++e) {
                Eigen::VectorXd w = Eigen::VectorXd::Zero(6);
                double total = 0.0;
                for (int i = 0; i < m; ++i) {
                    const double t = 0.1 + unit(rng);
                    w += t * b[static_cast<std::size_t>(i)];
                    total += t;
                }
                b.push_back(w / total);
            }
            std::shuffle(b.begin(), b.end(), rng);
            r = check_diameter_shrink(space6, b);
            worst = std::max(worst, r.ratio);
        } else if (s % 4 == 1) {
            PointSet<SpdSpace> b;
            const int m = size(rng);
            for (int i = 0; i < m; ++i)
                b.push_back(oracle::random_spd(2, rng, 1.5));
            r = check_diameter_shrink(pos, b);
            worst_generic = std::max(worst_generic, r.ratio);
        } else {
            r = check_diameter_shrink(plane, oracle::random_planar(size(rng), rng));
            worst_generic = std::max(worst_generic, r.ratio);
        }
        failures += r.ratio <= 1.0 / std::sqrt(2.0) + 1e-9 ? 0 : 1;
    }
    const double tetra = check_diameter_shrink(EuclideanSpace(3), oracle::tetrahedron(1.0)).ratio;
    const double gap = std::abs(tetra - 1.0 / std::sqrt(2.0));
    return {failures == 0 && gap <= 1e-9,
            std::to_string(failures) + " violations in 500 sets, worst ratio " + fmt("%.12f", worst) +
                " (simplex sets), " + fmt("%.3f", worst_generic) + " (generic), tetrahedron " +
                fmt("%.15f", tetra) + " (gap " + fmt("%.1e", gap) + ")"};
}

Outcome center_vs_midpoint_center()
{
    const EuclideanSpace plane(2);
    const PointSet<EuclideanSpace> tri{Eigen::Vector2d(0, 0), Eigen::Vector2d(4, 0), Eigen::Vector2d(1.5, 3)};
    const Eigen::Vector2d longest_mid(2, 0);
    const auto ctr_star = bt_center(plane, tri);
    const auto ctr = chebyshev_center(plane, tri).center;
    const double to_mid = (ctr_star - longest_mid).norm();
    const double apart = (ctr_star - ctr).norm();
    return {to_mid <= 1e-6 && apart > 1e-3,
            "|ctr* - midpoint| = " + fmt("%.2e", to_mid) + ", |ctr* - ctr| = " + fmt("%.4f", apart)};
}

SampleOptions anisotropic_start(FiberGeometry g)
{
    SampleOptions s;
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.5;
    d(1, 1) = 1.0 / 1.5;
    s.v0 = SpdMatrix(d);
    s.geometry = g;
    return s;
}

Outcome theorem_a()
{
    const auto t0 = Clock::now();
    const MatrixCocycle c = coboundary_preset(Base::golden(), 0.7);
    PipelineOptions opt;
    opt.sample = anisotropic_start(FiberGeometry::Pos);
    opt.cells = 512;
    opt.steps = 200'000;
    const double coarse = reduction_pipeline(c, opt).reduction.defect;
    const double exact = reduce_with_oracle(c, 512).defect;
    opt.cells = 1024;
    opt.steps = 800'000;
    const double fine = reduction_pipeline(c, opt).reduction.defect;
    const double t = seconds_since(t0);
    const bool pass = coarse <= 1e-2 && exact <= 1e-9 && fine < coarse && t < 300.0;
    return {pass, "defect " + fmt("%.3e", coarse) + " (512 cells), " + fmt("%.3e", fine) + " (1024 cells), oracle " +
                      fmt("%.2e", exact) + ", " + fmt("%.1f s", t)};
}

Outcome theorem_b()
{
    PipelineOptions opt;
    opt.sample = anisotropic_start(FiberGeometry::Conf);
    // the defect of an exact conformal fiber tracks the center tolerance
    opt.center_tol = 1e-11;
    const auto scalar = reduction_pipeline(scalar_orthogonal_preset(Base::golden()), opt).reduction;
    const auto conformal = reduction_pipeline(conformal_coboundary_preset(Base::golden()), opt).reduction;
    const double k_gap = std::abs(scalar.max_distortion - 1.0);
    const bool pass = scalar.defect <= 1e-9 && k_gap <= 1e-6 && conformal.defect <= 1e-2;
    return {pass, "scalar x orthogonal defect " + fmt("%.2e", scalar.defect) + ", |K - 1| = " + fmt("%.2e", k_gap) +
                      ", conformal coboundary defect " + fmt("%.3e", conformal.defect)};
}

Outcome twisted_fourier()
{
    std::mt19937_64 rng(606);
    const double alpha = kGoldenMean;

    const TrigPoly rho = TrigPoly::random(8, rng, true);
    const TwistedEquation twisted{alpha, 1.0, rho};
    const double r_twisted = residual(twisted, fourier_solve(twisted), 4096);

    // β = 0: φ(T^k x) − φ(x) must equal the Birkhoff sum of ρ
    const TrigPoly rho0 = TrigPoly::random(8, rng, false);
    const TrigPoly phi0 = fourier_solve({alpha, 0.0, rho0});
    const Base base = Base::golden();
    double gh = 0.0;
    for (int i = 0; i < 16; ++i) {
        const double x = i / 16.0;
        Complex sum{};
        for (int k = 1; k <= 1000; ++k) {
            sum += rho0(base.step_n(x, k - 1));
            gh = std::max(gh, std::abs(phi0(base.step_n(x, k)) - phi0(x) - sum));
        }
    }

    // β = π: φ(x + α) + φ(x) = ρ(x)
    const TrigPoly rhopi = TrigPoly::random(8, rng, true);
    const TrigPoly phipi = fourier_solve({alpha, std::numbers::pi, rhopi});
    double alt = 0.0;
    for (int i = 0; i < 4096; ++i) {
        const double x = i / 4096.0;
        alt = std::max(alt, std::abs(phipi(x + alpha) + phipi(x) - rhopi(x)));
    }
    const bool pass = r_twisted <= 1e-10 && gh <= 1e-10 && alt <= 1e-10;
    return {pass, "residual " + fmt("%.2e", r_twisted) + ", Birkhoff-sum gap " + fmt("%.2e", gh) +
                      ", alternating-sum residual " + fmt("%.2e", alt)};
}

Outcome cyclotomic()
{
    std::mt19937_64 rng(707);
    const TrigPoly rho = TrigPoly::random(8, rng, true);
    double worst = 0.0;
    for (double beta : {1.0, 0.0}) {
        for (int q : {2, 3, 5}) {
            const TrigPoly phi = cyclotomic_solve(rho, kGoldenMean, beta, q);
            worst = std::max(worst, cyclotomic_verify(phi, rho, kGoldenMean, beta, q, 4096));
        }
    }
    return {worst <= 1e-8, "worst sup residual over q in {2,3,5}, beta in {1,0}: " + fmt("%.2e", worst)};
}

Outcome shift_appendix()
{
    const Base base = Base::golden();
    const ShiftCocycle cob = ShiftCocycle::geometric_coboundary(base, 12, 40);
    double worst_res = 0.0, worst_norm = 0.0, c_ref = 0.0;
    for (double v : shift_orbit_norms(cob, 0.0, 20000))
        c_ref = std::max(c_ref, v);
    for (int i = 0; i < 32; ++i) {
        const ShiftSolution s = shift_solve_unilateral(cob, i / 32.0 + 0.01);
        worst_res = std::max(worst_res, s.invariance_residual);
        worst_norm = std::max(worst_norm, s.norm);
    }
    std::vector<double> probes;
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 64; ++i)
        probes.push_back(u(rng));
    const ShiftBoundReport orbit = check_shift_orbit_bound(cob, 0.0, probes, 20000);

    const ShiftSolution geo = shift_solve_unilateral(ShiftCocycle::geometric_constants(base, 60), 0.3);
    double max_coord = 0.0;
    for (const auto& z : geo.coords)
        max_coord = std::max(max_coord, std::abs(z));

    const bool pass = worst_res <= 1e-12 && worst_norm <= 2.0 * c_ref && orbit.worst_norm <= orbit.bound + 1e-6 &&
                      max_coord <= 2.0;
    return {pass, "recurrence residual " + fmt("%.1e", worst_res) + ", sup|phi| " + fmt("%.4f", worst_norm) +
                      " vs 2C " + fmt("%.4f", 2.0 * c_ref) + ", orbit sup " + fmt("%.4f", orbit.worst_norm) +
                      " vs " + fmt("%.4f", orbit.bound) + ", constant-preset max coordinate " +
                      fmt("%.6f", max_coord)};
}

Outcome counterexample()
{
    const double jump = 1.0;
    const IsometryCocycle c = IsometryCocycle::counterexample(jump);
    Eigen::VectorXd v0(1);
    v0(0) = 0.5;
    const BoundednessReport probe = boundedness_probe(c, 0.37, v0, 100'000);
    const double bound = 2.0 * jump + v0.norm();

    // candidate section −S_K ρ on a grid, from the bounded orbits
    const int grid = 1024;
    ComplexGrid phi;
    phi.values.resize(grid);
    for (int i = 0; i < grid; ++i)
        phi.values[static_cast<std::size_t>(i)] = -twisted_birkhoff(c, phi.point(i), 2000)(0);
    const std::vector<double> scales{0.25, 0.1, 0.05, 0.02, 0.01, 8.0 / grid};
    const OscillationReport osc = oscillation_estimate(phi, c.base().fixed_point(), scales);
    const double min_osc = *std::min_element(osc.values.begin(), osc.values.end());
    const bool pass = probe.sup_norm <= bound && min_osc >= 0.9 * jump;
    return {pass, "orbit sup " + fmt("%.4f", probe.sup_norm) + " <= " + fmt("%.4f", bound) +
                      ", min oscillation at fixed point " + fmt("%.4f", min_osc)};
}

Outcome cocycle_algebra()
{
    std::mt19937_64 rng(1010);
    const IsometryCocycle c =
        IsometryCocycle::rotation_translation(Base::golden(), 0.7, TrigPoly::random(5, rng, true));
    std::uniform_int_distribution<int> steps(0, 200);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double split = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const int j = steps(rng), k = steps(rng);
        const double x = u(rng);
        const FiniteIsometry lhs = cocycle_power(c, x, j + k);
        const FiniteIsometry rhs = cocycle_power(c, c.base().step_n(x, k), j) * cocycle_power(c, x, k);
        split = std::max(split, isometry_distance(lhs, rhs));
    }
    const SpdSpace pos(2);
    int equivariant = 0;
    for (int t = 0; t < 50; ++t) {
        PointSet<SpdSpace> b;
        for (int i = 0; i < 10; ++i)
            b.push_back(oracle::random_spd(2, rng, 1.0));
        const Matrix g = oracle::random_gl(2, rng);
        equivariant += center_equivariance_check(pos, b, [&](const SpdMatrix& p) { return gl_action(g, p); }) ? 1 : 0;
    }
    return {split <= 1e-10 && equivariant == 50,
            "splitting gap " + fmt("%.2e", split) + " over 1000 triples, equivariant " + std::to_string(equivariant) +
                "/50"};
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"center continuity", center_continuity},
        {"diameter shrink", diameter_shrink},
        {"ctr vs ctr*", center_vs_midpoint_center},
        {"orthogonal reduction", theorem_a},
        {"conformal reduction", theorem_b},
        {"twisted Fourier solver", twisted_fourier},
        {"cyclotomic equivalence", cyclotomic},
        {"shift cocycle bounds", shift_appendix},
        {"counterexample", counterexample},
        {"cocycle algebra", cocycle_algebra},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i)
        only.insert(std::atoi(argv[i]));

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id))
            continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
