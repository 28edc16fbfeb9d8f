#pragma once

// Candidate solutions φ of the twisted cohomological equation, either as a
// trigonometric polynomial or as samples on a uniform grid θ_i = i/G.

#include <cmath>
#include <complex>
#include <map>
#include <variant>
#include <vector>

#include "base_dynamics.hpp"
#include "error.hpp"
#include "trig_poly.hpp"

namespace cocycle {

template <class T>
struct GridSection {
    std::vector<T> values;

    int size() const { return static_cast<int>(values.size()); }
    double spacing() const { return 1.0 / static_cast<double>(values.size()); }
    double point(int i) const { return static_cast<double>(i) / static_cast<double>(values.size()); }

    template <class F>
    static GridSection sample(F&& f, int grid)
    {
        require(grid >= 1, ErrorKind::PreconditionViolated, "grid must be positive");
        GridSection s;
        s.values.resize(static_cast<std::size_t>(grid));
        for (int i = 0; i < grid; ++i)
            s.values[static_cast<std::size_t>(i)] = f(static_cast<double>(i) / grid);
        return s;
    }
};

using ComplexGrid = GridSection<Complex>;

/// Trigonometric interpolant of grid samples (modes |n| < G/2, Nyquist mode split evenly).
inline TrigPoly interpolant(const ComplexGrid& g)
{
    const int n = g.size();
    require(n >= 1, ErrorKind::EmptySet, "empty grid section");
    std::map<int, Complex> c;
    const int half = n / 2;
    std::vector<Complex> twiddle(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m)
        twiddle[static_cast<std::size_t>(m)] = unit_phase(-static_cast<double>(m) / n);
    for (int k = -half; k <= half; ++k) {
        if (n % 2 == 0 && std::abs(k) == half && k < 0)
            continue;
        Complex s{};
        const long kk = ((k % n) + n) % n;
        for (int i = 0; i < n; ++i)
            s += g.values[static_cast<std::size_t>(i)] * twiddle[static_cast<std::size_t>((kk * i) % n)];
        s /= static_cast<double>(n);
        if (n % 2 == 0 && k == half) {
            c[half] += 0.5 * s;
            c[-half] += 0.5 * s;
        } else {
            c[k] += s;
        }
    }
    return TrigPoly(std::move(c));
}

using Section = std::variant<TrigPoly, ComplexGrid>;

/// Evaluates a section anywhere; grid sections use their trigonometric interpolant.
class SectionEvaluator {
public:
    explicit SectionEvaluator(const Section& s)
        : poly_(std::holds_alternative<TrigPoly>(s) ? std::get<TrigPoly>(s) : interpolant(std::get<ComplexGrid>(s)))
    {}

    Complex operator()(double theta) const { return poly_(theta); }
    const TrigPoly& poly() const { return poly_; }

private:
    TrigPoly poly_;
};

} // namespace cocycle
