#pragma once

// Finite trigonometric polynomials p(θ) = Σ c_n e^{2πinθ} on the circle [0,1).

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "error.hpp"

namespace cocycle {

using Complex = std::complex<double>;

inline Complex unit_phase(double turns) { return std::polar(1.0, 2.0 * std::numbers::pi * turns); }

class TrigPoly {
public:
    TrigPoly() = default;
    explicit TrigPoly(std::map<int, Complex> coefficients) : c_(std::move(coefficients)) { prune(); }

    static TrigPoly constant(Complex c) { return TrigPoly({{0, c}}); }
    static TrigPoly mode(int n, Complex c = 1.0) { return TrigPoly({{n, c}}); }

    /// Coefficients drawn i.i.d. with real and imaginary parts uniform in [-1, 1] for |n| <= degree.
    template <class Rng>
    static TrigPoly random(int degree, Rng& rng, bool with_mean = true)
    {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::map<int, Complex> c;
        for (int n = -degree; n <= degree; ++n) {
            const Complex z(u(rng), u(rng));
            if (n != 0 || with_mean)
                c[n] = z;
        }
        return TrigPoly(std::move(c));
    }

    const std::map<int, Complex>& coefficients() const { return c_; }
    bool is_zero() const { return c_.empty(); }

    Complex coefficient(int n) const
    {
        const auto it = c_.find(n);
        return it == c_.end() ? Complex{} : it->second;
    }

    int degree() const
    {
        int d = 0;
        for (const auto& [n, _] : c_)
            d = std::max(d, std::abs(n));
        return d;
    }

    Complex operator()(double theta) const
    {
        Complex s{};
        for (const auto& [n, c] : c_)
            s += c * unit_phase(n * theta);
        return s;
    }

    /// θ ↦ p(θ + a)
    TrigPoly shifted(double a) const
    {
        std::map<int, Complex> out;
        for (const auto& [n, c] : c_)
            out[n] = c * unit_phase(n * a);
        return TrigPoly(std::move(out));
    }

    /// Σ |c_n|, an upper bound for the sup norm.
    double l1_norm() const
    {
        double s = 0.0;
        for (const auto& [_, c] : c_)
            s += std::abs(c);
        return s;
    }

    TrigPoly& operator+=(const TrigPoly& o)
    {
        for (const auto& [n, c] : o.c_)
            c_[n] += c;
        prune();
        return *this;
    }
    TrigPoly& operator-=(const TrigPoly& o) { return *this += o * Complex(-1.0); }
    TrigPoly& operator*=(Complex s)
    {
        for (auto& [_, c] : c_)
            c *= s;
        prune();
        return *this;
    }

    friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
    friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
    friend TrigPoly operator*(TrigPoly a, Complex s) { return a *= s; }
    friend TrigPoly operator*(Complex s, TrigPoly a) { return a *= s; }

    std::vector<Complex> sample(int grid) const
    {
        require(grid >= 1, ErrorKind::PreconditionViolated, "grid must be positive");
        std::vector<Complex> v(static_cast<std::size_t>(grid));
        for (int i = 0; i < grid; ++i)
            v[static_cast<std::size_t>(i)] = (*this)(static_cast<double>(i) / grid);
        return v;
    }

private:
    void prune()
    {
        for (auto it = c_.begin(); it != c_.end();)
            it = (it->second == Complex{}) ? c_.erase(it) : std::next(it);
    }

    std::map<int, Complex> c_;
};

} // namespace cocycle
