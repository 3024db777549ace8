#pragma once

#include <cmath>
#include <string_view>

#include "hspline/functions.hpp"

namespace testkit {

// Q(x, y) = A x² + B y².
class QuadraticForm final : public hspline::ScalarField {
public:
    QuadraticForm(double a, double b) : a_(a), b_(b) {}
    double value(hspline::Point p) const override { return a_ * p.x * p.x + b_ * p.y * p.y; }
    hspline::SecondPartials second_partials(hspline::Point) const override { return {2 * a_, 2 * b_, 0.0}; }
    std::string_view name() const override { return "quadratic_form"; }

private:
    double a_, b_;
};

// c0 + c1 x + c2 y + c3 x y + c4 (x² - y²) + c5 (x³ - 3 x y²): harmonic.
class HarmonicCubic final : public hspline::ScalarField {
public:
    explicit HarmonicCubic(const double (&c)[6])
    {
        for (int i = 0; i < 6; ++i) {
            c_[i] = c[i];
        }
    }
    double value(hspline::Point p) const override
    {
        const double x = p.x;
        const double y = p.y;
        return c_[0] + c_[1] * x + c_[2] * y + c_[3] * x * y + c_[4] * (x * x - y * y) +
               c_[5] * (x * x * x - 3 * x * y * y);
    }
    hspline::SecondPartials second_partials(hspline::Point p) const override
    {
        return {2 * c_[4] + 6 * c_[5] * p.x, -2 * c_[4] - 6 * c_[5] * p.x, c_[3] - 6 * c_[5] * p.y};
    }
    std::string_view name() const override { return "harmonic_cubic"; }

private:
    double c_[6]{};
};

class ConstantField final : public hspline::ScalarField {
public:
    explicit ConstantField(double c) : c_(c) {}
    double value(hspline::Point) const override { return c_; }
    hspline::SecondPartials second_partials(hspline::Point) const override { return {}; }
    std::string_view name() const override { return "constant"; }

private:
    double c_;
};

} // namespace testkit
