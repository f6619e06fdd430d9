#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gsde {

/// Lipschitz test function on R^n with a *declared* Lipschitz constant.
///
/// The constant is metadata supplied by the caller; the library never tries
/// to compute a true Lipschitz constant of a callback. `check_lipschitz`
/// spot-checks the declaration on a finite sample.
class TestFunction {
public:
    using Fn = std::function<double(std::span<const double>)>;

    TestFunction(Fn eval, double lip_const, std::string label,
                 std::size_t dimension = 0 /* 0 = any */);

    double operator()(std::span<const double> x) const { return eval_(x); }
    double lip_const() const { return lip_const_; }
    const std::string& label() const { return label_; }

    /// Expected input dimension; 0 means the callback accepts any dimension.
    std::size_t dimension() const { return dimension_; }

    /// x -> x (scalar input).
    static TestFunction identity();
    /// x -> x_i.
    static TestFunction coordinate(std::size_t i);
    /// x -> c.
    static TestFunction constant(double c);
    /// x -> |x| (Euclidean norm).
    static TestFunction abs_value();

    /// phi + psi and lambda * phi with the induced declared constants.
    friend TestFunction operator+(const TestFunction& a, const TestFunction& b);
    friend TestFunction operator*(double lambda, const TestFunction& f);

    /// First sample pair violating |f(x)-f(y)| <= lip_const |x-y| (+slack),
    /// or nullopt. Points are flat, `dim` coordinates each.
    std::optional<std::pair<std::size_t, std::size_t>>
    check_lipschitz(std::span<const double> points, std::size_t dim,
                    double slack = 1e-9) const;

private:
    Fn eval_;
    double lip_const_;
    std::string label_;
    std::size_t dimension_;
};

} // namespace gsde
