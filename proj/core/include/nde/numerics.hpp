#ifndef NDE_NUMERICS_HPP
#define NDE_NUMERICS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

// Small numerical helpers shared across modules.

namespace nde {

// Finite-difference weights on arbitrary nodes (Fornberg's recurrence):
// returns w such that sum_i w[i] f(x[i]) ~ f^(m)(x0).
std::vector<double> fd_weights(std::span<const double> x, double x0, int m);

// Adaptive Simpson quadrature with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 40);

// Least-squares fit y ~ a*x + b; returns {a, b}.
std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y);

// Golden-section minimization of a unimodal function on [a, b].
double golden_minimize(const std::function<double(double)>& f, double a, double b,
                       double x_tol, int max_iter = 200);

// Nelder-Mead in 2 variables, for small shooting problems.
struct NelderMead2Result {
    double x = 0, y = 0, f = 0;
    int iterations = 0;
};
NelderMead2Result nelder_mead_2d(const std::function<double(double, double)>& f,
                                 double x0, double y0, double scale, double f_tol,
                                 double x_tol, int max_iter = 500);

}  // namespace nde

#endif
