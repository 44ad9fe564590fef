#ifndef NDE_PROFILE_HPP
#define NDE_PROFILE_HPP

#include <optional>
#include <string>
#include <vector>

#include "nde/ivp.hpp"

namespace nde {

// Orbit fate tags used by the shooting machinery and recorded on profiles.
enum class Fate {
    GrowthPlus,        // captured by the explicit polynomial growth branch, upward
    GrowthMinus,       // same, downward
    ZeroCrossing,      // profile value hits 0 at finite abscissa
    BoundedCandidate,  // reaches the domain end near the target behaviour
    Extinction,        // vanishing singularity (value -> 0 with derivative blow-up)
    Indeterminate
};
const char* to_string(Fate f);

struct ModelSpec;  // models.hpp

// A solved profile on a grid: value plus derivatives through order 4.
// Columns beyond the model order are filled from the ODE or by finite
// differences when exported.
struct ProfileSolution {
    std::vector<double> grid;                  // strictly increasing
    std::vector<std::vector<double>> cols;     // cols[k][i] = d^k g / dz^k at grid[i]
    std::vector<double> shoot_params;          // converged shooting parameters, if any
    Fate fate = Fate::Indeterminate;
    double residual_sup = 0.0;
    std::string note;                          // solver metadata, free form

    std::size_t size() const { return grid.size(); }
    std::size_t n_cols() const { return cols.size(); }

    // Cubic Hermite evaluation of column k (uses column k+1 as the slope when
    // available, else a secant slope).
    double eval(double z, std::size_t k = 0) const;

    // Builds a profile by sampling a trajectory's dense output on a uniform
    // grid with n nodes; fills min(order, 5) columns from the state.
    static ProfileSolution from_trajectory(const Trajectory& tr, std::size_t n);
};

// CSV with the frozen header z,g,g1,g2,g3,g4 (missing columns written as 0).
void write_profile_csv(const ProfileSolution& p, const std::string& path);
ProfileSolution read_profile_csv(const std::string& path);

}  // namespace nde

#endif
