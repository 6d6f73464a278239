#pragma once

#include <vector>

#include "isospectra/families.hpp"
#include "isospectra/numeric_core.hpp"

namespace isospectra {

/// c'(t) = time_factor (A c(t) + h).  A is lower triangular (GHyp, GBasicHyp)
/// or diagonal (Wilson, Racah, AW, QRacah; h = 0 there).
struct CSystem {
    CMat A;
    CVec h;
    cplx time_factor{1.0, 0.0};
};

/// Rows m = 1..N hold the equation for the coefficient c_m of the m-th basis
/// element below the leading one (z^{N-m}, or the family polynomial of degree N-m).
CSystem c_system(const FamilySpec& spec);

/// Largest |time_factor A_mm|: the fastest coefficient rate.
double max_rate(const FamilySpec& spec);

/// c(t) from c(0).  Diagonal: exponentials.  Triangular with distinct diagonal:
/// modal expansion about c_p = -A^{-1} h.  Otherwise RK4 with step 1e-4.
CVec solve_c(const CSystem& cs, const CVec& c0, double t);

/// The ODE variable of each family: z (GHyp, GBasicHyp, QRacah), x (Wilson, AW), y (Racah).
/// Maps zeros of build_polynomial to that variable.
CVec state_from_zeros(const FamilySpec& spec, const ZeroSet& zs);

/// Time derivative of the zeros.  Collision if two components are closer than
/// 1e-9; DivideByZeroVariable if |x_n| (Wilson) or |y_n| (Racah) is below 1e-6.
CVec nonlinear_rhs(const FamilySpec& spec, const CVec& state);

/// Exact Jacobian of nonlinear_rhs by dual numbers.
CMat rhs_jacobian(const FamilySpec& spec, const CVec& state);
/// Central-difference Jacobian of nonlinear_rhs; the step for component m is h max(1, |state_m|).
CMat rhs_jacobian_fd(const FamilySpec& spec, const CVec& state, double h = 1e-6);

/// nonlinear_rhs at the lifted zeros, each component divided by the size of its terms.
CVec equilibrium_components(const FamilySpec& spec, const ZeroSet& zs);
double equilibrium_residual(const FamilySpec& spec, const ZeroSet& zs);

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<CVec> ode_zeros;
    std::vector<CVec> oracle_zeros;
    std::vector<double> deviation;
    double max_deviation = 0.0;
};

/// Classical RK4 with step t1/steps.  Records the state every `record_every` steps
/// and at the end.  ode_zeros only.
TrajectoryRecord integrate(const FamilySpec& spec, const CVec& z0, double t1, int steps, int record_every = 1);

/// Zeros at time t obtained from the coefficient dynamics.  The result is ordered
/// (and, for Wilson/Racah, sign-chosen) to follow `previous`, or z0 when empty.
CVec algebraic_solution(const FamilySpec& spec, const CVec& z0, double t, const CVec& previous = {});

/// integrate plus algebraic_solution on the same grid; deviation is
/// multiset_match(ode, oracle) at each recorded time.
TrajectoryRecord evolve(const FamilySpec& spec, const CVec& z0, double t1, int steps, int samples = 20);

}  // namespace isospectra
