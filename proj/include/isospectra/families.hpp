#pragma once

#include <optional>
#include <string>

#include "isospectra/numeric_core.hpp"

namespace isospectra {

enum class Family { GHyp, GBasicHyp, Jacobi, Wilson, Racah, AskeyWilson, QRacah };

std::string family_name(Family f);
/// Accepts ghyp, gbasic, jacobi, wilson, racah, aw (or askey-wilson), qracah.
Family parse_family(const std::string& name);
bool is_q_family(Family f);

/// One polynomial instance.
///  GHyp:         alphas = (alpha_1..alpha_p), betas = (beta_1..beta_q)
///  GBasicHyp:    alphas = (alpha_1..alpha_r), betas = (beta_1..beta_s), q required
///  Jacobi:       alphas = (alpha, beta)
///  Wilson, AW:   alphas = (a, b, c, d)
///  Racah, QRacah: alphas = (alpha, beta, gamma, delta)
struct FamilySpec {
    Family family = Family::GHyp;
    int N = 1;
    CVec alphas;
    CVec betas;
    std::optional<cplx> q;
};

/// Throws InvalidParameters for unusable parameters.
void validate(const FamilySpec& spec);

/// Variable in which build_polynomial expresses the family.
///  GHyp, GBasicHyp, QRacah: z.  Jacobi, AW: x.  Wilson: z = x^2.  Racah: z = lambda(x).
Polynomial build_polynomial(const FamilySpec& spec);

/// Same, for degree k (k = 0 gives the constant 1); parameters from spec.
Polynomial build_polynomial_degree(const FamilySpec& spec, int k);

/// Coefficients of build_polynomial_degree before rounding to double.
std::vector<wcplx> build_polynomial_wide(const FamilySpec& spec, int k);

/// Up to three Newton steps for a zero of the polynomial with coefficients c.
/// Returns z0 unchanged if the iteration moves by more than 1e-6 max(1, |z0|).
cplx polish_zero(const std::vector<wcplx>& c, cplx z0);

/// Monic multiple of build_polynomial_degree.
Polynomial monic_basis_polynomial(const FamilySpec& spec, int k);

/// Zeros of build_polynomial; RepeatedZeros if they are not distinct.
ZeroSet compute_zeros(const FamilySpec& spec);

/// Wilson: x = sqrt(z).  Racah: y = sqrt(z + theta^2).  AW: z = x + sqrt(x^2 - 1).
/// QRacah: primary holds z unchanged, plus/minus hold the shifted points z^(+), z^(-).
struct LiftedZeros {
    CVec primary;
    CVec plus;
    CVec minus;
};
LiftedZeros lift_zero_variables(const FamilySpec& spec, const ZeroSet& zs);

/// (gamma + delta + 1) / 2 for Racah specs.
cplx racah_theta(const FamilySpec& spec);

/// Left-hand side of the family's defining equation at `sample`, divided by the
/// floating-point size of its operands (sum over terms of |coefficient| times
/// sum_k |c_k||point|^k).  The sample lives in the equation's own variable:
/// z for GHyp/GBasicHyp/QRacah, x for Jacobi and Wilson (w_2N(x) = W_N(x^2)),
/// y for Racah, and z = e^{i theta} for AW (Q_N(z) = p_N((z + 1/z)/2)).
cplx defining_equation_residual(const FamilySpec& spec, cplx sample);
cplx defining_equation_residual(const FamilySpec& spec, const Polynomial& p, cplx sample);

/// Max coefficient deviation between the GBasicHyp polynomial with parameters
/// q^alpha, q^beta and argument scaled by (q-1)^(s-r) and the plain hypergeometric
/// sum with -N, alpha; beta.  Spec family must be GHyp or GBasicHyp; N = 0 allowed.
double q_to_one_limit_check(const FamilySpec& spec, double q_near_1);

}  // namespace isospectra
