#pragma once

#include <vector>

#include "isospectra/families.hpp"
#include "isospectra/numeric_core.hpp"

namespace isospectra {

/// sum_{l != n} z_l^r / (z_n - z_l)^rho, n zero-based.
cplx sigma(const CVec& z, int n, int r, int rho);

/// f[j][n] for j = 1..J (f[0] is left empty), g[j][n] for j = 0..J.
struct FGTable {
    std::vector<CVec> f;
    std::vector<CVec> g;
};
FGTable fg_tables(const CVec& z, int J);

/// df[j](n, m) = d f_n^(j) / d z_m, same for dg; index layout as FGTable.
struct FGJacobian {
    std::vector<CMat> df;
    std::vector<CMat> dg;
};
FGJacobian fg_jacobians(const CVec& z, int J);

struct BuildOptions {
    /// Values v appended to both alphas and betas (GHyp, GBasicHyp only).  The
    /// polynomial is unchanged; the operator, matrix and spectrum are not.
    CVec pad_values;
    /// GHyp with p = q = 1: use the general recursion-derived matrix instead of the explicit one.
    bool force_recursion = false;
};

struct IsospectralMatrix {
    CMat L;
    EigenMultiset computed;
    EigenMultiset reference;
    double spectral_residual = -1;
    double trace_residual = -1;
    double det_residual = -1;
    bool pass = false;
};

/// Closed-form eigenvalues m = 1..N.
EigenMultiset closed_form_spectrum(const FamilySpec& spec);

/// L and its reference spectrum at the given zeros (in the variable of build_polynomial).
IsospectralMatrix build_matrix(const FamilySpec& spec, const ZeroSet& zs, const BuildOptions& opts = {});

/// L from lifted zeros (x for Wilson, y for Racah, z = x + sqrt(x^2 - 1) for AW).
CMat matrix_from_lifted(const FamilySpec& spec, const CVec& lifted);

/// Per-zero residuals of the algebraic identities satisfied by the zeros, each
/// divided by the size of the terms that cancel in it.
CVec identity_residual(const FamilySpec& spec, const ZeroSet& zs);

struct MatrixTolerances {
    double spectral = 1e-6;
    double trace = 1e-8;
    double det = 1e-8;
};

/// Fills computed spectrum and residuals of an already built matrix.
void check_matrix(IsospectralMatrix& m, const MatrixTolerances& tol = {});

/// compute_zeros, build_matrix, check_matrix.
IsospectralMatrix verify_matrix(const FamilySpec& spec, const BuildOptions& opts = {},
                                const MatrixTolerances& tol = {});

}  // namespace isospectra
